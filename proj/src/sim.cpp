#include "gridforge/sim.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "gridforge/errors.hpp"

namespace gridforge {

namespace {

// action 0 is stay; moves first in search order so committed prefixes
// make progress instead of dawdling
constexpr int kActionOrder[5] = {1, 2, 3, 4, 0};
constexpr int kDx[5] = {0, 1, -1, 0, 0};
constexpr int kDy[5] = {0, 0, 0, 1, -1};

struct TaskPools {
    std::vector<int> workstations;
    std::vector<long long> ws_cumulative;  // weighted draw support
    long long ws_weight_total = 0;
    std::vector<int> endpoints;
    std::array<std::vector<int>, 3> station_endpoints;  // R, G, Y
};

bool adjacent_to(const Environment& env, int x, int y, TileType t) {
    for (int a = 1; a < 5; ++a) {
        int nx = x + kDx[a], ny = y + kDy[a];
        if (env.in_bounds(nx, ny) && env.at(nx, ny) == t) return true;
    }
    return false;
}

TaskPools build_pools(const Environment& env, const SimConfig& cfg) {
    TaskPools pools;
    for (int y = 0; y < env.height; ++y)
        for (int x = 0; x < env.width; ++x) {
            int i = env.index(x, y);
            TileType t = env.at(x, y);
            if (t == TileType::Workstation) {
                pools.workstations.push_back(i);
                long long weight = 1;
                if (env.domain == Domain::WarehouseUneven && x == 0)
                    weight = cfg.uneven_left_weight;
                pools.ws_weight_total += weight;
                pools.ws_cumulative.push_back(pools.ws_weight_total);
            } else if (t == TileType::Endpoint) {
                if (is_warehouse(env.domain)) pools.endpoints.push_back(i);
                if (env.domain == Domain::Manufacturing) {
                    if (adjacent_to(env, x, y, TileType::StationR))
                        pools.station_endpoints[0].push_back(i);
                    if (adjacent_to(env, x, y, TileType::StationG))
                        pools.station_endpoints[1].push_back(i);
                    if (adjacent_to(env, x, y, TileType::StationY))
                        pools.station_endpoints[2].push_back(i);
                }
            }
        }
    return pools;
}

TaskPhase next_phase(Domain d, TaskPhase cur) {
    if (is_warehouse(d))
        return cur == TaskPhase::ToWorkstation ? TaskPhase::ToEndpoint
                                               : TaskPhase::ToWorkstation;
    switch (cur) {
        case TaskPhase::ToR: return TaskPhase::ToG;
        case TaskPhase::ToG: return TaskPhase::ToY;
        default: return TaskPhase::ToR;
    }
}

int dwell_for(TaskPhase phase, const SimConfig& cfg) {
    switch (phase) {
        case TaskPhase::ToR: return cfg.dwell_r;
        case TaskPhase::ToG: return cfg.dwell_g;
        case TaskPhase::ToY: return cfg.dwell_y;
        default: return 0;
    }
}

int draw_from(const std::vector<int>& pool, const char* what, Rng& rng) {
    if (pool.empty())
        throw Error(ErrorCode::NoCandidateGoal,
                    std::string("no candidate ") + what + " to assign");
    return pool[rng.below(pool.size())];
}

int assign_from_pools(AgentState& agent, Domain d, const TaskPools& pools,
                      Rng& rng) {
    agent.phase = next_phase(d, agent.phase);
    switch (agent.phase) {
        case TaskPhase::ToWorkstation: {
            if (pools.workstations.empty())
                throw Error(ErrorCode::NoCandidateGoal,
                            "no candidate workstation to assign");
            long long r =
                static_cast<long long>(rng.below(
                    static_cast<std::uint64_t>(pools.ws_weight_total)));
            size_t k = static_cast<size_t>(
                std::upper_bound(pools.ws_cumulative.begin(),
                                 pools.ws_cumulative.end(), r) -
                pools.ws_cumulative.begin());
            agent.goal = pools.workstations[k];
            break;
        }
        case TaskPhase::ToEndpoint:
            agent.goal = draw_from(pools.endpoints, "endpoint", rng);
            break;
        case TaskPhase::ToR:
            agent.goal = draw_from(pools.station_endpoints[0],
                                   "endpoint near a red station", rng);
            break;
        case TaskPhase::ToG:
            agent.goal = draw_from(pools.station_endpoints[1],
                                   "endpoint near a green station", rng);
            break;
        case TaskPhase::ToY:
            agent.goal = draw_from(pools.station_endpoints[2],
                                   "endpoint near a yellow station", rng);
            break;
    }
    return agent.goal;
}

// One planning/execution context; owns the scratch buffers so replans
// do not reallocate.
struct Planner {
    const Environment& env;
    const SimConfig& cfg;
    int cells;
    int w;
    std::vector<std::uint8_t> traversable;
    TaskPools pools;
    // reservations for the window being planned
    std::vector<std::uint8_t> vert;  // (w+1) * cells
    std::unordered_set<std::uint64_t> edges;
    // per-agent scratch
    std::vector<std::uint8_t> safe;   // (w+1) * cells
    std::vector<std::int8_t> parent;  // (w+1) * cells, -2 unvisited
    // static distance-to-cell maps keyed by goal, grown lazily
    std::unordered_map<int, std::vector<int>> dist_cache;

    Planner(const Environment& e, const SimConfig& c)
        : env(e), cfg(c), cells(e.size()), w(c.window),
          traversable(static_cast<size_t>(cells), 0),
          pools(build_pools(e, c)) {
        for (int i = 0; i < cells; ++i)
            traversable[static_cast<size_t>(i)] =
                is_traversable(e.domain, e.tiles[static_cast<size_t>(i)]) ? 1 : 0;
        vert.resize(static_cast<size_t>((w + 1) * cells));
        safe.resize(vert.size());
        parent.resize(vert.size());
    }

    int at(int t, int c) const { return t * cells + c; }

    std::uint64_t edge_key(int t, int from, int to) const {
        return (static_cast<std::uint64_t>(t) * static_cast<std::uint64_t>(cells) +
                static_cast<std::uint64_t>(from)) *
                   static_cast<std::uint64_t>(cells) +
               static_cast<std::uint64_t>(to);
    }

    int step_to(int c, int a) const {
        int x = c % env.width + kDx[a], y = c / env.width + kDy[a];
        if (!env.in_bounds(x, y)) return -1;
        int s = env.index(x, y);
        return traversable[static_cast<size_t>(s)] ? s : -1;
    }

    const std::vector<int>& dist_to(int goal) {
        auto it = dist_cache.find(goal);
        if (it != dist_cache.end()) return it->second;
        std::vector<int> d(static_cast<size_t>(cells),
                           std::numeric_limits<int>::max());
        std::vector<int> frontier{goal}, next;
        d[static_cast<size_t>(goal)] = 0;
        while (!frontier.empty()) {
            next.clear();
            for (int c : frontier)
                for (int a = 1; a < 5; ++a) {
                    int s = step_to(c, a);
                    if (s >= 0 && d[static_cast<size_t>(s)] ==
                                      std::numeric_limits<int>::max()) {
                        d[static_cast<size_t>(s)] =
                            d[static_cast<size_t>(c)] + 1;
                        next.push_back(s);
                    }
                }
            frontier.swap(next);
        }
        return dist_cache.emplace(goal, std::move(d)).first->second;
    }

    // states from which a conflict-free continuation to the end of the
    // window still exists under the current reservations
    void compute_safety() {
        for (int c = 0; c < cells; ++c)
            safe[static_cast<size_t>(at(w, c))] =
                traversable[static_cast<size_t>(c)] &&
                !vert[static_cast<size_t>(at(w, c))];
        for (int t = w - 1; t >= 0; --t)
            for (int c = 0; c < cells; ++c) {
                std::uint8_t ok = 0;
                if (traversable[static_cast<size_t>(c)] &&
                    !vert[static_cast<size_t>(at(t, c))]) {
                    for (int a = 0; a < 5 && !ok; ++a) {
                        int s = a == 0 ? c : step_to(c, a);
                        if (s < 0 || !safe[static_cast<size_t>(at(t + 1, s))])
                            continue;
                        if (a != 0 && edges.count(edge_key(t, s, c))) continue;
                        ok = 1;
                    }
                }
                safe[static_cast<size_t>(at(t, c))] = ok;
            }
    }

    // forward reachability through safe states from (c0, t0); parents
    // record the first (deterministic) way each state was reached
    void sweep_reachable(int c0, int t0) {
        std::fill(parent.begin(), parent.end(), std::int8_t{-2});
        parent[static_cast<size_t>(at(t0, c0))] = -1;
        for (int t = t0; t < w; ++t)
            for (int c = 0; c < cells; ++c) {
                if (parent[static_cast<size_t>(at(t, c))] == -2) continue;
                for (int idx = 0; idx < 5; ++idx) {
                    int a = kActionOrder[idx];
                    int s = a == 0 ? c : step_to(c, a);
                    if (s < 0 || !safe[static_cast<size_t>(at(t + 1, s))])
                        continue;
                    if (a != 0 && edges.count(edge_key(t, s, c))) continue;
                    auto& slot = parent[static_cast<size_t>(at(t + 1, s))];
                    if (slot == -2) slot = static_cast<std::int8_t>(a);
                }
            }
    }

    // walk parents back from (c_end, t_end) to fill path[t0+1..t_end]
    void reconstruct(std::vector<int>& path, int t0, int t_end, int c_end) {
        path.resize(static_cast<size_t>(t_end) + 1);
        int c = c_end;
        for (int t = t_end; t > t0; --t) {
            path[static_cast<size_t>(t)] = c;
            int a = parent[static_cast<size_t>(at(t, c))];
            if (a > 0) c -= kDy[a] * env.width + kDx[a];
        }
    }
};

struct AgentPlan {
    std::vector<int> path;
    std::vector<int> finish_steps;  // absolute window steps, 1..w
    AgentState committed;           // state after the first h steps
    std::uint32_t dwell_bits = 0;
};

// Chase the agent's task sequence through the window: plan to the
// goal, process the arrival (dwell, task completion, next goal draw),
// repeat; when the goal is out of reach, take the safe path that ends
// nearest to it. Task state is speculative; only what happens in the
// first h steps is folded into `committed`.
AgentPlan chase_window(Planner& pl, const AgentState& initial, Rng& rng) {
    const int w = pl.w, h = pl.cfg.replan_period;
    AgentPlan out;
    AgentState st = initial;
    out.path.assign(1, st.position);
    bool snapped = false;
    auto snap_before = [&](int t_mutation) {
        if (!snapped && t_mutation > h) {
            out.committed = st;
            snapped = true;
        }
    };
    int t = 0;
    bool arrived_in_place = false;
    // after a sweep from time t0, extend the path to the end of the
    // window, ending as near the goal as the sweep allows
    auto wander_to_end = [&](int t0) {
        const std::vector<int>& d = pl.dist_to(st.goal);
        int best = -1;
        for (int c = 0; c < pl.cells; ++c)
            if (pl.parent[static_cast<size_t>(pl.at(w, c))] != -2 &&
                (best < 0 ||
                 d[static_cast<size_t>(c)] < d[static_cast<size_t>(best)]))
                best = c;
        if (best < 0)
            throw Error(ErrorCode::ConfigInvalid,
                        "agents must occupy distinct traversable tiles");
        pl.reconstruct(out.path, t0, w, best);
    };
    while (t < w) {
        int here = out.path[static_cast<size_t>(t)];
        if (st.dwell_remaining > 0) {
            if (!pl.safe[static_cast<size_t>(pl.at(t + 1, here))]) {
                // cannot hold the goal tile: abandon the dwell (it
                // restarts from scratch on the next arrival) and spend
                // the rest of the window on a safe path
                snap_before(t + 1);
                st.dwell_remaining = 0;
                pl.sweep_reachable(here, t);
                wander_to_end(t);
                t = w;
                break;
            }
            snap_before(t + 1);
            out.path.push_back(here);
            ++t;
            out.dwell_bits |= 1u << t;
            --st.dwell_remaining;
            if (st.dwell_remaining == 0) {
                ++st.tasks_finished;
                if (t <= h) out.finish_steps.push_back(t);
                assign_from_pools(st, pl.env.domain, pl.pools, rng);
                arrived_in_place = false;
            }
            continue;
        }
        if (here == st.goal && !arrived_in_place) {
            arrived_in_place = true;
            snap_before(std::max(t, 1));
            int d = dwell_for(st.phase, pl.cfg);
            if (d > 0) {
                st.dwell_remaining = d;
            } else {
                ++st.tasks_finished;
                if (t <= h) out.finish_steps.push_back(std::max(t, 1));
                assign_from_pools(st, pl.env.domain, pl.pools, rng);
            }
            continue;
        }
        pl.sweep_reachable(here, t);
        int t_arrive = -1;
        for (int tt = t + 1; tt <= w; ++tt)
            if (pl.parent[static_cast<size_t>(pl.at(tt, st.goal))] != -2) {
                t_arrive = tt;
                break;
            }
        if (t_arrive < 0) {
            wander_to_end(t);
            t = w;
            break;
        }
        pl.reconstruct(out.path, t, t_arrive, st.goal);
        t = t_arrive;
        arrived_in_place = false;
    }
    if (!snapped) out.committed = st;
    out.committed.position = out.path[static_cast<size_t>(std::min(h, w))];
    return out;
}

void check_config(const SimConfig& cfg) {
    if (cfg.num_agents < 1 || cfg.horizon < 1)
        throw Error(ErrorCode::ConfigInvalid,
                    "agent count and horizon must be positive");
    if (cfg.replan_period < 1 || cfg.window < cfg.replan_period ||
        cfg.window > 30)
        throw Error(ErrorCode::ConfigInvalid,
                    "need window >= replan period >= 1 and window <= 30");
    if (cfg.dwell_r < 0 || cfg.dwell_g < 0 || cfg.dwell_y < 0 ||
        cfg.uneven_left_weight < 1)
        throw Error(ErrorCode::ConfigInvalid,
                    "dwell times must be non-negative and the workstation "
                    "weight positive");
}

}  // namespace

int assign_task(AgentState& agent, const Environment& env, Rng& rng) {
    if (env.domain == Domain::Maze)
        throw Error(ErrorCode::WrongDomain, "maze has no agent tasks");
    SimConfig defaults;
    TaskPools pools = build_pools(env, defaults);
    return assign_from_pools(agent, env.domain, pools, rng);
}

WindowPlan plan_window(const Environment& env,
                       const std::vector<AgentState>& agents,
                       const SimConfig& cfg, Rng& rng) {
    check_config(cfg);
    if (env.domain == Domain::Maze)
        throw Error(ErrorCode::WrongDomain, "maze is not a planning domain");
    Planner pl(env, cfg);
    int n = static_cast<int>(agents.size());

    // pin everyone in place so a stay-put plan always stays available
    for (const AgentState& a : agents)
        for (int t = 0; t <= pl.w; ++t)
            pl.vert[static_cast<size_t>(pl.at(t, a.position))] = 1;

    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    for (size_t k = order.size(); k > 1; --k)
        std::swap(order[k - 1], order[rng.below(k)]);

    WindowPlan plan;
    plan.paths.resize(static_cast<size_t>(n));
    plan.committed_states.resize(static_cast<size_t>(n));
    plan.dwelling.assign(static_cast<size_t>(n), 0);
    for (int i : order) {
        const AgentState& agent = agents[static_cast<size_t>(i)];
        for (int t = 0; t <= pl.w; ++t)
            pl.vert[static_cast<size_t>(pl.at(t, agent.position))] = 0;
        pl.compute_safety();
        AgentPlan ap = chase_window(pl, agent, rng);
        for (int t = 0; t <= pl.w; ++t) {
            int c = ap.path[static_cast<size_t>(t)];
            pl.vert[static_cast<size_t>(pl.at(t, c))] = 1;
            if (t < pl.w) {
                int s = ap.path[static_cast<size_t>(t) + 1];
                if (s != c) pl.edges.insert(pl.edge_key(t, c, s));
            }
        }
        plan.paths[static_cast<size_t>(i)] = std::move(ap.path);
        plan.committed_states[static_cast<size_t>(i)] = ap.committed;
        plan.dwelling[static_cast<size_t>(i)] = ap.dwell_bits;
        for (int step : ap.finish_steps) plan.finish_events.push_back({step, i});
    }
    std::sort(plan.finish_events.begin(), plan.finish_events.end());
    return plan;
}

SimResult run_simulation(const Environment& env, const SimConfig& cfg) {
    check_config(cfg);
    if (env.domain == Domain::Maze)
        throw Error(ErrorCode::WrongDomain,
                    "maze evaluation uses the path oracle, not the simulator");
    if (!validate(env).is_valid)
        throw Error(ErrorCode::InvalidEnvironment,
                    "simulation requires a valid environment");

    std::vector<int> open;
    for (int i = 0; i < env.size(); ++i)
        if (is_traversable(env.domain, env.tiles[static_cast<size_t>(i)]))
            open.push_back(i);
    if (cfg.num_agents > static_cast<int>(open.size()))
        throw Error(ErrorCode::TooManyAgents,
                    std::to_string(cfg.num_agents) + " agents for " +
                        std::to_string(open.size()) + " traversable tiles");

    Rng rng(cfg.seed);
    std::vector<int> starts;
    if (!cfg.start_positions.empty()) {
        if (static_cast<int>(cfg.start_positions.size()) != cfg.num_agents)
            throw Error(ErrorCode::ConfigInvalid,
                        "start position count must match the agent count");
        std::vector<std::uint8_t> used(env.tiles.size(), 0);
        for (const Coord& p : cfg.start_positions) {
            if (!env.in_bounds(p.x, p.y) ||
                !is_traversable(env.domain, env.at(p.x, p.y)))
                throw Error(ErrorCode::ConfigInvalid,
                            "start positions must be traversable tiles");
            int i = env.index(p.x, p.y);
            if (used[static_cast<size_t>(i)])
                throw Error(ErrorCode::ConfigInvalid,
                            "start positions must be distinct");
            used[static_cast<size_t>(i)] = 1;
            starts.push_back(i);
        }
    } else {
        for (int i = 0; i < cfg.num_agents; ++i) {
            size_t j = static_cast<size_t>(i) +
                       rng.below(open.size() - static_cast<size_t>(i));
            std::swap(open[static_cast<size_t>(i)], open[j]);
            starts.push_back(open[static_cast<size_t>(i)]);
        }
    }

    TaskPools pools = build_pools(env, cfg);
    std::vector<AgentState> agents(static_cast<size_t>(cfg.num_agents));
    for (int i = 0; i < cfg.num_agents; ++i) {
        AgentState& a = agents[static_cast<size_t>(i)];
        a.position = starts[static_cast<size_t>(i)];
        a.phase = is_warehouse(env.domain) ? TaskPhase::ToEndpoint
                                           : TaskPhase::ToY;
        assign_from_pools(a, env.domain, pools, rng);
    }

    SimResult result;
    result.tile_usage.assign(env.tiles.size(), 0);
    std::vector<int> pos(static_cast<size_t>(cfg.num_agents));
    for (int i = 0; i < cfg.num_agents; ++i) {
        pos[static_cast<size_t>(i)] = agents[static_cast<size_t>(i)].position;
        ++result.tile_usage[static_cast<size_t>(pos[static_cast<size_t>(i)])];
    }
    if (cfg.record_trajectories) result.trajectories.push_back(pos);

    int t = 0;
    bool stopped = false;
    while (t < cfg.horizon && !stopped) {
        WindowPlan plan = plan_window(env, agents, cfg, rng);
        std::vector<int> finishes_at(static_cast<size_t>(cfg.replan_period) + 1,
                                     0);
        for (auto [step, agent] : plan.finish_events) {
            ++finishes_at[static_cast<size_t>(step)];
            (void)agent;
        }
        for (int j = 1; j <= cfg.replan_period && t < cfg.horizon; ++j) {
            int waits = 0;
            for (int i = 0; i < cfg.num_agents; ++i) {
                int np = plan.paths[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (np == pos[static_cast<size_t>(i)]) {
                    bool dwelling =
                        (plan.dwelling[static_cast<size_t>(i)] >> j) & 1u;
                    if (cfg.count_dwell_waits || !dwelling) ++waits;
                }
                pos[static_cast<size_t>(i)] = np;
                ++result.tile_usage[static_cast<size_t>(np)];
            }
            result.finished_per_timestep.push_back(
                finishes_at[static_cast<size_t>(j)]);
            result.total_finished += finishes_at[static_cast<size_t>(j)];
            if (cfg.record_trajectories) result.trajectories.push_back(pos);
            ++t;
            if (2 * waits > cfg.num_agents && t < cfg.horizon) {
                result.congested = true;
                stopped = true;
                break;
            }
        }
        agents = plan.committed_states;
    }
    result.elapsed = t;
    result.throughput =
        static_cast<double>(result.total_finished) / static_cast<double>(t);
    return result;
}

int maze_horizon(const Environment& env) { return 2 * env.width * env.height; }

MazeMetrics maze_metrics(const Environment& env) {
    if (env.domain != Domain::Maze)
        throw Error(ErrorCode::WrongDomain, "path metrics are maze-only");
    MazeMetrics m;
    int W = env.width, H = env.height;
    auto interior = [&](int x, int y) {
        return x > 0 && y > 0 && x < W - 1 && y < H - 1;
    };
    std::vector<int> open;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            if (!interior(x, y)) continue;
            if (env.at(x, y) == TileType::Wall)
                ++m.wall_count;
            else
                open.push_back(env.index(x, y));
        }
    if (open.size() < 2)
        throw Error(ErrorCode::DegenerateGraph,
                    "need at least two traversable interior tiles");

    auto coord_of = [&](int i) { return Coord{i % W, i / W}; };
    std::vector<int> dist(env.tiles.size());
    std::vector<int> frontier, next;
    int best_dist = -1, best_a = -1, best_b = -1;
    for (int src : open) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<size_t>(src)] = 0;
        frontier.assign(1, src);
        int reached = 1;
        while (!frontier.empty()) {
            next.clear();
            for (int c : frontier) {
                int cx = c % W, cy = c / W;
                for (int a = 1; a < 5; ++a) {
                    int nx = cx + kDx[a], ny = cy + kDy[a];
                    if (!interior(nx, ny)) continue;
                    int s = env.index(nx, ny);
                    if (env.tiles[static_cast<size_t>(s)] == TileType::Wall ||
                        dist[static_cast<size_t>(s)] >= 0)
                        continue;
                    dist[static_cast<size_t>(s)] =
                        dist[static_cast<size_t>(c)] + 1;
                    ++reached;
                    next.push_back(s);
                }
            }
            frontier.swap(next);
        }
        if (reached < static_cast<int>(open.size())) {
            // some pair of open tiles cannot reach each other, which
            // outranks any finite separation; disconnection surfaces on
            // the first source, so dist already holds its component
            m.solvable = 0;
            m.start = coord_of(src);
            for (int c : open)
                if (dist[static_cast<size_t>(c)] < 0) {
                    m.goal = coord_of(c);
                    break;
                }
            m.path_length = maze_horizon(env);
            return m;
        }
        for (int c : open) {
            int d = dist[static_cast<size_t>(c)];
            if (d > best_dist && src < c) {
                best_dist = d;
                best_a = src;
                best_b = c;
            }
        }
    }
    m.solvable = 1;
    m.start = coord_of(best_a);
    m.goal = coord_of(best_b);
    m.path_length = best_dist;
    return m;
}

EvalResult evaluate(const Environment& env, const SimConfig& cfg, int n_e,
                    std::uint64_t base_seed) {
    EvalResult out;
    if (env.domain == Domain::Maze) {
        MazeMetrics m = maze_metrics(env);
        out.f_res = m.solvable;
        out.success_rate = m.solvable;
        out.measures = {static_cast<double>(m.wall_count),
                        static_cast<double>(m.solvable ? m.path_length
                                                       : maze_horizon(env))};
        return out;
    }
    if (n_e < 1)
        throw Error(ErrorCode::ConfigInvalid, "need at least one simulation");
    double sum_throughput = 0.0;
    int clean = 0;
    for (int i = 0; i < n_e; ++i) {
        SimConfig run_cfg = cfg;
        run_cfg.seed = base_seed + static_cast<std::uint64_t>(i);
        SimResult r = run_simulation(env, run_cfg);
        sum_throughput += r.throughput;
        if (!r.congested) ++clean;
    }
    out.f_res = sum_throughput / n_e;
    out.success_rate = static_cast<double>(clean) / n_e;
    if (is_warehouse(env.domain))
        out.measures = {static_cast<double>(connected_shelf_components(env)),
                        environment_entropy(env)};
    else
        out.measures = {static_cast<double>(workstation_count(env)),
                        environment_entropy(env)};
    return out;
}

}  // namespace gridforge
