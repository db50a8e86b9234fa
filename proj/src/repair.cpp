#include "gridforge/repair.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "gridforge/errors.hpp"

namespace gridforge {

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

struct WorkMeter {
    long long used = 0;
    long long limit = 1'000'000;
    double wall_cap = 600.0;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    long long since_clock_check = 0;

    void check_wall(long long units) {
        since_clock_check += units;
        if (since_clock_check < 1024) return;
        since_clock_check = 0;
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > wall_cap)
            throw Error(ErrorCode::BudgetExhausted,
                        "repair exceeded its wall-clock cap");
    }

    // work that must complete before the result is valid
    void charge_required(long long units) {
        used += units;
        check_wall(units);
        if (used > limit)
            throw Error(ErrorCode::BudgetExhausted,
                        "repair work limit hit before reaching a valid result");
    }

    // improvement work; false once the limit is reached
    bool charge_optional(long long units) {
        check_wall(units);
        if (used + units > limit) return false;
        used += units;
        return true;
    }
};

double weighted_distance(const Environment& a, const Environment& b,
                         const SimilarityWeights& w) {
    double d = 0.0;
    for (size_t i = 0; i < a.tiles.size(); ++i)
        if (a.tiles[i] != b.tiles[i]) d += w.weights[i];
    return d;
}

bool in_tile_set(Domain d, TileType t) {
    const auto& allowed = generatable_tiles(d);
    return std::find(allowed.begin(), allowed.end(), t) != allowed.end();
}

// foreign tiles in mutable cells become Empty so phases start clean
void sanitize(Environment& env) {
    for (int i = 0; i < env.size(); ++i)
        if (!env.frozen[static_cast<size_t>(i)] &&
            !in_tile_set(env.domain, env.tiles[static_cast<size_t>(i)]))
            env.tiles[static_cast<size_t>(i)] = TileType::Empty;
}

int count_neighbors(const Environment& env, int x, int y, TileType t) {
    int n = 0;
    for (int k = 0; k < 4; ++k) {
        int nx = x + kDx[k], ny = y + kDy[k];
        if (env.in_bounds(nx, ny) && env.at(nx, ny) == t) ++n;
    }
    return n;
}

int traversable_component_count(const Environment& env) {
    std::vector<std::uint8_t> seen(env.tiles.size(), 0);
    std::vector<int> stack;
    int components = 0;
    for (int start = 0; start < env.size(); ++start) {
        if (seen[static_cast<size_t>(start)] ||
            !is_traversable(env.domain, env.tiles[static_cast<size_t>(start)]))
            continue;
        ++components;
        seen[static_cast<size_t>(start)] = 1;
        stack.assign(1, start);
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            int cx = cur % env.width, cy = cur / env.width;
            for (int k = 0; k < 4; ++k) {
                int nx = cx + kDx[k], ny = cy + kDy[k];
                if (!env.in_bounds(nx, ny)) continue;
                int ni = env.index(nx, ny);
                if (seen[static_cast<size_t>(ni)] ||
                    !is_traversable(env.domain, env.tiles[static_cast<size_t>(ni)]))
                    continue;
                seen[static_cast<size_t>(ni)] = 1;
                stack.push_back(ni);
            }
        }
    }
    return components;
}

struct Components {
    std::vector<int> label;  // -1 for non-traversable cells
    std::vector<std::vector<int>> cells;
};

Components find_components(const Environment& env) {
    Components comps;
    comps.label.assign(env.tiles.size(), -1);
    std::vector<int> stack;
    for (int start = 0; start < env.size(); ++start) {
        if (comps.label[static_cast<size_t>(start)] != -1 ||
            !is_traversable(env.domain, env.tiles[static_cast<size_t>(start)]))
            continue;
        int id = static_cast<int>(comps.cells.size());
        comps.cells.emplace_back();
        comps.label[static_cast<size_t>(start)] = id;
        stack.assign(1, start);
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            comps.cells[static_cast<size_t>(id)].push_back(cur);
            int cx = cur % env.width, cy = cur / env.width;
            for (int k = 0; k < 4; ++k) {
                int nx = cx + kDx[k], ny = cy + kDy[k];
                if (!env.in_bounds(nx, ny)) continue;
                int ni = env.index(nx, ny);
                if (comps.label[static_cast<size_t>(ni)] != -1 ||
                    !is_traversable(env.domain, env.tiles[static_cast<size_t>(ni)]))
                    continue;
                comps.label[static_cast<size_t>(ni)] = id;
                stack.push_back(ni);
            }
        }
    }
    return comps;
}

// cheapest corridor from one island to the main component; obstacle
// cells cost their similarity weight to flip. Flips the path to Empty.
bool carve_to_main(Environment& env, const SimilarityWeights& w,
                   const Components& comps, int island_id, int main_id,
                   WorkMeter& meter) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(env.tiles.size(), inf);
    std::vector<int> parent(env.tiles.size(), -1);
    using Node = std::pair<double, int>;
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
    for (int i : comps.cells[static_cast<size_t>(island_id)]) {
        dist[static_cast<size_t>(i)] = 0.0;
        pq.push({0.0, i});
    }
    while (!pq.empty()) {
        auto [d, cur] = pq.top();
        pq.pop();
        if (d > dist[static_cast<size_t>(cur)]) continue;
        meter.charge_required(1);
        if (comps.label[static_cast<size_t>(cur)] == main_id) {
            for (int at = cur; at != -1; at = parent[static_cast<size_t>(at)])
                if (!is_traversable(env.domain, env.tiles[static_cast<size_t>(at)]))
                    env.tiles[static_cast<size_t>(at)] = TileType::Empty;
            return true;
        }
        int cx = cur % env.width, cy = cur / env.width;
        for (int k = 0; k < 4; ++k) {
            int nx = cx + kDx[k], ny = cy + kDy[k];
            if (!env.in_bounds(nx, ny)) continue;
            int ni = env.index(nx, ny);
            bool open = is_traversable(env.domain, env.tiles[static_cast<size_t>(ni)]);
            if (!open && env.frozen[static_cast<size_t>(ni)])
                continue;  // frozen obstacles cannot be flipped
            double nd = d + (open ? 0.0 : w.weights[static_cast<size_t>(ni)]);
            if (nd < dist[static_cast<size_t>(ni)]) {
                dist[static_cast<size_t>(ni)] = nd;
                parent[static_cast<size_t>(ni)] = cur;
                pq.push({nd, ni});
            }
        }
    }
    return false;
}

// reconnect all traversable regions; leaves the grid unchanged when a
// region cannot be reached
void phase_connectivity(Environment& env, const SimilarityWeights& w,
                        WorkMeter& meter) {
    for (int guard = 0; guard < env.size(); ++guard) {
        Components comps = find_components(env);
        if (comps.cells.size() <= 1) return;
        int main_id = 0;
        for (size_t c = 1; c < comps.cells.size(); ++c)
            if (comps.cells[c].size() > comps.cells[static_cast<size_t>(main_id)].size())
                main_id = static_cast<int>(c);
        int island_id = main_id == 0 ? 1 : 0;
        if (!carve_to_main(env, w, comps, island_id, main_id, meter)) return;
    }
}

void phase_shelf_count(Environment& env, const Environment& x_in, int target,
                       WorkMeter& meter) {
    std::vector<int> shelves;
    for (int i = 0; i < env.size(); ++i)
        if (env.tiles[static_cast<size_t>(i)] == TileType::Shelf)
            shelves.push_back(i);
    int count = static_cast<int>(shelves.size());

    if (count > target) {
        // drop unwanted and least-anchored shelves first
        std::stable_sort(shelves.begin(), shelves.end(), [&](int a, int b) {
            int wa = x_in.tiles[static_cast<size_t>(a)] == TileType::Shelf ? 1 : 0;
            int wb = x_in.tiles[static_cast<size_t>(b)] == TileType::Shelf ? 1 : 0;
            if (wa != wb) return wa < wb;
            int ea = count_neighbors(env, a % env.width, a / env.width,
                                     TileType::Endpoint);
            int eb = count_neighbors(env, b % env.width, b / env.width,
                                     TileType::Endpoint);
            return ea != eb ? ea < eb : a < b;
        });
        for (int k = 0; k < count - target; ++k) {
            int i = shelves[static_cast<size_t>(k)];
            meter.charge_required(1);
            TileType want = x_in.tiles[static_cast<size_t>(i)];
            env.tiles[static_cast<size_t>(i)] =
                (want != TileType::Shelf && in_tile_set(env.domain, want))
                    ? want
                    : TileType::Empty;
        }
        return;
    }

    if (count < target) {
        std::vector<int> cands;
        for (int i = 0; i < env.size(); ++i)
            if (!env.frozen[static_cast<size_t>(i)] &&
                env.tiles[static_cast<size_t>(i)] != TileType::Shelf)
                cands.push_back(i);
        // prefer cells the input wanted as shelves, then endpoint-rich spots
        std::stable_sort(cands.begin(), cands.end(), [&](int a, int b) {
            int wa = x_in.tiles[static_cast<size_t>(a)] == TileType::Shelf ? 0 : 1;
            int wb = x_in.tiles[static_cast<size_t>(b)] == TileType::Shelf ? 0 : 1;
            if (wa != wb) return wa < wb;
            int ea = count_neighbors(env, a % env.width, a / env.width,
                                     TileType::Endpoint);
            int eb = count_neighbors(env, b % env.width, b / env.width,
                                     TileType::Endpoint);
            return ea != eb ? ea > eb : a < b;
        });
        int need = target - count;
        int base = traversable_component_count(env);
        for (int i : cands) {
            if (need == 0) break;
            TileType before = env.tiles[static_cast<size_t>(i)];
            env.tiles[static_cast<size_t>(i)] = TileType::Shelf;
            meter.charge_required(1);
            int after = traversable_component_count(env);
            if (after <= base) {  // never split what is already joined
                base = after;
                --need;
            } else {
                env.tiles[static_cast<size_t>(i)] = before;
            }
        }
    }
}

// mutual shelf/endpoint adjacency; stuck shelves fall back to Empty
void phase_adjacency_warehouse(Environment& env, const Environment& x_in,
                               WorkMeter& meter) {
    for (int i = 0; i < env.size(); ++i) {
        if (env.tiles[static_cast<size_t>(i)] != TileType::Endpoint) continue;
        meter.charge_required(1);
        if (count_neighbors(env, i % env.width, i / env.width, TileType::Shelf) == 0)
            env.tiles[static_cast<size_t>(i)] = TileType::Empty;
    }
    for (int i = 0; i < env.size(); ++i) {
        if (env.tiles[static_cast<size_t>(i)] != TileType::Shelf) continue;
        meter.charge_required(1);
        int x = i % env.width, y = i / env.width;
        if (count_neighbors(env, x, y, TileType::Endpoint) > 0) continue;
        int pick = -1, pick_rank = 2;
        for (int k = 0; k < 4; ++k) {
            int nx = x + kDx[k], ny = y + kDy[k];
            if (!env.in_bounds(nx, ny)) continue;
            int ni = env.index(nx, ny);
            if (env.frozen[static_cast<size_t>(ni)] ||
                env.tiles[static_cast<size_t>(ni)] != TileType::Empty)
                continue;
            int rank =
                x_in.tiles[static_cast<size_t>(ni)] == TileType::Endpoint ? 0 : 1;
            if (rank < pick_rank || (rank == pick_rank && (pick == -1 || ni < pick))) {
                pick = ni;
                pick_rank = rank;
            }
        }
        if (pick >= 0)
            env.tiles[static_cast<size_t>(pick)] = TileType::Endpoint;
        else
            env.tiles[static_cast<size_t>(i)] = TileType::Empty;
    }
}

TileType station_of(int k) {
    return k == 0 ? TileType::StationR
                  : k == 1 ? TileType::StationG : TileType::StationY;
}

void phase_presence(Environment& env, const Environment& x_in,
                    const SimilarityWeights& w, WorkMeter& meter) {
    for (int t = 0; t < 3; ++t) {
        TileType want = station_of(t);
        int count = 0;
        std::array<int, 3> totals{};
        for (TileType tile : env.tiles) {
            if (tile == want) ++count;
            for (int k = 0; k < 3; ++k)
                if (tile == station_of(k)) ++totals[static_cast<size_t>(k)];
        }
        if (count > 0) continue;

        // cheapest change first, then lowest connectivity risk: a
        // surplus station converts without touching open space, an
        // empty cell next to an endpoint slots straight in
        std::vector<std::tuple<double, int, int>> cands;  // (cost, risk, index)
        for (int i = 0; i < env.size(); ++i) {
            TileType cur = env.tiles[static_cast<size_t>(i)];
            int x = i % env.width, y = i / env.width;
            double cost = x_in.tiles[static_cast<size_t>(i)] == want
                              ? 0.0
                              : w.weights[static_cast<size_t>(i)];
            if (is_station(cur)) {
                int k = cur == TileType::StationR ? 0 : cur == TileType::StationG ? 1 : 2;
                if (totals[static_cast<size_t>(k)] >= 2)
                    cands.emplace_back(cost, 0, i);
            } else if (cur == TileType::Empty) {
                if (count_neighbors(env, x, y, TileType::Endpoint) > 0)
                    cands.emplace_back(cost, 1, i);
                else if (count_neighbors(env, x, y, TileType::Empty) > 0)
                    cands.emplace_back(cost, 2, i);
                else
                    cands.emplace_back(cost, 3, i);
            }
        }
        std::sort(cands.begin(), cands.end());
        int base = traversable_component_count(env);
        for (const auto& [cost, risk, i] : cands) {
            TileType before = env.tiles[static_cast<size_t>(i)];
            env.tiles[static_cast<size_t>(i)] = want;
            meter.charge_required(1);
            if (is_station(before) || traversable_component_count(env) <= base)
                break;
            env.tiles[static_cast<size_t>(i)] = before;
        }
    }
}

void phase_adjacency_manufacturing(Environment& env, const Environment& x_in,
                                   WorkMeter& meter) {
    for (int i = 0; i < env.size(); ++i) {
        if (env.tiles[static_cast<size_t>(i)] != TileType::Endpoint) continue;
        meter.charge_required(1);
        int x = i % env.width, y = i / env.width;
        bool anchored = false;
        for (int k = 0; k < 4 && !anchored; ++k) {
            int nx = x + kDx[k], ny = y + kDy[k];
            if (env.in_bounds(nx, ny) && is_station(env.at(nx, ny)))
                anchored = true;
        }
        if (!anchored) env.tiles[static_cast<size_t>(i)] = TileType::Empty;
    }
    for (int i = 0; i < env.size(); ++i) {
        if (!is_station(env.tiles[static_cast<size_t>(i)])) continue;
        meter.charge_required(1);
        int x = i % env.width, y = i / env.width;
        if (count_neighbors(env, x, y, TileType::Endpoint) > 0) continue;
        int pick = -1, pick_rank = 2;
        for (int k = 0; k < 4; ++k) {
            int nx = x + kDx[k], ny = y + kDy[k];
            if (!env.in_bounds(nx, ny)) continue;
            int ni = env.index(nx, ny);
            if (env.tiles[static_cast<size_t>(ni)] != TileType::Empty) continue;
            int rank =
                x_in.tiles[static_cast<size_t>(ni)] == TileType::Endpoint ? 0 : 1;
            if (rank < pick_rank || (rank == pick_rank && (pick == -1 || ni < pick))) {
                pick = ni;
                pick_rank = rank;
            }
        }
        if (pick >= 0)
            env.tiles[static_cast<size_t>(pick)] = TileType::Endpoint;
        else
            env.tiles[static_cast<size_t>(i)] = TileType::Empty;
    }
}

void hill_climb(Environment& env, const Environment& x_in,
                std::optional<int> shelf_target, WorkMeter& meter, Rng& rng) {
    std::vector<int> mutable_cells;
    for (int i = 0; i < env.size(); ++i)
        if (!env.frozen[static_cast<size_t>(i)]) mutable_cells.push_back(i);

    while (true) {
        bool changed = false;

        std::vector<int> order = mutable_cells;
        for (size_t k = order.size(); k > 1; --k)
            std::swap(order[k - 1], order[rng.below(k)]);
        for (int i : order) {
            TileType want = x_in.tiles[static_cast<size_t>(i)];
            if (env.tiles[static_cast<size_t>(i)] == want ||
                !in_tile_set(env.domain, want))
                continue;
            if (!meter.charge_optional(1)) return;
            TileType before = env.tiles[static_cast<size_t>(i)];
            env.tiles[static_cast<size_t>(i)] = want;
            if (validate(env, shelf_target).is_valid) {
                changed = true;
            } else {
                env.tiles[static_cast<size_t>(i)] = before;
            }
        }

        if (is_warehouse(env.domain)) {
            // paired relocation: move a misplaced shelf onto a wanted spot
            std::vector<int> wanted, misplaced;
            for (int i : mutable_cells) {
                bool is_shelf = env.tiles[static_cast<size_t>(i)] == TileType::Shelf;
                bool want_shelf =
                    x_in.tiles[static_cast<size_t>(i)] == TileType::Shelf;
                if (want_shelf && !is_shelf) wanted.push_back(i);
                if (!want_shelf && is_shelf) misplaced.push_back(i);
            }
            std::vector<std::uint8_t> used(misplaced.size(), 0);
            for (int wi : wanted) {
                for (size_t mk = 0; mk < misplaced.size(); ++mk) {
                    if (used[mk]) continue;
                    int mi = misplaced[mk];
                    if (!meter.charge_optional(1)) return;
                    TileType w_before = env.tiles[static_cast<size_t>(wi)];
                    TileType m_before = env.tiles[static_cast<size_t>(mi)];
                    TileType m_want = x_in.tiles[static_cast<size_t>(mi)];
                    env.tiles[static_cast<size_t>(wi)] = TileType::Shelf;
                    env.tiles[static_cast<size_t>(mi)] =
                        in_tile_set(env.domain, m_want) ? m_want : TileType::Empty;
                    if (validate(env, shelf_target).is_valid) {
                        used[mk] = 1;
                        changed = true;
                        break;
                    }
                    env.tiles[static_cast<size_t>(wi)] = w_before;
                    env.tiles[static_cast<size_t>(mi)] = m_before;
                }
            }
        }

        if (!changed) return;
    }
}

Environment run_heuristic(const Environment& x_in, std::optional<int> shelf_target,
                          Rng& rng, WorkMeter& meter) {
    // feasibility gates: the fallback layout must be constructible and
    // frozen cells, which repair may never touch, must already be right
    Environment fallback = canonical_layout(x_in.domain, x_in.width,
                                            x_in.height, shelf_target);
    for (size_t i = 0; i < x_in.tiles.size(); ++i)
        if (x_in.frozen[i] && x_in.tiles[i] != fallback.tiles[i])
            throw Error(ErrorCode::InfeasibleConstraints,
                        "a frozen cell holds the wrong tile");
    SimilarityWeights w = SimilarityWeights::for_input(x_in);
    Environment env = x_in;
    sanitize(env);

    const int kMaxCycles = 8;
    bool is_valid = false;
    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
        if (validate(env, shelf_target).is_valid) {
            is_valid = true;
            break;
        }
        if (is_warehouse(env.domain)) {
            if (shelf_target) phase_shelf_count(env, x_in, *shelf_target, meter);
            phase_connectivity(env, w, meter);
            phase_adjacency_warehouse(env, x_in, meter);
        } else {
            phase_presence(env, x_in, w, meter);
            phase_connectivity(env, w, meter);
            phase_adjacency_manufacturing(env, x_in, meter);
        }
    }
    if (!is_valid && !validate(env, shelf_target).is_valid) env = fallback;

    hill_climb(env, x_in, shelf_target, meter, rng);
    return env;
}

long long ipow_capped(long long base, int exp, long long cap) {
    long long v = 1;
    for (int k = 0; k < exp; ++k) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

// exhaustive search over every assignment of the mutable cells, in
// lexicographic (tile order, then position) order; first minimum wins
std::optional<Environment> exact_repair(const Environment& x_in,
                                        std::optional<int> shelf_target,
                                        const RepairBudget& budget,
                                        WorkMeter& meter) {
    std::vector<int> cells;
    for (int i = 0; i < x_in.size(); ++i)
        if (!x_in.frozen[static_cast<size_t>(i)]) cells.push_back(i);
    int f = static_cast<int>(cells.size());
    if (f > budget.exact_threshold) return std::nullopt;
    const auto& tiles = generatable_tiles(x_in.domain);
    int k_tiles = static_cast<int>(tiles.size());
    long long total = ipow_capped(k_tiles, f, budget.work_limit);
    if (total > budget.work_limit) return std::nullopt;

    SimilarityWeights w = SimilarityWeights::for_input(x_in);
    Environment env = x_in;
    std::vector<int> digit(static_cast<size_t>(f), 0);
    for (int c = 0; c < f; ++c)
        env.tiles[static_cast<size_t>(cells[static_cast<size_t>(c)])] = tiles[0];

    double best_dist = std::numeric_limits<double>::infinity();
    std::optional<Environment> best;
    while (true) {
        meter.charge_required(1);
        if (validate(env, shelf_target).is_valid) {
            double d = weighted_distance(x_in, env, w);
            if (d < best_dist) {
                best_dist = d;
                best = env;
            }
        }
        int pos = f - 1;
        while (pos >= 0) {
            int& dg = digit[static_cast<size_t>(pos)];
            if (++dg < k_tiles) {
                env.tiles[static_cast<size_t>(cells[static_cast<size_t>(pos)])] =
                    tiles[static_cast<size_t>(dg)];
                break;
            }
            dg = 0;
            env.tiles[static_cast<size_t>(cells[static_cast<size_t>(pos)])] = tiles[0];
            --pos;
        }
        if (pos < 0) break;
    }
    if (!best)
        throw Error(ErrorCode::InfeasibleConstraints,
                    "no valid assignment exists for this grid");
    return best;
}

}  // namespace

Environment canonical_layout(Domain d, int width, int height,
                             std::optional<int> shelf_target) {
    if (is_warehouse(d)) {
        Environment env = warehouse_template(d, width, height);
        int target = shelf_target.value_or(0);
        if (target < 0)
            throw Error(ErrorCode::InfeasibleConstraints,
                        "negative shelf count requested");
        auto [lo, hi] = storage_span(env);
        int usable_cols = hi - lo - 1;  // last storage column stays a corridor
        std::vector<int> shelf_rows;
        for (int y = 1; y < height; y += 3) shelf_rows.push_back(y);
        long long capacity =
            usable_cols > 0
                ? static_cast<long long>(shelf_rows.size()) * usable_cols
                : 0;
        if (target > capacity)
            throw Error(ErrorCode::InfeasibleConstraints,
                        std::to_string(target) + " shelves exceed the " +
                            std::to_string(capacity) +
                            " this grid can host with endpoint access");
        int placed = 0;
        for (int y : shelf_rows) {
            for (int x = lo; x < hi - 1 && placed < target; ++x) {
                env.at(x, y) = TileType::Shelf;
                ++placed;
                env.at(x, y - 1) = TileType::Endpoint;
                if (y + 1 < height) env.at(x, y + 1) = TileType::Endpoint;
            }
        }
        return env;
    }
    if (d == Domain::Manufacturing) {
        Environment env = make_environment(d, width, height);
        if (width >= 3 && height >= 2) {
            env.at(0, 0) = TileType::StationR;
            env.at(1, 0) = TileType::StationG;
            env.at(2, 0) = TileType::StationY;
            env.at(0, 1) = TileType::Endpoint;
            env.at(1, 1) = TileType::Endpoint;
            env.at(2, 1) = TileType::Endpoint;
        } else if (height >= 3 && width >= 2) {
            env.at(0, 0) = TileType::StationR;
            env.at(0, 1) = TileType::StationG;
            env.at(0, 2) = TileType::StationY;
            env.at(1, 0) = TileType::Endpoint;
            env.at(1, 1) = TileType::Endpoint;
            env.at(1, 2) = TileType::Endpoint;
        } else {
            throw Error(ErrorCode::InfeasibleConstraints,
                        "grid too small for one station of each type");
        }
        return env;
    }
    return make_environment(d, width, height);  // maze: anything goes
}

Environment heuristic_repair_warehouse(const Environment& x_in,
                                       std::optional<int> shelf_target,
                                       const RepairBudget& budget, Rng& rng) {
    if (!is_warehouse(x_in.domain))
        throw Error(ErrorCode::WrongDomain, "input is not a warehouse grid");
    WorkMeter meter{0, budget.work_limit, budget.wall_clock_seconds};
    return run_heuristic(x_in, shelf_target, rng, meter);
}

Environment heuristic_repair_manufacturing(const Environment& x_in,
                                           const RepairBudget& budget,
                                           Rng& rng) {
    if (x_in.domain != Domain::Manufacturing)
        throw Error(ErrorCode::WrongDomain, "input is not a manufacturing grid");
    WorkMeter meter{0, budget.work_limit, budget.wall_clock_seconds};
    return run_heuristic(x_in, std::nullopt, rng, meter);
}

RepairResult repair(const Environment& x_in, const RepairBudget& budget,
                    Rng& rng, std::optional<int> shelf_target) {
    if (budget.work_limit < 1 || budget.wall_clock_seconds <= 0.0 ||
        budget.exact_threshold < 0)
        throw Error(ErrorCode::ConfigInvalid, "repair budgets must be positive");

    RepairResult result;
    if (x_in.domain == Domain::Maze) {
        result.env = x_in;
        result.mode = RepairMode::Exact;
        return result;
    }
    if (validate(x_in, shelf_target).is_valid) {
        result.env = x_in;
        result.mode = RepairMode::Exact;
        return result;
    }

    WorkMeter meter{0, budget.work_limit, budget.wall_clock_seconds};
    if (auto exact = exact_repair(x_in, shelf_target, budget, meter)) {
        result.env = std::move(*exact);
        result.mode = RepairMode::Exact;
    } else {
        result.env = run_heuristic(x_in, shelf_target, rng, meter);
        result.mode = RepairMode::Heuristic;
    }
    result.similarity = similarity(x_in, result.env);
    result.work_used = meter.used;
    return result;
}

}  // namespace gridforge
