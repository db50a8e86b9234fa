#pragma once

#include <cstdint>
#include <vector>

#include "gridforge/env.hpp"
#include "gridforge/rng.hpp"

namespace gridforge {

struct SimConfig {
    int num_agents = 1;
    int horizon = 1000;        // T
    int window = 10;           // w, planning lookahead
    int replan_period = 5;     // h, committed steps per plan
    std::uint64_t seed = 0;
    int uneven_left_weight = 5;  // workstation draw weight on the left border
    int dwell_r = 2;
    int dwell_g = 5;
    int dwell_y = 10;
    bool count_dwell_waits = true;  // dwelling agents count toward congestion
    bool record_trajectories = false;
    // fixed starting tiles for reproducible studies; empty = uniform random
    std::vector<Coord> start_positions;
};

enum class TaskPhase { ToWorkstation, ToEndpoint, ToR, ToG, ToY };

struct AgentState {
    int position = 0;  // tile index
    int goal = 0;
    TaskPhase phase = TaskPhase::ToEndpoint;
    int dwell_remaining = 0;
    long long tasks_finished = 0;
};

struct SimResult {
    double throughput = 0.0;
    bool congested = false;
    std::vector<int> finished_per_timestep;
    std::vector<std::int64_t> tile_usage;  // per-tile visit counts
    int elapsed = 0;
    long long total_finished = 0;
    // positions[t][agent], t = 0..elapsed, present when recording is on
    std::vector<std::vector<int>> trajectories;
};

// Advance the agent to its next task phase and draw the matching goal:
// warehouse alternates workstation/endpoint draws (uneven weights the
// left-border workstations), manufacturing cycles R->G->Y endpoints.
// Sets agent.goal and agent.phase, returns the goal tile index.
int assign_task(AgentState& agent, const Environment& env, Rng& rng);

struct WindowPlan {
    // paths[i][j] = agent i's tile at step j, j = 0 (current) .. window
    std::vector<std::vector<int>> paths;
    // task completions inside the committed horizon: (step in 1..h, agent)
    std::vector<std::pair<int, int>> finish_events;
    // agent task state after the committed steps are executed
    std::vector<AgentState> committed_states;
    // dwelling[i] bit j set when agent i spends committed step j dwelling
    std::vector<std::uint32_t> dwelling;
};

// Windowed cooperative planning: agents are pinned to their current
// tiles, then planned one by one in a random priority order. Each agent
// chases its task sequence (goal draws included) through a space-time
// search restricted to states that still admit a conflict-free
// completion of the window, so no plan ever collides and a blocked
// agent degrades to waiting. Only the first replan_period steps of the
// returned plan are meant to be executed.
WindowPlan plan_window(const Environment& env,
                       const std::vector<AgentState>& agents,
                       const SimConfig& cfg, Rng& rng);

// Lifelong simulation: replan every replan_period steps, execute the
// committed moves, count task completions, and stop early (congested)
// when strictly more than half the agents wait in one timestep.
// Deterministic given cfg.seed.
SimResult run_simulation(const Environment& env, const SimConfig& cfg);

struct MazeMetrics {
    int solvable = 0;
    Coord start{0, 0};
    Coord goal{0, 0};
    int path_length = 0;
    int wall_count = 0;
};

// Treats the outermost ring of the grid as appended boundary walls.
// start/goal are the endpoints of the longest shortest path over the
// interior traversable tiles (unreachable pairs rank as infinitely
// long, so a disconnected interior is unsolvable); ties break by
// lexicographic coordinate order. path_length falls back to the
// simulation horizon 2*width*height when unsolvable. wall_count counts
// interior walls only.
MazeMetrics maze_metrics(const Environment& env);

// Time horizon of the single-agent maze simulation.
int maze_horizon(const Environment& env);

struct EvalResult {
    double f_res = 0.0;
    std::vector<double> measures;  // archive order per domain
    double success_rate = 0.0;
};

// Domain evaluation: warehouse/manufacturing run n_e simulations with
// seeds base_seed..base_seed+n_e-1 and average throughput; measures are
// (shelf components, entropy) or (workstation count, entropy). Maze
// uses the path oracle: f_res = solvable, measures (walls, path length).
EvalResult evaluate(const Environment& env, const SimConfig& cfg, int n_e,
                    std::uint64_t base_seed);

}  // namespace gridforge
