#pragma once

#include <optional>

#include "gridforge/env.hpp"
#include "gridforge/rng.hpp"

namespace gridforge {

// Work units are candidate evaluations (one validity/distance check of
// a tentative assignment or tile flip). The wall-clock cap is a hard
// abort: exceeding it raises an error instead of returning a
// nondeterministically truncated result.
struct RepairBudget {
    long long work_limit = 1'000'000;
    double wall_clock_seconds = 600.0;
    int exact_threshold = 12;  // max free cells for exhaustive search

    bool operator==(const RepairBudget&) const = default;
};

enum class RepairMode { Exact, Heuristic };

struct RepairResult {
    Environment env;
    double similarity = 1.0;
    long long work_used = 0;
    RepairMode mode = RepairMode::Heuristic;
};

// Make x_in valid while disturbing it as little as possible (weighted
// hamming distance under SimilarityWeights). Exact mode (exhaustive
// enumeration, true optimum, lexicographic tie-break) runs when the
// free-cell count fits budget.exact_threshold and the full enumeration
// fits the work limit; otherwise the phased heuristic runs. Valid
// inputs and maze grids return unchanged. shelf_target enables the
// warehouse shelf-count constraint.
RepairResult repair(const Environment& x_in, const RepairBudget& budget,
                    Rng& rng, std::optional<int> shelf_target = std::nullopt);

// Phased warehouse repair: (1) shelf count, (2) connectivity carving,
// (3) shelf/endpoint adjacency, cycled until valid, then (4) bounded
// hill climb back toward x_in. Falls back to the canonical layout if
// the cycles stall, so the output is always valid.
Environment heuristic_repair_warehouse(const Environment& x_in,
                                       std::optional<int> shelf_target,
                                       const RepairBudget& budget, Rng& rng);

// Same structure for manufacturing; phase (1) instead guarantees at
// least one station of each type.
Environment heuristic_repair_manufacturing(const Environment& x_in,
                                           const RepairBudget& budget,
                                           Rng& rng);

// Deterministic always-valid reference layout, also the repair
// fallback: warehouse fills every third storage row with shelves
// (keeping one corridor column) flanked by endpoints; manufacturing
// places one station of each type with endpoints alongside.
// Throws infeasible-constraints if the grid cannot host a valid
// environment (warehouse capacity bound, manufacturing minimum size).
Environment canonical_layout(Domain d, int width, int height,
                             std::optional<int> shelf_target);

}  // namespace gridforge
