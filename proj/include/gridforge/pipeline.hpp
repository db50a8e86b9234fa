#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridforge/archive.hpp"
#include "gridforge/env.hpp"
#include "gridforge/nca.hpp"
#include "gridforge/repair.hpp"

namespace gridforge {

inline constexpr const char* kGridforgeVersion = "0.1.0";

enum class Optimizer { CmaMae, CmaEs, MapElites };

const char* optimizer_name(Optimizer o);
Optimizer optimizer_from_name(const std::string& name);

// Full description of a training run. Train-time fields drive train();
// the *_eval fields only parameterize scaled generation afterwards, so
// two configs differing in eval fields still hash apart (a run's output
// directory records exactly what the experiment meant to do with it).
struct ExperimentConfig {
    std::string name = "custom";
    Domain domain = Domain::WarehouseEven;

    // Grid sizes include the fixed warehouse margins.
    int width = 16;
    int height = 12;
    int eval_width = 32;
    int eval_height = 24;

    int nca_iterations = 30;       // generation steps at train size
    int nca_iterations_eval = 60;  // generation steps at eval size
    int nca_hidden = 8;

    std::optional<int> shelf_target;       // warehouse only
    std::optional<int> shelf_target_eval;  // warehouse only

    int num_agents = 20;
    int num_agents_eval = 80;
    int sims_per_eval = 2;  // simulations averaged into f_res
    int horizon = 500;
    int horizon_eval = 500;
    int window = 10;
    int replan_period = 5;

    int batch = 10;
    // Evaluation budget; the loop always runs whole batches, so the
    // recorded count is this rounded up to a multiple of batch.
    long long total_evaluations = 200;
    double alpha = 5.0;   // weight of the repair similarity in f_opt
    double sigma0 = 0.2;  // initial sampling spread around theta = 0

    ArchiveSpec archive;
    double learning_rate = 0.01;
    double threshold_floor = 0.0;

    Optimizer optimizer = Optimizer::CmaMae;
    std::uint64_t master_seed = 0;
    int workers = 0;  // 0 = all hardware threads
    int snapshot_every = 5;
    int restart_patience = 5;  // zero-acceptance generations before reset

    RepairBudget repair_budget;

    void check() const;

    bool operator==(const ExperimentConfig&) const = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// Fingerprint of the canonical JSON form; resuming a run directory with
// a config that hashes differently is refused.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Published experiment scales (warehouse-even, warehouse-uneven,
// manufacturing, maze) plus the desk-scale mini and maze-mini presets
// used by the test suite. Unknown names throw ConfigInvalid.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct GenerationRecord {
    long long generation = 0;   // 1-based
    long long evaluations = 0;  // cumulative after this generation
    double best_f_res = 0.0;    // best objective held by the result archive
    double qd_score = 0.0;
    double coverage = 0.0;
    int accepted = 0;  // optimization-archive acceptances this generation
    int failed = 0;    // candidates that errored this generation
    bool restarted = false;
    double wall_seconds = 0.0;
};

struct RunManifest {
    std::string code_version;
    std::uint64_t config_hash = 0;
    std::vector<GenerationRecord> records;
};

struct TrainResult {
    ResultArchive result;
    OptimizationArchive optimization;
    RunManifest manifest;
    long long generations = 0;
    long long evaluations = 0;
    bool finished = false;  // evaluation budget reached
};

// Run the optimization loop in run_dir, resuming from its state file
// when one exists. Writes state.json and result_archive.csv on every
// snapshot plus a retained snapshots/archive_gen*.csv each
// snapshot_every generations and at stop. stop_after_generations < 0
// means run to the evaluation budget; otherwise at most that many
// generations execute in this call (the checkpoint/kill test hook).
// Identical (config, run history) always produces identical archives,
// whatever the worker count.
TrainResult train(const ExperimentConfig& cfg, const std::string& run_dir,
                  long long stop_after_generations = -1);

struct SelectionQuery {
    enum class Kind { GlobalBest, MeasureWindow, Cell };
    Kind kind = Kind::GlobalBest;
    // MeasureWindow: inclusive [lo, hi] per measure dimension.
    std::vector<std::array<double, 2>> window;
    int cell = 0;
};

// Highest-objective elite matching the query; ties break toward the
// lowest cell index. Throws EmptySelection when nothing matches.
Elite select_elite(const ResultArchive& archive, const SelectionQuery& query);

// Rebuild the network an elite's solution vector encodes.
NcaGenerator generator_from_elite(const Elite& e, Domain d, int hidden);

struct ScaleResult {
    Environment raw;  // straight generator output, before repair
    Environment env;
    double similarity = 1.0;
    double entropy = 0.0;
    bool valid = false;
};

// Grow a seed at the target size, run the generator for `iterations`
// steps and repair once. The repair stream is derived from the raw
// environment's hash and `seed`, so a given generator and target always
// yield the same map; with the training size, iteration count and
// default seed this reproduces the training-time environment exactly.
ScaleResult scale_generate(const NcaGenerator& gen, int target_width,
                           int target_height, int iterations,
                           const RepairBudget& budget,
                           std::optional<int> shelf_target = std::nullopt,
                           std::uint64_t seed = 0);

struct TileBaselineResult {
    Environment tiled;  // pre-repair tessellation
    Environment env;
    double similarity = 1.0;
};

// Tessellate the source's generatable region across a larger grid
// (final partial copies truncate), reapply the frozen template, repair
// once. Target dimensions must not shrink the source's.
TileBaselineResult tile_baseline(const Environment& source, int target_width,
                                 int target_height, const RepairBudget& budget,
                                 std::optional<int> shelf_target = std::nullopt,
                                 std::uint64_t seed = 0);

}  // namespace gridforge
