#include "gridforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "gridforge/cma_es.hpp"
#include "gridforge/errors.hpp"
#include "gridforge/rng.hpp"
#include "gridforge/sim.hpp"
#include "json.hpp"

namespace gridforge {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Independent seed streams derived from the master seed / environment
// hash so that adding a consumer never shifts another stream's draws.
constexpr std::uint64_t kRunStream = 0x9a3f7d21c5e8b604ull;
constexpr std::uint64_t kEvalStream = 0x517cc1b727220a95ull;
constexpr std::uint64_t kRepairStream = 0x2545f4914f6cdd1dull;

// Iso+LineDD spreads for the MAP-Elites variation operator.
constexpr double kIsoSigma = 0.01;
constexpr double kLineSigma = 0.2;

std::uint64_t repair_seed(const Environment& raw, std::uint64_t user_seed) {
    return hash_combine(hash_combine(env_hash(raw), user_seed), kRepairStream);
}

std::uint64_t eval_seed(std::uint64_t master, long long eval_index) {
    return hash_combine(
        hash_combine(master, static_cast<std::uint64_t>(eval_index)),
        kEvalStream);
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out)
            throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::Io,
                    "cannot move " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

const char* optimizer_name(Optimizer o) {
    switch (o) {
        case Optimizer::CmaMae: return "cma-mae";
        case Optimizer::CmaEs: return "cma-es";
        case Optimizer::MapElites: return "map-elites";
    }
    return "cma-mae";
}

Optimizer optimizer_from_name(const std::string& name) {
    if (name == "cma-mae") return Optimizer::CmaMae;
    if (name == "cma-es") return Optimizer::CmaEs;
    if (name == "map-elites") return Optimizer::MapElites;
    throw Error(ErrorCode::ConfigInvalid, "unknown optimizer: " + name);
}

void ExperimentConfig::check() const {
    auto fail = [](const std::string& what) {
        throw Error(ErrorCode::ConfigInvalid, what);
    };
    if (width < 1 || height < 1) fail("train size must be positive");
    if (eval_width < 1 || eval_height < 1) fail("eval size must be positive");
    if (nca_iterations < 0 || nca_iterations_eval < 0)
        fail("iteration counts must be non-negative");
    if (nca_hidden < 1) fail("hidden channel count must be positive");
    if (shelf_target && *shelf_target < 1) fail("shelf target must be positive");
    if (shelf_target_eval && *shelf_target_eval < 1)
        fail("eval shelf target must be positive");
    if (is_warehouse(domain) && !shelf_target)
        fail("warehouse training needs a shelf target");
    if (!is_warehouse(domain) && (shelf_target || shelf_target_eval))
        fail("shelf targets only apply to warehouse domains");
    if (num_agents < 1 || num_agents_eval < 1)
        fail("agent counts must be positive");
    if (sims_per_eval < 1) fail("simulations per evaluation must be positive");
    if (horizon < 1 || horizon_eval < 1) fail("horizons must be positive");
    if (replan_period < 1 || window < replan_period)
        fail("window must cover the replan period");
    if (batch < 1) fail("batch size must be positive");
    if (total_evaluations < 1) fail("evaluation budget must be positive");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        fail("alpha must be finite and non-negative");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
        fail("sigma0 must be positive");
    archive.check();
    if (!(learning_rate >= 0.0 && learning_rate <= 1.0))
        fail("archive learning rate must lie in [0, 1]");
    if (!std::isfinite(threshold_floor)) fail("threshold floor must be finite");
    if (workers < 0) fail("worker count must be non-negative");
    if (snapshot_every < 0) fail("snapshot cadence must be non-negative");
    if (restart_patience < 1) fail("restart patience must be positive");
    if (repair_budget.work_limit < 1 || repair_budget.wall_clock_seconds <= 0 ||
        repair_budget.exact_threshold < 0)
        fail("repair budget must be positive");
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["format"] = "gridforge-config";
    j["version"] = 1;
    j["name"] = cfg.name;
    j["domain"] = domain_name(cfg.domain);
    j["width"] = cfg.width;
    j["height"] = cfg.height;
    j["eval_width"] = cfg.eval_width;
    j["eval_height"] = cfg.eval_height;
    j["nca_iterations"] = cfg.nca_iterations;
    j["nca_iterations_eval"] = cfg.nca_iterations_eval;
    j["nca_hidden"] = cfg.nca_hidden;
    j["shelf_target"] = cfg.shelf_target ? json(*cfg.shelf_target) : json();
    j["shelf_target_eval"] =
        cfg.shelf_target_eval ? json(*cfg.shelf_target_eval) : json();
    j["num_agents"] = cfg.num_agents;
    j["num_agents_eval"] = cfg.num_agents_eval;
    j["sims_per_eval"] = cfg.sims_per_eval;
    j["horizon"] = cfg.horizon;
    j["horizon_eval"] = cfg.horizon_eval;
    j["window"] = cfg.window;
    j["replan_period"] = cfg.replan_period;
    j["batch"] = cfg.batch;
    j["total_evaluations"] = cfg.total_evaluations;
    j["alpha"] = cfg.alpha;
    j["sigma0"] = cfg.sigma0;
    j["archive_dims"] = cfg.archive.dims;
    json ranges = json::array();
    for (const auto& r : cfg.archive.ranges) ranges.push_back({r[0], r[1]});
    j["archive_ranges"] = ranges;
    j["learning_rate"] = cfg.learning_rate;
    j["threshold_floor"] = cfg.threshold_floor;
    j["optimizer"] = optimizer_name(cfg.optimizer);
    j["master_seed"] = cfg.master_seed;
    j["workers"] = cfg.workers;
    j["snapshot_every"] = cfg.snapshot_every;
    j["restart_patience"] = cfg.restart_patience;
    j["repair_work_limit"] = cfg.repair_budget.work_limit;
    j["repair_wall_clock_seconds"] = cfg.repair_budget.wall_clock_seconds;
    j["repair_exact_threshold"] = cfg.repair_budget.exact_threshold;
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad config: ") + e.what());
    }
    try {
        if (j.value("format", "") != "gridforge-config" ||
            j.value("version", 0) != 1)
            throw Error(ErrorCode::Io, "not a config record");
        ExperimentConfig cfg;
        cfg.name = j.at("name").get<std::string>();
        cfg.domain = domain_from_name(j.at("domain").get<std::string>());
        cfg.width = j.at("width").get<int>();
        cfg.height = j.at("height").get<int>();
        cfg.eval_width = j.at("eval_width").get<int>();
        cfg.eval_height = j.at("eval_height").get<int>();
        cfg.nca_iterations = j.at("nca_iterations").get<int>();
        cfg.nca_iterations_eval = j.at("nca_iterations_eval").get<int>();
        cfg.nca_hidden = j.at("nca_hidden").get<int>();
        if (!j.at("shelf_target").is_null())
            cfg.shelf_target = j.at("shelf_target").get<int>();
        if (!j.at("shelf_target_eval").is_null())
            cfg.shelf_target_eval = j.at("shelf_target_eval").get<int>();
        cfg.num_agents = j.at("num_agents").get<int>();
        cfg.num_agents_eval = j.at("num_agents_eval").get<int>();
        cfg.sims_per_eval = j.at("sims_per_eval").get<int>();
        cfg.horizon = j.at("horizon").get<int>();
        cfg.horizon_eval = j.at("horizon_eval").get<int>();
        cfg.window = j.at("window").get<int>();
        cfg.replan_period = j.at("replan_period").get<int>();
        cfg.batch = j.at("batch").get<int>();
        cfg.total_evaluations = j.at("total_evaluations").get<long long>();
        cfg.alpha = j.at("alpha").get<double>();
        cfg.sigma0 = j.at("sigma0").get<double>();
        cfg.archive.dims = j.at("archive_dims").get<std::vector<int>>();
        cfg.archive.ranges.clear();
        for (const auto& r : j.at("archive_ranges"))
            cfg.archive.ranges.push_back(
                {r.at(0).get<double>(), r.at(1).get<double>()});
        cfg.learning_rate = j.at("learning_rate").get<double>();
        cfg.threshold_floor = j.at("threshold_floor").get<double>();
        cfg.optimizer =
            optimizer_from_name(j.at("optimizer").get<std::string>());
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        cfg.workers = j.at("workers").get<int>();
        cfg.snapshot_every = j.at("snapshot_every").get<int>();
        cfg.restart_patience = j.at("restart_patience").get<int>();
        cfg.repair_budget.work_limit = j.at("repair_work_limit").get<long long>();
        cfg.repair_budget.wall_clock_seconds =
            j.at("repair_wall_clock_seconds").get<double>();
        cfg.repair_budget.exact_threshold =
            j.at("repair_exact_threshold").get<int>();
        return cfg;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_file(path));
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    write_file_atomic(path, config_to_json(cfg));
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = config_to_json(cfg);
    return fnv1a64(text.data(), text.size());
}

std::vector<std::string> preset_names() {
    return {"warehouse-even", "warehouse-uneven", "manufacturing",
            "maze",           "mini",             "maze-mini"};
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    if (name == "warehouse-even" || name == "warehouse-uneven" ||
        name == "manufacturing") {
        c.domain = name == "warehouse-even"    ? Domain::WarehouseEven
                   : name == "warehouse-uneven" ? Domain::WarehouseUneven
                                                : Domain::Manufacturing;
        c.width = 36;
        c.height = 33;
        c.eval_width = 102;
        c.eval_height = 101;
        c.nca_iterations = 50;
        c.nca_iterations_eval = 200;
        c.nca_hidden = 32;
        c.num_agents = 200;
        c.sims_per_eval = 5;
        c.horizon = 1000;
        c.horizon_eval = 5000;
        c.batch = 50;
        c.total_evaluations = 10000;
        c.alpha = 5.0;
        c.learning_rate = 0.01;
        c.snapshot_every = 10;
        if (c.domain == Domain::Manufacturing) {
            c.num_agents_eval = 1800;
            c.archive = {{100, 100}, {{0.0, 600.0}, {0.0, 1.0}}};
        } else {
            c.num_agents_eval =
                c.domain == Domain::WarehouseEven ? 1400 : 1000;
            c.shelf_target = 240;
            c.shelf_target_eval = 2250;
            c.archive = {{100, 100}, {{140.0, 240.0}, {0.0, 1.0}}};
        }
        return c;
    }
    if (name == "maze" || name == "maze-mini") {
        c.domain = Domain::Maze;
        c.width = 18;
        c.height = 18;
        c.eval_width = 66;
        c.eval_height = 66;
        c.nca_iterations = 50;
        c.nca_iterations_eval = 200;
        c.num_agents = 1;
        c.num_agents_eval = 1;
        c.horizon = 1000;
        c.horizon_eval = 5000;
        c.alpha = 0.0;
        c.learning_rate = 0.5;
        c.archive = {{256, 162}, {{0.0, 256.0}, {0.0, 648.0}}};
        if (name == "maze") {
            c.nca_hidden = 32;
            c.sims_per_eval = 50;
            c.batch = 150;
            c.total_evaluations = 100000;
            c.snapshot_every = 10;
        } else {
            c.nca_hidden = 8;
            c.sims_per_eval = 1;
            c.batch = 10;
            c.total_evaluations = 300;
            c.snapshot_every = 5;
        }
        return c;
    }
    if (name == "mini") {
        c.domain = Domain::WarehouseEven;
        c.width = 16;
        c.height = 12;
        c.eval_width = 32;
        c.eval_height = 24;
        c.nca_iterations = 30;
        c.nca_iterations_eval = 60;
        // Small enough for CMA to adapt within the 200-evaluation budget.
        c.nca_hidden = 4;
        c.shelf_target = 24;
        c.shelf_target_eval = 112;  // train shelf density at 2x linear size
        c.num_agents = 20;
        c.num_agents_eval = 80;
        c.sims_per_eval = 2;
        c.horizon = 500;
        c.horizon_eval = 500;
        c.batch = 10;
        c.total_evaluations = 200;
        // 200 evaluations can't pay for the repair-similarity bonus and
        // throughput at once; weight throughput alone and anneal faster
        // than the full-scale presets.
        c.alpha = 0.0;
        c.learning_rate = 0.1;
        c.snapshot_every = 5;
        // The published component range [140, 240] collapses to one bin
        // at this scale (24 shelves cap the count), so the mini archive
        // rescales that axis.
        c.archive = {{25, 50}, {{0.0, 25.0}, {0.0, 1.0}}};
        return c;
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown preset: " + name);
}

namespace {

SimConfig sim_config_of(const ExperimentConfig& cfg) {
    SimConfig sc;
    sc.num_agents = cfg.num_agents;
    sc.horizon = cfg.horizon;
    sc.window = cfg.window;
    sc.replan_period = cfg.replan_period;
    return sc;
}

struct CandidateOutcome {
    bool failed = false;
    Elite elite;  // objective assigned at archive-add time
};

CandidateOutcome evaluate_candidate(const ExperimentConfig& cfg,
                                    const NcaArchitecture& arch,
                                    std::vector<float> theta,
                                    long long eval_index) {
    CandidateOutcome out;
    out.elite.solution = std::move(theta);
    try {
        NcaGenerator gen(cfg.domain, arch, out.elite.solution);
        const Environment seed_env =
            make_seed(cfg.domain, cfg.width, cfg.height);
        const Environment raw = generate(gen, seed_env, cfg.nca_iterations);
        Environment env;
        double delta = 1.0;
        if (cfg.domain == Domain::Maze) {
            env = raw;
        } else {
            Rng rng(repair_seed(raw, 0));
            RepairResult rep =
                repair(raw, cfg.repair_budget, rng, cfg.shelf_target);
            env = std::move(rep.env);
            delta = rep.similarity;
        }
        const EvalResult er = evaluate(env, sim_config_of(cfg),
                                       cfg.sims_per_eval,
                                       eval_seed(cfg.master_seed, eval_index));
        out.elite.measures = er.measures;
        out.elite.env_hash = env_hash(env);
        out.elite.similarity = delta;
        out.elite.f_res = er.f_res;
        out.elite.f_opt = er.f_res + cfg.alpha * delta;
    } catch (const std::exception&) {
        out.failed = true;
        out.elite.measures.clear();
        out.elite.f_res = 0.0;
        out.elite.f_opt = 0.0;
        out.elite.similarity = 0.0;
        out.elite.env_hash = 0;
    }
    return out;
}

// Mutable training state, serialized whole into state.json.
struct TrainState {
    long long generation = 0;
    long long evaluations = 0;
    long long restarts = 0;
    long long failed_total = 0;
    int zero_accept_streak = 0;
    Rng run_rng;
    std::unique_ptr<CmaEs> cma;  // null for MAP-Elites
    OptimizationArchive opt;
    ResultArchive res;
    std::vector<GenerationRecord> records;
};

json record_to_json(const GenerationRecord& r) {
    json j;
    j["generation"] = r.generation;
    j["evaluations"] = r.evaluations;
    j["best_f_res"] = r.best_f_res;
    j["qd_score"] = r.qd_score;
    j["coverage"] = r.coverage;
    j["accepted"] = r.accepted;
    j["failed"] = r.failed;
    j["restarted"] = r.restarted;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

GenerationRecord record_from_json(const json& j) {
    GenerationRecord r;
    r.generation = j.at("generation").get<long long>();
    r.evaluations = j.at("evaluations").get<long long>();
    r.best_f_res = j.at("best_f_res").get<double>();
    r.qd_score = j.at("qd_score").get<double>();
    r.coverage = j.at("coverage").get<double>();
    r.accepted = j.at("accepted").get<int>();
    r.failed = j.at("failed").get<int>();
    r.restarted = j.at("restarted").get<bool>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

void write_snapshot(const fs::path& run_dir, const ExperimentConfig& cfg,
                    const TrainState& st) {
    const std::string archive_text = archive_to_csv(st.res);
    write_file_atomic(run_dir / "result_archive.csv", archive_text);
    char name[48];
    std::snprintf(name, sizeof name, "archive_gen%06lld.csv", st.generation);
    write_file_atomic(run_dir / "snapshots" / name, archive_text);

    json j;
    j["format"] = "gridforge-run";
    j["version"] = 1;
    j["code_version"] = kGridforgeVersion;
    j["config"] = json::parse(config_to_json(cfg));
    j["config_hash"] = hash_hex(config_hash(cfg));
    j["generation"] = st.generation;
    j["evaluations"] = st.evaluations;
    j["restarts"] = st.restarts;
    j["failed_evaluations"] = st.failed_total;
    j["zero_accept_streak"] = st.zero_accept_streak;
    const auto rs = st.run_rng.state();
    j["rng_state"] = std::vector<std::uint64_t>(rs.begin(), rs.end());
    j["cma"] = st.cma ? json::parse(st.cma->to_json()) : json();
    json thresholds = json::array();
    for (const auto& [cell, t] : st.opt.thresholds)
        thresholds.push_back({cell, t});
    j["thresholds"] = thresholds;
    json records = json::array();
    for (const auto& r : st.records) records.push_back(record_to_json(r));
    j["records"] = records;
    write_file_atomic(run_dir / "state.json", j.dump(2) + "\n");
}

void load_state(const fs::path& run_dir, const ExperimentConfig& cfg,
                TrainState& st) {
    json j;
    try {
        j = json::parse(read_file(run_dir / "state.json"));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad run state: ") + e.what());
    }
    try {
        if (j.value("format", "") != "gridforge-run" ||
            j.value("version", 0) != 1)
            throw Error(ErrorCode::Io, "not a run state record");
        if (j.at("config_hash").get<std::string>() !=
            hash_hex(config_hash(cfg)))
            throw Error(ErrorCode::ConfigInvalid,
                        "run directory belongs to a different config");
        st.generation = j.at("generation").get<long long>();
        st.evaluations = j.at("evaluations").get<long long>();
        st.restarts = j.at("restarts").get<long long>();
        st.failed_total = j.at("failed_evaluations").get<long long>();
        st.zero_accept_streak = j.at("zero_accept_streak").get<int>();
        auto rs = j.at("rng_state").get<std::vector<std::uint64_t>>();
        if (rs.size() != 4)
            throw Error(ErrorCode::Io, "rng state must hold four words");
        st.run_rng.set_state({rs[0], rs[1], rs[2], rs[3]});
        if (cfg.optimizer != Optimizer::MapElites) {
            if (j.at("cma").is_null())
                throw Error(ErrorCode::Io, "run state lacks optimizer state");
            st.cma = std::make_unique<CmaEs>(
                CmaEs::from_json(j.at("cma").dump()));
        }
        st.opt.thresholds.clear();
        for (const auto& row : j.at("thresholds"))
            st.opt.thresholds[row.at(0).get<int>()] =
                row.at(1).get<double>();
        st.records.clear();
        for (const auto& row : j.at("records"))
            st.records.push_back(record_from_json(row));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad run state: ") + e.what());
    }
    st.res = load_archive((run_dir / "result_archive.csv").string());
    if (!(st.res.spec == cfg.archive))
        throw Error(ErrorCode::ConfigInvalid,
                    "archive snapshot does not match the config spec");
}

Eigen::VectorXd restart_mean(const ResultArchive& res, int dim, Rng& rng) {
    if (res.cells.empty()) return Eigen::VectorXd::Zero(dim);
    auto it = res.cells.begin();
    std::advance(it, static_cast<long>(rng.below(res.cells.size())));
    const auto& sol = it->second.solution;
    Eigen::VectorXd mean(dim);
    for (int k = 0; k < dim; ++k) mean[k] = static_cast<double>(sol[k]);
    return mean;
}

std::vector<float> to_floats(const Eigen::VectorXd& v) {
    std::vector<float> out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k)
        out[k] = static_cast<float>(v[k]);
    return out;
}

}  // namespace

TrainResult train(const ExperimentConfig& cfg, const std::string& run_dir,
                  long long stop_after_generations) {
    cfg.check();
    const fs::path dir(run_dir);
    fs::create_directories(dir / "snapshots");

    const NcaArchitecture arch = architecture_for(cfg.domain, cfg.nca_hidden);
    const int dim = param_count(arch);
    const int b = cfg.batch;

    TrainState st;
    st.opt.spec = cfg.archive;
    st.opt.learning_rate = cfg.learning_rate;
    st.opt.threshold_floor = cfg.threshold_floor;
    st.res.spec = cfg.archive;
    if (fs::exists(dir / "state.json")) {
        load_state(dir, cfg, st);
    } else {
        st.run_rng.reseed(hash_combine(cfg.master_seed, kRunStream));
        if (cfg.optimizer != Optimizer::MapElites)
            st.cma = std::make_unique<CmaEs>(dim, b, cfg.sigma0,
                                             Eigen::VectorXd::Zero(dim));
        save_config(cfg, (dir / "config.json").string());
    }

    int n_workers = cfg.workers > 0
                        ? cfg.workers
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::clamp(n_workers, 1, b);

    const double neg_inf = -std::numeric_limits<double>::infinity();
    long long gens_this_call = 0;
    while (st.evaluations < cfg.total_evaluations &&
           (stop_after_generations < 0 ||
            gens_this_call < stop_after_generations)) {
        const auto t0 = std::chrono::steady_clock::now();

        // Sample the batch.
        std::vector<Eigen::VectorXd> asked;
        std::vector<std::vector<float>> thetas(b);
        if (st.cma) {
            asked = st.cma->ask(st.run_rng);
            for (int i = 0; i < b; ++i) thetas[i] = to_floats(asked[i]);
        } else {
            for (int i = 0; i < b; ++i) {
                if (st.res.cells.empty()) {
                    std::vector<float> t(dim);
                    for (int k = 0; k < dim; ++k)
                        t[k] = static_cast<float>(cfg.sigma0 *
                                                  st.run_rng.normal());
                    thetas[i] = std::move(t);
                } else {
                    auto pick = [&] {
                        auto it = st.res.cells.begin();
                        std::advance(
                            it, static_cast<long>(
                                    st.run_rng.below(st.res.cells.size())));
                        return it->second.solution;
                    };
                    const auto x1 = pick();
                    const auto x2 = pick();
                    thetas[i] = iso_line_variation(x1, x2, kIsoSigma,
                                                   kLineSigma, st.run_rng);
                }
            }
        }

        // Fan the evaluations out; results land by sample index, so the
        // schedule cannot influence anything downstream.
        std::vector<CandidateOutcome> outcomes(b);
        const long long base_index = st.evaluations;
        std::atomic<int> cursor{0};
        auto pump = [&] {
            for (;;) {
                const int i = cursor.fetch_add(1);
                if (i >= b) return;
                outcomes[i] = evaluate_candidate(cfg, arch, thetas[i],
                                                 base_index + i);
            }
        };
        if (n_workers <= 1) {
            pump();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(n_workers);
            for (int w = 0; w < n_workers; ++w) pool.emplace_back(pump);
            for (auto& th : pool) th.join();
        }

        // Archive updates in sample order.
        std::vector<double> improvement(b, neg_inf), fopt(b, neg_inf);
        int anneal_accepted = 0, result_accepted = 0, failed = 0;
        for (int i = 0; i < b; ++i) {
            if (outcomes[i].failed) {
                ++failed;
                continue;
            }
            Elite e = outcomes[i].elite;
            e.objective = e.f_opt;
            const AnnealedAdd aa = annealed_add(st.opt, e);
            improvement[i] = aa.improvement;
            fopt[i] = e.f_opt;
            if (aa.accepted) ++anneal_accepted;
            e.objective = e.f_res;
            if (result_add(st.res, e) != AddOutcome::Rejected)
                ++result_accepted;
        }
        st.evaluations += b;
        st.failed_total += failed;

        bool restarted = false;
        if (st.cma) {
            const bool by_improvement = cfg.optimizer == Optimizer::CmaMae;
            std::vector<int> order(b);
            for (int i = 0; i < b; ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](int a, int c) {
                if (by_improvement && improvement[a] != improvement[c])
                    return improvement[a] > improvement[c];
                if (fopt[a] != fopt[c]) return fopt[a] > fopt[c];
                return a < c;
            });
            bool all_tied = true;
            for (int i = 1; i < b && all_tied; ++i)
                all_tied = fopt[i] == fopt[0] &&
                           (!by_improvement ||
                            improvement[i] == improvement[0]);
            st.cma->tell(asked, order, all_tied);

            const int accepted =
                by_improvement ? anneal_accepted : result_accepted;
            if (accepted == 0)
                ++st.zero_accept_streak;
            else
                st.zero_accept_streak = 0;
            if (st.zero_accept_streak >= cfg.restart_patience ||
                st.cma->needs_restart()) {
                st.cma->reset(restart_mean(st.res, dim, st.run_rng));
                st.zero_accept_streak = 0;
                ++st.restarts;
                restarted = true;
            }
        }

        ++st.generation;
        ++gens_this_call;

        GenerationRecord rec;
        rec.generation = st.generation;
        rec.evaluations = st.evaluations;
        rec.best_f_res = 0.0;
        for (const auto& [cell, e] : st.res.cells)
            rec.best_f_res = std::max(rec.best_f_res, e.objective);
        rec.qd_score = qd_score(st.res);
        rec.coverage = coverage(st.res);
        rec.accepted = cfg.optimizer == Optimizer::CmaEs ? result_accepted
                                                         : anneal_accepted;
        rec.failed = failed;
        rec.restarted = restarted;
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        st.records.push_back(rec);

        if (cfg.snapshot_every > 0 &&
            st.generation % cfg.snapshot_every == 0)
            write_snapshot(dir, cfg, st);
    }

    write_snapshot(dir, cfg, st);

    TrainResult out;
    out.result = std::move(st.res);
    out.optimization = std::move(st.opt);
    out.manifest.code_version = kGridforgeVersion;
    out.manifest.config_hash = config_hash(cfg);
    out.manifest.records = std::move(st.records);
    out.generations = st.generation;
    out.evaluations = st.evaluations;
    out.finished = st.evaluations >= cfg.total_evaluations;
    return out;
}

Elite select_elite(const ResultArchive& archive, const SelectionQuery& query) {
    if (query.kind == SelectionQuery::Kind::Cell) {
        auto it = archive.cells.find(query.cell);
        if (it == archive.cells.end())
            throw Error(ErrorCode::EmptySelection,
                        "no elite in the requested cell");
        return it->second;
    }
    if (query.kind == SelectionQuery::Kind::MeasureWindow &&
        query.window.size() != archive.spec.dims.size())
        throw Error(ErrorCode::ConfigInvalid,
                    "measure window rank does not match the archive");
    const Elite* best = nullptr;
    for (const auto& [cell, e] : archive.cells) {
        if (query.kind == SelectionQuery::Kind::MeasureWindow) {
            bool inside = e.measures.size() == query.window.size();
            for (std::size_t k = 0; inside && k < query.window.size(); ++k)
                inside = e.measures[k] >= query.window[k][0] &&
                         e.measures[k] <= query.window[k][1];
            if (!inside) continue;
        }
        if (!best || e.objective > best->objective) best = &e;
    }
    if (!best)
        throw Error(ErrorCode::EmptySelection, "no elite matches the query");
    return *best;
}

NcaGenerator generator_from_elite(const Elite& e, Domain d, int hidden) {
    const NcaArchitecture arch = architecture_for(d, hidden);
    if (static_cast<int>(e.solution.size()) != param_count(arch))
        throw Error(ErrorCode::DimensionMismatch,
                    "elite solution length does not fit the architecture");
    return NcaGenerator(d, arch, e.solution);
}

ScaleResult scale_generate(const NcaGenerator& gen, int target_width,
                           int target_height, int iterations,
                           const RepairBudget& budget,
                           std::optional<int> shelf_target,
                           std::uint64_t seed) {
    ScaleResult out;
    const Environment seed_env =
        make_seed(gen.domain, target_width, target_height);
    out.raw = generate(gen, seed_env, iterations);
    if (gen.domain == Domain::Maze) {
        out.env = out.raw;
        out.similarity = 1.0;
    } else {
        Rng rng(repair_seed(out.raw, seed));
        RepairResult rep = repair(out.raw, budget, rng, shelf_target);
        out.env = std::move(rep.env);
        out.similarity = rep.similarity;
    }
    out.entropy = environment_entropy(out.env);
    out.valid = validate(out.env, shelf_target).is_valid;
    return out;
}

TileBaselineResult tile_baseline(const Environment& source, int target_width,
                                 int target_height, const RepairBudget& budget,
                                 std::optional<int> shelf_target,
                                 std::uint64_t seed) {
    if (target_width < source.width || target_height < source.height)
        throw Error(ErrorCode::DimensionTooSmall,
                    "tiling target must not shrink the source");
    const Domain d = source.domain;
    Environment frame = is_warehouse(d)
                            ? warehouse_template(d, target_width, target_height)
                            : make_environment(d, target_width, target_height);
    const auto [slo, shi] = storage_span(source);
    const auto [tlo, thi] = storage_span(frame);
    const int sw = shi - slo;
    if (sw < 1 || source.height < 1)
        throw Error(ErrorCode::DimensionTooSmall,
                    "source has no generatable region");
    for (int y = 0; y < target_height; ++y) {
        for (int x = tlo; x < thi; ++x) {
            if (frame.is_frozen(x, y)) continue;
            const int sx = slo + (x - tlo) % sw;
            const int sy = y % source.height;
            frame.at(x, y) = source.at(sx, sy);
        }
    }
    TileBaselineResult out;
    out.tiled = frame;
    Rng rng(repair_seed(frame, seed));
    RepairResult rep = repair(frame, budget, rng, shelf_target);
    out.env = std::move(rep.env);
    out.similarity = rep.similarity;
    return out;
}

}  // namespace gridforge
