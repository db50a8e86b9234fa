// End-to-end acceptance checks. Each criterion prints one PASS/FAIL
// line; the exit code is the number of failures. Library results are
// compared against independent re-implementations (window counting,
// weighted sums, brute-force repair, a standalone conflict scanner)
// rather than against the code under test.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridforge/archive.hpp"
#include "gridforge/cma_es.hpp"
#include "gridforge/env.hpp"
#include "gridforge/errors.hpp"
#include "gridforge/nca.hpp"
#include "gridforge/pipeline.hpp"
#include "gridforge/render.hpp"
#include "gridforge/repair.hpp"
#include "gridforge/rng.hpp"
#include "gridforge/sim.hpp"

using namespace gridforge;
namespace fs = std::filesystem;

namespace {

fs::path g_scratch;

// Seed used when candidate layouts are compared head to head.
constexpr std::uint64_t kCompareSeed = 20260818;

struct MiniRun {
    bool ready = false;
    ExperimentConfig cfg;
    fs::path dir;
    TrainResult result;
    Elite best;
    Environment best_env;
};
MiniRun g_mini;

void note(std::string& detail, const std::string& msg) {
    if (!detail.empty()) detail += "; ";
    detail += msg;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<TileType> palette_of(Domain d) {
    switch (d) {
        case Domain::WarehouseEven:
        case Domain::WarehouseUneven:
            return {TileType::Empty, TileType::Shelf, TileType::Endpoint,
                    TileType::Workstation};
        case Domain::Manufacturing:
            return {TileType::Empty, TileType::Endpoint, TileType::StationR,
                    TileType::StationG, TileType::StationY};
        case Domain::Maze:
            return {TileType::Empty, TileType::Wall};
    }
    return {};
}

Environment random_grid(Domain d, int w, int h, Rng& rng) {
    Environment env = make_environment(d, w, h);
    const auto palette = palette_of(d);
    for (auto& t : env.tiles) t = palette[rng.below(palette.size())];
    return env;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --- criterion 1: entropy ------------------------------------------

double entropy_oracle(const Environment& env) {
    std::map<std::array<TileType, 4>, long long> counts;
    long long total = 0;
    for (int y = 0; y + 1 < env.height; ++y)
        for (int x = 0; x + 1 < env.width; ++x) {
            ++counts[{env.at(x, y), env.at(x + 1, y), env.at(x, y + 1),
                      env.at(x + 1, y + 1)}];
            ++total;
        }
    // H = ln(total) - (1/total) * sum c*ln(c), an algebraically equal
    // but numerically independent form of -sum p*ln(p).
    double acc = 0.0;
    for (const auto& [key, c] : counts)
        acc += static_cast<double>(c) * std::log(static_cast<double>(c));
    const double h = std::log(static_cast<double>(total)) - acc / total;
    const double norm =
        4.0 * std::log(static_cast<double>(tile_type_count(env.domain)));
    return std::clamp(h / norm, 0.0, 1.0);
}

bool criterion_entropy(std::string& detail) {
    double worst = 0.0;
    for (Domain d : {Domain::WarehouseEven, Domain::Manufacturing,
                     Domain::Maze}) {
        Rng rng(101 + static_cast<int>(d));
        for (int i = 0; i < 1000; ++i) {
            const Environment env = random_grid(d, 5, 5, rng);
            const double got = environment_entropy(env);
            worst = std::max(worst, std::abs(got - entropy_oracle(env)));
            if (got < 0.0 || got > 1.0) {
                note(detail, "entropy left [0,1]");
                return false;
            }
        }
    }
    note(detail, "3000 grids, max deviation " + num(worst));
    return worst <= 1e-12;
}

// --- criterion 2: similarity ---------------------------------------

bool criterion_similarity(std::string& detail) {
    Rng rng(202);
    const Domain domains[] = {Domain::WarehouseEven, Domain::WarehouseUneven,
                              Domain::Manufacturing, Domain::Maze};
    for (int i = 0; i < 1000; ++i) {
        const Domain d = domains[i % 4];
        const int w = 2 + static_cast<int>(rng.below(11));
        const int h = 2 + static_cast<int>(rng.below(11));
        const Environment a = random_grid(d, w, h, rng);
        const Environment b = random_grid(d, w, h, rng);

        // Weighted-sum oracle in integer arithmetic. Station tiles in
        // the first argument carry weight 5; the normalizer uses the
        // largest weight present, so manufacturing self-similarity is
        // below 1 whenever non-station tiles exist.
        const auto oracle = [&](const Environment& x,
                                const Environment& y) {
            long long sum = 0, max_w = 1;
            std::vector<long long> weights(x.tiles.size(), 1);
            if (d == Domain::Manufacturing)
                for (std::size_t k = 0; k < x.tiles.size(); ++k)
                    if (is_station(x.tiles[k])) weights[k] = 5;
            for (long long wk : weights) max_w = std::max(max_w, wk);
            for (std::size_t k = 0; k < x.tiles.size(); ++k)
                if (x.tiles[k] == y.tiles[k]) sum += weights[k];
            return static_cast<double>(sum) /
                   static_cast<double>(
                       static_cast<long long>(x.tiles.size()) * max_w);
        };

        const double got = similarity(a, b);
        if (got != oracle(a, b)) {
            note(detail, "pair " + std::to_string(i) + ": got " + num(got) +
                             " expected " + num(oracle(a, b)));
            return false;
        }
        if (got < 0.0 || got > 1.0) {
            note(detail, "similarity left [0,1]");
            return false;
        }
        if (similarity(a, a) != oracle(a, a)) {
            note(detail, "self similarity diverged from the oracle");
            return false;
        }
    }
    note(detail, "1000 pairs exact");
    return true;
}

// --- criterion 3: repair -------------------------------------------

bool criterion_repair(std::string& detail) {
    const Environment frame = warehouse_template(Domain::WarehouseEven, 7, 3);
    const auto [slo, shi] = storage_span(frame);
    std::vector<int> cells;
    for (int y = 0; y < 3; ++y)
        for (int x = slo; x < shi; ++x) cells.push_back(frame.index(x, y));
    if (cells.size() != 9) {
        note(detail, "storage block is not 3x3");
        return false;
    }
    const std::array<TileType, 3> kinds = {TileType::Empty, TileType::Shelf,
                                           TileType::Endpoint};

    // Enumerate the valid assignments of the 3x3 block once.
    std::vector<std::array<std::uint8_t, 9>> valid;
    {
        std::array<std::uint8_t, 9> digits{};
        Environment probe = frame;
        for (;;) {
            for (int k = 0; k < 9; ++k)
                probe.tiles[cells[k]] = kinds[digits[k]];
            if (validate(probe).is_valid) valid.push_back(digits);
            int k = 8;
            while (k >= 0 && digits[k] == 2) digits[k--] = 0;
            if (k < 0) break;
            ++digits[k];
        }
    }
    if (valid.empty()) {
        note(detail, "no valid 3x3 assignment exists");
        return false;
    }

    Rng rng(303);
    const RepairBudget budget;
    for (int t = 0; t < 500; ++t) {
        Environment env = frame;
        std::array<std::uint8_t, 9> inst{};
        for (int k = 0; k < 9; ++k) {
            inst[k] = static_cast<std::uint8_t>(rng.below(3));
            env.tiles[cells[k]] = kinds[inst[k]];
        }
        int oracle = 10;
        for (const auto& cand : valid) {
            int dist = 0;
            for (int k = 0; k < 9; ++k) dist += cand[k] != inst[k];
            oracle = std::min(oracle, dist);
        }
        Rng rr(5000 + t);
        const RepairResult r = repair(env, budget, rr);
        // Already-valid inputs return unchanged without the search.
        if (oracle > 0 && r.mode != RepairMode::Exact) {
            note(detail, "instance " + std::to_string(t) +
                             " did not take the exact path");
            return false;
        }
        const long long got = std::llround(
            (1.0 - r.similarity) * static_cast<double>(env.size()));
        if (got != oracle) {
            note(detail, "instance " + std::to_string(t) + ": distance " +
                             std::to_string(got) + " vs oracle " +
                             std::to_string(oracle));
            return false;
        }
        if (!validate(r.env).is_valid) {
            note(detail, "exact repair emitted an invalid grid");
            return false;
        }
    }

    const Environment mini_frame =
        warehouse_template(Domain::WarehouseEven, 16, 12);
    const auto [lo, hi] = storage_span(mini_frame);
    for (int t = 0; t < 200; ++t) {
        Environment env = mini_frame;
        for (int y = 0; y < env.height; ++y)
            for (int x = lo; x < hi; ++x)
                env.at(x, y) = kinds[rng.below(3)];
        Rng rr(9000 + t);
        const RepairResult r = repair(env, budget, rr, 24);
        if (!validate(r.env, 24).is_valid) {
            note(detail, "heuristic instance " + std::to_string(t) +
                             " came back invalid");
            return false;
        }
    }
    note(detail, "500 exact instances minimal, 200 heuristic instances valid");
    return true;
}

// --- criterion 4: simulator safety ----------------------------------

// Standalone conflict scan over recorded trajectories.
int scan_violations(const Environment& env,
                    const std::vector<std::vector<int>>& frames) {
    int bad = 0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto& now = frames[t];
        for (std::size_t i = 0; i < now.size(); ++i) {
            const TileType tile = env.tiles[now[i]];
            if (!is_traversable(env.domain, tile)) ++bad;
            for (std::size_t j = i + 1; j < now.size(); ++j) {
                if (now[i] == now[j]) ++bad;  // vertex conflict
                if (t > 0) {
                    const auto& prev = frames[t - 1];
                    if (prev[i] == now[j] && prev[j] == now[i])
                        ++bad;  // swap conflict
                }
            }
        }
    }
    return bad;
}

bool criterion_simulator(std::string& detail) {
    Rng rng(404);
    const RepairBudget budget;
    std::vector<Environment> pool;
    const std::array<TileType, 3> wh_kinds = {
        TileType::Empty, TileType::Shelf, TileType::Endpoint};
    for (int i = 0; i < 10; ++i) {
        Environment env = warehouse_template(Domain::WarehouseEven, 16, 12);
        const auto [lo, hi] = storage_span(env);
        for (int y = 0; y < env.height; ++y)
            for (int x = lo; x < hi; ++x)
                env.at(x, y) = wh_kinds[rng.below(3)];
        Rng rr(600 + i);
        pool.push_back(repair(env, budget, rr, 24).env);
    }
    for (int i = 0; i < 10; ++i) {
        Environment env = random_grid(Domain::Manufacturing, 16, 12, rng);
        Rng rr(700 + i);
        pool.push_back(repair(env, budget, rr).env);
    }

    long long violations = 0, steps = 0;
    for (int run = 0; run < 200; ++run) {
        const Environment& env = pool[run % pool.size()];
        SimConfig cfg;
        cfg.num_agents = 1 + static_cast<int>(rng.below(30));
        cfg.horizon = 500;
        cfg.seed = rng.next_u64();
        cfg.record_trajectories = true;
        const SimResult r = run_simulation(env, cfg);
        violations += scan_violations(env, r.trajectories);
        steps += r.elapsed;
    }
    note(detail, "200 runs, " + std::to_string(steps) + " steps, " +
                     std::to_string(violations) + " violations");
    return violations == 0;
}

// --- criterion 5: cma-es sphere --------------------------------------

bool criterion_sphere(std::string& detail) {
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        CmaEs cma(10, 10, 0.5, Eigen::VectorXd::Constant(10, 3.0));
        double best = 1e300;
        int evals = 0;
        while (evals < 10000 && best >= 1e-10) {
            const auto xs = cma.ask(rng);
            std::vector<int> order(xs.size());
            std::vector<double> f(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                f[i] = -xs[i].squaredNorm();
                best = std::min(best, xs[i].squaredNorm());
                order[i] = static_cast<int>(i);
            }
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return f[a] > f[b]; });
            cma.tell(xs, order);
            evals += static_cast<int>(xs.size());
        }
        if (best < 1e-10) ++solved;
    }
    note(detail, std::to_string(solved) + "/10 seeds below 1e-10");
    return solved == 10;
}

// --- criterion 6: threshold mechanics --------------------------------

bool criterion_threshold(std::string& detail) {
    const ArchiveSpec spec{{10, 10}, {{0.0, 1.0}, {0.0, 1.0}}};
    OptimizationArchive oa;
    oa.spec = spec;
    oa.learning_rate = 1.0;
    ResultArchive ra;
    ra.spec = spec;
    Rng rng(606);
    for (int i = 0; i < 10000; ++i) {
        Elite e;
        e.solution = {static_cast<float>(i)};
        e.objective = 0.5 + 9.0 * rng.uniform();
        e.measures = {rng.uniform(), rng.uniform()};
        const bool annealed = annealed_add(oa, e).accepted;
        const bool plain = result_add(ra, e) != AddOutcome::Rejected;
        if (annealed != plain) {
            note(detail, "decision " + std::to_string(i) + " diverged");
            return false;
        }
    }

    OptimizationArchive half;
    half.spec = spec;
    half.learning_rate = 0.5;
    Elite e;
    e.solution = {1.0f};
    e.objective = 3.0;
    e.measures = {0.05, 0.05};
    const int cell = archive_index(e.measures, spec);
    half.thresholds[cell] = 2.0;
    const AnnealedAdd out = annealed_add(half, e);
    if (!out.accepted || out.improvement != 1.0 ||
        half.thresholds[cell] != 2.5) {
        note(detail, "t=2, f=3, lr=0.5 did not move the threshold to 2.5");
        return false;
    }
    note(detail, "10000 decisions identical; worked update holds");
    return true;
}

// --- criterion 7: mini training beats the baselines ------------------

double judge(const Environment& env) {
    SimConfig cfg;
    cfg.num_agents = 20;
    cfg.horizon = 500;
    return evaluate(env, cfg, 2, kCompareSeed).f_res;
}

bool criterion_training(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    g_mini.cfg = preset("mini");
    g_mini.cfg.master_seed = 3;
    g_mini.dir = g_scratch / "mini_run";
    g_mini.result = train(g_mini.cfg, g_mini.dir.string());
    g_mini.best = select_elite(g_mini.result.result, SelectionQuery{});
    const NcaGenerator gen = generator_from_elite(
        g_mini.best, g_mini.cfg.domain, g_mini.cfg.nca_hidden);
    const ScaleResult own = scale_generate(
        gen, g_mini.cfg.width, g_mini.cfg.height, g_mini.cfg.nca_iterations,
        g_mini.cfg.repair_budget, g_mini.cfg.shelf_target);
    if (env_hash(own.env) != g_mini.best.env_hash) {
        note(detail, "elite environment failed to reproduce");
        return false;
    }
    g_mini.best_env = own.env;
    g_mini.ready = true;

    const auto& records = g_mini.result.manifest.records;
    const double gen0 = records.front().best_f_res;
    const double last = records.back().best_f_res;

    const double f_nca = judge(g_mini.best_env);

    const NcaArchitecture arch =
        architecture_for(g_mini.cfg.domain, g_mini.cfg.nca_hidden);
    const int dim = param_count(arch);
    Rng rng(707);
    double f_rand = -1.0;
    for (int i = 0; i < 200; ++i) {
        std::vector<float> theta(dim);
        for (auto& v : theta) v = static_cast<float>(0.2 * rng.normal());
        try {
            const NcaGenerator rg(g_mini.cfg.domain, arch, theta);
            const ScaleResult sr = scale_generate(
                rg, g_mini.cfg.width, g_mini.cfg.height,
                g_mini.cfg.nca_iterations, g_mini.cfg.repair_budget,
                g_mini.cfg.shelf_target);
            f_rand = std::max(f_rand, judge(sr.env));
        } catch (const Error&) {
        }
    }

    const double f_human = judge(
        canonical_layout(Domain::WarehouseEven, g_mini.cfg.width,
                         g_mini.cfg.height, *g_mini.cfg.shelf_target));

    const double minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count() /
        60.0;
    note(detail, "trained " + num(f_nca) + " (archived " + num(last) +
                     ") vs random " + num(f_rand) + " vs handcrafted " +
                     num(f_human) + ", gen0 " + num(gen0) + ", " +
                     num(minutes) + " min");
    return f_nca > f_rand && f_nca > f_human && last > f_rand &&
           last > gen0 && minutes < 60.0;
}

// --- criterion 8: scaling keeps structure ----------------------------

bool criterion_scaling(std::string& detail) {
    if (!g_mini.ready) {
        note(detail, "mini run unavailable");
        return false;
    }
    const NcaGenerator gen = generator_from_elite(
        g_mini.best, g_mini.cfg.domain, g_mini.cfg.nca_hidden);
    const double base_entropy = environment_entropy(g_mini.best_env);

    struct Step {
        int w, h, shelves, agents;
    };
    // Linear factors 2 and 4 over the 16x12 grid, with shelf and agent
    // densities carried over from training.
    const Step steps[] = {{32, 24, 112, 80}, {64, 48, 480, 320}};
    for (const Step& s : steps) {
        const ScaleResult sr = scale_generate(
            gen, s.w, s.h, g_mini.cfg.nca_iterations_eval,
            g_mini.cfg.repair_budget, s.shelves);
        if (!sr.valid) {
            note(detail, std::to_string(s.w) + "x" + std::to_string(s.h) +
                             " repairs invalid");
            return false;
        }
        const double drift = std::abs(sr.entropy - base_entropy);
        if (drift > 0.15) {
            note(detail, std::to_string(s.w) + "x" + std::to_string(s.h) +
                             " entropy drift " + num(drift));
            return false;
        }
        SimConfig cfg;
        cfg.num_agents = s.agents;
        cfg.horizon = 500;
        const EvalResult er = evaluate(sr.env, cfg, 2, kCompareSeed);
        if (er.success_rate != 1.0) {
            note(detail, std::to_string(s.w) + "x" + std::to_string(s.h) +
                             " congested at train density");
            return false;
        }
        note(detail, std::to_string(s.w) + "x" + std::to_string(s.h) +
                         " ok (entropy drift " + num(drift) +
                         ", throughput " + num(er.f_res) + ")");
    }
    return true;
}

// --- criterion 9: maze solvability at scale --------------------------

bool criterion_maze(std::string& detail) {
    ExperimentConfig cfg = preset("maze-mini");
    cfg.master_seed = 7;
    const TrainResult run = train(cfg, (g_scratch / "maze_run").string());

    std::vector<const Elite*> elites;
    for (const auto& [cell, e] : run.result.cells) elites.push_back(&e);
    std::sort(elites.begin(), elites.end(),
              [&](const Elite* a, const Elite* b) {
                  if (a->objective != b->objective)
                      return a->objective > b->objective;
                  return archive_index(a->measures, run.result.spec) <
                         archive_index(b->measures, run.result.spec);
              });
    if (elites.size() < 10) {
        note(detail, "only " + std::to_string(elites.size()) +
                         " occupied cells");
        return false;
    }
    int solvable = 0;
    for (int i = 0; i < 10; ++i) {
        const NcaGenerator gen =
            generator_from_elite(*elites[i], Domain::Maze, cfg.nca_hidden);
        const ScaleResult sr = scale_generate(gen, cfg.eval_width,
                                              cfg.eval_height,
                                              cfg.nca_iterations_eval,
                                              cfg.repair_budget);
        solvable += maze_metrics(sr.env).solvable;
    }
    note(detail, std::to_string(solvable) + "/10 elites solvable at 66x66");
    return solvable >= 9;
}

// --- criterion 10: reproducibility -----------------------------------

ExperimentConfig tiny_config() {
    ExperimentConfig c = preset("mini");
    c.name = "tiny";
    c.nca_iterations = 8;
    c.nca_hidden = 4;
    c.num_agents = 5;
    c.sims_per_eval = 1;
    c.horizon = 60;
    c.batch = 5;
    c.total_evaluations = 20;
    c.snapshot_every = 2;
    c.workers = 1;
    c.master_seed = 7;
    return c;
}

bool criterion_reproducibility(std::string& detail) {
    const ExperimentConfig cfg = tiny_config();
    const fs::path da = g_scratch / "repro_a";
    const fs::path db = g_scratch / "repro_b";
    const fs::path dc = g_scratch / "repro_c";
    const fs::path dd = g_scratch / "repro_d";
    train(cfg, da.string());
    train(cfg, db.string());

    const std::string archive_a = slurp(da / "result_archive.csv");
    if (archive_a.empty() || archive_a != slurp(db / "result_archive.csv")) {
        note(detail, "twin runs differ");
        return false;
    }
    for (const auto& entry : fs::directory_iterator(da / "snapshots")) {
        const fs::path other = db / "snapshots" / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            note(detail,
                 "snapshot " + entry.path().filename().string() + " differs");
            return false;
        }
    }

    // Stop on a snapshot boundary, then off one; both must converge to
    // the uninterrupted archives.
    train(cfg, dc.string(), 2);
    train(cfg, dc.string());
    train(cfg, dd.string(), 3);
    train(cfg, dd.string());
    if (slurp(dc / "result_archive.csv") != archive_a ||
        slurp(dd / "result_archive.csv") != archive_a) {
        note(detail, "resumed runs differ from the uninterrupted run");
        return false;
    }
    for (const auto& entry : fs::directory_iterator(da / "snapshots")) {
        const fs::path other = dc / "snapshots" / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            note(detail, "resumed snapshot " +
                             entry.path().filename().string() + " differs");
            return false;
        }
    }
    note(detail, "twin, boundary-resumed and mid-resumed runs identical");
    return true;
}

// --- criterion 11: archive bookkeeping --------------------------------

bool criterion_bookkeeping(std::string& detail) {
    if (!g_mini.ready) {
        note(detail, "mini run unavailable");
        return false;
    }
    std::map<long long, fs::path> snaps;
    for (const auto& entry :
         fs::directory_iterator(g_mini.dir / "snapshots")) {
        const std::string name = entry.path().filename().string();
        snaps[std::stoll(name.substr(11, 6))] = entry.path();
    }
    if (snaps.empty()) {
        note(detail, "no snapshots retained");
        return false;
    }
    const auto& records = g_mini.result.manifest.records;
    double prev_qd = -1.0;
    for (const auto& [gen, path] : snaps) {
        const ResultArchive a = load_archive(path.string());
        const double qd = qd_score(a);
        const double cov = coverage(a);
        const auto rec =
            std::find_if(records.begin(), records.end(),
                         [&](const GenerationRecord& r) {
                             return r.generation == gen;
                         });
        if (rec == records.end()) {
            note(detail, "snapshot generation " + std::to_string(gen) +
                             " has no record");
            return false;
        }
        if (qd != rec->qd_score || cov != rec->coverage) {
            note(detail, "recomputed score differs at generation " +
                             std::to_string(gen));
            return false;
        }
        if (qd < prev_qd) {
            note(detail, "qd score regressed at generation " +
                             std::to_string(gen));
            return false;
        }
        prev_qd = qd;
    }
    if (prev_qd != qd_score(g_mini.result.result)) {
        note(detail, "final snapshot does not match the live archive");
        return false;
    }
    note(detail, std::to_string(snaps.size()) +
                     " snapshots consistent and non-decreasing");
    return true;
}

}  // namespace

int main() {
    g_scratch = fs::path("acceptance_scratch");
    fs::remove_all(g_scratch);
    fs::create_directories(g_scratch);

    struct Row {
        int id;
        const char* title;
        bool (*fn)(std::string&);
    };
    const Row rows[] = {
        {1, "entropy matches a brute-force window count", criterion_entropy},
        {2, "similarity matches direct weighted summation",
         criterion_similarity},
        {3, "tiny repairs are provably minimal, heuristic repairs valid",
         criterion_repair},
        {4, "independent scanner finds zero conflicts", criterion_simulator},
        {5, "cma-es solves the 10-d sphere", criterion_sphere},
        {6, "threshold annealing at lr=1 mirrors plain insertion",
         criterion_threshold},
        {7, "trained mini generators beat random and handcrafted layouts",
         criterion_training},
        {8, "mini generators scale 2x and 4x with stable structure",
         criterion_scaling},
        {9, "maze generators stay solvable at 66x66", criterion_maze},
        {10, "identical and resumed runs are byte-identical",
         criterion_reproducibility},
        {11, "archive bookkeeping survives serialization and never regresses",
         criterion_bookkeeping},
    };

    int failures = 0;
    for (const Row& row : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = row.fn(detail);
        } catch (const std::exception& e) {
            note(detail, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        std::printf("[%s] %2d %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", row.id,
                    row.title, secs, detail.empty() ? "" : ": ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures;
}
