#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridforge/archive.hpp"
#include "gridforge/env.hpp"
#include "gridforge/errors.hpp"
#include "gridforge/nca.hpp"
#include "gridforge/pipeline.hpp"
#include "gridforge/render.hpp"
#include "gridforge/repair.hpp"
#include "gridforge/rng.hpp"
#include "gridforge/sim.hpp"

using namespace gridforge;

namespace {

std::vector<std::array<double, 2>> parse_window(const std::string& text) {
    std::vector<std::array<double, 2>> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        double lo = 0.0, hi = 0.0;
        if (std::sscanf(part.c_str(), "%lf:%lf", &lo, &hi) != 2)
            throw Error(ErrorCode::ConfigInvalid,
                        "measure window format is lo:hi[,lo:hi...]");
        out.push_back({lo, hi});
    }
    if (out.empty())
        throw Error(ErrorCode::ConfigInvalid, "empty measure window");
    return out;
}

std::string default_run_dir(const std::string& name) {
    const char* base = std::getenv("GRIDFORGE_OUT_DIR");
    std::filesystem::path p(base && *base ? base : ".");
    return (p / ("run-" + name)).string();
}

void print_environment_report(const Environment& env,
                              std::optional<int> shelf_target) {
    const ValidityReport report = validate(env, shelf_target);
    std::printf("domain: %s\n", domain_name(env.domain));
    std::printf("size: %dx%d\n", env.width, env.height);
    std::printf("entropy: %.6f\n", environment_entropy(env));
    std::printf("valid: %s\n", report.is_valid ? "yes" : "no");
    for (const auto& v : report.violations)
        std::printf("violation: %s (%s)\n", v.constraint.c_str(),
                    v.detail.c_str());
    if (env.domain == Domain::Maze) {
        const MazeMetrics m = maze_metrics(env);
        std::printf("solvable: %d\n", m.solvable);
        std::printf("walls: %d\n", m.wall_count);
        std::printf("path_length: %d\n", m.path_length);
    } else if (is_warehouse(env.domain)) {
        std::printf("shelf_components: %d\n",
                    connected_shelf_components(env));
    } else {
        std::printf("workstations: %d\n", workstation_count(env));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NCA environment generator toolkit"};
    app.require_subcommand(1);

    // train ---------------------------------------------------------
    auto* train_cmd =
        app.add_subcommand("train", "run the optimization loop");
    std::string preset_name, config_path, run_dir;
    std::uint64_t seed_override = 0;
    long long evals_override = 0, stop_after = -1;
    int workers = -1, snapshot_override = -1, batch_override = 0;
    std::string optimizer_override;
    {
        std::string presets;
        for (const auto& n : preset_names()) presets += n + " ";
        train_cmd->add_option("--preset", preset_name,
                              "named configuration: " + presets);
        train_cmd->add_option("--config", config_path,
                              "configuration file (json)");
        train_cmd->add_option("--out", run_dir,
                              "run directory (default $GRIDFORGE_OUT_DIR)");
        train_cmd->add_option("--seed", seed_override, "master seed override")
            ->type_name("UINT");
        train_cmd->add_option("--evals", evals_override,
                              "evaluation budget override");
        train_cmd->add_option("--batch", batch_override,
                              "batch size override");
        train_cmd
            ->add_option("--workers", workers,
                         "worker threads (0 = all cores)")
            ->envname("GRIDFORGE_WORKERS");
        train_cmd->add_option("--snapshot-every", snapshot_override,
                              "generations between retained snapshots");
        train_cmd->add_option("--optimizer", optimizer_override,
                              "cma-mae | cma-es | map-elites");
        train_cmd->add_option("--stop-after-generations", stop_after,
                              "pause the run after this many generations");
    }

    // generate ------------------------------------------------------
    auto* gen_cmd = app.add_subcommand(
        "generate", "grow an environment from a trained generator");
    std::string gen_path, gen_out, gen_raw_out, gen_image;
    int gen_w = 0, gen_h = 0, gen_iters = 200;
    int gen_shelf = -1;
    std::uint64_t gen_seed = 0;
    RepairBudget gen_budget;
    {
        gen_cmd->add_option("--generator", gen_path, "generator file (json)")
            ->required();
        gen_cmd->add_option("--width", gen_w, "target width")->required();
        gen_cmd->add_option("--height", gen_h, "target height")->required();
        gen_cmd->add_option("--iterations", gen_iters,
                            "generation steps (default 200)");
        gen_cmd->add_option("--shelf-target", gen_shelf,
                            "warehouse shelf count");
        gen_cmd->add_option("--seed", gen_seed, "repair stream seed");
        gen_cmd->add_option("--out", gen_out, "environment output file")
            ->required();
        gen_cmd->add_option("--raw", gen_raw_out,
                            "also write the unrepaired grid here");
        gen_cmd->add_option("--image", gen_image, "render to this ppm file");
        gen_cmd->add_option("--work-limit", gen_budget.work_limit,
                            "repair work budget");
    }

    // simulate ------------------------------------------------------
    auto* sim_cmd =
        app.add_subcommand("simulate", "evaluate an environment file");
    std::string sim_env_path, sim_usage;
    SimConfig sim_cfg;
    int sim_runs = 1;
    {
        sim_cmd->add_option("--env", sim_env_path, "environment file")
            ->required();
        sim_cmd->add_option("--agents", sim_cfg.num_agents, "agent count");
        sim_cmd->add_option("--horizon", sim_cfg.horizon,
                            "timesteps per simulation");
        sim_cmd->add_option("--window", sim_cfg.window, "planning window");
        sim_cmd->add_option("--replan", sim_cfg.replan_period,
                            "committed steps per plan");
        sim_cmd->add_option("--runs", sim_runs, "simulations to average");
        sim_cmd->add_option("--seed", sim_cfg.seed, "base seed");
        sim_cmd->add_option("--usage", sim_usage,
                            "render tile usage of the first run (ppm)");
    }

    // repair --------------------------------------------------------
    auto* rep_cmd =
        app.add_subcommand("repair", "make an environment valid");
    std::string rep_in, rep_out;
    int rep_shelf = -1;
    std::uint64_t rep_seed = 0;
    RepairBudget rep_budget;
    {
        rep_cmd->add_option("--env", rep_in, "environment file")->required();
        rep_cmd->add_option("--out", rep_out, "repaired output file")
            ->required();
        rep_cmd->add_option("--shelf-target", rep_shelf,
                            "warehouse shelf count");
        rep_cmd->add_option("--seed", rep_seed, "heuristic stream seed");
        rep_cmd->add_option("--work-limit", rep_budget.work_limit,
                            "work budget");
        rep_cmd->add_option("--wall-clock", rep_budget.wall_clock_seconds,
                            "hard time cap in seconds");
        rep_cmd->add_option("--exact-threshold", rep_budget.exact_threshold,
                            "max free cells for exhaustive search");
    }

    // render --------------------------------------------------------
    auto* render_cmd =
        app.add_subcommand("render", "rasterize an environment or archive");
    std::string render_env_path, render_archive_path, render_out;
    int render_scale = 8;
    {
        render_cmd->add_option("--env", render_env_path, "environment file");
        render_cmd->add_option("--archive", render_archive_path,
                               "archive csv to draw as a heatmap");
        render_cmd->add_option("--out", render_out, "ppm output file")
            ->required();
        render_cmd->add_option("--scale", render_scale, "pixels per cell");
    }

    // tile-baseline -------------------------------------------------
    auto* tile_cmd = app.add_subcommand(
        "tile-baseline", "tessellate a small environment to a larger size");
    std::string tile_in, tile_out, tile_pre_out;
    int tile_w = 0, tile_h = 0, tile_shelf = -1;
    std::uint64_t tile_seed = 0;
    RepairBudget tile_budget;
    {
        tile_cmd->add_option("--env", tile_in, "source environment file")
            ->required();
        tile_cmd->add_option("--width", tile_w, "target width")->required();
        tile_cmd->add_option("--height", tile_h, "target height")->required();
        tile_cmd->add_option("--out", tile_out, "repaired output file")
            ->required();
        tile_cmd->add_option("--tiled", tile_pre_out,
                             "also write the unrepaired tessellation here");
        tile_cmd->add_option("--shelf-target", tile_shelf,
                             "warehouse shelf count at the target size");
        tile_cmd->add_option("--seed", tile_seed, "repair stream seed");
        tile_cmd->add_option("--work-limit", tile_budget.work_limit,
                             "repair work budget");
    }

    // select --------------------------------------------------------
    auto* sel_cmd = app.add_subcommand(
        "select", "pull an elite generator out of a result archive");
    std::string sel_archive, sel_out, sel_domain, sel_window;
    int sel_hidden = 32, sel_cell = -1;
    {
        sel_cmd->add_option("--archive", sel_archive, "archive csv")
            ->required();
        sel_cmd->add_option("--domain", sel_domain, "generator domain")
            ->required();
        sel_cmd->add_option("--hidden", sel_hidden,
                            "hidden channels of the trained network");
        sel_cmd->add_option("--out", sel_out, "generator output file (json)")
            ->required();
        sel_cmd->add_option("--window", sel_window,
                            "restrict to measures inside lo:hi[,lo:hi...]");
        sel_cmd->add_option("--cell", sel_cell, "take a specific cell index");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            if (preset_name.empty() == config_path.empty())
                throw Error(ErrorCode::ConfigInvalid,
                            "pass exactly one of --preset / --config");
            ExperimentConfig cfg = preset_name.empty() ? load_config(config_path)
                                                       : preset(preset_name);
            if (train_cmd->count("--seed")) cfg.master_seed = seed_override;
            if (evals_override > 0) cfg.total_evaluations = evals_override;
            if (batch_override > 0) cfg.batch = batch_override;
            if (workers >= 0) cfg.workers = workers;
            if (snapshot_override >= 0) cfg.snapshot_every = snapshot_override;
            if (!optimizer_override.empty())
                cfg.optimizer = optimizer_from_name(optimizer_override);
            cfg.check();
            if (run_dir.empty()) run_dir = default_run_dir(cfg.name);

            const TrainResult r = train(cfg, run_dir, stop_after);
            std::printf("run_dir: %s\n", run_dir.c_str());
            std::printf("generations: %lld\n", r.generations);
            std::printf("evaluations: %lld\n", r.evaluations);
            std::printf("finished: %s\n", r.finished ? "yes" : "no");
            std::printf("coverage: %.6f\n",
                        r.manifest.records.empty()
                            ? 0.0
                            : r.manifest.records.back().coverage);
            std::printf("qd_score: %.6f\n",
                        r.manifest.records.empty()
                            ? 0.0
                            : r.manifest.records.back().qd_score);
            std::printf("best_f_res: %.6f\n",
                        r.manifest.records.empty()
                            ? 0.0
                            : r.manifest.records.back().best_f_res);
        } else if (*gen_cmd) {
            const NcaGenerator gen = load_generator(gen_path);
            std::optional<int> shelf;
            if (gen_shelf >= 0) shelf = gen_shelf;
            const ScaleResult r = scale_generate(gen, gen_w, gen_h, gen_iters,
                                                 gen_budget, shelf, gen_seed);
            save_environment(r.env, gen_out);
            if (!gen_raw_out.empty()) save_environment(r.raw, gen_raw_out);
            if (!gen_image.empty())
                save_ppm(render_environment(r.env, 8), gen_image);
            std::printf("similarity: %.6f\n", r.similarity);
            print_environment_report(r.env, shelf);
        } else if (*sim_cmd) {
            const Environment env = load_environment(sim_env_path);
            const EvalResult r =
                evaluate(env, sim_cfg, sim_runs, sim_cfg.seed);
            std::printf("objective: %.6f\n", r.f_res);
            std::printf("success_rate: %.6f\n", r.success_rate);
            for (std::size_t i = 0; i < r.measures.size(); ++i)
                std::printf("measure[%zu]: %.6f\n", i, r.measures[i]);
            if (!sim_usage.empty()) {
                SimResult one = run_simulation(env, sim_cfg);
                save_ppm(render_tile_usage(env, one.tile_usage), sim_usage);
                std::printf("usage_run: throughput %.6f, %s after %d steps\n",
                            one.throughput,
                            one.congested ? "congested" : "completed",
                            one.elapsed);
            }
        } else if (*rep_cmd) {
            const Environment env = load_environment(rep_in);
            std::optional<int> shelf;
            if (rep_shelf >= 0) shelf = rep_shelf;
            Rng rng(rep_seed);
            const RepairResult r = repair(env, rep_budget, rng, shelf);
            save_environment(r.env, rep_out);
            std::printf("mode: %s\n",
                        r.mode == RepairMode::Exact ? "exact" : "heuristic");
            std::printf("similarity: %.6f\n", r.similarity);
            std::printf("work_used: %lld\n", r.work_used);
            print_environment_report(r.env, shelf);
        } else if (*render_cmd) {
            if (render_env_path.empty() == render_archive_path.empty())
                throw Error(ErrorCode::ConfigInvalid,
                            "pass exactly one of --env / --archive");
            if (!render_env_path.empty()) {
                const Environment env = load_environment(render_env_path);
                save_ppm(render_environment(env, render_scale), render_out);
            } else {
                const ResultArchive archive = load_archive(render_archive_path);
                save_ppm(render_archive(archive, render_scale), render_out);
            }
            std::printf("wrote %s\n", render_out.c_str());
        } else if (*tile_cmd) {
            const Environment src = load_environment(tile_in);
            std::optional<int> shelf;
            if (tile_shelf >= 0) shelf = tile_shelf;
            const TileBaselineResult r = tile_baseline(
                src, tile_w, tile_h, tile_budget, shelf, tile_seed);
            save_environment(r.env, tile_out);
            if (!tile_pre_out.empty()) save_environment(r.tiled, tile_pre_out);
            std::printf("similarity: %.6f\n", r.similarity);
            print_environment_report(r.env, shelf);
        } else if (*sel_cmd) {
            const ResultArchive archive = load_archive(sel_archive);
            SelectionQuery q;
            if (sel_cell >= 0) {
                q.kind = SelectionQuery::Kind::Cell;
                q.cell = sel_cell;
            } else if (!sel_window.empty()) {
                q.kind = SelectionQuery::Kind::MeasureWindow;
                q.window = parse_window(sel_window);
            }
            const Elite e = select_elite(archive, q);
            const Domain d = domain_from_name(sel_domain);
            save_generator(generator_from_elite(e, d, sel_hidden), sel_out);
            std::printf("objective: %.6f\n", e.objective);
            for (std::size_t i = 0; i < e.measures.size(); ++i)
                std::printf("measure[%zu]: %.6f\n", i, e.measures[i]);
            std::printf("cell: %d\n",
                        archive_index(e.measures, archive.spec));
            std::printf("wrote %s\n", sel_out.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
