// chainbar: generate deployments, run barrier formation, check coverage, plan
// the linear baseline and run seeded experiments.
//
// Exit status: 0 success, 1 library error (one JSON line on stderr with
// "error" and "message"), 2 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chainbar/barrier.hpp"
#include "chainbar/baseline.hpp"
#include "chainbar/coverage.hpp"
#include "chainbar/errors.hpp"
#include "chainbar/harness.hpp"
#include "chainbar/io.hpp"
#include "chainbar/svg.hpp"

namespace {

using namespace chainbar;

struct Overrides {
    std::optional<double> alpha, beta, tau, mobility, constraint_tol, touch_tol, min_dist_clamp;
    std::optional<std::uint64_t> max_iterations;
    std::optional<std::uint32_t> projection_iters;
    std::string config_file;

    void register_on(CLI::App& app) {
        const char* g = "Algorithm config";
        app.add_option("--config", config_file, "JSON file with AlgoConfig fields")->group(g);
        app.add_option("--alpha", alpha, "Force scale")->group(g);
        app.add_option("--beta", beta, "Flatten force fraction")->group(g);
        app.add_option("--tau", tau, "Step duration (s)")->group(g);
        app.add_option("--mobility", mobility, "Displacement per unit force per second")->group(g);
        app.add_option("--constraint-tol", constraint_tol, "Constraint tolerance (m)")->group(g);
        app.add_option("--touch-tol", touch_tol, "Merge touch tolerance (m)")->group(g);
        app.add_option("--min-dist-clamp", min_dist_clamp, "Force distance clamp (m)")->group(g);
        app.add_option("--max-iterations", max_iterations, "Formation iteration cap")->group(g);
        app.add_option("--projection-iters", projection_iters, "Minimum projection rounds per step")->group(g);
    }

    void apply(AlgoConfig& c) const {
        if (!config_file.empty()) io::apply_config_json(io::read_text(config_file), c);
        if (alpha) c.alpha = *alpha;
        if (beta) c.beta = *beta;
        if (tau) c.tau = *tau;
        if (mobility) c.mobility = *mobility;
        if (constraint_tol) c.constraint_tol = *constraint_tol;
        if (touch_tol) c.touch_tol = *touch_tol;
        if (min_dist_clamp) c.min_dist_clamp = *min_dist_clamp;
        if (max_iterations) c.max_iterations = *max_iterations;
        if (projection_iters) c.projection_iters = *projection_iters;
    }
};

void emit(const std::string& output, const std::string& text) {
    if (output.empty() || output == "-") {
        std::cout << text;
    } else {
        io::write_text(output, text);
    }
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

int fail(const std::string& kind, const std::string& message) {
    std::cerr << "{\"error\":\"" << json_escape(kind) << "\",\"message\":\"" << json_escape(message) << "\"}\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-linear barrier coverage with chain-graph merging"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    std::string output;
    Overrides overrides;
    app.add_option("--seed", seed, "Seed for generation, formation or experiment base");
    app.add_option("-o,--output", output, "Output file (default stdout)");
    overrides.register_on(app);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a uniform random deployment");
    std::size_t gen_n = 0;
    double gen_length = 50.0, gen_width = 8.0, gen_rs = 0.5;
    generate->add_option("-n,--sensors", gen_n, "Number of sensors")->required();
    generate->add_option("--length", gen_length, "Belt length L (m)");
    generate->add_option("--width", gen_width, "Belt width W (m)");
    generate->add_option("--rs", gen_rs, "Sensing radius (m)");

    // run
    auto* run = app.add_subcommand("run", "Run barrier formation on a deployment");
    std::string run_input, frames_dir;
    std::uint64_t frame_every = 0;
    run->add_option("input", run_input, "Deployment file")->required();
    run->add_option("--frames-dir", frames_dir, "Write SVG frames here");
    run->add_option("--frame-every", frame_every, "Record a frame every k iterations");

    // check
    auto* check = app.add_subcommand("check", "Report strong barrier coverage of a deployment");
    std::string check_input;
    std::optional<double> check_tol;
    check->add_option("input", check_input, "Deployment file")->required();
    check->add_option("--tol", check_tol, "Link tolerance (m), default constraint_tol");

    // baseline
    auto* base = app.add_subcommand("baseline", "Plan the linear baseline barrier");
    std::string base_input, objective = "min_avg";
    base->add_option("input", base_input, "Deployment file")->required();
    base->add_option("--objective", objective, "min_avg or min_max")->check(CLI::IsMember({"min_avg", "min_max"}));

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a seeded experiment spec and write a CSV");
    std::string spec_file, summary_file, exp_frames;
    bool full = false, verbose = false, no_timing = false;
    std::size_t threads = 1;
    exp->add_option("spec", spec_file, "Experiment spec JSON (default: 50x8 belt, Rs 0.5, 30 trials)");
    exp->add_flag("--full", full, "Use 100 trials per size");
    exp->add_flag("--verbose", verbose, "Add trial, deployment hash and error columns");
    exp->add_flag("--no-timing", no_timing, "Write wall_time_s as 0 for byte-reproducible output");
    exp->add_option("--summary", summary_file, "Write per-(algorithm, n) means here");
    exp->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    exp->add_option("--frames-dir", exp_frames, "Write nonlinear SVG frames here (needs frame_every)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*generate) {
            const Deployment d = uniform_random_deployment(seed.value_or(1), gen_n, {gen_length, gen_width}, gen_rs);
            emit(output, io::deployment_to_json(d));
        } else if (*run) {
            const Deployment d = io::load_deployment(run_input);
            AlgoConfig cfg = AlgoConfig::defaults_for(d.rs());
            if (seed) cfg.rng_seed = *seed;
            overrides.apply(cfg);
            barrier::RunOptions opts;
            if (!frames_dir.empty()) opts.frame_every = frame_every > 0 ? frame_every : 100;
            const RunResult r = barrier::run(d, cfg, opts);
            if (!frames_dir.empty()) {
                const auto files = svg::emit_svg_frames(r, d, frames_dir);
                std::cerr << "wrote " << files.size() << " frames to " << frames_dir << "\n";
            }
            emit(output, io::run_result_to_json(d, r));
        } else if (*check) {
            const Deployment d = io::load_deployment(check_input);
            AlgoConfig cfg = AlgoConfig::defaults_for(d.rs());
            overrides.apply(cfg);
            std::vector<Vec2> pos;
            for (const auto& s : d.sensors) pos.push_back(s.current_pos);
            const auto report = coverage::strong_barrier_covered(pos, d.rs(), d.belt, check_tol.value_or(cfg.constraint_tol));
            std::string text = std::string("covered: ") + (report.covered ? "true" : "false") + "\n";
            if (report.covered) {
                text += "chain: [";
                for (std::size_t i = 0; i < report.chain.size(); ++i) {
                    text += (i ? ", " : "") + std::to_string(d.sensors[report.chain[i]].id);
                }
                text += "]\n";
            } else if (report.gap) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "gap: {x_begin: %.6g, x_end: %.6g}\n", report.gap->x_begin,
                              report.gap->x_end);
                text += buf;
            }
            emit(output, text);
        } else if (*base) {
            const Deployment d = io::load_deployment(base_input);
            const auto [plan, r] = baseline::plan_linear_barrier(d, baseline::parse_objective(objective));
            emit(output, io::linear_plan_to_json(d, plan, r));
        } else if (*exp) {
            harness::ExperimentSpec spec =
                spec_file.empty() ? harness::ExperimentSpec{} : harness::experiment_spec_from_json(io::read_text(spec_file));
            if (full) spec.trials = 100;
            if (seed) spec.seed_base = *seed;
            overrides.apply(spec.config);
            spec.threads = threads;
            spec.record_wall_time = !no_timing;
            if (!exp_frames.empty()) spec.frames_dir = exp_frames;
            const auto result = harness::run_experiment(spec);
            emit(output, harness::rows_to_csv(result.rows, verbose));
            const std::string summary = harness::summary_to_csv(result.summary);
            if (!summary_file.empty()) {
                io::write_text(summary_file, summary);
            } else {
                std::cerr << summary;
            }
        }
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail("InternalError", e.what());
    }
    return 0;
}
