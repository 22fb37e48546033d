#include "chainbar/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chainbar/barrier.hpp"
#include "chainbar/coverage.hpp"
#include "chainbar/errors.hpp"
#include "chainbar/io.hpp"
#include "chainbar/rng.hpp"
#include "chainbar/svg.hpp"

namespace chainbar::harness {

namespace {

constexpr const char* kHeader = "algorithm,n,seed,avg_disp,max_disp,iterations,covered,wall_time_s";

std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

ExperimentRow run_trial(const ExperimentSpec& spec, const AlgoConfig& base, Algorithm algorithm, std::size_t n,
                        std::size_t t) {
    ExperimentRow row;
    row.algorithm = algorithm;
    row.n = n;
    row.trial = t;
    row.seed = trial_seed(spec.seed_base, n, t);
    const auto start = std::chrono::steady_clock::now();
    try {
        const Deployment d = uniform_random_deployment(row.seed, n, spec.belt, spec.rs);
        row.deployment_hash = deployment_hash(d);
        RunResult r;
        if (algorithm == Algorithm::Nonlinear) {
            AlgoConfig cfg = base;
            cfg.rng_seed = splitmix64(row.seed);
            barrier::RunOptions opts;
            if (spec.frame_every && spec.frames_dir) opts.frame_every = *spec.frame_every;
            r = barrier::run(d, cfg, opts);
            if (!r.frames.empty()) {
                svg::emit_svg_frames(r, d, *spec.frames_dir / ("n" + std::to_string(n) + "_t" + std::to_string(t)));
            }
        } else {
            r = baseline::plan_linear_barrier(d, spec.objective).second;
        }
        row.avg_displacement = r.avg_displacement;
        row.max_displacement = r.max_displacement;
        row.iterations = r.iterations_used;
        row.covered = coverage::strong_barrier_covered(r.final_positions, spec.rs, spec.belt, base.constraint_tol).covered;
        if (!row.covered) row.error = "NotCovered";
    } catch (const Error& e) {
        row.error = e.kind();
    } catch (const std::exception&) {
        row.error = "InternalError";
    }
    if (spec.record_wall_time) {
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (!row.ok()) {
        row.avg_displacement = std::nan("");
        row.max_displacement = std::nan("");
        row.covered = false;
    }
    return row;
}

}  // namespace

const char* to_string(Algorithm algorithm) {
    return algorithm == Algorithm::Nonlinear ? "nonlinear" : "linear_baseline";
}

Algorithm parse_algorithm(std::string_view text) {
    if (text == "nonlinear") return Algorithm::Nonlinear;
    if (text == "linear_baseline") return Algorithm::LinearBaseline;
    throw ParameterError("unknown algorithm '" + std::string(text) + "'");
}

void ExperimentSpec::validate() const {
    belt.validate();
    if (!(rs > 0.0)) throw ParameterError("rs must be positive");
    if (algorithms.empty()) throw ParameterError("experiment needs at least one algorithm");
    if (trials == 0) throw ParameterError("trials must be at least 1");
    if (n_values.empty()) throw ParameterError("experiment needs at least one n value");
    const std::size_t need = min_barrier_size(belt, rs);
    for (std::size_t n : n_values) {
        if (n < need) {
            throw ParameterError("n = " + std::to_string(n) + " is below the minimum barrier size " +
                                 std::to_string(need));
        }
    }
    if (frame_every && *frame_every == 0) throw ParameterError("frame_every must be positive");
    effective_config().validate(rs);
}

AlgoConfig ExperimentSpec::effective_config() const {
    AlgoConfig c = config;
    const AlgoConfig d = AlgoConfig::defaults_for(rs);
    if (c.constraint_tol == 0.0) c.constraint_tol = d.constraint_tol;
    if (c.touch_tol == 0.0) c.touch_tol = d.touch_tol;
    if (c.min_dist_clamp == 0.0) c.min_dist_clamp = d.min_dist_clamp;
    return c;
}

ExperimentSpec experiment_spec_from_json(std::string_view text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw ParameterError(std::string("experiment spec: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("experiment spec must be a JSON object");
    ExperimentSpec s;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "belt") {
                s.belt = {v.at("L").get<double>(), v.at("W").get<double>()};
            } else if (key == "rs") {
                s.rs = v.get<double>();
            } else if (key == "n_values") {
                s.n_values = v.get<std::vector<std::size_t>>();
            } else if (key == "trials") {
                s.trials = v.get<std::size_t>();
            } else if (key == "seed_base") {
                s.seed_base = v.get<std::uint64_t>();
            } else if (key == "algorithms") {
                s.algorithms.clear();
                for (const auto& a : v) s.algorithms.push_back(parse_algorithm(a.get<std::string>()));
            } else if (key == "objective") {
                s.objective = baseline::parse_objective(v.get<std::string>());
            } else if (key == "frame_every") {
                if (!v.is_null()) s.frame_every = v.get<std::uint64_t>();
            } else if (key == "config") {
                io::apply_config_json(v.dump(), s.config);
            } else {
                throw ParameterError("unknown experiment spec key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("experiment spec: ") + e.what());
    }
    s.validate();
    return s;
}

std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t n, std::size_t t) {
    return seed_base ^ splitmix64((static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(t));
}

std::uint64_t deployment_hash(const Deployment& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    auto bits = [](double v) {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof b);
        return b;
    };
    mix(bits(d.belt.length));
    mix(bits(d.belt.width));
    mix(bits(d.rs()));
    for (const auto& s : d.sensors) {
        mix(s.id);
        mix(bits(s.initial_pos.x));
        mix(bits(s.initial_pos.y));
    }
    return h;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const AlgoConfig cfg = spec.effective_config();

    struct Task {
        Algorithm algorithm;
        std::size_t n;
        std::size_t t;
    };
    std::vector<Task> tasks;
    for (Algorithm a : spec.algorithms)
        for (std::size_t n : spec.n_values)
            for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({a, n, t});

    ExperimentResult result;
    result.rows.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            result.rows[i] = run_trial(spec, cfg, tasks[i].algorithm, tasks[i].n, tasks[i].t);
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(spec.threads, tasks.size()));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    result.summary = aggregate(result.rows);
    return result;
}

double round_for_csv(double value) { return std::strtod(real(value).c_str(), nullptr); }

std::vector<Aggregate> aggregate(const std::vector<ExperimentRow>& rows) {
    std::map<std::pair<int, std::size_t>, Aggregate> groups;
    std::vector<std::pair<int, std::size_t>> order;
    for (const auto& r : rows) {
        const auto key = std::make_pair(static_cast<int>(r.algorithm), r.n);
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) {
            order.push_back(key);
            it->second.algorithm = r.algorithm;
            it->second.n = r.n;
        }
        Aggregate& g = it->second;
        if (!r.ok()) {
            ++g.failures;
            continue;
        }
        ++g.successes;
        g.mean_avg_displacement += round_for_csv(r.avg_displacement);
        g.mean_max_displacement += round_for_csv(r.max_displacement);
    }
    std::vector<Aggregate> out;
    for (const auto& key : order) {
        Aggregate g = groups.at(key);
        if (g.successes > 0) {
            g.mean_avg_displacement /= static_cast<double>(g.successes);
            g.mean_max_displacement /= static_cast<double>(g.successes);
        } else {
            g.mean_avg_displacement = std::nan("");
            g.mean_max_displacement = std::nan("");
        }
        out.push_back(g);
    }
    return out;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool verbose) {
    std::string out = kHeader;
    if (verbose) out += ",trial,deployment_hash,error";
    out += '\n';
    for (const auto& r : rows) {
        out += to_string(r.algorithm);
        out += ',' + std::to_string(r.n) + ',' + std::to_string(r.seed) + ',' + real(r.avg_displacement) + ',' +
               real(r.max_displacement) + ',' + std::to_string(r.iterations) + ',' + (r.covered ? "true" : "false") +
               ',' + real(r.wall_time_s);
        if (verbose) {
            char hash[24];
            std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.deployment_hash));
            out += ',' + std::to_string(r.trial) + ',' + hash + ',' + r.error;
        }
        out += '\n';
    }
    return out;
}

std::string summary_to_csv(const std::vector<Aggregate>& summary) {
    std::string out = "algorithm,n,successes,failures,mean_avg_disp,mean_max_disp\n";
    for (const auto& g : summary) {
        out += std::string(to_string(g.algorithm)) + ',' + std::to_string(g.n) + ',' + std::to_string(g.successes) +
               ',' + std::to_string(g.failures) + ',' + real(g.mean_avg_displacement) + ',' +
               real(g.mean_max_displacement) + '\n';
    }
    return out;
}

std::vector<ExperimentRow> rows_from_csv(std::string_view text) {
    std::vector<ExperimentRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0) throw ParameterError("unexpected CSV header");
    const bool verbose = line.size() > std::strlen(kHeader);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != (verbose ? 11u : 8u)) throw ParameterError("malformed CSV row: " + line);
        ExperimentRow r;
        r.algorithm = parse_algorithm(f[0]);
        r.n = std::stoull(f[1]);
        r.seed = std::stoull(f[2]);
        r.avg_displacement = std::strtod(f[3].c_str(), nullptr);
        r.max_displacement = std::strtod(f[4].c_str(), nullptr);
        r.iterations = std::stoull(f[5]);
        r.covered = f[6] == "true";
        r.wall_time_s = std::strtod(f[7].c_str(), nullptr);
        if (verbose) {
            r.trial = std::stoull(f[8]);
            r.deployment_hash = std::stoull(f[9], nullptr, 16);
            r.error = f[10];
        } else if (std::isnan(r.avg_displacement)) {
            r.error = "Error";
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace chainbar::harness
