#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainbar/baseline.hpp"
#include "chainbar/model.hpp"

namespace chainbar::harness {

enum class Algorithm { Nonlinear, LinearBaseline };
const char* to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);

struct ExperimentSpec {
    BeltRegion belt{50.0, 8.0};
    double rs = 0.5;
    std::vector<std::size_t> n_values{55, 60, 65, 70, 75, 80};
    std::size_t trials = 30;
    std::uint64_t seed_base = 1;
    std::vector<Algorithm> algorithms{Algorithm::Nonlinear, Algorithm::LinearBaseline};
    baseline::Objective objective = baseline::Objective::MinAvg;
    // Frame recording for nonlinear trials; SVGs land in frames_dir/n<N>_t<T>.
    std::optional<std::uint64_t> frame_every;
    std::optional<std::filesystem::path> frames_dir;
    // Algorithm settings; zero tolerances are filled from defaults_for(rs).
    AlgoConfig config;
    // Measure wall time per trial. Off gives byte-reproducible CSVs.
    bool record_wall_time = true;
    // Worker threads; output order never depends on it.
    std::size_t threads = 1;

    /// Throws ParameterError: empty algorithms, trials = 0, n below the bound.
    void validate() const;
    /// The config actually used for trials.
    AlgoConfig effective_config() const;
};

/// Reads a JSON spec. Keys: belt{L,W}, rs, n_values, trials, seed_base,
/// algorithms ["nonlinear","linear_baseline"], objective, frame_every,
/// config{...}. Missing keys keep their defaults.
ExperimentSpec experiment_spec_from_json(std::string_view text);

struct ExperimentRow {
    Algorithm algorithm = Algorithm::Nonlinear;
    std::size_t n = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double avg_displacement = 0.0;
    double max_displacement = 0.0;
    std::uint64_t iterations = 0;
    bool covered = false;
    double wall_time_s = 0.0;
    std::string error;  // error kind; empty on success
    std::uint64_t deployment_hash = 0;
    bool ok() const { return error.empty(); }
};

struct Aggregate {
    Algorithm algorithm = Algorithm::Nonlinear;
    std::size_t n = 0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    double mean_avg_displacement = 0.0;
    double mean_max_displacement = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::vector<Aggregate> summary;
};

/// Seed of trial t at size n; shared by every algorithm.
std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t n, std::size_t t);
/// FNV-1a over the deployment's canonical bytes (ids and position bits).
std::uint64_t deployment_hash(const Deployment& deployment);

/// Runs every (algorithm, n, trial). Trial errors are recorded in the row.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Mean of avg and max displacement per (algorithm, n) over successful rows,
/// computed from the values as printed in the CSV.
std::vector<Aggregate> aggregate(const std::vector<ExperimentRow>& rows);

/// Header: algorithm,n,seed,avg_disp,max_disp,iterations,covered,wall_time_s
/// Verbose adds trial,deployment_hash,error. Reals use 6 significant digits.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool verbose = false);
std::string summary_to_csv(const std::vector<Aggregate>& summary);
/// Parses rows_to_csv() output (either form).
std::vector<ExperimentRow> rows_from_csv(std::string_view text);

/// Rounds to the precision used in CSV output.
double round_for_csv(double value);

}  // namespace chainbar::harness
