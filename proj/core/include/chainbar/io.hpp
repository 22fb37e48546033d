#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chainbar/baseline.hpp"
#include "chainbar/model.hpp"

namespace chainbar::io {

// Deployment files are one JSON document:
//
//   {"belt": {"L": 50, "W": 8}, "rs": 0.5,
//    "sensors": [{"id": 0, "x": 1.25, "y": 3.5}, ...]}
//
// Sensors are written in ascending id order. A sensor whose current position
// differs from its initial one also carries "current": {"x": .., "y": ..}.
// Reals are written in shortest round-trip form, so write/read is lossless.

std::string deployment_to_json(const Deployment& deployment);
/// Parses and validates a deployment. Sensors may appear in any order and ids
/// need not be dense; the result is sorted by id. Throws ParameterError.
Deployment deployment_from_json(std::string_view text);

void save_deployment(const std::filesystem::path& path, const Deployment& deployment);
Deployment load_deployment(const std::filesystem::path& path);

/// Per-sensor initial/final positions and displacement plus run aggregates.
std::string run_result_to_json(const Deployment& deployment, const RunResult& result);
/// As run_result_to_json() with the plan (barrier height, slots, assignment).
std::string linear_plan_to_json(const Deployment& deployment, const baseline::LinearPlan& plan,
                                const RunResult& result);

/// Reads keys present in a JSON object onto `config`; unknown keys throw
/// ParameterError. Keys match AlgoConfig member names.
void apply_config_json(std::string_view text, AlgoConfig& config);
std::string config_to_json(const AlgoConfig& config);

std::string read_text(const std::filesystem::path& path);
/// Truncates and writes the file. Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace chainbar::io
