#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chainbar/geometry.hpp"

namespace chainbar {

using SensorId = std::uint32_t;

// Dense node index into a Deployment's sensor list. Deployments are kept in
// ascending id order, so comparing node indices is the same as comparing ids.
using NodeId = std::uint32_t;

/// Rectangular belt [0, length] x [0, width]. Crossing paths run along y.
struct BeltRegion {
    double length = 0.0;
    double width = 0.0;

    void validate() const;
    friend bool operator==(const BeltRegion&, const BeltRegion&) = default;
};

struct SensorRecord {
    SensorId id = 0;
    Vec2 initial_pos;
    Vec2 current_pos;
    double sensing_radius = 0.0;

    friend bool operator==(const SensorRecord&, const SensorRecord&) = default;
};

struct Deployment {
    BeltRegion belt;
    std::vector<SensorRecord> sensors;

    /// Sensing radius shared by every sensor.
    double rs() const;
    std::size_t size() const { return sensors.size(); }
    std::vector<Vec2> initial_positions() const;

    /// Throws ParameterError on any violated invariant (empty, unsorted or
    /// duplicate ids, sensor outside the belt, mixed radii).
    void validate() const;

    friend bool operator==(const Deployment&, const Deployment&) = default;
};

/// Builds a validated deployment from initial positions; ids are 0..n-1.
Deployment make_deployment(const BeltRegion& belt, double rs, std::span<const Vec2> positions);

/// Tunables of the formation algorithm. Distances are meters, tau is seconds.
struct AlgoConfig {
    double alpha = 1.0;
    double beta = 0.05;
    double tau = 0.1;
    double mobility = 1.0;
    double constraint_tol = 0.0;
    double touch_tol = 0.0;
    std::uint64_t max_iterations = 200000;
    std::uint32_t projection_iters = 16;
    double min_dist_clamp = 0.0;
    std::uint64_t rng_seed = 0;

    /// Defaults scaled to the sensing radius: constraint_tol = 1e-6 Rs,
    /// touch_tol = 1e-4 Rs, min_dist_clamp = 1e-3 Rs.
    static AlgoConfig defaults_for(double rs);

    void validate(double rs) const;
};

/// Positions captured during a run, with enough structure to draw the chain trees.
struct Frame {
    std::uint64_t iteration = 0;
    std::vector<Vec2> positions;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> dominant_nodes;
    std::vector<NodeId> flatten_nodes;
};

struct RunResult {
    std::vector<SensorId> ids;
    std::vector<Vec2> final_positions;
    std::vector<double> displacements;
    double avg_displacement = 0.0;
    double max_displacement = 0.0;
    std::uint64_t iterations_used = 0;
    bool barrier_formed = false;
    std::vector<Frame> frames;
};

struct DisplacementMetrics {
    double avg = 0.0;
    double max = 0.0;
    std::vector<double> per_sensor;
};

/// i.i.d. uniform sensors over the belt; bitwise deterministic for a seed.
Deployment uniform_random_deployment(std::uint64_t seed, std::size_t n, const BeltRegion& belt, double rs);

/// final_positions is in deployment order (ascending id).
DisplacementMetrics displacement_metrics(const Deployment& deployment, std::span<const Vec2> final_positions);

/// Id-keyed variant; ids must match the deployment's exactly (any order).
DisplacementMetrics displacement_metrics(const Deployment& deployment, std::span<const SensorId> ids,
                                         std::span<const Vec2> final_positions);

/// Fills displacements and aggregates of a result from its final positions.
RunResult make_run_result(const Deployment& deployment, std::vector<Vec2> final_positions);

/// ceil(L / 2Rs), the fewest sensors able to span the belt.
std::size_t min_barrier_size(const BeltRegion& belt, double rs);

}  // namespace chainbar
