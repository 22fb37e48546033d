#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chainbar/geometry.hpp"
#include "chainbar/model.hpp"

namespace chainbar::physics {

using BodyId = NodeId;

struct PointBody {
    Vec2 position;
    Vec2 accumulated_force;
};

/// Keeps two bodies at most max_length apart; never pushes them apart.
struct DistanceCap {
    BodyId a = 0;  // a < b
    BodyId b = 0;
    double max_length = 0.0;
    friend bool operator==(const DistanceCap&, const DistanceCap&) = default;
};

/// Confines a body to the vertical line x = line_x; it may slide along y.
struct LineAnchor {
    BodyId body = 0;
    double line_x = 0.0;
    friend bool operator==(const LineAnchor&, const LineAnchor&) = default;
};

struct StepReport {
    std::vector<BodyId> moved_ids;
    double max_constraint_violation = 0.0;
    std::uint32_t projection_rounds = 0;
};

struct WorldSettings {
    double mobility = 1.0;
    double constraint_tol = 1e-6;
    std::uint32_t projection_iters = 16;
    // Hard ceiling on projection rounds once a step needs projection at all.
    std::uint32_t max_projection_rounds = 4096;

    static WorldSettings from(const AlgoConfig& config);
};

/// Overdamped point-body world. Bodies are dense ids 0..n-1.
///
/// A step moves every body by mobility * force * tau and then restores the
/// constraints by sequential position projection: line anchors first, then
/// distance caps in ascending (a, b) order. Projection only starts when some
/// constraint is violated by more than constraint_tol, runs at least
/// projection_iters rounds, and continues until every violation is within
/// constraint_tol (bounded by max_projection_rounds). Anchored bodies have
/// infinite mass along x, so caps only ever slide them along their line.
class World {
  public:
    explicit World(WorldSettings settings = {});
    World(std::span<const Vec2> positions, WorldSettings settings);

    BodyId add_body(Vec2 position);
    std::size_t body_count() const { return bodies_.size(); }
    const PointBody& body(BodyId id) const;
    Vec2 position(BodyId id) const { return body(id).position; }
    std::vector<Vec2> positions() const;
    /// Teleports a body; used by callers that clamp to the belt.
    void set_position(BodyId id, Vec2 p);
    const WorldSettings& settings() const { return settings_; }

    void apply_pull(BodyId id, Vec2 target, double magnitude);
    void apply_force(BodyId id, Vec2 force);

    void add_distance_cap(BodyId a, BodyId b, double max_length);
    void remove_distance_cap(BodyId a, BodyId b);
    bool has_distance_cap(BodyId a, BodyId b) const;
    std::optional<DistanceCap> distance_cap(BodyId a, BodyId b) const;
    const std::vector<DistanceCap>& distance_caps() const { return caps_; }

    void add_line_anchor(BodyId body, double line_x);
    void remove_line_anchor(BodyId body);
    std::optional<double> line_anchor(BodyId body) const;
    /// Anchors in ascending body order.
    std::vector<LineAnchor> line_anchors() const;

    /// Largest violation over all constraints (0 if all satisfied).
    double max_constraint_violation() const;

    StepReport step(double tau);

    friend bool operator==(const World& a, const World& b);

  private:
    void check_body(BodyId id) const;
    void project_round();
    void project_cap(const DistanceCap& cap);

    WorldSettings settings_;
    std::vector<PointBody> bodies_;
    std::vector<DistanceCap> caps_;  // sorted by (a, b)
    std::vector<std::optional<double>> anchor_line_;
};

}  // namespace chainbar::physics
