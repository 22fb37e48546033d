#include "chainbar/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainbar/errors.hpp"

namespace chainbar::physics {

namespace {

std::pair<BodyId, BodyId> ordered(BodyId a, BodyId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

bool cap_less(const DistanceCap& c, std::pair<BodyId, BodyId> key) {
    return std::pair{c.a, c.b} < key;
}

}  // namespace

WorldSettings WorldSettings::from(const AlgoConfig& config) {
    WorldSettings s;
    s.mobility = config.mobility;
    s.constraint_tol = config.constraint_tol;
    s.projection_iters = config.projection_iters;
    s.max_projection_rounds = std::max<std::uint32_t>(config.projection_iters * 256u, config.projection_iters);
    return s;
}

World::World(WorldSettings settings) : settings_(settings) {}

World::World(std::span<const Vec2> positions, WorldSettings settings) : settings_(settings) {
    bodies_.reserve(positions.size());
    for (Vec2 p : positions) add_body(p);
}

BodyId World::add_body(Vec2 position) {
    if (!is_finite(position)) throw ParameterError("body position must be finite");
    bodies_.push_back({position, {}});
    anchor_line_.emplace_back();
    return static_cast<BodyId>(bodies_.size() - 1);
}

void World::check_body(BodyId id) const {
    if (id >= bodies_.size()) throw ParameterError("unknown body id " + std::to_string(id));
}

const PointBody& World::body(BodyId id) const {
    check_body(id);
    return bodies_[id];
}

std::vector<Vec2> World::positions() const {
    std::vector<Vec2> out;
    out.reserve(bodies_.size());
    for (const auto& b : bodies_) out.push_back(b.position);
    return out;
}

void World::set_position(BodyId id, Vec2 p) {
    check_body(id);
    if (!is_finite(p)) throw ParameterError("body position must be finite");
    bodies_[id].position = p;
}

void World::apply_pull(BodyId id, Vec2 target, double magnitude) {
    check_body(id);
    const Vec2 delta = target - bodies_[id].position;
    const double len = norm(delta);
    if (len == 0.0) return;
    bodies_[id].accumulated_force += (magnitude / len) * delta;
}

void World::apply_force(BodyId id, Vec2 force) {
    check_body(id);
    bodies_[id].accumulated_force += force;
}

void World::add_distance_cap(BodyId a, BodyId b, double max_length) {
    check_body(a);
    check_body(b);
    if (a == b) throw ParameterError("distance cap needs two distinct bodies");
    if (!(max_length > 0.0)) throw ParameterError("distance cap length must be positive");
    const auto key = ordered(a, b);
    auto it = std::lower_bound(caps_.begin(), caps_.end(), key, cap_less);
    if (it != caps_.end() && it->a == key.first && it->b == key.second) {
        throw ParameterError("duplicate distance cap {" + std::to_string(key.first) + "," +
                             std::to_string(key.second) + "}");
    }
    caps_.insert(it, DistanceCap{key.first, key.second, max_length});
}

void World::remove_distance_cap(BodyId a, BodyId b) {
    const auto key = ordered(a, b);
    auto it = std::lower_bound(caps_.begin(), caps_.end(), key, cap_less);
    if (it == caps_.end() || it->a != key.first || it->b != key.second) {
        throw ParameterError("no distance cap {" + std::to_string(key.first) + "," +
                             std::to_string(key.second) + "}");
    }
    caps_.erase(it);
}

std::optional<DistanceCap> World::distance_cap(BodyId a, BodyId b) const {
    const auto key = ordered(a, b);
    auto it = std::lower_bound(caps_.begin(), caps_.end(), key, cap_less);
    if (it == caps_.end() || it->a != key.first || it->b != key.second) return std::nullopt;
    return *it;
}

bool World::has_distance_cap(BodyId a, BodyId b) const { return distance_cap(a, b).has_value(); }

void World::add_line_anchor(BodyId body, double line_x) {
    check_body(body);
    if (!std::isfinite(line_x)) throw ParameterError("anchor line must be finite");
    if (anchor_line_[body]) throw ParameterError("body " + std::to_string(body) + " already has a line anchor");
    anchor_line_[body] = line_x;
}

void World::remove_line_anchor(BodyId body) {
    check_body(body);
    if (!anchor_line_[body]) throw ParameterError("body " + std::to_string(body) + " has no line anchor");
    anchor_line_[body].reset();
}

std::optional<double> World::line_anchor(BodyId body) const {
    check_body(body);
    return anchor_line_[body];
}

std::vector<LineAnchor> World::line_anchors() const {
    std::vector<LineAnchor> out;
    for (BodyId i = 0; i < anchor_line_.size(); ++i) {
        if (anchor_line_[i]) out.push_back({i, *anchor_line_[i]});
    }
    return out;
}

double World::max_constraint_violation() const {
    double worst = 0.0;
    for (BodyId i = 0; i < anchor_line_.size(); ++i) {
        if (anchor_line_[i]) worst = std::max(worst, std::abs(bodies_[i].position.x - *anchor_line_[i]));
    }
    for (const auto& c : caps_) {
        worst = std::max(worst, distance(bodies_[c.a].position, bodies_[c.b].position) - c.max_length);
    }
    return worst;
}

void World::project_cap(const DistanceCap& cap) {
    Vec2& pa = bodies_[cap.a].position;
    Vec2& pb = bodies_[cap.b].position;
    const double d = distance(pa, pb);
    const double excess = d - cap.max_length;
    if (!(excess > 0.0)) return;

    const bool anchored_a = anchor_line_[cap.a].has_value();
    const bool anchored_b = anchor_line_[cap.b].has_value();

    if (anchored_a && anchored_b) {
        // Both x fixed: shrink |dy| to the largest value the cap allows, half each.
        const double dx = pb.x - pa.x;
        const double dy = pb.y - pa.y;
        const double rest = cap.max_length * cap.max_length - dx * dx;
        const double target = rest > 0.0 ? std::sqrt(rest) : 0.0;
        const double shrink = std::abs(dy) - target;
        if (shrink <= 0.0) return;
        const double half = 0.5 * std::copysign(shrink, dy);
        pa.y += half;
        pb.y -= half;
        return;
    }

    // Mass-weighted projection along the a->b axis. An anchored endpoint has
    // zero inverse mass along x.
    const Vec2 n = (1.0 / d) * (pb - pa);
    const Vec2 wa{anchored_a ? 0.0 : 1.0, 1.0};
    const Vec2 wb{anchored_b ? 0.0 : 1.0, 1.0};
    const double denom = wa.x * n.x * n.x + wa.y * n.y * n.y + wb.x * n.x * n.x + wb.y * n.y * n.y;
    if (denom <= 0.0) return;
    const double s = excess / denom;
    pa += Vec2{s * wa.x * n.x, s * wa.y * n.y};
    pb -= Vec2{s * wb.x * n.x, s * wb.y * n.y};
}

void World::project_round() {
    for (BodyId i = 0; i < anchor_line_.size(); ++i) {
        if (anchor_line_[i]) bodies_[i].position.x = *anchor_line_[i];
    }
    for (const auto& c : caps_) project_cap(c);
}

StepReport World::step(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ParameterError("step duration must be positive");

    const std::vector<Vec2> before = positions();
    const double gain = settings_.mobility * tau;
    for (BodyId i = 0; i < bodies_.size(); ++i) {
        Vec2 f = bodies_[i].accumulated_force;
        if (anchor_line_[i]) f.x = 0.0;  // groove: no motion off the line
        if (f.x != 0.0 || f.y != 0.0) bodies_[i].position += gain * f;
    }

    StepReport report;
    double violation = max_constraint_violation();
    if (violation > settings_.constraint_tol) {
        std::uint32_t rounds = 0;
        // Settle well inside the tolerance so later checks at constraint_tol
        // are not decided by rounding.
        const double target = 0.5 * settings_.constraint_tol;
        while (rounds < settings_.projection_iters ||
               (violation > target && rounds < settings_.max_projection_rounds)) {
            project_round();
            ++rounds;
            if (rounds >= settings_.projection_iters) violation = max_constraint_violation();
        }
        report.projection_rounds = rounds;
    }
    report.max_constraint_violation = violation;

    for (BodyId i = 0; i < bodies_.size(); ++i) {
        bodies_[i].accumulated_force = {};
        if (!is_finite(bodies_[i].position)) {
            throw NumericalFailure(i, "non-finite position for body " + std::to_string(i));
        }
        if (!(bodies_[i].position == before[i])) report.moved_ids.push_back(i);
    }
    return report;
}

bool operator==(const World& a, const World& b) {
    if (a.bodies_.size() != b.bodies_.size()) return false;
    for (std::size_t i = 0; i < a.bodies_.size(); ++i) {
        if (!(a.bodies_[i].position == b.bodies_[i].position) ||
            !(a.bodies_[i].accumulated_force == b.bodies_[i].accumulated_force)) {
            return false;
        }
    }
    return a.caps_ == b.caps_ && a.anchor_line_ == b.anchor_line_;
}

}  // namespace chainbar::physics
