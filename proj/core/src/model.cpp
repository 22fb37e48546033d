#include "chainbar/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "chainbar/errors.hpp"
#include "chainbar/rng.hpp"

namespace chainbar {

void BeltRegion::validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("belt length must be positive");
    if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("belt width must be positive");
}

double Deployment::rs() const {
    if (sensors.empty()) throw ParameterError("deployment has no sensors");
    return sensors.front().sensing_radius;
}

std::vector<Vec2> Deployment::initial_positions() const {
    std::vector<Vec2> out;
    out.reserve(sensors.size());
    for (const auto& s : sensors) out.push_back(s.initial_pos);
    return out;
}

void Deployment::validate() const {
    belt.validate();
    if (sensors.empty()) throw ParameterError("deployment has no sensors");
    const double r = sensors.front().sensing_radius;
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("sensing radius must be positive");
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const auto& s = sensors[i];
        if (i > 0 && !(sensors[i - 1].id < s.id)) {
            throw ParameterError("sensor ids must be unique and ascending (at id " + std::to_string(s.id) + ")");
        }
        if (s.sensing_radius != r) throw ParameterError("sensing radius differs for sensor " + std::to_string(s.id));
        const Vec2 p = s.initial_pos;
        if (!is_finite(p) || p.x < 0.0 || p.x > belt.length || p.y < 0.0 || p.y > belt.width) {
            throw ParameterError("sensor " + std::to_string(s.id) + " starts outside the belt");
        }
        if (!is_finite(s.current_pos)) throw ParameterError("sensor " + std::to_string(s.id) + " has non-finite position");
    }
}

Deployment make_deployment(const BeltRegion& belt, double rs, std::span<const Vec2> positions) {
    Deployment d;
    d.belt = belt;
    d.sensors.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        d.sensors.push_back({static_cast<SensorId>(i), positions[i], positions[i], rs});
    }
    d.validate();
    return d;
}

AlgoConfig AlgoConfig::defaults_for(double rs) {
    AlgoConfig c;
    c.constraint_tol = 1e-6 * rs;
    c.touch_tol = 1e-4 * rs;
    c.min_dist_clamp = 1e-3 * rs;
    return c;
}

void AlgoConfig::validate(double rs) const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be positive");
    };
    positive(alpha, "alpha");
    positive(tau, "tau");
    positive(mobility, "mobility");
    positive(constraint_tol, "constraint_tol");
    positive(touch_tol, "touch_tol");
    positive(min_dist_clamp, "min_dist_clamp");
    if (!(beta > 0.0 && beta <= 0.1)) throw ParameterError("beta must satisfy 0 < beta <= 0.1");
    if (max_iterations == 0) throw ParameterError("max_iterations must be positive");
    if (projection_iters == 0) throw ParameterError("projection_iters must be positive");
    if (!(min_dist_clamp < 2.0 * rs)) throw ParameterError("min_dist_clamp must be below 2*Rs");
}

Deployment uniform_random_deployment(std::uint64_t seed, std::size_t n, const BeltRegion& belt, double rs) {
    belt.validate();
    if (n == 0) throw ParameterError("deployment needs at least one sensor");
    if (!(rs > 0.0) || !std::isfinite(rs)) throw ParameterError("sensing radius must be positive");

    std::mt19937_64 rng(seed);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) {
        // Scaling [0,1) keeps x < L; min() guards the rounding edge case.
        p.x = std::min(uniform_unit(rng) * belt.length, belt.length);
        p.y = std::min(uniform_unit(rng) * belt.width, belt.width);
    }
    return make_deployment(belt, rs, pts);
}

DisplacementMetrics displacement_metrics(const Deployment& deployment, std::span<const Vec2> final_positions) {
    if (final_positions.size() != deployment.size()) {
        throw ParameterError("expected " + std::to_string(deployment.size()) + " final positions, got " +
                             std::to_string(final_positions.size()));
    }
    DisplacementMetrics m;
    m.per_sensor.reserve(final_positions.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < final_positions.size(); ++i) {
        const double d = distance(deployment.sensors[i].initial_pos, final_positions[i]);
        m.per_sensor.push_back(d);
        sum += d;
        m.max = std::max(m.max, d);
    }
    m.avg = final_positions.empty() ? 0.0 : sum / static_cast<double>(final_positions.size());
    return m;
}

DisplacementMetrics displacement_metrics(const Deployment& deployment, std::span<const SensorId> ids,
                                         std::span<const Vec2> final_positions) {
    if (ids.size() != final_positions.size() || ids.size() != deployment.size()) {
        throw ParameterError("final positions must cover exactly the deployment's ids");
    }
    std::vector<Vec2> ordered(deployment.size());
    std::vector<bool> seen(deployment.size(), false);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        auto it = std::lower_bound(deployment.sensors.begin(), deployment.sensors.end(), ids[k],
                                   [](const SensorRecord& s, SensorId id) { return s.id < id; });
        if (it == deployment.sensors.end() || it->id != ids[k]) {
            throw ParameterError("unknown sensor id " + std::to_string(ids[k]));
        }
        const auto idx = static_cast<std::size_t>(it - deployment.sensors.begin());
        if (seen[idx]) throw ParameterError("duplicate sensor id " + std::to_string(ids[k]));
        seen[idx] = true;
        ordered[idx] = final_positions[k];
    }
    return displacement_metrics(deployment, ordered);
}

RunResult make_run_result(const Deployment& deployment, std::vector<Vec2> final_positions) {
    RunResult r;
    auto m = displacement_metrics(deployment, final_positions);
    r.ids.reserve(deployment.size());
    for (const auto& s : deployment.sensors) r.ids.push_back(s.id);
    r.final_positions = std::move(final_positions);
    r.displacements = std::move(m.per_sensor);
    r.avg_displacement = m.avg;
    r.max_displacement = m.max;
    return r;
}

std::size_t min_barrier_size(const BeltRegion& belt, double rs) {
    belt.validate();
    if (!(rs > 0.0)) throw ParameterError("sensing radius must be positive");
    const double q = belt.length / (2.0 * rs);
    const double nearest = std::round(q);
    // L/2Rs that is integral up to rounding noise must not round up.
    if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(std::max(1.0, nearest));
    return static_cast<std::size_t>(std::ceil(q));
}

}  // namespace chainbar
