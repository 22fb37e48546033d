#include "chainbar/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chainbar/coverage.hpp"
#include "chainbar/errors.hpp"

namespace chainbar::baseline {

namespace {

using Matrix = std::vector<std::vector<double>>;

// Rectangular Hungarian method (rows <= cols). Returns the column for each row.
std::vector<std::size_t> hungarian(const Matrix& cost) {
    const std::size_t n = cost.size();
    const std::size_t m = n == 0 ? 0 : cost.front().size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0);
    std::vector<std::size_t> way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

// Kuhn's augmenting paths: can every row be matched using entries <= limit?
bool perfect_matching_within(const Matrix& cost, double limit) {
    const std::size_t n = cost.size();
    const std::size_t m = cost.front().size();
    std::vector<std::size_t> owner(m, n);
    std::vector<char> visited;
    auto augment = [&](auto&& self, std::size_t row) -> bool {
        for (std::size_t j = 0; j < m; ++j) {
            if (cost[row][j] > limit || visited[j]) continue;
            visited[j] = 1;
            if (owner[j] == n || self(self, owner[j])) {
                owner[j] = row;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        visited.assign(m, 0);
        if (!augment(augment, i)) return false;
    }
    return true;
}

}  // namespace

const char* to_string(Objective objective) { return objective == Objective::MinAvg ? "min_avg" : "min_max"; }

Objective parse_objective(std::string_view text) {
    if (text == "min_avg") return Objective::MinAvg;
    if (text == "min_max") return Objective::MinMax;
    throw ParameterError("unknown objective '" + std::string(text) + "' (expected min_avg or min_max)");
}

bool better(const AssignmentCost& a, const AssignmentCost& b, Objective objective) {
    if (objective == Objective::MinAvg) return a.total < b.total;
    return a.worst < b.worst || (a.worst == b.worst && a.total < b.total);
}

std::vector<double> barrier_slots(const BeltRegion& belt, double rs) {
    const std::size_t m = min_barrier_size(belt, rs);
    std::vector<double> slots(m);
    for (std::size_t i = 0; i < m; ++i) slots[i] = static_cast<double>(2 * i + 1) * rs;
    return slots;
}

std::vector<double> candidate_heights(const Deployment& deployment) {
    std::vector<double> ys;
    ys.reserve(deployment.size() + 1);
    for (const auto& s : deployment.sensors) ys.push_back(s.initial_pos.y);
    ys.push_back(0.5 * deployment.belt.width);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

std::pair<std::vector<std::size_t>, AssignmentCost> optimal_assignment(std::span<const Vec2> sensors,
                                                                       std::span<const double> slots,
                                                                       double barrier_y, Objective objective) {
    if (sensors.size() < slots.size()) throw InsufficientSensors(sensors.size(), slots.size());
    if (slots.empty()) return {{}, {}};

    Matrix cost(slots.size(), std::vector<double>(sensors.size()));
    for (std::size_t j = 0; j < slots.size(); ++j) {
        for (std::size_t i = 0; i < sensors.size(); ++i) cost[j][i] = distance(sensors[i], {slots[j], barrier_y});
    }

    if (objective == Objective::MinMax) {
        // Smallest achievable worst displacement, then min total under it.
        std::vector<double> levels;
        for (const auto& row : cost) levels.insert(levels.end(), row.begin(), row.end());
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::size_t lo = 0;
        std::size_t hi = levels.size() - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (perfect_matching_within(cost, levels[mid])) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        const double limit = levels[lo];
        double forbidden = 1.0;
        for (const auto& row : cost) {
            for (double c : row) forbidden += c;
        }
        for (auto& row : cost) {
            for (double& c : row) {
                if (c > limit) c = forbidden;
            }
        }
    }

    auto chosen = hungarian(cost);
    AssignmentCost total;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        const double d = distance(sensors[chosen[j]], {slots[j], barrier_y});
        total.total += d;
        total.worst = std::max(total.worst, d);
    }
    return {std::move(chosen), total};
}

std::pair<LinearPlan, RunResult> plan_linear_barrier(const Deployment& deployment, Objective objective) {
    deployment.validate();
    const double rs = deployment.rs();
    const auto slots = barrier_slots(deployment.belt, rs);
    if (deployment.size() < slots.size()) throw InsufficientSensors(deployment.size(), slots.size());

    const auto sensors = deployment.initial_positions();
    LinearPlan plan;
    plan.objective = objective;
    plan.slots = slots;
    std::vector<std::size_t> best_choice;
    bool have = false;
    for (double y : candidate_heights(deployment)) {
        auto [choice, cost] = optimal_assignment(sensors, slots, y, objective);
        if (!have || better(cost, plan.cost, objective)) {
            have = true;
            plan.barrier_y = y;
            plan.cost = cost;
            best_choice = std::move(choice);
        }
    }

    plan.assignment.assign(sensors.size(), std::nullopt);
    std::vector<Vec2> final_positions = sensors;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        plan.assignment[best_choice[j]] = j;
        final_positions[best_choice[j]] = {slots[j], plan.barrier_y};
    }
    RunResult result = make_run_result(deployment, std::move(final_positions));
    result.barrier_formed =
        coverage::strong_barrier_covered(result.final_positions, rs, deployment.belt, 1e-6 * rs).covered;
    return {std::move(plan), std::move(result)};
}

}  // namespace chainbar::baseline
