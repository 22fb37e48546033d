#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "chainbar/model.hpp"

namespace chainbar::baseline {

// Straight-line barrier used as the comparison baseline. It is a surrogate
// for published linear-barrier planners, not a reimplementation of any.

enum class Objective { MinAvg, MinMax };

const char* to_string(Objective objective);
Objective parse_objective(std::string_view text);

/// Cost of one assignment: total and worst single displacement.
struct AssignmentCost {
    double total = 0.0;
    double worst = 0.0;
};

/// Objective order: MinAvg compares total; MinMax compares (worst, total).
bool better(const AssignmentCost& a, const AssignmentCost& b, Objective objective);

struct LinearPlan {
    double barrier_y = 0.0;
    std::vector<double> slots;  // x = (2i - 1) Rs, i = 1..m
    // Per sensor (deployment order): the slot it fills, if any.
    std::vector<std::optional<std::size_t>> assignment;
    Objective objective = Objective::MinAvg;
    AssignmentCost cost;
};

/// Slot x-positions for a belt: m = ceil(L / 2Rs) slots spaced 2Rs from x = Rs.
std::vector<double> barrier_slots(const BeltRegion& belt, double rs);

/// Candidate barrier heights: the distinct sensor y-values and W/2, ascending.
std::vector<double> candidate_heights(const Deployment& deployment);

/// Optimal assignment of sensors to every slot on the line y = barrier_y,
/// over all injective slot -> sensor maps. Returns the per-slot sensor index.
std::pair<std::vector<std::size_t>, AssignmentCost> optimal_assignment(std::span<const Vec2> sensors,
                                                                       std::span<const double> slots,
                                                                       double barrier_y, Objective objective);

/// Best plan over candidate_heights(). Throws InsufficientSensors when N < m.
/// The RunResult holds final positions (unassigned sensors stay put).
std::pair<LinearPlan, RunResult> plan_linear_barrier(const Deployment& deployment, Objective objective);

}  // namespace chainbar::baseline
