#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chainbar/geometry.hpp"
#include "chainbar/model.hpp"

namespace chainbar::coverage {

/// Where no chain reached across: the right rim of everything attached to the
/// left boundary and the left rim of everything attached to the right one.
struct GapWitness {
    double x_begin = 0.0;
    double x_end = 0.0;
};

struct CoverageReport {
    bool covered = false;
    std::vector<NodeId> chain;          // left-to-right witness when covered
    std::optional<GapWitness> gap;      // set when not covered
};

/// Strong 1-barrier coverage by closed disks of radius rs. Disks are linked
/// when their centers are within 2rs + tol; the belt is covered iff a linked
/// chain joins a disk with x <= rs + tol to one with x >= L - rs - tol.
CoverageReport strong_barrier_covered(std::span<const Vec2> positions, double rs, const BeltRegion& belt,
                                      double tol);

/// Raster oracle: the belt is split into cells no larger than `cell`; a cell
/// is open when its center lies outside every disk. Returns true (covered)
/// iff no 4-connected path of open cells joins the top row to the bottom row.
/// Requires cell <= rs / 4.
bool grid_gap_oracle(std::span<const Vec2> positions, double rs, const BeltRegion& belt, double cell);

}  // namespace chainbar::coverage
