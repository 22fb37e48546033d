#include "chainbar/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>

#include "chainbar/errors.hpp"

namespace chainbar::coverage {

namespace {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::size_t> parent_;
};

}  // namespace

CoverageReport strong_barrier_covered(std::span<const Vec2> positions, double rs, const BeltRegion& belt,
                                      double tol) {
    if (!(rs > 0.0)) throw ParameterError("sensing radius must be positive");
    const std::size_t n = positions.size();
    const std::size_t left = n;
    const std::size_t right = n + 1;
    const double reach = 2.0 * rs + tol;
    const double reach2 = reach * reach;

    std::vector<std::vector<std::size_t>> adj(n + 2);
    DisjointSets sets(n + 2);
    auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        sets.unite(a, b);
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (positions[i].x <= rs + tol) link(left, i);
        if (positions[i].x >= belt.length - rs - tol) link(i, right);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (squared_distance(positions[i], positions[j]) <= reach2) link(i, j);
        }
    }

    CoverageReport report;
    report.covered = sets.find(left) == sets.find(right);
    if (report.covered) {
        // Fewest-hop chain from LEFT to RIGHT; neighbors are visited in id order.
        for (auto& a : adj) std::sort(a.begin(), a.end());
        constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> prev(n + 2, kUnseen);
        std::queue<std::size_t> q;
        q.push(left);
        prev[left] = left;
        while (!q.empty() && prev[right] == kUnseen) {
            const std::size_t cur = q.front();
            q.pop();
            for (std::size_t nb : adj[cur]) {
                if (prev[nb] == kUnseen) {
                    prev[nb] = cur;
                    q.push(nb);
                }
            }
        }
        for (std::size_t at = prev[right]; at != left; at = prev[at]) report.chain.push_back(static_cast<NodeId>(at));
        std::reverse(report.chain.begin(), report.chain.end());
    } else {
        GapWitness gap{0.0, belt.length};
        const std::size_t root_left = sets.find(left);
        const std::size_t root_right = sets.find(right);
        for (std::size_t i = 0; i < n; ++i) {
            if (sets.find(i) == root_left) gap.x_begin = std::max(gap.x_begin, positions[i].x + rs);
            if (sets.find(i) == root_right) gap.x_end = std::min(gap.x_end, positions[i].x - rs);
        }
        report.gap = gap;
    }
    return report;
}

bool grid_gap_oracle(std::span<const Vec2> positions, double rs, const BeltRegion& belt, double cell) {
    belt.validate();
    if (!(rs > 0.0)) throw ParameterError("sensing radius must be positive");
    if (!(cell > 0.0) || cell > rs / 4.0) throw ParameterError("grid cell must be in (0, rs/4]");

    const auto nx = static_cast<std::size_t>(std::ceil(belt.length / cell));
    const auto ny = static_cast<std::size_t>(std::ceil(belt.width / cell));
    const double hx = belt.length / static_cast<double>(nx);
    const double hy = belt.width / static_cast<double>(ny);
    auto center = [&](std::size_t i, std::size_t j) {
        return Vec2{(static_cast<double>(i) + 0.5) * hx, (static_cast<double>(j) + 0.5) * hy};
    };

    std::vector<std::uint8_t> open(nx * ny, 1);
    const double r2 = rs * rs;
    for (Vec2 p : positions) {
        const auto clampi = [](double v, std::size_t hi) {
            return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(hi)));
        };
        const std::size_t i0 = clampi(std::floor((p.x - rs) / hx) - 1, nx);
        const std::size_t i1 = clampi(std::ceil((p.x + rs) / hx) + 1, nx);
        const std::size_t j0 = clampi(std::floor((p.y - rs) / hy) - 1, ny);
        const std::size_t j1 = clampi(std::ceil((p.y + rs) / hy) + 1, ny);
        for (std::size_t j = j0; j < j1; ++j) {
            for (std::size_t i = i0; i < i1; ++i) {
                if (squared_distance(center(i, j), p) <= r2) open[j * nx + i] = 0;
            }
        }
    }

    std::vector<std::uint8_t> seen(nx * ny, 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t idx = (ny - 1) * nx + i;
        if (open[idx]) {
            seen[idx] = 1;
            stack.push_back(idx);
        }
    }
    while (!stack.empty()) {
        const std::size_t idx = stack.back();
        stack.pop_back();
        const std::size_t i = idx % nx;
        const std::size_t j = idx / nx;
        if (j == 0) return false;
        auto visit = [&](std::size_t k) {
            if (open[k] && !seen[k]) {
                seen[k] = 1;
                stack.push_back(k);
            }
        };
        if (i > 0) visit(idx - 1);
        if (i + 1 < nx) visit(idx + 1);
        visit(idx - nx);
        if (j + 1 < ny) visit(idx + nx);
    }
    return true;
}

}  // namespace chainbar::coverage
