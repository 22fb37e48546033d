#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the value types and favor obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "chainbar/chain.hpp"
#include "chainbar/geometry.hpp"
#include "chainbar/model.hpp"

namespace oracle {

using chainbar::NodeId;
using chainbar::Vec2;

/// Component label per node (smallest member index) from O(N^2) union-find
/// over the pairs with dist <= 2rs.
inline std::vector<std::size_t> disk_components(const std::vector<Vec2>& p, double rs) {
    std::vector<std::size_t> parent(p.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
            if (dx * dx + dy * dy <= 4 * rs * rs) {
                const auto a = find(i), b = find(j);
                parent[std::max(a, b)] = std::min(a, b);
            }
        }
    std::vector<std::size_t> label(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) label[i] = find(i);
    return label;
}

struct BrutePair {
    NodeId dominant;
    NodeId codominant;
    double distance;
};

/// Closest (u in g, v outside g) pair; ties by the pair's smaller id, then by
/// its larger id.
inline BrutePair brute_dominant_pair(const chainbar::chain::ChainForest& forest, chainbar::chain::GraphId g,
                                     const std::vector<Vec2>& p) {
    std::tuple<double, NodeId, NodeId> best{std::numeric_limits<double>::infinity(), 0, 0};
    BrutePair out{0, 0, 0.0};
    for (NodeId u = 0; u < p.size(); ++u) {
        if (forest.graph_of(u) != g) continue;
        for (NodeId v = 0; v < p.size(); ++v) {
            if (forest.graph_of(v) == g) continue;
            const double dx = p[u].x - p[v].x, dy = p[u].y - p[v].y;
            const std::tuple<double, NodeId, NodeId> key{dx * dx + dy * dy, std::min(u, v), std::max(u, v)};
            if (key < best) {
                best = key;
                out = {u, v, std::sqrt(dx * dx + dy * dy)};
            }
        }
    }
    return out;
}

/// Every root-to-leaf path of the tree restricted to `members`, by DFS; returns
/// the longest, ties to the lexicographically smallest sequence.
inline std::vector<NodeId> longest_root_path(const chainbar::chain::ChainForest& forest, NodeId root) {
    std::vector<std::vector<NodeId>> paths;
    std::vector<NodeId> stack{root};
    auto dfs = [&](auto&& self, NodeId at, NodeId from, bool has_from) -> void {
        bool leaf = true;
        for (NodeId n : forest.neighbors(at)) {
            if (has_from && n == from) continue;
            leaf = false;
            stack.push_back(n);
            self(self, n, at, true);
            stack.pop_back();
        }
        if (leaf) paths.push_back(stack);
    };
    dfs(dfs, root, root, false);
    return *std::min_element(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
}

struct BruteCost {
    double total = std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
};

/// Exhaustive minimum over every injective slot -> sensor map for one y.
/// min_max compares (worst, total) lexicographically; min_avg compares total.
inline BruteCost brute_assignment(const std::vector<Vec2>& sensors, const std::vector<double>& slots, double y,
                                  bool min_max) {
    BruteCost best;
    std::vector<bool> used(sensors.size(), false);
    auto better = [&](double total, double worst) {
        if (min_max) return worst < best.worst || (worst == best.worst && total < best.total);
        return total < best.total;
    };
    auto rec = [&](auto&& self, std::size_t slot, double total, double worst) -> void {
        if (slot == slots.size()) {
            if (better(total, worst)) best = {total, worst};
            return;
        }
        for (std::size_t s = 0; s < sensors.size(); ++s) {
            if (used[s]) continue;
            used[s] = true;
            const double d = std::hypot(sensors[s].x - slots[slot], sensors[s].y - y);
            self(self, slot + 1, total + d, std::max(worst, d));
            used[s] = false;
        }
    };
    rec(rec, 0, 0.0, 0.0);
    return best;
}

/// Crossing-path existence by BFS over the disk graph, written without
/// union-find: covered iff some disk touching x <= rs + tol reaches one with
/// x >= L - rs - tol.
inline bool bfs_covered(const std::vector<Vec2>& p, double rs, double length, double tol) {
    std::vector<bool> seen(p.size(), false);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].x <= rs + tol) {
            seen[i] = true;
            queue.push_back(i);
        }
    for (std::size_t k = 0; k < queue.size(); ++k) {
        const std::size_t i = queue[k];
        if (p[i].x >= length - rs - tol) return true;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!seen[j] && std::hypot(p[i].x - p[j].x, p[i].y - p[j].y) <= 2 * rs + tol) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    return false;
}

/// Smallest distance of the instance from a connectivity decision: over disk
/// pairs |dist - 2rs|, and per disk its distance from the left and right
/// attachment thresholds.
inline double coverage_slack(const std::vector<Vec2>& p, double rs, double length) {
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
        slack = std::min({slack, std::abs(p[i].x - rs), std::abs(length - rs - p[i].x)});
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            slack = std::min(slack, std::abs(std::hypot(p[i].x - p[j].x, p[i].y - p[j].y) - 2 * rs));
        }
    }
    return slack;
}

}  // namespace oracle
