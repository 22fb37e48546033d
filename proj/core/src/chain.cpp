#include "chainbar/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include "chainbar/errors.hpp"

namespace chainbar::chain {

namespace {

void insert_sorted(std::vector<NodeId>& v, NodeId x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); }

bool erase_sorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) return false;
    v.erase(it);
    return true;
}

// Lexicographic key of a candidate (dominant, codominant) pair.
using PairKey = std::tuple<double, NodeId, NodeId>;
PairKey pair_key(double d2, NodeId u, NodeId v) { return {d2, std::min(u, v), std::max(u, v)}; }

}  // namespace

ChainForest::ChainForest(std::size_t node_count, NodeId left_link, NodeId right_link)
    : adjacency_(node_count), graph_of_(node_count, std::numeric_limits<GraphId>::max()),
      left_link_(left_link), right_link_(right_link) {
    if (node_count > 0 && (left_link >= node_count || right_link >= node_count)) {
        throw ParameterError("left/right link out of range");
    }
}

bool ChainForest::has_edge(NodeId a, NodeId b) const {
    const auto& n = adjacency_.at(a);
    return std::binary_search(n.begin(), n.end(), b);
}

std::vector<Edge> ChainForest::edges() const {
    std::vector<Edge> out;
    for (NodeId a = 0; a < adjacency_.size(); ++a) {
        for (NodeId b : adjacency_[a]) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    return out;
}

std::vector<Edge> ChainForest::tree_edges(GraphId g) const {
    std::vector<Edge> out;
    for (NodeId a : graph(g).members) {
        for (NodeId b : adjacency_[a]) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const ChainGraph& ChainForest::graph(GraphId g) const {
    auto it = graphs_.find(g);
    if (it == graphs_.end()) throw ParameterError("unknown chain graph " + std::to_string(g));
    return it->second;
}

std::vector<GraphId> ChainForest::graph_ids() const {
    std::vector<GraphId> ids;
    ids.reserve(graphs_.size());
    for (const auto& [id, g] : graphs_) ids.push_back(id);
    return ids;
}

void ChainForest::set_root(GraphId g, NodeId root) {
    auto it = graphs_.find(g);
    if (it == graphs_.end()) throw ParameterError("unknown chain graph " + std::to_string(g));
    if (graph_of_.at(root) != g) throw ParameterError("root " + std::to_string(root) + " is not in graph");
    it->second.root = root;
}

void ChainForest::clear_roots() {
    for (auto& [id, g] : graphs_) g.root.reset();
}

void ChainForest::add_tree_edge(NodeId a, NodeId b) {
    if (a == b || a >= node_count() || b >= node_count()) throw ParameterError("invalid tree edge");
    if (graph_of_[a] != graph_of_[b]) throw ParameterError("tree edge must stay inside one graph");
    if (has_edge(a, b)) throw ParameterError("duplicate tree edge");
    insert_sorted(adjacency_[a], b);
    insert_sorted(adjacency_[b], a);
}

void ChainForest::remove_tree_edge(NodeId a, NodeId b) {
    if (a >= node_count() || b >= node_count() || !erase_sorted(adjacency_[a], b)) {
        throw ParameterError("no tree edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    }
    erase_sorted(adjacency_[b], a);
}

GraphId ChainForest::add_graph(std::vector<NodeId> members) {
    std::sort(members.begin(), members.end());
    const GraphId id = next_id_++;
    for (NodeId m : members) graph_of_.at(m) = id;
    graphs_.emplace(id, ChainGraph{id, std::move(members), std::nullopt});
    return id;
}

GraphId ChainForest::join(NodeId a, NodeId b) {
    const GraphId ga = graph_of(a);
    const GraphId gb = graph_of(b);
    if (ga == gb) throw ParameterError("nodes already share a chain graph");
    const GraphId keep = std::min(ga, gb);
    const GraphId drop = std::max(ga, gb);
    auto& kept = graphs_.at(keep);
    auto& dropped = graphs_.at(drop);
    for (NodeId m : dropped.members) graph_of_[m] = keep;
    std::vector<NodeId> merged;
    merged.reserve(kept.members.size() + dropped.members.size());
    std::merge(kept.members.begin(), kept.members.end(), dropped.members.begin(), dropped.members.end(),
               std::back_inserter(merged));
    kept.members = std::move(merged);
    kept.root.reset();
    graphs_.erase(drop);
    insert_sorted(adjacency_[a], b);
    insert_sorted(adjacency_[b], a);
    return keep;
}

void ChainForest::check_invariants(std::span<const Vec2> positions, std::optional<double> max_edge) const {
    auto fail = [](const std::string& msg) { throw std::logic_error("chain forest invariant: " + msg); };
    std::vector<int> seen(node_count(), 0);
    for (const auto& [id, g] : graphs_) {
        if (g.id != id) fail("graph id mismatch");
        if (g.members.empty()) fail("empty graph");
        if (!std::is_sorted(g.members.begin(), g.members.end())) fail("members unsorted");
        std::size_t degree_sum = 0;
        for (NodeId m : g.members) {
            if (m >= node_count()) fail("member out of range");
            if (seen[m]++) fail("node in two graphs");
            if (graph_of_[m] != id) fail("graph_of mismatch");
            for (NodeId n : adjacency_[m]) {
                if (graph_of_[n] != id) fail("edge crosses graphs");
            }
            degree_sum += adjacency_[m].size();
        }
        if (degree_sum != 2 * (g.members.size() - 1)) fail("edge count is not |members|-1 in graph " + std::to_string(id));
        // Connected + |E| = |V|-1 implies acyclic.
        std::vector<NodeId> stack{g.members.front()};
        std::vector<bool> reached(node_count(), false);
        reached[g.members.front()] = true;
        std::size_t count = 0;
        while (!stack.empty()) {
            const NodeId n = stack.back();
            stack.pop_back();
            ++count;
            for (NodeId m : adjacency_[n]) {
                if (!reached[m]) {
                    reached[m] = true;
                    stack.push_back(m);
                }
            }
        }
        if (count != g.members.size()) fail("graph " + std::to_string(id) + " is disconnected");
        if (g.root && graph_of_[*g.root] != id) fail("root outside graph");
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] != 1) fail("node " + std::to_string(i) + " not covered by the partition");
    }
    if (max_edge && !positions.empty()) {
        for (const auto& [a, b] : edges()) {
            if (distance(positions[a], positions[b]) > *max_edge) {
                fail("edge {" + std::to_string(a) + "," + std::to_string(b) + "} too long");
            }
        }
    }
}

std::pair<NodeId, NodeId> select_left_right_links(std::span<const Vec2> positions) {
    if (positions.empty()) throw ParameterError("no sensors");
    NodeId left = 0;
    NodeId right = 0;
    for (NodeId i = 1; i < positions.size(); ++i) {
        if (positions[i].x < positions[left].x) left = i;
        if (positions[i].x > positions[right].x) right = i;
    }
    return {left, right};
}

ChainForest build_chain_forest(std::span<const Vec2> positions, double rs) {
    const auto [left, right] = select_left_right_links(positions);
    const std::size_t n = positions.size();
    const double reach2 = 4.0 * rs * rs;

    std::vector<std::vector<NodeId>> links(n);
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (squared_distance(positions[a], positions[b]) <= reach2) {
                links[a].push_back(b);
                links[b].push_back(a);
            }
        }
    }
    for (auto& l : links) std::sort(l.begin(), l.end());

    ChainForest forest(n, left, right);
    std::vector<bool> visited(n, false);
    for (NodeId start = 0; start < n; ++start) {
        if (visited[start]) continue;
        std::vector<NodeId> members;
        std::vector<Edge> tree;
        // Recursive DFS order: (node, next neighbor slot).
        std::vector<std::pair<NodeId, std::size_t>> stack{{start, 0}};
        visited[start] = true;
        members.push_back(start);
        while (!stack.empty()) {
            auto& [node, slot] = stack.back();
            if (slot == links[node].size()) {
                stack.pop_back();
                continue;
            }
            const NodeId next = links[node][slot++];
            if (visited[next]) continue;
            visited[next] = true;
            members.push_back(next);
            tree.emplace_back(node, next);
            stack.emplace_back(next, 0);
        }
        forest.add_graph(std::move(members));
        for (const auto& [a, b] : tree) forest.add_tree_edge(a, b);
    }
    return forest;
}

ChainForest build_chain_forest(const Deployment& deployment) {
    const auto pos = deployment.initial_positions();
    return build_chain_forest(pos, deployment.rs());
}

double pairwise_force(Vec2 u, Vec2 v, double alpha, double min_dist_clamp) {
    return alpha / std::max(distance(u, v), min_dist_clamp);
}

DominantPair dominant_pair(ChainForest& forest, GraphId g, std::span<const Vec2> positions,
                           const AlgoConfig& config) {
    if (forest.graph_count() < 2) throw SingleGraph();
    const auto& members = forest.graph(g).members;
    std::optional<PairKey> best;
    NodeId best_u = 0;
    NodeId best_v = 0;
    for (NodeId u : members) {
        for (NodeId v = 0; v < forest.node_count(); ++v) {
            if (forest.graph_of(v) == g) continue;
            const PairKey key = pair_key(squared_distance(positions[u], positions[v]), u, v);
            if (!best || key < *best) {
                best = key;
                best_u = u;
                best_v = v;
            }
        }
    }
    forest.set_root(g, best_u);
    const double d = distance(positions[best_u], positions[best_v]);
    return {g, best_u, best_v, d, config.alpha / std::max(d, config.min_dist_clamp)};
}

std::map<GraphId, DominantPair> all_dominant_pairs(ChainForest& forest, std::span<const Vec2> positions,
                                                   const AlgoConfig& config) {
    if (forest.graph_count() < 2) throw SingleGraph();
    struct Best {
        PairKey key;
        NodeId u;
        NodeId v;
    };
    std::map<GraphId, Best> best;
    const auto n = static_cast<NodeId>(forest.node_count());
    for (NodeId a = 0; a < n; ++a) {
        const GraphId ga = forest.graph_of(a);
        for (NodeId b = a + 1; b < n; ++b) {
            const GraphId gb = forest.graph_of(b);
            if (ga == gb) continue;
            const PairKey key = pair_key(squared_distance(positions[a], positions[b]), a, b);
            auto offer = [&](GraphId g, NodeId u, NodeId v) {
                auto it = best.find(g);
                if (it == best.end()) {
                    best.emplace(g, Best{key, u, v});
                } else if (key < it->second.key) {
                    it->second = Best{key, u, v};
                }
            };
            offer(ga, a, b);
            offer(gb, b, a);
        }
    }
    std::map<GraphId, DominantPair> out;
    for (const auto& [g, b] : best) {
        forest.set_root(g, b.u);
        const double d = distance(positions[b.u], positions[b.v]);
        out.emplace(g, DominantPair{g, b.u, b.v, d, config.alpha / std::max(d, config.min_dist_clamp)});
    }
    return out;
}

PathKind path_kind_for(const ChainForest& forest, GraphId g) {
    if (forest.left_graph() == g) return PathKind::Left;
    if (forest.right_graph() == g) return PathKind::Right;
    return PathKind::Interior;
}

FlattenPath flatten_path(const ChainForest& forest, GraphId g, PathKind kind) {
    const auto& graph = forest.graph(g);
    if (!graph.root || forest.graph_of(*graph.root) != g) throw ParameterError("flatten path needs a root inside the graph");
    const NodeId root = *graph.root;

    // Parent pointers of the tree rooted at `root`, in BFS order.
    constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> parent(forest.node_count(), kNone);
    std::vector<NodeId> order{root};
    parent[root] = root;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (NodeId m : forest.neighbors(order[i])) {
            if (parent[m] == kNone) {
                parent[m] = order[i];
                order.push_back(m);
            }
        }
    }
    auto is_child = [&](NodeId n, NodeId m) { return m != root && parent[m] == n; };

    FlattenPath path{g, {}};
    if (kind == PathKind::Interior) {
        std::vector<std::size_t> height(forest.node_count(), 0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            for (NodeId m : forest.neighbors(*it)) {
                if (is_child(*it, m)) height[*it] = std::max(height[*it], height[m] + 1);
            }
        }
        NodeId cur = root;
        path.nodes.push_back(cur);
        for (;;) {
            std::optional<NodeId> next;
            for (NodeId m : forest.neighbors(cur)) {  // ascending: first max wins ties
                if (is_child(cur, m) && (!next || height[m] > height[*next])) next = m;
            }
            if (!next) break;
            cur = *next;
            path.nodes.push_back(cur);
        }
        return path;
    }

    const NodeId target = kind == PathKind::Left ? forest.left_link() : forest.right_link();
    if (forest.graph_of(target) != g) throw ParameterError("boundary link is not in the graph");
    std::vector<NodeId> rev{target};
    while (rev.back() != root) rev.push_back(parent[rev.back()]);
    path.nodes.assign(rev.rbegin(), rev.rend());
    return path;
}

FlattenAction flatten_step(const ChainForest& forest, const FlattenPath& path, std::span<const Vec2> positions,
                           double f_dominant, double rs, const AlgoConfig& config) {
    FlattenAction action;
    action.path = path;
    const auto& nodes = path.nodes;
    if (nodes.empty()) return action;

    std::vector<bool> on_path(forest.node_count(), false);
    for (NodeId n : nodes) on_path[n] = true;

    std::size_t at = 0;
    std::vector<NodeId> branch;
    for (; at < nodes.size(); ++at) {
        for (NodeId m : forest.neighbors(nodes[at])) {
            if (!on_path[m]) branch.push_back(m);
        }
        if (!branch.empty()) break;
    }
    if (branch.empty()) return action;

    const NodeId current = nodes[at];
    std::vector<NodeId> path_neighbors;
    if (at > 0) path_neighbors.push_back(nodes[at - 1]);
    if (at + 1 < nodes.size()) path_neighbors.push_back(nodes[at + 1]);
    if (path_neighbors.empty()) return action;
    std::sort(path_neighbors.begin(), path_neighbors.end());

    const double touch2 = std::pow(2.0 * rs + config.touch_tol, 2);
    const double magnitude = config.beta * f_dominant;
    for (NodeId u : branch) {
        NodeId v = path_neighbors.front();
        double best = squared_distance(positions[u], positions[v]);
        for (std::size_t k = 1; k < path_neighbors.size(); ++k) {
            const double d2 = squared_distance(positions[u], positions[path_neighbors[k]]);
            if (d2 < best) {
                best = d2;
                v = path_neighbors[k];
            }
        }
        action.pulls.push_back({u, v, magnitude});
        if (best <= touch2) {
            action.rewire = Rewire{current, u, v};
            const auto v_at = static_cast<std::size_t>(std::find(nodes.begin(), nodes.end(), v) - nodes.begin());
            auto& p = action.path.nodes;
            p.insert(p.begin() + static_cast<std::ptrdiff_t>(std::max(at, v_at)), u);
            break;
        }
    }
    return action;
}

void apply_rewire(ChainForest& forest, const Rewire& rewire) {
    forest.remove_tree_edge(rewire.current, rewire.path_node);
    forest.add_tree_edge(rewire.branch, rewire.path_node);
}

GraphId merge_graphs(ChainForest& forest, const DominantPair& pair, std::span<const Vec2> positions, double rs,
                     const AlgoConfig& config) {
    if (pair.dominant >= forest.node_count() || pair.codominant >= forest.node_count()) {
        throw ParameterError("merge endpoints out of range");
    }
    if (forest.graph_of(pair.dominant) == forest.graph_of(pair.codominant)) {
        throw ParameterError("merge endpoints are already in one graph");
    }
    const double d = distance(positions[pair.dominant], positions[pair.codominant]);
    if (d > 2.0 * rs + config.touch_tol) throw ParameterError("merge endpoints do not touch");
    const GraphId merged = forest.join(pair.dominant, pair.codominant);
    forest.clear_roots();
    return merged;
}

}  // namespace chainbar::chain
