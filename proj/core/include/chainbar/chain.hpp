#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "chainbar/geometry.hpp"
#include "chainbar/model.hpp"

namespace chainbar::chain {

using GraphId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // first < second

/// One connected component reduced to a spanning tree (a chain tree).
struct ChainGraph {
    GraphId id = 0;
    std::vector<NodeId> members;  // ascending
    std::optional<NodeId> root;   // the dominant point, once known
};

/// Partition of all sensors into chain trees, plus the left/right chain links.
/// Tree adjacency is stored forest-wide; every edge joins two members of the
/// same graph.
class ChainForest {
  public:
    ChainForest() = default;
    ChainForest(std::size_t node_count, NodeId left_link, NodeId right_link);

    std::size_t node_count() const { return adjacency_.size(); }
    std::span<const NodeId> neighbors(NodeId n) const { return adjacency_.at(n); }
    std::size_t degree(NodeId n) const { return adjacency_.at(n).size(); }
    bool has_edge(NodeId a, NodeId b) const;
    std::vector<Edge> edges() const;
    std::vector<Edge> tree_edges(GraphId g) const;

    GraphId graph_of(NodeId n) const { return graph_of_.at(n); }
    const ChainGraph& graph(GraphId g) const;
    const std::map<GraphId, ChainGraph>& graphs() const { return graphs_; }
    std::vector<GraphId> graph_ids() const;
    std::size_t graph_count() const { return graphs_.size(); }

    NodeId left_link() const { return left_link_; }
    NodeId right_link() const { return right_link_; }
    GraphId left_graph() const { return graph_of(left_link_); }
    GraphId right_graph() const { return graph_of(right_link_); }

    void set_root(GraphId g, NodeId root);
    void clear_roots();

    /// Edits a tree edge inside one graph. Callers keep the tree property.
    void add_tree_edge(NodeId a, NodeId b);
    void remove_tree_edge(NodeId a, NodeId b);

    /// Joins the graphs of a and b with the edge (a, b). The merged graph keeps
    /// the smaller id; its root is cleared. Returns the merged id.
    GraphId join(NodeId a, NodeId b);

    /// Adds a graph holding `members`; used while building.
    GraphId add_graph(std::vector<NodeId> members);

    /// Throws std::logic_error if the partition or any tree is malformed, or if
    /// a tree edge is longer than max_edge (when given).
    void check_invariants(std::span<const Vec2> positions = {}, std::optional<double> max_edge = {}) const;

  private:
    std::vector<std::vector<NodeId>> adjacency_;  // sorted neighbor lists
    std::vector<GraphId> graph_of_;
    std::map<GraphId, ChainGraph> graphs_;
    GraphId next_id_ = 0;
    NodeId left_link_ = 0;
    NodeId right_link_ = 0;
};

/// Leftmost and rightmost sensors; ties go to the lowest id.
std::pair<NodeId, NodeId> select_left_right_links(std::span<const Vec2> positions);

/// Connects sensors at distance <= 2Rs, then keeps a DFS spanning tree per
/// component (started at the lowest id, children in ascending id order).
ChainForest build_chain_forest(std::span<const Vec2> positions, double rs);
ChainForest build_chain_forest(const Deployment& deployment);

/// alpha / max(dist(u, v), min_dist_clamp).
double pairwise_force(Vec2 u, Vec2 v, double alpha, double min_dist_clamp);

struct DominantPair {
    GraphId graph = 0;
    NodeId dominant = 0;
    NodeId codominant = 0;
    double distance = 0.0;
    double force = 0.0;
};

/// Strongest cross-graph attraction for graph `g`: the closest pair
/// (u in g, v outside g), ties to the pair holding the lowest id, then the
/// lower id of its other endpoint. Sets the graph's root to the dominant.
/// Throws SingleGraph when no external sensor exists.
DominantPair dominant_pair(ChainForest& forest, GraphId g, std::span<const Vec2> positions,
                           const AlgoConfig& config);

/// dominant_pair() for every graph in one O(N^2) sweep; sets every root.
std::map<GraphId, DominantPair> all_dominant_pairs(ChainForest& forest, std::span<const Vec2> positions,
                                                   const AlgoConfig& config);

enum class PathKind { Interior, Left, Right };

struct FlattenPath {
    GraphId graph = 0;
    std::vector<NodeId> nodes;  // nodes.front() is the root
};

/// Interior: longest root-to-leaf path by hops, ties to the lexicographically
/// smallest id sequence. Left/Right: the tree path from the root to the
/// forest's left/right chain link.
FlattenPath flatten_path(const ChainForest& forest, GraphId g, PathKind kind);

/// Kind used for a graph: Left if it holds the left link, else Right if it
/// holds the right link, else Interior.
PathKind path_kind_for(const ChainForest& forest, GraphId g);

struct PullRequest {
    NodeId node = 0;
    NodeId target = 0;
    double magnitude = 0.0;
};

struct Rewire {
    NodeId current = 0;
    NodeId branch = 0;   // u, joins the path
    NodeId path_node = 0;  // v
};

struct FlattenAction {
    std::vector<PullRequest> pulls;
    std::optional<Rewire> rewire;
    FlattenPath path;  // extended when a rewire happens

    bool empty() const { return pulls.empty() && !rewire; }
};

/// One application of the flattening logic. Walks the path from the root to
/// the first node that has a tree neighbor off the path; pulls each such
/// neighbor u (ascending id) toward the path neighbor v of that node closest
/// to u with magnitude beta * f_dominant. The first u already within
/// 2Rs + touch_tol of its v is rewired: edge (current, v) is replaced by
/// (u, v) and u is spliced into the path.
/// The forest is not modified; see apply_rewire().
FlattenAction flatten_step(const ChainForest& forest, const FlattenPath& path, std::span<const Vec2> positions,
                           double f_dominant, double rs, const AlgoConfig& config);

/// Applies a rewire produced by flatten_step().
void apply_rewire(ChainForest& forest, const Rewire& rewire);

/// Unifies the two graphs of a dominant pair with the edge (dominant,
/// codominant). Requires the pair to touch (<= 2Rs + touch_tol) and to sit in
/// distinct graphs. All roots become stale.
GraphId merge_graphs(ChainForest& forest, const DominantPair& pair, std::span<const Vec2> positions, double rs,
                     const AlgoConfig& config);

}  // namespace chainbar::chain
