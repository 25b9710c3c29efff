#ifndef FCIPLUS_GRAPH_HPP
#define FCIPLUS_GRAPH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fciplus {

using NodeId = int;
using NodeSet = std::set<NodeId>;
using NodePair = std::pair<NodeId, NodeId>;

/// Canonical (lower id first) form of an unordered pair.
inline NodePair make_pair_key(NodeId a, NodeId b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }

enum class Mark : std::uint8_t { tail, arrow, circle };

/// Role of a node in a causal model. Graph algorithms ignore it.
enum class NodeKind : std::uint8_t { observed, latent, selection };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

/// Edge between `a` < `b` with the mark at each endpoint.
struct Edge {
    NodeId a;
    NodeId b;
    Mark at_a;
    Mark at_b;

    bool operator==(const Edge&) const = default;
};

class MixedGraph;

/// Per-node ancestor and anterior sets of a graph snapshot, stored as dense
/// boolean rows: `is_ancestor(w, x)` means there is a directed path w -> ... -> x.
class AncestryCache {
public:
    explicit AncestryCache(const MixedGraph& g);

    bool is_ancestor(NodeId w, NodeId x) const { return ancestor_[index(w, x)]; }
    bool is_anterior(NodeId w, NodeId x) const { return anterior_[index(w, x)]; }

    NodeSet ancestors(NodeId x) const;
    NodeSet anteriors(NodeId x) const;

    /// Dense membership vector of An(xs) = union of An(x) for x in xs.
    std::vector<bool> ancestors_of(const NodeSet& xs) const;
    std::vector<bool> anteriors_of(const NodeSet& xs) const;

private:
    std::size_t index(NodeId w, NodeId x) const { return static_cast<std::size_t>(x) * n_ + static_cast<std::size_t>(w); }

    std::size_t n_;
    std::vector<bool> ancestor_;
    std::vector<bool> anterior_;
};

/// Graph with at most one edge per node pair, each edge carrying one mark per
/// endpoint. Specializes to DAGs (tail/arrow only, acyclic), MAGs, and learned
/// skeletons (circle marks).
class MixedGraph {
public:
    MixedGraph() = default;
    MixedGraph(const MixedGraph& other);
    MixedGraph(MixedGraph&& other) noexcept;
    MixedGraph& operator=(const MixedGraph& other);
    MixedGraph& operator=(MixedGraph&& other) noexcept;
    ~MixedGraph() = default;

    /// Adds a node; names must be non-empty, whitespace-free and unique.
    NodeId add_node(std::string name, NodeKind kind = NodeKind::observed);

    std::size_t size() const { return names_.size(); }
    bool contains(NodeId x) const { return x >= 0 && static_cast<std::size_t>(x) < names_.size(); }
    const std::string& name(NodeId x) const;
    NodeKind kind(NodeId x) const;
    void set_kind(NodeId x, NodeKind kind);
    std::optional<NodeId> find(std::string_view name) const;
    NodeId id_of(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

    /// Adds the edge x *-* y or replaces its marks. `at_x` is the mark at x.
    void set_edge(NodeId x, NodeId y, Mark at_x, Mark at_y);
    bool remove_edge(NodeId x, NodeId y);
    bool adjacent(NodeId x, NodeId y) const;

    /// Mark at `at` on the edge between `at` and `other`, if the edge exists.
    std::optional<Mark> mark(NodeId at, NodeId other) const;
    void set_mark(NodeId at, NodeId other, Mark m);

    const NodeSet& neighbors(NodeId x) const;
    std::vector<Edge> edges() const;
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t max_degree() const;
    bool has_circles() const;

    bool is_directed(NodeId from, NodeId to) const;
    bool is_bidirected(NodeId x, NodeId y) const;
    bool is_undirected(NodeId x, NodeId y) const;

    /// Shared snapshot of ancestor/anterior sets; recomputed after any mutation.
    std::shared_ptr<const AncestryCache> ancestry() const;

    /// Same nodes, names, kinds, edges and marks.
    bool operator==(const MixedGraph& other) const;

private:
    void check_node(NodeId x) const;
    void invalidate();

    std::vector<std::string> names_;
    std::vector<NodeKind> kinds_;
    std::unordered_map<std::string, NodeId> index_;
    std::map<NodePair, std::pair<Mark, Mark>> edges_;
    std::vector<NodeSet> adjacency_;

    mutable std::mutex cache_mutex_;
    mutable std::shared_ptr<const AncestryCache> cache_;
};

/// Nodes with a directed path to x, plus x itself.
NodeSet ancestors(const MixedGraph& g, NodeId x);
/// Nodes with an anterior path (undirected prefix, then directed) to x, plus x.
NodeSet anteriors(const MixedGraph& g, NodeId x);
NodeSet ancestors(const MixedGraph& g, const NodeSet& xs);
NodeSet anteriors(const MixedGraph& g, const NodeSet& xs);

enum class ViolationKind : std::uint8_t {
    circle_mark,              // circles are not allowed in a DAG or MAG
    directed_cycle,           // node lies on a directed cycle
    arrowhead_at_ancestor,    // arrowhead at `node` on edge to `other`, but node in An(other)
    arrowhead_at_undirected,  // `node` has an undirected edge and also an arrowhead
};

struct Violation {
    ViolationKind kind;
    NodeId node;
    NodeId other;  // -1 when not applicable

    bool operator==(const Violation&) const = default;
};

std::string describe(const MixedGraph& g, const Violation& v);

/// Structural ancestral-graph checks. Violations are data, never thrown.
std::vector<Violation> validate_ancestral(const MixedGraph& g);

/// Decides whether z separates x and y in g.
using SeparationTest = std::function<bool(const MixedGraph& g, NodeId x, NodeId y, const NodeSet& z)>;

/// Non-adjacent pairs for which no subset of the remaining nodes separates
/// them. Exhaustive: intended for roughly a dozen nodes.
std::vector<NodePair> validate_maximal(const MixedGraph& g, const SeparationTest& separated);

/// Copy of g with every mark replaced by a circle.
MixedGraph skeleton(const MixedGraph& g);

}  // namespace fciplus

#endif  // FCIPLUS_GRAPH_HPP
