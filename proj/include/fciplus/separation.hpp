#ifndef FCIPLUS_SEPARATION_HPP
#define FCIPLUS_SEPARATION_HPP

#include "fciplus/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace fciplus {

/// Statement "x is independent of y given z". `minimal` marks a set from which
/// no single element can be dropped without losing the independence.
struct IndependenceRecord {
    NodeId x = -1;
    NodeId y = -1;
    NodeSet z;
    bool minimal = false;

    bool operator==(const IndependenceRecord&) const = default;
};

/// Renders a record as "(X,Y|A,B)".
std::string format_record(const IndependenceRecord& r, const std::vector<std::string>& names);

/// m-separation by reachability over (node, arrived-through-arrowhead) states.
/// A node may be passed as a collider only if it is an ancestor of z, and as a
/// noncollider only if it is not in z. Throws on circle marks, x == y, or x/y in z.
bool m_separated(const MixedGraph& g, NodeId x, NodeId y, const NodeSet& z);

/// Literal path-blocking check over every simple path between x and y.
/// Exponential; only meant as a reference for small graphs.
bool m_separated_bruteforce(const MixedGraph& g, NodeId x, NodeId y, const NodeSet& z);

struct QueryLogEntry {
    NodeId x;
    NodeId y;
    NodeSet z;
    bool independent;
};

/// Conditional-independence query interface. Answers are memoized on
/// (min(x,y), max(x,y), z); `query_count()` counts distinct evaluated queries only.
/// Safe to query from several threads.
class IndependenceOracle {
public:
    explicit IndependenceOracle(std::vector<std::string> names);
    virtual ~IndependenceOracle() = default;

    IndependenceOracle(const IndependenceOracle&) = delete;
    IndependenceOracle& operator=(const IndependenceOracle&) = delete;

    bool independent(NodeId x, NodeId y, const NodeSet& z);

    std::uint64_t query_count() const;
    std::size_t node_count() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    /// Distinct queries in the order they were first evaluated.
    std::vector<QueryLogEntry> query_log() const;
    /// CSV lines `x,y,"z1;z2",answer` with node names and answer
    /// `independent` or `dependent`.
    void write_query_log_csv(std::ostream& out) const;

protected:
    virtual bool evaluate(NodeId x, NodeId y, const NodeSet& z) const = 0;

private:
    struct Key {
        NodeId lo;
        NodeId hi;
        std::vector<NodeId> z;
        auto operator<=>(const Key&) const = default;
    };

    std::vector<std::string> names_;
    mutable std::mutex mutex_;
    std::map<Key, bool> memo_;
    std::vector<QueryLogEntry> log_;
};

/// Oracle that answers by m-separation in a fixed graph (faithfulness).
class MagOracle final : public IndependenceOracle {
public:
    explicit MagOracle(MixedGraph g);
    const MixedGraph& graph() const { return graph_; }

protected:
    bool evaluate(NodeId x, NodeId y, const NodeSet& z) const override;

private:
    MixedGraph graph_;
    std::shared_ptr<const AncestryCache> ancestry_;
};

std::unique_ptr<MagOracle> oracle_from_mag(const MixedGraph& g);

/// Drops redundant members of a separating set one by one, scanning in
/// ascending id order and restarting after each removal. Uses at most |z|^2
/// queries beyond the precondition check. Throws if x and y are dependent given z.
NodeSet minimize_sepset(IndependenceOracle& o, NodeId x, NodeId y, const NodeSet& z);

/// True iff adding w to the separating set z makes x and y dependent.
bool single_node_dependence(IndependenceOracle& o, NodeId x, NodeId y, const NodeSet& z, NodeId w);

/// Re-checks the minimality claim of a record against the oracle.
bool is_minimal_record(IndependenceOracle& o, const IndependenceRecord& r);

}  // namespace fciplus

#endif  // FCIPLUS_SEPARATION_HPP
