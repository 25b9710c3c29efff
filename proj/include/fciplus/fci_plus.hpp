#ifndef FCIPLUS_FCI_PLUS_HPP
#define FCIPLUS_FCI_PLUS_HPP

#include "fciplus/graph.hpp"
#include "fciplus/separation.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fciplus {

/// Minimal independence records, at most one per unordered node pair.
class IndependenceSet {
public:
    using const_iterator = std::map<NodePair, IndependenceRecord>::const_iterator;

    /// Stores `r` unless the pair already has a record (first one wins).
    bool add(IndependenceRecord r);
    const IndependenceRecord* find(NodeId x, NodeId y) const;
    bool contains(NodeId x, NodeId y) const { return find(x, y) != nullptr; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const_iterator begin() const { return records_.begin(); }
    const_iterator end() const { return records_.end(); }

    /// Pairs whose record is not a minimal separating set according to `o`.
    std::vector<NodePair> audit(IndependenceOracle& o) const;

private:
    std::map<NodePair, IndependenceRecord> records_;
};

/// Which record and which added node produced an arrowhead.
struct ArrowheadProvenance {
    NodeId at;     // the node W that receives the arrowhead
    NodeId other;  // the other endpoint T of the edge
    IndependenceRecord source;
};

/// Learned skeleton whose marks are circles or invariant arrowheads, with the
/// provenance of every arrowhead.
class AugmentedSkeleton {
public:
    AugmentedSkeleton() = default;
    /// Copies the adjacencies of `g`, resetting every mark to a circle.
    explicit AugmentedSkeleton(const MixedGraph& g);

    const MixedGraph& graph() const { return graph_; }
    const std::vector<ArrowheadProvenance>& provenance() const { return provenance_; }

    /// Sets an arrowhead at `at` on the edge to `other`; returns false if it was
    /// already there.
    bool add_arrowhead(NodeId at, NodeId other, const IndependenceRecord& source);
    /// Removes the edge along with the provenance of its arrowheads.
    bool remove_edge(NodeId x, NodeId y);

    /// Lines `arrowhead W on (W,T) from record (X,Y|Z)`.
    void write_provenance(std::ostream& out) const;

private:
    MixedGraph graph_;
    std::vector<ArrowheadProvenance> provenance_;
};

/// Candidate adjacent-anterior sets for the two ends of a pair.
struct AASeed {
    NodeSet from_x;
    NodeSet from_y;
};

struct Hierarchy {
    NodeSet seed;
    NodeSet nodes;
    /// Records whose separating set was merged in, in firing order.
    std::vector<NodePair> fired;
    std::size_t rounds = 0;
};

struct StageStats {
    std::string stage;
    std::uint64_t queries = 0;
    std::size_t candidates = 0;
    std::size_t removed = 0;
    double seconds = 0.0;
};

struct DiscoveryStats {
    std::vector<StageStats> stages;

    std::uint64_t total_queries() const;
    const StageStats* stage(const std::string& name) const;
    /// CSV `stage,queries,candidates,removed,seconds`, one row per stage plus
    /// `total`. Without timing the seconds column reads NA.
    void write_csv(std::ostream& out, bool timing = true) const;
};

struct SkeletonSearch {
    AugmentedSkeleton skeleton;
    IndependenceSet records;
    /// Largest conditioning-set size the search was allowed to use.
    std::size_t depth = 0;
};

/// PC adjacency search: for conditioning sizes 0..k, each remaining edge (X,Y)
/// is tested against subsets of the current Adj(X)\{Y}, then Adj(Y)\{X}. Found
/// separating sets are minimized before storage. With no k, k becomes the
/// largest adjacency size once sizes 0 and 1 have been processed.
SkeletonSearch pc_skeleton(IndependenceOracle& o, std::optional<std::size_t> k);

/// Adds the arrowheads implied by one record: for every W outside {X,Y} u Z
/// adjacent to that set, if W alone destroys the independence, W gets an
/// arrowhead on each of its edges into the set. Returns the number of new arrowheads.
std::size_t augment_with(AugmentedSkeleton& s, const IndependenceRecord& r, IndependenceOracle& o);

/// Augments a copy of `s` with every record of `records`. Idempotent.
AugmentedSkeleton augment(const AugmentedSkeleton& s, const IndependenceSet& records, IndependenceOracle& o);

/// Edges X-Y that are the middle link of a bidirected triple U<->X<->Y<->V with
/// U != V and U, V non-adjacent. Ascending pair order.
std::vector<NodePair> dsep_candidates(const MixedGraph& s);

/// Least fixpoint of: add the separating set of every record whose two nodes
/// are already included.
Hierarchy hierarchy(const NodeSet& seed, const IndependenceSet& records);

struct ResolveAttempt {
    NodeId x;
    NodeId y;
    AASeed seed;
    Hierarchy hierarchy;
    NodeSet separator;
    bool independent;
};

using AttemptObserver = std::function<void(const ResolveAttempt&)>;

struct Resolution {
    IndependenceRecord record;
    AASeed seed;
    Hierarchy hierarchy;
};

/// Tries seeds (A_X, A_Y) drawn from the current adjacencies of x and y, each of
/// size at most k, in ascending |A_X|+|A_Y| and then lexicographic order. The
/// hierarchy of {x,y} u A_X u A_Y minus {x,y} is tested as a separating set;
/// the first success is minimized and returned.
std::optional<Resolution> resolve_candidate(IndependenceOracle& o, NodeId x, NodeId y, const AugmentedSkeleton& s,
                                            const IndependenceSet& records, std::size_t k,
                                            const AttemptObserver& observer = {});

struct RemovedLink {
    NodeId x;
    NodeId y;
    Resolution resolution;
};

struct LoopState {
    const AugmentedSkeleton& skeleton;
    const IndependenceSet& records;
    const std::vector<NodePair>& candidates;
    const std::vector<NodePair>& failed;
};

struct RunOptions {
    /// Recompute all arrowheads from scratch after each removal instead of
    /// re-processing only the affected records.
    bool full_reaugment = false;
    std::function<void(const LoopState&)> on_iteration;
    AttemptObserver on_attempt;
};

struct DiscoveryResult {
    AugmentedSkeleton skeleton;
    IndependenceSet records;
    DiscoveryStats stats;
    std::vector<RemovedLink> removed;
    std::size_t k = 0;
};

/// PC search, augmentation, then repeated resolution of bidirected-triple
/// candidates until every remaining candidate has failed since the last removal.
DiscoveryResult fci_plus_run(IndependenceOracle& o, std::optional<std::size_t> k, const RunOptions& options = {});

}  // namespace fciplus

#endif  // FCIPLUS_FCI_PLUS_HPP
