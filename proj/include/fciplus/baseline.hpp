#ifndef FCIPLUS_BASELINE_HPP
#define FCIPLUS_BASELINE_HPP

#include "fciplus/fci_plus.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fciplus {

class NodeCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::size_t default_node_cap = 16;

struct ExhaustiveSearch {
    AugmentedSkeleton skeleton;
    IndependenceSet records;
    std::vector<NodePair> removed;
    /// Distinct oracle queries issued by this search.
    std::uint64_t queries = 0;
};

/// For each remaining edge in canonical order, tests every subset of the other
/// nodes in ascending size (lexicographic within a size) and removes the edge
/// at the first independence. Throws NodeCapExceeded above `cap` nodes.
ExhaustiveSearch exhaustive_dsep_search(IndependenceOracle& o, const AugmentedSkeleton& s,
                                        const IndependenceSet& records, std::size_t cap = default_node_cap);

/// PC search, exhaustive removal of the remaining separable edges, then
/// augmentation. Stages: pc, exhaustive, augment.
DiscoveryResult exhaustive_run(IndependenceOracle& o, std::optional<std::size_t> k,
                               std::size_t cap = default_node_cap);

enum class PairVerdict : std::uint8_t { both_removed, only_one, neither };

std::string_view to_string(PairVerdict v);

struct PairComparison {
    NodeId x;
    NodeId y;
    PairVerdict verdict;
    bool in_truth;
};

/// Arrowhead claims on edges present in both graphs. Circles claim nothing:
/// an arrowhead against a circle is unclaimed by the other side, an arrowhead
/// against a tail is a conflict.
struct ArrowheadTally {
    std::size_t agree = 0;
    std::size_t only_first = 0;
    std::size_t only_second = 0;
    std::size_t conflict = 0;

    bool operator==(const ArrowheadTally&) const = default;
};

ArrowheadTally tally_arrowheads(const MixedGraph& first, const MixedGraph& second);

struct ComparisonReport {
    /// Every unordered node pair, canonical order.
    std::vector<PairComparison> pairs;
    ArrowheadTally a_vs_b;
    ArrowheadTally a_vs_truth;
    ArrowheadTally b_vs_truth;
    /// queries(a) / queries(b) when both counts are known and b's is non-zero.
    std::optional<double> query_ratio;

    bool skeletons_equal() const;
    /// Same adjacencies and no arrowhead claimed by only one side or in conflict.
    bool full_agreement() const;

    /// `x,y,verdict,in_truth`, one row per pair.
    void write_csv(std::ostream& out, const std::vector<std::string>& names) const;
    /// `metric,value` rows with the arrowhead tallies and query ratio.
    void write_summary_csv(std::ostream& out) const;
};

/// Compares two learned graphs over the same nodes against a reference graph.
/// "Removed" means non-adjacent. Throws std::invalid_argument if the node names differ.
ComparisonReport compare_outputs(const MixedGraph& a, const MixedGraph& b, const MixedGraph& truth,
                                 std::optional<std::uint64_t> queries_a = {},
                                 std::optional<std::uint64_t> queries_b = {});

}  // namespace fciplus

#endif  // FCIPLUS_BASELINE_HPP
