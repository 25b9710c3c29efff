#include "fciplus/baseline.hpp"

#include "fciplus/combinations.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

namespace fciplus {

ExhaustiveSearch exhaustive_dsep_search(IndependenceOracle& o, const AugmentedSkeleton& s,
                                        const IndependenceSet& records, std::size_t cap) {
    const std::size_t n = s.graph().size();
    if (n > cap) {
        throw NodeCapExceeded("exhaustive search over " + std::to_string(n) + " nodes exceeds the cap of " +
                              std::to_string(cap));
    }
    const std::uint64_t before = o.query_count();
    ExhaustiveSearch out{s, records, {}, 0};

    for (const Edge& e : s.graph().edges()) {
        std::vector<NodeId> pool;
        for (NodeId w = 0; w < static_cast<NodeId>(n); ++w) {
            if (w != e.a && w != e.b) pool.push_back(w);
        }
        NodeSet found;
        const bool separated = for_each_subset_by_size(pool, pool.size(), [&](const std::vector<NodeId>& subset) {
            NodeSet z(subset.begin(), subset.end());
            if (!o.independent(e.a, e.b, z)) return false;
            found = std::move(z);
            return true;
        });
        if (!separated) continue;
        out.skeleton.remove_edge(e.a, e.b);
        out.records.add({e.a, e.b, minimize_sepset(o, e.a, e.b, found), true});
        out.removed.emplace_back(e.a, e.b);
    }
    out.queries = o.query_count() - before;
    return out;
}

DiscoveryResult exhaustive_run(IndependenceOracle& o, std::optional<std::size_t> k, std::size_t cap) {
    if (o.node_count() > cap) {
        throw NodeCapExceeded("exhaustive search over " + std::to_string(o.node_count()) +
                              " nodes exceeds the cap of " + std::to_string(cap));
    }
    DiscoveryResult out;
    auto last = std::chrono::steady_clock::now();
    std::uint64_t mark = o.query_count();
    auto close_stage = [&](std::string name, std::size_t candidates, std::size_t removed) {
        const auto now = std::chrono::steady_clock::now();
        const std::uint64_t q = o.query_count();
        out.stats.stages.push_back(
            {std::move(name), q - mark, candidates, removed, std::chrono::duration<double>(now - last).count()});
        mark = q;
        last = now;
    };

    SkeletonSearch pc = pc_skeleton(o, k);
    out.k = pc.depth;
    close_stage("pc", 0, 0);

    const std::size_t remaining = pc.skeleton.graph().edge_count();
    ExhaustiveSearch ex = exhaustive_dsep_search(o, pc.skeleton, pc.records, cap);
    out.records = std::move(ex.records);
    for (const auto& [x, y] : ex.removed) {
        const IndependenceRecord& r = *out.records.find(x, y);
        out.removed.push_back({x, y, {r, {}, {}}});
    }
    close_stage("exhaustive", remaining, ex.removed.size());

    out.skeleton = augment(AugmentedSkeleton(ex.skeleton.graph()), out.records, o);
    close_stage("augment", 0, 0);
    return out;
}

//============================ comparison ============================//

std::string_view to_string(PairVerdict v) {
    switch (v) {
        case PairVerdict::both_removed: return "both_removed";
        case PairVerdict::only_one: return "only_one";
        case PairVerdict::neither: return "neither";
    }
    return "?";
}

ArrowheadTally tally_arrowheads(const MixedGraph& first, const MixedGraph& second) {
    ArrowheadTally t;
    for (const Edge& e : first.edges()) {
        if (!second.adjacent(e.a, e.b)) continue;
        auto tally = [&t](Mark m1, Mark m2) {
            const bool a1 = m1 == Mark::arrow;
            const bool a2 = m2 == Mark::arrow;
            if (a1 && a2) {
                ++t.agree;
            } else if (a1 || a2) {
                const Mark other = a1 ? m2 : m1;
                if (other == Mark::tail) {
                    ++t.conflict;
                } else if (a1) {
                    ++t.only_first;
                } else {
                    ++t.only_second;
                }
            }
        };
        tally(e.at_a, *second.mark(e.a, e.b));
        tally(e.at_b, *second.mark(e.b, e.a));
    }
    return t;
}

bool ComparisonReport::skeletons_equal() const {
    for (const auto& p : pairs) {
        if (p.verdict == PairVerdict::only_one) return false;
    }
    return true;
}

bool ComparisonReport::full_agreement() const {
    return skeletons_equal() && a_vs_b.only_first == 0 && a_vs_b.only_second == 0 && a_vs_b.conflict == 0;
}

void ComparisonReport::write_csv(std::ostream& out, const std::vector<std::string>& names) const {
    out << "x,y,verdict,in_truth\n";
    for (const auto& p : pairs) {
        out << names.at(static_cast<std::size_t>(p.x)) << ',' << names.at(static_cast<std::size_t>(p.y)) << ','
            << to_string(p.verdict) << ',' << (p.in_truth ? 1 : 0) << '\n';
    }
}

void ComparisonReport::write_summary_csv(std::ostream& out) const {
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& p : pairs) ++counts[static_cast<int>(p.verdict)];
    out << "metric,value\n";
    out << "pairs_both_removed," << counts[0] << '\n';
    out << "pairs_only_one," << counts[1] << '\n';
    out << "pairs_neither," << counts[2] << '\n';
    auto tally = [&out](const char* prefix, const ArrowheadTally& t) {
        out << prefix << "_agree," << t.agree << '\n';
        out << prefix << "_only_first," << t.only_first << '\n';
        out << prefix << "_only_second," << t.only_second << '\n';
        out << prefix << "_conflict," << t.conflict << '\n';
    };
    tally("a_vs_b", a_vs_b);
    tally("a_vs_truth", a_vs_truth);
    tally("b_vs_truth", b_vs_truth);
    out << "query_ratio,";
    if (query_ratio) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *query_ratio);
        out << buf;
    } else {
        out << "NA";
    }
    out << '\n';
}

ComparisonReport compare_outputs(const MixedGraph& a, const MixedGraph& b, const MixedGraph& truth,
                                 std::optional<std::uint64_t> queries_a, std::optional<std::uint64_t> queries_b) {
    if (a.names() != b.names() || a.names() != truth.names()) {
        throw std::invalid_argument("compared graphs must have the same nodes in the same order");
    }
    ComparisonReport r;
    const auto n = static_cast<NodeId>(a.size());
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y = x + 1; y < n; ++y) {
            const bool in_a = a.adjacent(x, y);
            const bool in_b = b.adjacent(x, y);
            const PairVerdict v = in_a == in_b ? (in_a ? PairVerdict::neither : PairVerdict::both_removed)
                                               : PairVerdict::only_one;
            r.pairs.push_back({x, y, v, truth.adjacent(x, y)});
        }
    }
    r.a_vs_b = tally_arrowheads(a, b);
    r.a_vs_truth = tally_arrowheads(a, truth);
    r.b_vs_truth = tally_arrowheads(b, truth);
    if (queries_a && queries_b && *queries_b != 0) {
        r.query_ratio = static_cast<double>(*queries_a) / static_cast<double>(*queries_b);
    }
    return r;
}

}  // namespace fciplus
