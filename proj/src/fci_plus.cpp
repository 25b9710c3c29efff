#include "fciplus/fci_plus.hpp"

#include "fciplus/combinations.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <set>

namespace fciplus {

//============================ IndependenceSet ============================//

bool IndependenceSet::add(IndependenceRecord r) {
    const NodePair key = make_pair_key(r.x, r.y);
    return records_.emplace(key, std::move(r)).second;
}

const IndependenceRecord* IndependenceSet::find(NodeId x, NodeId y) const {
    auto it = records_.find(make_pair_key(x, y));
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<NodePair> IndependenceSet::audit(IndependenceOracle& o) const {
    std::vector<NodePair> bad;
    for (const auto& [pair, r] : records_) {
        if (!is_minimal_record(o, r)) bad.push_back(pair);
    }
    return bad;
}

//============================ AugmentedSkeleton ============================//

AugmentedSkeleton::AugmentedSkeleton(const MixedGraph& g) : graph_(skeleton(g)) {}

bool AugmentedSkeleton::add_arrowhead(NodeId at, NodeId other, const IndependenceRecord& source) {
    if (graph_.mark(at, other) == Mark::arrow) return false;
    graph_.set_mark(at, other, Mark::arrow);
    provenance_.push_back({at, other, source});
    return true;
}

bool AugmentedSkeleton::remove_edge(NodeId x, NodeId y) {
    if (!graph_.remove_edge(x, y)) return false;
    std::erase_if(provenance_, [&](const ArrowheadProvenance& p) {
        return make_pair_key(p.at, p.other) == make_pair_key(x, y);
    });
    return true;
}

void AugmentedSkeleton::write_provenance(std::ostream& out) const {
    const auto& names = graph_.names();
    for (const auto& p : provenance_) {
        out << "arrowhead " << names[static_cast<std::size_t>(p.at)] << " on (" << names[static_cast<std::size_t>(p.at)]
            << ',' << names[static_cast<std::size_t>(p.other)] << ") from record " << format_record(p.source, names)
            << '\n';
    }
}

//============================ DiscoveryStats ============================//

std::uint64_t DiscoveryStats::total_queries() const {
    std::uint64_t total = 0;
    for (const auto& s : stages) total += s.queries;
    return total;
}

const StageStats* DiscoveryStats::stage(const std::string& name) const {
    for (const auto& s : stages) {
        if (s.stage == name) return &s;
    }
    return nullptr;
}

void DiscoveryStats::write_csv(std::ostream& out, bool timing) const {
    auto row = [&out, timing](const StageStats& s) {
        char seconds[32] = "NA";
        if (timing) std::snprintf(seconds, sizeof seconds, "%.6f", s.seconds);
        out << s.stage << ',' << s.queries << ',' << s.candidates << ',' << s.removed << ',' << seconds << '\n';
    };
    out << "stage,queries,candidates,removed,seconds\n";
    StageStats total{"total"};
    for (const auto& s : stages) {
        row(s);
        total.queries += s.queries;
        total.candidates += s.candidates;
        total.removed += s.removed;
        total.seconds += s.seconds;
    }
    row(total);
}

//============================ PC search ============================//

namespace {

bool separate_from(IndependenceOracle& o, NodeId x, NodeId y, std::vector<NodeId> pool, std::size_t size,
                   NodeSet& found) {
    return for_each_combination(pool, size, [&](const std::vector<NodeId>& subset) {
        NodeSet z(subset.begin(), subset.end());
        if (o.independent(x, y, z)) {
            found = std::move(z);
            return true;
        }
        return false;
    });
}

std::vector<NodeId> others(const MixedGraph& g, NodeId x, NodeId excluded) {
    std::vector<NodeId> out;
    for (NodeId w : g.neighbors(x)) {
        if (w != excluded) out.push_back(w);
    }
    return out;
}

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

SkeletonSearch pc_skeleton(IndependenceOracle& o, std::optional<std::size_t> k) {
    MixedGraph complete;
    for (const auto& name : o.names()) complete.add_node(name);
    const auto n = static_cast<NodeId>(complete.size());
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y = x + 1; y < n; ++y) complete.set_edge(x, y, Mark::circle, Mark::circle);
    }

    SkeletonSearch out{AugmentedSkeleton(complete), {}, k.value_or(1)};
    const MixedGraph& g = out.skeleton.graph();

    for (std::size_t level = 0;; ++level) {
        if (!k && level == 2) out.depth = std::max<std::size_t>(g.max_degree(), 1);
        if (level > out.depth) break;
        if (g.max_degree() < level + 1) break;
        for (const Edge& e : g.edges()) {
            if (!g.adjacent(e.a, e.b)) continue;
            NodeSet found;
            bool separated = separate_from(o, e.a, e.b, others(g, e.a, e.b), level, found) ||
                             separate_from(o, e.a, e.b, others(g, e.b, e.a), level, found);
            if (!separated) continue;
            out.skeleton.remove_edge(e.a, e.b);
            out.records.add({e.a, e.b, minimize_sepset(o, e.a, e.b, found), true});
        }
    }
    return out;
}

//============================ augmentation ============================//

std::size_t augment_with(AugmentedSkeleton& s, const IndependenceRecord& r, IndependenceOracle& o) {
    const MixedGraph& g = s.graph();
    NodeSet members = r.z;
    members.insert(r.x);
    members.insert(r.y);

    NodeSet candidates;
    for (NodeId m : members) {
        for (NodeId w : g.neighbors(m)) {
            if (!members.contains(w)) candidates.insert(w);
        }
    }

    std::size_t added = 0;
    for (NodeId w : candidates) {
        if (!single_node_dependence(o, r.x, r.y, r.z, w)) continue;
        for (NodeId m : members) {
            if (g.adjacent(w, m) && s.add_arrowhead(w, m, r)) ++added;
        }
    }
    return added;
}

AugmentedSkeleton augment(const AugmentedSkeleton& s, const IndependenceSet& records, IndependenceOracle& o) {
    AugmentedSkeleton out = s;
    for (const auto& [pair, r] : records) augment_with(out, r, o);
    return out;
}

//============================ candidates and hierarchy ============================//

std::vector<NodePair> dsep_candidates(const MixedGraph& s) {
    std::vector<NodePair> out;
    for (const Edge& e : s.edges()) {
        if (e.at_a != Mark::arrow || e.at_b != Mark::arrow) continue;
        const NodeId x = e.a;
        const NodeId y = e.b;
        bool found = false;
        for (NodeId u : s.neighbors(x)) {
            if (u == y || !s.is_bidirected(u, x)) continue;
            for (NodeId v : s.neighbors(y)) {
                if (v == x || v == u || !s.is_bidirected(y, v) || s.adjacent(u, v)) continue;
                found = true;
                break;
            }
            if (found) break;
        }
        if (found) out.emplace_back(x, y);
    }
    return out;
}

Hierarchy hierarchy(const NodeSet& seed, const IndependenceSet& records) {
    Hierarchy h{seed, seed, {}, 0};
    std::set<NodePair> used;
    bool grew = true;
    while (grew) {
        grew = false;
        const NodeSet current = h.nodes;
        for (const auto& [pair, r] : records) {
            if (used.contains(pair) || !current.contains(r.x) || !current.contains(r.y)) continue;
            used.insert(pair);
            h.fired.push_back(pair);
            for (NodeId w : r.z) grew = h.nodes.insert(w).second || grew;
        }
        if (grew) ++h.rounds;
    }
    return h;
}

//============================ candidate resolution ============================//

std::optional<Resolution> resolve_candidate(IndependenceOracle& o, NodeId x, NodeId y, const AugmentedSkeleton& s,
                                            const IndependenceSet& records, std::size_t k,
                                            const AttemptObserver& observer) {
    const MixedGraph& g = s.graph();
    const std::vector<NodeId> adj_x = others(g, x, y);
    const std::vector<NodeId> adj_y = others(g, y, x);
    const std::size_t max_x = std::min(k, adj_x.size());
    const std::size_t max_y = std::min(k, adj_y.size());

    std::optional<Resolution> result;
    for (std::size_t total = 0; total <= max_x + max_y && !result; ++total) {
        const std::size_t lo = total > max_y ? total - max_y : 0;
        for (std::size_t sx = lo; sx <= std::min(total, max_x) && !result; ++sx) {
            const std::size_t sy = total - sx;
            for_each_combination(adj_x, sx, [&](const std::vector<NodeId>& ax) {
                return for_each_combination(adj_y, sy, [&](const std::vector<NodeId>& ay) {
                    AASeed seed{NodeSet(ax.begin(), ax.end()), NodeSet(ay.begin(), ay.end())};
                    NodeSet start = seed.from_x;
                    start.insert(seed.from_y.begin(), seed.from_y.end());
                    start.insert(x);
                    start.insert(y);
                    Hierarchy h = hierarchy(start, records);
                    NodeSet q = h.nodes;
                    q.erase(x);
                    q.erase(y);
                    const bool independent = o.independent(x, y, q);
                    if (observer) observer({x, y, seed, h, q, independent});
                    if (!independent) return false;
                    result = Resolution{{x, y, minimize_sepset(o, x, y, q), true}, std::move(seed), std::move(h)};
                    return true;
                });
            });
        }
    }
    return result;
}

//============================ outer loop ============================//

DiscoveryResult fci_plus_run(IndependenceOracle& o, std::optional<std::size_t> k, const RunOptions& options) {
    DiscoveryResult out;
    Stopwatch clock;
    std::uint64_t mark = o.query_count();
    auto close_stage = [&](std::string name, std::size_t candidates, std::size_t removed) {
        const std::uint64_t now = o.query_count();
        out.stats.stages.push_back({std::move(name), now - mark, candidates, removed, clock.lap()});
        mark = now;
    };

    SkeletonSearch pc = pc_skeleton(o, k);
    out.k = pc.depth;
    out.records = std::move(pc.records);
    close_stage("pc", 0, 0);

    out.skeleton = augment(pc.skeleton, out.records, o);
    close_stage("augment", 0, 0);

    std::vector<NodePair> failed;
    std::size_t examined = 0;
    while (true) {
        const std::vector<NodePair> candidates = dsep_candidates(out.skeleton.graph());
        if (options.on_iteration) options.on_iteration({out.skeleton, out.records, candidates, failed});

        auto next = std::find_if(candidates.begin(), candidates.end(), [&](const NodePair& c) {
            return std::find(failed.begin(), failed.end(), c) == failed.end();
        });
        if (next == candidates.end()) break;
        const auto [x, y] = *next;
        ++examined;

        auto resolution = resolve_candidate(o, x, y, out.skeleton, out.records, out.k, options.on_attempt);
        if (!resolution) {
            failed.push_back(*next);
            continue;
        }

        out.skeleton.remove_edge(x, y);
        const IndependenceRecord record = resolution->record;
        out.records.add(record);
        out.removed.push_back({x, y, std::move(*resolution)});
        failed.clear();

        if (options.full_reaugment) {
            out.skeleton = augment(AugmentedSkeleton(out.skeleton.graph()), out.records, o);
        } else {
            augment_with(out.skeleton, record, o);
            for (const auto& [pair, r] : out.records) {
                const bool touches = r.x == x || r.y == x || r.x == y || r.y == y || r.z.contains(x) || r.z.contains(y);
                if (touches && make_pair_key(r.x, r.y) != make_pair_key(x, y)) augment_with(out.skeleton, r, o);
            }
        }
    }
    close_stage("dsep", examined, out.removed.size());
    return out;
}

}  // namespace fciplus
