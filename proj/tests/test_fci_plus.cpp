#include "doctest.h"

#include "fciplus/fci_plus.hpp"
#include "fciplus/graph_io.hpp"
#include "planted.hpp"
#include "truth.hpp"

#include <sstream>

using namespace fciplus;
using truth::ids;

namespace {

struct M5 {
    MixedGraph g = truth::load("m5.mag");
    NodeId x = g.id_of("X"), y = g.id_of("Y"), u = g.id_of("U"), v = g.id_of("V"), z = g.id_of("Z");
};

MixedGraph collider() { return parse_graph("node A\nnode B\nnode C\nedge A --> C\nedge B --> C\n"); }

// Marks of a learned graph as "A tok B" lines, for compact comparisons.
std::string marks(const MixedGraph& g) {
    std::string out;
    for (const Edge& e : g.edges()) out += edge_string(g, e.a, e.b) + "\n";
    return out;
}

}  // namespace

TEST_CASE("IndependenceSet keeps the first record per pair") {
    IndependenceSet s;
    CHECK(s.empty());
    CHECK(s.add({2, 1, {0}, true}));
    CHECK_FALSE(s.add({1, 2, {3}, true}));
    CHECK(s.size() == 1);
    REQUIRE(s.find(1, 2) != nullptr);
    CHECK(s.find(2, 1)->z == NodeSet{0});
    CHECK(s.contains(1, 2));
    CHECK_FALSE(s.contains(0, 1));
}

TEST_CASE("pc_skeleton on the five-node fixture") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    MixedGraph expected = skeleton(m.g);
    expected.set_edge(m.x, m.y, Mark::circle, Mark::circle);
    CHECK(pc.skeleton.graph() == expected);
    CHECK(pc.depth == 3);
    REQUIRE(pc.records.size() == 3);
    CHECK(pc.records.find(m.x, m.z)->z == NodeSet{m.v});
    CHECK(pc.records.find(m.y, m.z)->z == NodeSet{m.u});
    CHECK(pc.records.find(m.u, m.v)->z == NodeSet{m.z});
    CHECK(pc.records.audit(o).empty());
    CHECK(pc.skeleton.provenance().empty());
}

TEST_CASE("pc_skeleton small cases") {
    const MixedGraph c = collider();
    MagOracle o(c);
    const SkeletonSearch pc = pc_skeleton(o, 1);
    CHECK(pc.skeleton.graph() == skeleton(c));
    REQUIRE(pc.records.size() == 1);
    CHECK(pc.records.find(0, 1)->z.empty());

    const MixedGraph empty = parse_graph("node A\nnode B\nnode C\n");
    MagOracle e(empty);
    const SkeletonSearch pe = pc_skeleton(e, 2);
    CHECK(pe.skeleton.graph().edge_count() == 0);
    CHECK(pe.records.size() == 3);
    for (const auto& [pair, r] : pe.records) CHECK(r.z.empty());
    CHECK(e.query_count() == 3);

    MagOracle none(MixedGraph{});
    CHECK(pc_skeleton(none, std::nullopt).records.empty());
}

TEST_CASE("pc_skeleton picks a depth when none is given") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, std::nullopt);
    CHECK(pc.depth == 3);  // largest adjacency after the size-0 and size-1 passes
    CHECK(pc.records.size() == 3);
}

TEST_CASE("augment the five-node fixture") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    const AugmentedSkeleton s = augment(pc.skeleton, pc.records, o);
    CHECK(marks(s.graph()) ==
          "X <-> Y\nX <-> U\nX <-o V\nY <-o U\nY <-> V\nU <-o Z\nV <-o Z\n");

    // every arrowhead has a provenance entry naming its record
    std::size_t arrowheads = 0;
    for (const Edge& e : s.graph().edges()) {
        arrowheads += (e.at_a == Mark::arrow) + (e.at_b == Mark::arrow);
    }
    CHECK(s.provenance().size() == arrowheads);
    for (const auto& p : s.provenance()) {
        CHECK(s.graph().mark(p.at, p.other) == Mark::arrow);
        CHECK(pc.records.find(p.source.x, p.source.y) != nullptr);
    }
    std::ostringstream log;
    s.write_provenance(log);
    CHECK(log.str().find("arrowhead U on (U,Z) from record (X,Z|V)\n") != std::string::npos);

    // idempotent
    const AugmentedSkeleton again = augment(s, pc.records, o);
    CHECK(again.graph() == s.graph());
    CHECK(again.provenance().size() == s.provenance().size());
}

TEST_CASE("augment small cases") {
    const MixedGraph chain = parse_graph("node A\nnode B\nnode C\nedge A --> B\nedge B --> C\n");
    MagOracle oc(chain);
    const SkeletonSearch pcc = pc_skeleton(oc, 1);
    CHECK(augment(pcc.skeleton, pcc.records, oc).graph() == skeleton(chain));

    const MixedGraph c = collider();
    MagOracle o(c);
    const SkeletonSearch pc = pc_skeleton(o, 1);
    CHECK(marks(augment(pc.skeleton, pc.records, o).graph()) == "A o-> C\nB o-> C\n");
}

TEST_CASE("removing an edge drops its provenance") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    AugmentedSkeleton s = augment(pc.skeleton, pc.records, o);
    const std::size_t before = s.provenance().size();
    CHECK(s.remove_edge(m.x, m.y));
    CHECK(s.provenance().size() == before - 2);
    CHECK_FALSE(s.remove_edge(m.x, m.y));
}

TEST_CASE("dsep_candidates") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    const AugmentedSkeleton s = augment(pc.skeleton, pc.records, o);
    CHECK(dsep_candidates(s.graph()) == std::vector<NodePair>{{m.x, m.y}});

    MagOracle oc(collider());
    const SkeletonSearch pcc = pc_skeleton(oc, 1);
    CHECK(dsep_candidates(augment(pcc.skeleton, pcc.records, oc).graph()).empty());

    AugmentedSkeleton trimmed = s;
    trimmed.remove_edge(m.x, m.y);
    CHECK(dsep_candidates(trimmed.graph()).empty());

    // U and V adjacent: no candidate
    MixedGraph closed = s.graph();
    closed.set_edge(m.u, m.v, Mark::circle, Mark::circle);
    CHECK(dsep_candidates(closed).empty());
}

TEST_CASE("hierarchy") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    const Hierarchy h = hierarchy({m.x, m.y, m.u, m.v}, pc.records);
    CHECK(h.nodes == NodeSet{m.x, m.y, m.u, m.v, m.z});
    CHECK(h.seed == NodeSet{m.x, m.y, m.u, m.v});
    CHECK(h.fired == std::vector<NodePair>{{m.u, m.v}, {m.x, m.z}, {m.y, m.z}});
    CHECK(h.rounds == 1);

    const Hierarchy single = hierarchy({0}, IndependenceSet{});
    CHECK(single.nodes == NodeSet{0});
    CHECK(single.rounds == 0);

    // two rounds: {A,B} pulls in C through (A,B|C), then (C,A|D) pulls in D
    IndependenceSet chain;
    chain.add({0, 1, {2}, true});
    chain.add({2, 0, {3}, true});
    chain.add({4, 5, {6}, true});
    const Hierarchy two = hierarchy({0, 1}, chain);
    CHECK(two.nodes == NodeSet{0, 1, 2, 3});
    CHECK(two.rounds == 2);
}

TEST_CASE("resolve_candidate on the five-node fixture") {
    M5 m;
    MagOracle o(m.g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    const AugmentedSkeleton s = augment(pc.skeleton, pc.records, o);

    std::vector<ResolveAttempt> attempts;
    const auto r = resolve_candidate(o, m.x, m.y, s, pc.records, 3,
                                     [&](const ResolveAttempt& a) { attempts.push_back(a); });
    REQUIRE(r.has_value());
    CHECK(r->record.z == NodeSet{m.u, m.v, m.z});
    CHECK(r->record.minimal);
    CHECK(r->seed.from_x.empty());
    CHECK(r->seed.from_y == NodeSet{m.u, m.v});
    CHECK(r->hierarchy.nodes == NodeSet{m.x, m.y, m.u, m.v, m.z});

    // sizes are tried in ascending total order
    REQUIRE(attempts.size() == 6);
    CHECK(attempts[0].separator.empty());
    for (std::size_t i = 1; i < 5; ++i) CHECK(attempts[i].seed.from_x.size() + attempts[i].seed.from_y.size() == 1);
    CHECK(attempts.back().independent);
    for (std::size_t i = 0; i + 1 < attempts.size(); ++i) CHECK_FALSE(attempts[i].independent);

    // with k = 0 only the empty seed is available
    CHECK_FALSE(resolve_candidate(o, m.x, m.y, s, pc.records, 0).has_value());
}

TEST_CASE("resolve_candidate fails on a genuine edge") {
    // the five-node fixture with X <-> Y added is still maximal ancestral
    MixedGraph g = truth::load("m5.mag");
    g.set_edge(g.id_of("X"), g.id_of("Y"), Mark::arrow, Mark::arrow);
    REQUIRE(validate_ancestral(g).empty());
    REQUIRE(validate_maximal(g, m_separated).empty());
    MagOracle o(g);
    const SkeletonSearch pc = pc_skeleton(o, 3);
    const AugmentedSkeleton s = augment(pc.skeleton, pc.records, o);
    CHECK_FALSE(resolve_candidate(o, g.id_of("X"), g.id_of("Y"), s, pc.records, 3).has_value());
    CHECK_FALSE(truth::separable_within(g, g.id_of("X"), g.id_of("Y"), truth::all_nodes_except(g, {0, 1})));
}

TEST_CASE("fci_plus_run on the five-node fixture") {
    M5 m;
    MagOracle o(m.g);
    const DiscoveryResult r = fci_plus_run(o, 3);
    CHECK(skeleton(r.skeleton.graph()) == skeleton(m.g));
    CHECK(marks(r.skeleton.graph()) == "X <-> U\nX <-o V\nY <-o U\nY <-> V\nU <-o Z\nV <-o Z\n");
    REQUIRE(r.removed.size() == 1);
    CHECK(make_pair_key(r.removed[0].x, r.removed[0].y) == NodePair{m.x, m.y});
    CHECK(r.removed[0].resolution.record.z == NodeSet{m.u, m.v, m.z});
    CHECK(r.records.size() == 4);
    CHECK(r.records.audit(o).empty());

    const StageStats* dsep = r.stats.stage("dsep");
    REQUIRE(dsep != nullptr);
    CHECK(dsep->removed == 1);
    CHECK(dsep->candidates == 1);
    CHECK(r.stats.total_queries() == o.query_count());
}

TEST_CASE("without D-sep links the loop leaves the augmented PC result unchanged") {
    std::size_t checked = 0;
    for (std::size_t i = 0; i < 40; ++i) {
        const MixedGraph mag = project_to_mag(random_model(truth::suite_config(i, 4, 10, 31)));
        if (!truth::dsep_links(mag).empty()) continue;
        MagOracle o(mag);
        const SkeletonSearch pc = pc_skeleton(o, 3);
        const AugmentedSkeleton aug = augment(pc.skeleton, pc.records, o);
        MagOracle o2(mag);
        std::size_t iterations = 0;
        RunOptions opts;
        opts.on_iteration = [&](const LoopState&) { ++iterations; };
        const DiscoveryResult r = fci_plus_run(o2, 3, opts);
        CHECK(r.removed.empty());
        CHECK(r.skeleton.graph() == aug.graph());
        CHECK(iterations >= 1);
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("incremental and full re-augmentation agree") {
    for (std::size_t i = 0; i < 60; ++i) {
        const bool planted = i % 2 == 0;
        const CausalModel model = planted ? truth::planted_model(truth::planted_config(i, 41))
                                          : random_model(truth::suite_config(i, 4, 12, 41));
        const MixedGraph mag = project_to_mag(model);
        MagOracle a(mag);
        MagOracle b(mag);
        RunOptions full;
        full.full_reaugment = true;
        const DiscoveryResult ri = fci_plus_run(a, 3);
        const DiscoveryResult rf = fci_plus_run(b, 3, full);
        CHECK(ri.skeleton.graph() == rf.skeleton.graph());
        CHECK(ri.records.size() == rf.records.size());
        // the final arrowheads are exactly those a fresh augmentation derives
        const AugmentedSkeleton fresh = augment(AugmentedSkeleton(ri.skeleton.graph()), ri.records, a);
        CHECK(fresh.graph() == ri.skeleton.graph());
    }
}

TEST_CASE("stage statistics add up") {
    for (std::size_t i = 0; i < 20; ++i) {
        const MixedGraph mag = project_to_mag(truth::planted_model(truth::planted_config(i, 43)));
        MagOracle o(mag);
        const DiscoveryResult r = fci_plus_run(o, 3);
        REQUIRE(r.stats.stages.size() == 3);
        CHECK(r.stats.stages[0].stage == "pc");
        CHECK(r.stats.stages[1].stage == "augment");
        CHECK(r.stats.stages[2].stage == "dsep");
        CHECK(r.stats.total_queries() == o.query_count());
        CHECK(r.stats.stage("dsep")->removed == r.removed.size());
        for (const auto& s : r.stats.stages) CHECK(s.seconds >= 0.0);

        std::ostringstream csv;
        r.stats.write_csv(csv, false);
        const std::string text = csv.str();
        CHECK(text.rfind("stage,queries,candidates,removed,seconds\npc,", 0) == 0);
        CHECK(text.find("\ntotal," + std::to_string(o.query_count()) + ",") != std::string::npos);
        CHECK(text.find("0.") == std::string::npos);
    }
}
