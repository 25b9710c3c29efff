#include "fciplus/model_gen.hpp"

#include "fciplus/separation.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace fciplus {

//============================ CausalModel ============================//

CausalModel::CausalModel(MixedGraph dag) : dag_(std::move(dag)) {
    for (const Edge& e : dag_.edges()) {
        const bool directed = (e.at_a == Mark::tail && e.at_b == Mark::arrow) ||
                              (e.at_a == Mark::arrow && e.at_b == Mark::tail);
        if (!directed) throw std::invalid_argument("causal model may only contain directed edges");
    }
    for (const Violation& v : validate_ancestral(dag_)) {
        if (v.kind == ViolationKind::directed_cycle) throw std::invalid_argument("causal model must be acyclic");
    }
}

NodeSet CausalModel::of_kind(NodeKind kind) const {
    NodeSet out;
    for (NodeId x = 0; x < static_cast<NodeId>(dag_.size()); ++x) {
        if (dag_.kind(x) == kind) out.insert(x);
    }
    return out;
}

//============================ random generation ============================//

namespace {

// Distribution helpers written out so that a seed gives the same model with any
// standard library (std:: distributions are implementation-defined).
double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[bounded(rng, i)]);
}

MixedGraph sample_dag(const GenConfig& cfg, double p, std::mt19937_64& rng) {
    MixedGraph g;
    for (std::size_t i = 0; i < cfg.n_observed; ++i) g.add_node("X" + std::to_string(i + 1), NodeKind::observed);
    for (std::size_t i = 0; i < cfg.n_latent; ++i) g.add_node("L" + std::to_string(i + 1), NodeKind::latent);
    for (std::size_t i = 0; i < cfg.n_selection; ++i) g.add_node("S" + std::to_string(i + 1), NodeKind::selection);

    std::vector<NodeId> latent;
    std::vector<NodeId> observed;
    std::vector<NodeId> selection;
    for (NodeId x = 0; x < static_cast<NodeId>(g.size()); ++x) {
        switch (g.kind(x)) {
            case NodeKind::observed: observed.push_back(x); break;
            case NodeKind::latent: latent.push_back(x); break;
            case NodeKind::selection: selection.push_back(x); break;
        }
    }
    shuffle(latent, rng);
    shuffle(observed, rng);
    shuffle(selection, rng);

    std::vector<NodeId> order = latent;
    order.insert(order.end(), observed.begin(), observed.end());
    const std::size_t causes = order.size();
    order.insert(order.end(), selection.begin(), selection.end());

    const std::size_t cap = cfg.dag_degree_cap.value_or(std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < causes; ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            // draw first so the cap does not shift the random stream
            if (unit_real(rng) >= p) continue;
            if (g.neighbors(order[i]).size() >= cap || g.neighbors(order[j]).size() >= cap) continue;
            g.set_edge(order[i], order[j], Mark::tail, Mark::arrow);
        }
    }
    return g;
}

}  // namespace

double effective_edge_probability(const GenConfig& cfg) {
    if (cfg.edge_probability) return *cfg.edge_probability;
    const std::size_t n = cfg.n_observed + cfg.n_latent + cfg.n_selection;
    if (n < 2) return 0.0;
    return std::min(1.0, 2.0 / static_cast<double>(n - 1));
}

CausalModel random_model(const GenConfig& cfg) {
    const double p = effective_edge_probability(cfg);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        CausalModel model(sample_dag(cfg, p, rng));
        if (project_to_mag(model, AdjacencyMethod::inducing_path).max_degree() <= cfg.max_degree) return model;
    }
    throw GenerationError("no model with projected degree <= " + std::to_string(cfg.max_degree) + " in " +
                          std::to_string(cfg.max_attempts) + " attempts");
}

//============================ projection ============================//

namespace {

// Marginal ancestral graph of `base` over `keep`, with `conditioned` always in
// the separating set. For a DAG with selection nodes this is the MAG projection;
// with `conditioned` empty it is MAG marginalization.
MixedGraph build_marginal(const MixedGraph& base, const std::vector<NodeId>& keep, const NodeSet& conditioned,
                          AdjacencyMethod method) {
    if (method == AdjacencyMethod::automatic) {
        method = keep.size() <= 10 ? AdjacencyMethod::exhaustive : AdjacencyMethod::inducing_path;
    }
    const auto cache = base.ancestry();

    auto anterior_to = [&](NodeId w, const NodeSet& targets) {
        for (NodeId t : targets) {
            if (cache->is_anterior(w, t)) return true;
        }
        return false;
    };

    auto separable = [&](NodeId x, NodeId y) {
        if (method == AdjacencyMethod::inducing_path) {
            NodeSet targets = conditioned;
            targets.insert(x);
            targets.insert(y);
            NodeSet z = conditioned;
            for (NodeId w : keep) {
                if (w != x && w != y && anterior_to(w, targets)) z.insert(w);
            }
            return m_separated(base, x, y, z);
        }
        std::vector<NodeId> pool;
        for (NodeId w : keep) {
            if (w != x && w != y) pool.push_back(w);
        }
        const std::size_t subsets = std::size_t{1} << pool.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            NodeSet z = conditioned;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (mask & (std::size_t{1} << i)) z.insert(pool[i]);
            }
            if (m_separated(base, x, y, z)) return true;
        }
        return false;
    };

    MixedGraph out;
    for (NodeId x : keep) out.add_node(base.name(x), base.kind(x));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t j = i + 1; j < keep.size(); ++j) {
            const NodeId x = keep[i];
            const NodeId y = keep[j];
            if (separable(x, y)) continue;
            NodeSet ty = conditioned;
            ty.insert(y);
            NodeSet tx = conditioned;
            tx.insert(x);
            const Mark at_x = anterior_to(x, ty) ? Mark::tail : Mark::arrow;
            const Mark at_y = anterior_to(y, tx) ? Mark::tail : Mark::arrow;
            out.set_edge(static_cast<NodeId>(i), static_cast<NodeId>(j), at_x, at_y);
        }
    }
    return out;
}

}  // namespace

MixedGraph project_to_mag(const CausalModel& m, AdjacencyMethod method) {
    const NodeSet obs = m.observed();
    return build_marginal(m.dag(), std::vector<NodeId>(obs.begin(), obs.end()), m.selection(), method);
}

MixedGraph marginalize_mag(const MixedGraph& g, const NodeSet& drop, AdjacencyMethod method) {
    std::vector<NodeId> keep;
    for (NodeId x = 0; x < static_cast<NodeId>(g.size()); ++x) {
        if (!drop.contains(x)) keep.push_back(x);
    }
    return build_marginal(g, keep, {}, method);
}

}  // namespace fciplus
