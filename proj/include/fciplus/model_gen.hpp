#ifndef FCIPLUS_MODEL_GEN_HPP
#define FCIPLUS_MODEL_GEN_HPP

#include "fciplus/graph.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace fciplus {

/// Ground-truth causal model: a DAG whose node kinds partition the nodes into
/// observed, latent and selection variables.
class CausalModel {
public:
    CausalModel() = default;
    /// Throws std::invalid_argument unless `dag` has only directed edges and no cycle.
    explicit CausalModel(MixedGraph dag);

    const MixedGraph& dag() const { return dag_; }
    NodeSet observed() const { return of_kind(NodeKind::observed); }
    NodeSet latent() const { return of_kind(NodeKind::latent); }
    NodeSet selection() const { return of_kind(NodeKind::selection); }

private:
    NodeSet of_kind(NodeKind kind) const;

    MixedGraph dag_;
};

struct GenConfig {
    std::size_t n_observed = 1;
    std::size_t n_latent = 0;
    std::size_t n_selection = 0;
    /// Bound on the node degree of the projected MAG.
    std::size_t max_degree = 3;
    /// Probability of each forward edge; unset means 2 / (nodes - 1).
    std::optional<double> edge_probability;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 1000;
    /// While sampling, skip any edge whose endpoints already have this many DAG
    /// neighbours. Unset means no cap. Large sparse models rarely meet the
    /// projected degree bound without it.
    std::optional<std::size_t> dag_degree_cap;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Edge probability actually used for `cfg`.
double effective_edge_probability(const GenConfig& cfg);

/// Samples a DAG over a random topological order (latents first, selection
/// nodes last and childless), keeping each forward edge with the configured
/// probability. Resamples until the projected MAG has degree <= max_degree.
/// Deterministic per seed; throws GenerationError after max_attempts.
CausalModel random_model(const GenConfig& cfg);

enum class AdjacencyMethod {
    automatic,      // exhaustive for up to 10 kept nodes, inducing-path otherwise
    exhaustive,     // search every subset of the kept nodes for a separating set
    inducing_path,  // single test against the canonical ancestral separating set
};

/// MAG over the observed nodes of `m` (latents marginalized, selection nodes
/// conditioned on). Nodes keep their names and relative order.
MixedGraph project_to_mag(const CausalModel& m, AdjacencyMethod method = AdjacencyMethod::automatic);

/// Marginal MAG of the ancestral graph `g` over the nodes not in `drop`.
MixedGraph marginalize_mag(const MixedGraph& g, const NodeSet& drop,
                           AdjacencyMethod method = AdjacencyMethod::automatic);

}  // namespace fciplus

#endif  // FCIPLUS_MODEL_GEN_HPP
