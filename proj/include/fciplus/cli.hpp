#ifndef FCIPLUS_CLI_HPP
#define FCIPLUS_CLI_HPP

#include "fciplus/baseline.hpp"
#include "fciplus/model_gen.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fciplus {

enum class Algorithm : std::uint8_t { fciplus, exhaustive };

std::optional<Algorithm> parse_algorithm(std::string_view text);

/// Default latent / selection counts for n observed nodes (20% / 10%, rounded).
std::size_t default_latents(std::size_t n);
std::size_t default_selection(std::size_t n);

/// Serializes a generated model (DAG with node kinds) in the graph text format.
std::string cmd_generate(const GenConfig& cfg);

/// Projects a model graph (node kinds mark latent and selection nodes) and
/// returns the MAG as text. Throws std::logic_error if the result is not ancestral.
std::string cmd_project(const MixedGraph& model);

struct LearnOutput {
    DiscoveryResult result;
    std::uint64_t queries = 0;
    /// Learned graph in text form.
    std::string graph;
    std::string stats_csv;
    std::string provenance;
    std::string query_log_csv;
};

/// Runs the chosen algorithm against an m-separation oracle on `mag`. With
/// `timing` off the seconds column of the stats is written as NA.
LearnOutput cmd_learn(const MixedGraph& mag, std::optional<std::size_t> k, Algorithm algo, bool timing = true,
                      std::size_t cap = default_node_cap);

struct BenchConfig {
    std::vector<std::size_t> ns{10, 20, 40, 80};
    std::size_t reps = 20;
    std::size_t k = 3;
    std::uint64_t seed = 1;
    double latent_fraction = 0.2;
    double selection_fraction = 0.1;
    /// Expected number of DAG parents-plus-children per node; sets the edge probability.
    double expected_degree = 1.5;
    std::size_t cap = default_node_cap;
    bool run_exhaustive = true;
    std::size_t threads = 0;  // 0: hardware concurrency
};

struct BenchInstance {
    std::size_t n = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    std::uint64_t fciplus_queries = 0;
    std::optional<std::uint64_t> exhaustive_queries;
    std::size_t links_removed = 0;
    bool skeletons_match = true;
};

struct BenchRow {
    std::size_t n = 0;
    std::size_t reps = 0;
    double fciplus_median = 0;
    double fciplus_mean = 0;
    std::optional<double> exhaustive_median;
    std::optional<double> exhaustive_mean;
    std::size_t dsep_instances = 0;
};

struct BenchResult {
    std::vector<BenchInstance> instances;  // sorted by (n, rep)
    std::vector<BenchRow> rows;

    /// `n,reps,fciplus_median,fciplus_mean,exhaustive_median,exhaustive_mean,dsep_instances`
    void write_csv(std::ostream& out) const;
    void write_instances_csv(std::ostream& out) const;
};

/// Seed of repetition `rep` at size `n`.
std::uint64_t instance_seed(std::uint64_t base, std::size_t n, std::size_t rep);

/// Model generation settings used by the benchmark for one instance.
GenConfig bench_model_config(const BenchConfig& cfg, std::size_t n, std::uint64_t seed);

BenchResult cmd_bench(const BenchConfig& cfg);

/// Full command-line entry point. Returns the process exit code; diagnostics go
/// to `err` as a single line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fciplus

#endif  // FCIPLUS_CLI_HPP
