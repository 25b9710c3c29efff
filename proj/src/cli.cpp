#include "fciplus/cli.hpp"

#include "fciplus/graph_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fciplus {

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    if (text == "fciplus") return Algorithm::fciplus;
    if (text == "exhaustive") return Algorithm::exhaustive;
    return std::nullopt;
}

std::size_t default_latents(std::size_t n) { return static_cast<std::size_t>(std::lround(0.2 * static_cast<double>(n))); }
std::size_t default_selection(std::size_t n) {
    return static_cast<std::size_t>(std::lround(0.1 * static_cast<double>(n)));
}

std::string cmd_generate(const GenConfig& cfg) { return to_text(random_model(cfg).dag()); }

std::string cmd_project(const MixedGraph& model) {
    const MixedGraph mag = project_to_mag(CausalModel(model));
    const auto violations = validate_ancestral(mag);
    if (!violations.empty()) throw std::logic_error("projection is not ancestral: " + describe(mag, violations.front()));
    return to_text(mag);
}

LearnOutput cmd_learn(const MixedGraph& mag, std::optional<std::size_t> k, Algorithm algo, bool timing,
                      std::size_t cap) {
    MagOracle oracle(mag);
    LearnOutput out;
    out.result = algo == Algorithm::fciplus ? fci_plus_run(oracle, k) : exhaustive_run(oracle, k, cap);
    out.queries = oracle.query_count();
    out.graph = to_text(out.result.skeleton.graph());

    std::ostringstream stats;
    out.result.stats.write_csv(stats, timing);
    out.stats_csv = stats.str();
    std::ostringstream prov;
    out.result.skeleton.write_provenance(prov);
    out.provenance = prov.str();
    std::ostringstream log;
    oracle.write_query_log_csv(log);
    out.query_log_csv = log.str();
    return out;
}

//============================ benchmark ============================//

std::uint64_t instance_seed(std::uint64_t base, std::size_t n, std::size_t rep) {
    // splitmix64 finalizer over the combined key
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(n) * 1000003ULL + rep + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GenConfig bench_model_config(const BenchConfig& cfg, std::size_t n, std::uint64_t seed) {
    GenConfig g;
    g.n_observed = n;
    g.n_latent = static_cast<std::size_t>(std::lround(cfg.latent_fraction * static_cast<double>(n)));
    g.n_selection = static_cast<std::size_t>(std::lround(cfg.selection_fraction * static_cast<double>(n)));
    g.max_degree = cfg.k;
    const std::size_t total = g.n_observed + g.n_latent + g.n_selection;
    if (total > 1) g.edge_probability = std::min(1.0, cfg.expected_degree / static_cast<double>(total - 1));
    g.seed = seed;
    g.dag_degree_cap = cfg.k;
    return g;
}

namespace {

BenchInstance run_instance(const BenchConfig& cfg, std::size_t n, std::size_t rep) {
    BenchInstance inst;
    inst.n = n;
    inst.rep = rep;
    inst.seed = instance_seed(cfg.seed, n, rep);
    const MixedGraph mag = project_to_mag(random_model(bench_model_config(cfg, n, inst.seed)));

    MagOracle fo(mag);
    const DiscoveryResult fr = fci_plus_run(fo, cfg.k);
    inst.fciplus_queries = fo.query_count();
    inst.links_removed = fr.removed.size();
    inst.skeletons_match = skeleton(fr.skeleton.graph()) == skeleton(mag);

    if (cfg.run_exhaustive && n <= cfg.cap) {
        MagOracle eo(mag);
        const DiscoveryResult er = exhaustive_run(eo, cfg.k, cfg.cap);
        inst.exhaustive_queries = eo.query_count();
        inst.skeletons_match = inst.skeletons_match && skeleton(er.skeleton.graph()) == skeleton(mag);
    }
    return inst;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fixed(const std::optional<double>& v) { return v ? fixed(*v) : "NA"; }

}  // namespace

BenchResult cmd_bench(const BenchConfig& cfg) {
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t n : cfg.ns) {
        for (std::size_t r = 0; r < cfg.reps; ++r) jobs.emplace_back(n, r);
    }

    BenchResult result;
    result.instances.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                result.instances[i] = run_instance(cfg, jobs[i].first, jobs[i].second);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::sort(result.instances.begin(), result.instances.end(),
              [](const BenchInstance& a, const BenchInstance& b) { return std::tie(a.n, a.rep) < std::tie(b.n, b.rep); });

    for (std::size_t n : cfg.ns) {
        BenchRow row;
        row.n = n;
        std::vector<double> f;
        std::vector<double> e;
        for (const auto& inst : result.instances) {
            if (inst.n != n) continue;
            ++row.reps;
            f.push_back(static_cast<double>(inst.fciplus_queries));
            if (inst.exhaustive_queries) e.push_back(static_cast<double>(*inst.exhaustive_queries));
            if (inst.links_removed > 0) ++row.dsep_instances;
        }
        row.fciplus_median = median(f);
        row.fciplus_mean = mean(f);
        if (!e.empty() && e.size() == f.size()) {
            row.exhaustive_median = median(e);
            row.exhaustive_mean = mean(e);
        }
        result.rows.push_back(row);
    }
    return result;
}

void BenchResult::write_csv(std::ostream& out) const {
    out << "n,reps,fciplus_median,fciplus_mean,exhaustive_median,exhaustive_mean,dsep_instances\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.reps << ',' << fixed(r.fciplus_median) << ',' << fixed(r.fciplus_mean) << ','
            << fixed(r.exhaustive_median) << ',' << fixed(r.exhaustive_mean) << ',' << r.dsep_instances << '\n';
    }
}

void BenchResult::write_instances_csv(std::ostream& out) const {
    out << "n,rep,seed,fciplus_queries,exhaustive_queries,links_removed,skeleton_ok\n";
    for (const auto& i : instances) {
        out << i.n << ',' << i.rep << ',' << i.seed << ',' << i.fciplus_queries << ',';
        if (i.exhaustive_queries) {
            out << *i.exhaustive_queries;
        } else {
            out << "NA";
        }
        out << ',' << i.links_removed << ',' << (i.skeletons_match ? 1 : 0) << '\n';
    }
}

//============================ command line ============================//

namespace {

void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path);
}

void write_file(const std::string& path, const std::string& text) {
    if (!path.empty()) write_output(path, text, std::cout);
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Skeleton and arrowhead discovery for sparse maximal ancestral graphs", "fciplus"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fciplus 0.1.0");

    // generate
    auto* gen = app.add_subcommand("generate", "Sample a random causal model (DAG with latent and selection nodes)");
    std::size_t g_n = 1;
    std::optional<std::size_t> g_latents;
    std::optional<std::size_t> g_selection;
    std::size_t g_k = 3;
    std::uint64_t g_seed = 0;
    std::optional<double> g_prob;
    std::size_t g_attempts = 1000;
    std::string g_out;
    gen->add_option("--n", g_n, "Observed nodes")->capture_default_str()->check(CLI::PositiveNumber);
    gen->add_option("--latents", g_latents, "Latent nodes (default: 20% of n, rounded)");
    gen->add_option("--selection", g_selection, "Selection nodes (default: 10% of n, rounded)");
    gen->add_option("--k", g_k, "Maximum degree of the projected MAG")->capture_default_str();
    gen->add_option("--seed", g_seed, "Random seed")->capture_default_str();
    gen->add_option("--edge-prob", g_prob, "Forward edge probability (default: 2/(nodes-1))")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--max-attempts", g_attempts, "Rejection-sampling attempts")->capture_default_str();
    gen->add_option("--out", g_out, "Output file (default: stdout)");

    // project
    auto* proj = app.add_subcommand("project", "Project a model file to its MAG over the observed nodes");
    std::string p_in;
    std::string p_out;
    proj->add_option("model", p_in, "Model file")->required()->check(CLI::ExistingFile);
    proj->add_option("--out", p_out, "Output file (default: stdout)");

    // learn
    auto* learn = app.add_subcommand("learn", "Learn skeleton and arrowheads from an m-separation oracle on a MAG");
    std::string l_in;
    std::optional<std::size_t> l_k;
    std::string l_algo = "fciplus";
    std::string l_out;
    std::string l_stats;
    std::string l_prov;
    std::string l_log;
    bool l_no_timing = false;
    std::size_t l_cap = default_node_cap;
    learn->add_option("mag", l_in, "MAG file used as the independence oracle")->required()->check(CLI::ExistingFile);
    learn->add_option("--k", l_k, "Maximum conditioning-set size (default: largest adjacency after size-1 tests)");
    learn->add_option("--algo", l_algo, "fciplus or exhaustive")
        ->capture_default_str()
        ->check(CLI::IsMember({"fciplus", "exhaustive"}));
    learn->add_option("--out", l_out, "Learned graph file (default: stdout)");
    learn->add_option("--stats", l_stats, "Stage statistics CSV");
    learn->add_option("--provenance", l_prov, "Arrowhead provenance log");
    learn->add_option("--log", l_log, "Oracle query log CSV");
    learn->add_flag("--no-timing", l_no_timing, "Write NA instead of wall-clock seconds in the statistics");
    learn->add_option("--cap", l_cap, "Node cap for the exhaustive search")->capture_default_str();

    // compare
    auto* cmp = app.add_subcommand("compare", "Compare two learned graphs against a reference MAG");
    std::string c_a;
    std::string c_b;
    std::string c_truth;
    std::string c_out;
    std::string c_pairs;
    std::optional<std::uint64_t> c_qa;
    std::optional<std::uint64_t> c_qb;
    cmp->add_option("first", c_a, "First learned graph")->required()->check(CLI::ExistingFile);
    cmp->add_option("second", c_b, "Second learned graph")->required()->check(CLI::ExistingFile);
    cmp->add_option("truth", c_truth, "Reference MAG")->required()->check(CLI::ExistingFile);
    cmp->add_option("--out", c_out, "Summary CSV (default: stdout)");
    cmp->add_option("--pairs", c_pairs, "Per-pair verdict CSV");
    cmp->add_option("--queries-a", c_qa, "Query count of the first run");
    cmp->add_option("--queries-b", c_qb, "Query count of the second run");

    // bench
    auto* bench = app.add_subcommand("bench", "Count oracle queries on random models");
    BenchConfig bc;
    std::string b_algo = "both";
    std::string b_out;
    std::string b_instances;
    bench->add_option("--n", bc.ns, "Observed node counts")->delimiter(',')->capture_default_str();
    bench->add_option("--reps", bc.reps, "Repetitions per node count")->capture_default_str();
    bench->add_option("--k", bc.k, "Degree bound and conditioning-set size")->capture_default_str();
    bench->add_option("--seed", bc.seed, "Base seed")->capture_default_str();
    bench->add_option("--latent-frac", bc.latent_fraction, "Latent nodes per observed node")->capture_default_str();
    bench->add_option("--selection-frac", bc.selection_fraction, "Selection nodes per observed node")
        ->capture_default_str();
    bench->add_option("--degree", bc.expected_degree, "Expected DAG degree of a node")->capture_default_str();
    bench->add_option("--algo", b_algo, "both or fciplus")
        ->capture_default_str()
        ->check(CLI::IsMember({"both", "fciplus"}));
    bench->add_option("--cap", bc.cap, "Node cap for the exhaustive search")->capture_default_str();
    bench->add_option("--threads", bc.threads, "Worker threads (0: all cores)")->capture_default_str();
    bench->add_option("--out", b_out, "Summary CSV (default: stdout)");
    bench->add_option("--instances", b_instances, "Per-instance CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "fciplus: error: " << one_line(e.what()) << '\n';
        return e.get_exit_code() ? e.get_exit_code() : 2;
    }

    try {
        if (*gen) {
            GenConfig cfg;
            cfg.n_observed = g_n;
            cfg.n_latent = g_latents.value_or(default_latents(g_n));
            cfg.n_selection = g_selection.value_or(default_selection(g_n));
            cfg.max_degree = g_k;
            cfg.seed = g_seed;
            cfg.edge_probability = g_prob;
            cfg.max_attempts = g_attempts;
            write_output(g_out, cmd_generate(cfg), out);
        } else if (*proj) {
            write_output(p_out, cmd_project(read_graph_file(p_in)), out);
        } else if (*learn) {
            const LearnOutput r = cmd_learn(read_graph_file(l_in), l_k, *parse_algorithm(l_algo), !l_no_timing, l_cap);
            write_output(l_out, r.graph, out);
            write_file(l_stats, r.stats_csv);
            write_file(l_prov, r.provenance);
            write_file(l_log, r.query_log_csv);
        } else if (*cmp) {
            const MixedGraph a = read_graph_file(c_a);
            const MixedGraph b = read_graph_file(c_b);
            const MixedGraph truth = read_graph_file(c_truth);
            const ComparisonReport report = compare_outputs(a, b, truth, c_qa, c_qb);
            std::ostringstream summary;
            report.write_summary_csv(summary);
            write_output(c_out, summary.str(), out);
            if (!c_pairs.empty()) {
                std::ostringstream pairs;
                report.write_csv(pairs, truth.names());
                write_file(c_pairs, pairs.str());
            }
        } else if (*bench) {
            bc.run_exhaustive = b_algo == "both";
            const BenchResult r = cmd_bench(bc);
            std::ostringstream rows;
            r.write_csv(rows);
            write_output(b_out, rows.str(), out);
            if (!b_instances.empty()) {
                std::ostringstream inst;
                r.write_instances_csv(inst);
                write_file(b_instances, inst.str());
            }
        }
    } catch (const std::exception& e) {
        err << "fciplus: error: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}

}  // namespace fciplus
