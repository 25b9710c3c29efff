#include "doctest.h"

#include "fciplus/cli.hpp"
#include "fciplus/graph_io.hpp"
#include "truth.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace fciplus;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fciplus");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Scratch {
public:
    Scratch() {
        static int counter = 0;
        dir_ = fs::temp_directory_path() / ("fciplus_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    std::string operator()(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name, std::ios::binary) << text;
        return (*this)(name);
    }

private:
    fs::path dir_;
};

bool single_line(const std::string& s) { return !s.empty() && s.find('\n') == s.size() - 1; }

}  // namespace

TEST_CASE("generate") {
    const Run a = cli({"generate", "--n", "6", "--seed", "11"});
    const Run b = cli({"generate", "--n", "6", "--seed", "11"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err.empty());

    const Run one = cli({"generate", "--n", "1"});
    REQUIRE(one.code == 0);
    const MixedGraph g1 = parse_graph(one.out);
    CHECK(g1.size() == 1);
    CHECK(g1.edge_count() == 0);

    const Run small = cli({"generate", "--n", "5", "--latents", "2", "--selection", "0", "--k", "3", "--seed", "7"});
    REQUIRE(small.code == 0);
    const MixedGraph model = parse_graph(small.out);
    CHECK(to_text(model) == small.out);
    const CausalModel m(model);
    CHECK(m.observed().size() == 5);
    CHECK(m.latent().size() == 2);
    CHECK(project_to_mag(m).max_degree() <= 3);

    // defaults: 20% latent, 10% selection
    const CausalModel d(parse_graph(cli({"generate", "--n", "10", "--seed", "3"}).out));
    CHECK(d.latent().size() == 2);
    CHECK(d.selection().size() == 1);

    Scratch tmp;
    REQUIRE(cli({"generate", "--n", "6", "--seed", "11", "--out", tmp("m.model")}).code == 0);
    CHECK(slurp(tmp("m.model")) == a.out);
}

TEST_CASE("project") {
    Scratch tmp;
    const std::string conf = tmp.write("conf.model", "node A\nnode B\nnode L latent\nedge L --> A\nedge L --> B\n");
    const Run r = cli({"project", conf});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("edge A <-> B\n") != std::string::npos);

    const std::string dag = tmp.write("dag.model", "node A\nnode B\nedge A --> B\n");
    CHECK(cli({"project", dag}).out == "node A observed\nnode B observed\nedge A --> B\n");

    const std::string sel = tmp.write("sel.model", "node A\nnode B\nnode S selection\nedge A --> S\nedge B --> S\n");
    CHECK(cli({"project", sel}).out.find("edge A --- B\n") != std::string::npos);

    REQUIRE(cli({"project", truth::fixture("m5.model").string(), "--out", tmp("m5.mag")}).code == 0);
    CHECK(slurp(tmp("m5.mag")) == slurp(truth::fixture("m5.mag")));

    const std::string bad = tmp.write("bad.model", "node A\nnode B\nedge A <-> B\n");
    const Run e = cli({"project", bad});
    CHECK(e.code != 0);
    CHECK(single_line(e.err));
}

TEST_CASE("learn") {
    Scratch tmp;
    const std::string m5 = truth::fixture("m5.mag").string();
    const Run r = cli({"learn", m5, "--k", "3", "--stats", tmp("stats.csv"), "--provenance", tmp("prov.txt"), "--log",
                       tmp("log.csv"), "--no-timing"});
    REQUIRE(r.code == 0);
    const MixedGraph learned = parse_graph(r.out);
    const MixedGraph truth_graph = truth::load("m5.mag");
    CHECK(skeleton(learned) == skeleton(truth_graph));
    CHECK_FALSE(learned.adjacent(learned.id_of("X"), learned.id_of("Y")));
    CHECK(to_text(learned) == r.out);
    const std::string stats = slurp(tmp("stats.csv"));
    CHECK(stats.find("\ndsep,") != std::string::npos);
    CHECK(stats.find(",1,1,NA\n") != std::string::npos);  // dsep row: one candidate, one removal
    CHECK(slurp(tmp("prov.txt")).rfind("arrowhead ", 0) == 0);
    CHECK(slurp(tmp("log.csv")).find("\"U;V;Z\",independent") != std::string::npos);

    const Run ex = cli({"learn", m5, "--k", "3", "--algo", "exhaustive"});
    REQUIRE(ex.code == 0);
    CHECK(ex.out == r.out);

    const std::string collider = tmp.write("c.mag", "node A\nnode B\nnode C\nedge A --> C\nedge B --> C\n");
    const Run c = cli({"learn", collider, "--k", "1", "--stats", tmp("c.csv"), "--no-timing"});
    REQUIRE(c.code == 0);
    CHECK(c.out == "node A observed\nnode B observed\nnode C observed\nedge A o-> C\nedge B o-> C\n");
    CHECK(slurp(tmp("c.csv")).find("\ndsep,0,0,0,NA\n") != std::string::npos);

    const Run capped = cli({"learn", m5, "--algo", "exhaustive", "--cap", "4"});
    CHECK(capped.code != 0);
    CHECK(single_line(capped.err));
    CHECK(capped.err.find("cap") != std::string::npos);
}

TEST_CASE("compare") {
    Scratch tmp;
    const std::string m5 = truth::fixture("m5.mag").string();
    REQUIRE(cli({"learn", m5, "--k", "3", "--out", tmp("a.txt")}).code == 0);
    REQUIRE(cli({"learn", m5, "--k", "3", "--algo", "exhaustive", "--out", tmp("b.txt")}).code == 0);
    const Run r = cli({"compare", tmp("a.txt"), tmp("b.txt"), m5, "--pairs", tmp("pairs.csv"), "--queries-a", "59",
                       "--queries-b", "118"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("metric,value\npairs_both_removed,4\npairs_only_one,0\npairs_neither,6\n", 0) == 0);
    CHECK(r.out.find("query_ratio,0.500000\n") != std::string::npos);
    CHECK(slurp(tmp("pairs.csv")).rfind("x,y,verdict,in_truth\nX,Y,both_removed,0\n", 0) == 0);

    const std::string other = tmp.write("o.mag", "node P\nnode Q\n");
    const Run e = cli({"compare", tmp("a.txt"), other, m5});
    CHECK(e.code != 0);
    CHECK(single_line(e.err));
}

TEST_CASE("bench") {
    const Run one = cli({"bench", "--n", "10", "--reps", "1"});
    REQUIRE(one.code == 0);
    std::istringstream lines(one.out);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == "n,reps,fciplus_median,fciplus_mean,exhaustive_median,exhaustive_mean,dsep_instances");
    CHECK(row.rfind("10,1,", 0) == 0);
    CHECK_FALSE(std::getline(lines, extra));

    Scratch tmp;
    const std::vector<std::string> args{"bench", "--n", "10,20", "--reps", "3", "--seed", "5"};
    auto with = [&](std::vector<std::string> more) {
        auto a = args;
        a.insert(a.end(), more.begin(), more.end());
        return a;
    };
    REQUIRE(cli(with({"--instances", tmp("i1.csv"), "--threads", "1"})).code == 0);
    REQUIRE(cli(with({"--instances", tmp("i2.csv"), "--threads", "3"})).code == 0);
    CHECK(slurp(tmp("i1.csv")) == slurp(tmp("i2.csv")));
    CHECK(cli(with({})).out == cli(with({"--threads", "2"})).out);

    BenchConfig cfg;
    cfg.ns = {10, 20, 40};
    cfg.reps = 5;
    cfg.run_exhaustive = false;
    const BenchResult r = cmd_bench(cfg);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].fciplus_median <= r.rows[1].fciplus_median);
    CHECK(r.rows[1].fciplus_median <= r.rows[2].fciplus_median);
    for (const auto& inst : r.instances) CHECK(inst.skeletons_match);
}

TEST_CASE("errors and help") {
    const Run help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("generate") != std::string::npos);
    const Run learn_help = cli({"learn", "--help"});
    CHECK(learn_help.code == 0);
    CHECK(learn_help.out.find("--no-timing") != std::string::npos);
    CHECK(cli({"--version"}).code == 0);

    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"learn", "/nonexistent/file.mag"},
             {"learn", truth::fixture("m5.mag").string(), "--algo", "magic"},
             {"generate", "--n", "0"},
             {"generate", "--n", "4", "--edge-prob", "2"},
             {"generate", "--n", "30", "--k", "0", "--max-attempts", "3"},
         }) {
        const Run r = cli(args);
        CAPTURE(r.err);
        CHECK(r.code != 0);
        CHECK(single_line(r.err));
        CHECK(r.err.rfind("fciplus: error: ", 0) == 0);
    }

    Scratch tmp;
    const std::string broken = tmp.write("broken.mag", "node A\nedge A --> B\n");
    const Run r = cli({"learn", broken});
    CHECK(r.code != 0);
    CHECK(r.err.find("line 2") != std::string::npos);
}
