#include "fciplus/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace fciplus {

namespace {

char left_char(Mark m) {
    switch (m) {
        case Mark::tail: return '-';
        case Mark::arrow: return '<';
        case Mark::circle: return 'o';
    }
    return '-';
}

char right_char(Mark m) {
    switch (m) {
        case Mark::tail: return '-';
        case Mark::arrow: return '>';
        case Mark::circle: return 'o';
    }
    return '-';
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::string mark_token(Mark left, Mark right) { return {left_char(left), '-', right_char(right)}; }

std::optional<std::pair<Mark, Mark>> parse_mark_token(std::string_view token) {
    if (token.size() != 3 || token[1] != '-') return std::nullopt;
    std::pair<Mark, Mark> out;
    switch (token[0]) {
        case '-': out.first = Mark::tail; break;
        case '<': out.first = Mark::arrow; break;
        case 'o': out.first = Mark::circle; break;
        default: return std::nullopt;
    }
    switch (token[2]) {
        case '-': out.second = Mark::tail; break;
        case '>': out.second = Mark::arrow; break;
        case 'o': out.second = Mark::circle; break;
        default: return std::nullopt;
    }
    return out;
}

MixedGraph parse_graph(std::istream& in) {
    MixedGraph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;

        if (tokens[0] == "node") {
            if (tokens.size() < 2 || tokens.size() > 3) throw ParseError(lineno, "expected 'node <name> [kind]'");
            NodeKind kind = NodeKind::observed;
            if (tokens.size() == 3) {
                auto parsed = parse_node_kind(tokens[2]);
                if (!parsed) throw ParseError(lineno, "unknown node kind '" + tokens[2] + "'");
                kind = *parsed;
            }
            if (g.find(tokens[1])) throw ParseError(lineno, "duplicate node '" + tokens[1] + "'");
            g.add_node(tokens[1], kind);
        } else if (tokens[0] == "edge") {
            if (tokens.size() != 4) throw ParseError(lineno, "expected 'edge <name> <marks> <name>'");
            auto x = g.find(tokens[1]);
            auto y = g.find(tokens[3]);
            if (!x) throw ParseError(lineno, "unknown node '" + tokens[1] + "'");
            if (!y) throw ParseError(lineno, "unknown node '" + tokens[3] + "'");
            if (*x == *y) throw ParseError(lineno, "self edge on '" + tokens[1] + "'");
            auto marks = parse_mark_token(tokens[2]);
            if (!marks) throw ParseError(lineno, "bad edge marks '" + tokens[2] + "'");
            if (g.adjacent(*x, *y)) {
                throw ParseError(lineno, "second edge between '" + tokens[1] + "' and '" + tokens[3] + "'");
            }
            g.set_edge(*x, *y, marks->first, marks->second);
        } else {
            throw ParseError(lineno, "unknown directive '" + tokens[0] + "'");
        }
    }
    return g;
}

MixedGraph parse_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_graph(in);
}

MixedGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_graph(in);
}

void write_graph(std::ostream& out, const MixedGraph& g) {
    for (NodeId x = 0; x < static_cast<NodeId>(g.size()); ++x) {
        out << "node " << g.name(x) << ' ' << to_string(g.kind(x)) << '\n';
    }
    for (const Edge& e : g.edges()) {
        out << "edge " << g.name(e.a) << ' ' << mark_token(e.at_a, e.at_b) << ' ' << g.name(e.b) << '\n';
    }
}

std::string to_text(const MixedGraph& g) {
    std::ostringstream out;
    write_graph(out, g);
    return out.str();
}

void write_graph_file(const std::filesystem::path& path, const MixedGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_graph(out, g);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string edge_string(const MixedGraph& g, NodeId x, NodeId y) {
    auto mx = g.mark(x, y);
    auto my = g.mark(y, x);
    if (!mx || !my) return g.name(x) + " . " + g.name(y);
    return g.name(x) + ' ' + mark_token(*mx, *my) + ' ' + g.name(y);
}

}  // namespace fciplus
