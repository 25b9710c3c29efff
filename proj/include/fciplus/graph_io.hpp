#ifndef FCIPLUS_GRAPH_IO_HPP
#define FCIPLUS_GRAPH_IO_HPP

#include "fciplus/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fciplus {

// Line-oriented edge-list format:
//
//   # comment
//   node <name> [observed|latent|selection]
//   edge <name> <marks> <name>
//
// where <marks> is one of -->, <--, <->, ---, o->, <-o, o-o, o--, --o; the first
// character is the mark at the left node, the last the mark at the right node.

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Three-character token for the marks (left, right), e.g. "o->".
std::string mark_token(Mark left, Mark right);
std::optional<std::pair<Mark, Mark>> parse_mark_token(std::string_view token);

MixedGraph parse_graph(std::istream& in);
MixedGraph parse_graph(std::string_view text);
MixedGraph read_graph_file(const std::filesystem::path& path);

/// Nodes in id order, then edges in canonical pair order. LF line endings.
void write_graph(std::ostream& out, const MixedGraph& g);
std::string to_text(const MixedGraph& g);
void write_graph_file(const std::filesystem::path& path, const MixedGraph& g);

/// Single edge rendered like "X <-> U".
std::string edge_string(const MixedGraph& g, NodeId x, NodeId y);

}  // namespace fciplus

#endif  // FCIPLUS_GRAPH_IO_HPP
