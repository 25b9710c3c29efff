#include "fciplus/separation.hpp"

#include <ostream>
#include <stdexcept>

namespace fciplus {

namespace {

void check_query(std::size_t n, NodeId x, NodeId y, const NodeSet& z) {
    auto in_range = [n](NodeId v) { return v >= 0 && static_cast<std::size_t>(v) < n; };
    if (!in_range(x) || !in_range(y)) throw std::out_of_range("query node out of range");
    if (x == y) throw std::invalid_argument("independence query needs two distinct nodes");
    if (z.contains(x) || z.contains(y)) throw std::invalid_argument("conditioning set contains a queried node");
    for (NodeId w : z) {
        if (!in_range(w)) throw std::out_of_range("conditioning node out of range");
    }
}

bool m_separated_unchecked(const MixedGraph& g, const AncestryCache& cache, NodeId x, NodeId y, const NodeSet& z) {
    const std::size_t n = g.size();
    const std::vector<bool> collider_ok = cache.ancestors_of(z);
    std::vector<bool> in_z(n, false);
    for (NodeId w : z) in_z[static_cast<std::size_t>(w)] = true;

    // state index: 2 * node + (arrived through an arrowhead at node)
    std::vector<char> visited(2 * n, 0);
    std::vector<std::pair<NodeId, bool>> stack;
    auto push = [&](NodeId node, bool arrow_in) {
        char& v = visited[2 * static_cast<std::size_t>(node) + (arrow_in ? 1 : 0)];
        if (!v) {
            v = 1;
            stack.emplace_back(node, arrow_in);
        }
    };
    for (NodeId w : g.neighbors(x)) push(w, g.mark(w, x) == Mark::arrow);

    while (!stack.empty()) {
        auto [c, arrow_in] = stack.back();
        stack.pop_back();
        if (c == y) return false;
        for (NodeId t : g.neighbors(c)) {
            const bool arrow_out = g.mark(c, t) == Mark::arrow;
            if (arrow_in && arrow_out) {
                if (!collider_ok[static_cast<std::size_t>(c)]) continue;
            } else if (in_z[static_cast<std::size_t>(c)]) {
                continue;
            }
            push(t, g.mark(t, c) == Mark::arrow);
        }
    }
    return true;
}

}  // namespace

std::string format_record(const IndependenceRecord& r, const std::vector<std::string>& names) {
    std::string out = "(" + names.at(static_cast<std::size_t>(r.x)) + "," + names.at(static_cast<std::size_t>(r.y)) + "|";
    bool first = true;
    for (NodeId w : r.z) {
        if (!first) out += ",";
        out += names.at(static_cast<std::size_t>(w));
        first = false;
    }
    return out + ")";
}

bool m_separated(const MixedGraph& g, NodeId x, NodeId y, const NodeSet& z) {
    check_query(g.size(), x, y, z);
    if (g.has_circles()) throw std::invalid_argument("m-separation is undefined on graphs with circle marks");
    return m_separated_unchecked(g, *g.ancestry(), x, y, z);
}

bool m_separated_bruteforce(const MixedGraph& g, NodeId x, NodeId y, const NodeSet& z) {
    check_query(g.size(), x, y, z);
    const auto n = static_cast<NodeId>(g.size());

    // An(z) by plain depth-first search over parent links
    std::vector<bool> anc_z(g.size(), false);
    std::vector<NodeId> stack(z.begin(), z.end());
    for (NodeId w : z) anc_z[static_cast<std::size_t>(w)] = true;
    while (!stack.empty()) {
        NodeId c = stack.back();
        stack.pop_back();
        for (NodeId p = 0; p < n; ++p) {
            if (g.adjacent(p, c) && g.mark(p, c) == Mark::tail && g.mark(c, p) == Mark::arrow &&
                !anc_z[static_cast<std::size_t>(p)]) {
                anc_z[static_cast<std::size_t>(p)] = true;
                stack.push_back(p);
            }
        }
    }

    auto unblocked = [&](const std::vector<NodeId>& path) {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const NodeId prev = path[i - 1];
            const NodeId node = path[i];
            const NodeId next = path[i + 1];
            const bool collider = g.mark(node, prev) == Mark::arrow && g.mark(node, next) == Mark::arrow;
            if (collider && !anc_z[static_cast<std::size_t>(node)]) return false;
            if (!collider && z.contains(node)) return false;
        }
        return true;
    };

    std::vector<NodeId> path{x};
    std::vector<bool> on_path(g.size(), false);
    on_path[static_cast<std::size_t>(x)] = true;
    bool connected = false;
    auto extend = [&](auto&& self) -> void {
        if (connected) return;
        const NodeId last = path.back();
        if (last == y) {
            connected = unblocked(path);
            return;
        }
        for (NodeId next = 0; next < n && !connected; ++next) {
            if (on_path[static_cast<std::size_t>(next)] || !g.adjacent(last, next)) continue;
            path.push_back(next);
            on_path[static_cast<std::size_t>(next)] = true;
            self(self);
            on_path[static_cast<std::size_t>(next)] = false;
            path.pop_back();
        }
    };
    extend(extend);
    return !connected;
}

//============================ oracle ============================//

IndependenceOracle::IndependenceOracle(std::vector<std::string> names) : names_(std::move(names)) {}

bool IndependenceOracle::independent(NodeId x, NodeId y, const NodeSet& z) {
    check_query(names_.size(), x, y, z);
    Key key{std::min(x, y), std::max(x, y), std::vector<NodeId>(z.begin(), z.end())};
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const bool answer = evaluate(key.lo, key.hi, z);
    std::lock_guard lock(mutex_);
    if (memo_.emplace(std::move(key), answer).second) log_.push_back({std::min(x, y), std::max(x, y), z, answer});
    return answer;
}

std::uint64_t IndependenceOracle::query_count() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
}

std::vector<QueryLogEntry> IndependenceOracle::query_log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

void IndependenceOracle::write_query_log_csv(std::ostream& out) const {
    for (const auto& e : query_log()) {
        out << names_[static_cast<std::size_t>(e.x)] << ',' << names_[static_cast<std::size_t>(e.y)] << ",\"";
        bool first = true;
        for (NodeId w : e.z) {
            if (!first) out << ';';
            out << names_[static_cast<std::size_t>(w)];
            first = false;
        }
        out << "\"," << (e.independent ? "independent" : "dependent") << '\n';
    }
}

MagOracle::MagOracle(MixedGraph g) : IndependenceOracle(g.names()), graph_(std::move(g)) {
    if (graph_.has_circles()) throw std::invalid_argument("oracle graph must not contain circle marks");
    ancestry_ = graph_.ancestry();
}

bool MagOracle::evaluate(NodeId x, NodeId y, const NodeSet& z) const {
    return m_separated_unchecked(graph_, *ancestry_, x, y, z);
}

std::unique_ptr<MagOracle> oracle_from_mag(const MixedGraph& g) { return std::make_unique<MagOracle>(g); }

//============================ set operations ============================//

NodeSet minimize_sepset(IndependenceOracle& o, NodeId x, NodeId y, const NodeSet& z) {
    if (!o.independent(x, y, z)) throw std::invalid_argument("minimize_sepset: the given set does not separate the pair");
    NodeSet current = z;
    bool removed = true;
    while (removed) {
        removed = false;
        for (NodeId w : current) {
            NodeSet trial = current;
            trial.erase(w);
            if (o.independent(x, y, trial)) {
                current = std::move(trial);
                removed = true;
                break;
            }
        }
    }
    return current;
}

bool single_node_dependence(IndependenceOracle& o, NodeId x, NodeId y, const NodeSet& z, NodeId w) {
    if (w == x || w == y || z.contains(w)) {
        throw std::invalid_argument("single_node_dependence: added node must be outside {x,y} and z");
    }
    NodeSet extended = z;
    extended.insert(w);
    return !o.independent(x, y, extended);
}

bool is_minimal_record(IndependenceOracle& o, const IndependenceRecord& r) {
    if (!o.independent(r.x, r.y, r.z)) return false;
    for (NodeId w : r.z) {
        NodeSet trial = r.z;
        trial.erase(w);
        if (o.independent(r.x, r.y, trial)) return false;
    }
    return true;
}

}  // namespace fciplus
