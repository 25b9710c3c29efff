#include "fciplus/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>

namespace fciplus {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::observed: return "observed";
        case NodeKind::latent: return "latent";
        case NodeKind::selection: return "selection";
    }
    return "observed";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
    if (text == "observed") return NodeKind::observed;
    if (text == "latent") return NodeKind::latent;
    if (text == "selection") return NodeKind::selection;
    return std::nullopt;
}

//============================ AncestryCache ============================//

AncestryCache::AncestryCache(const MixedGraph& g)
    : n_(g.size()), ancestor_(n_ * n_, false), anterior_(n_ * n_, false) {
    const auto n = static_cast<NodeId>(n_);
    std::vector<NodeId> stack;
    for (NodeId x = 0; x < n; ++x) {
        // ancestors: walk parent links backwards
        ancestor_[index(x, x)] = true;
        stack.assign(1, x);
        while (!stack.empty()) {
            NodeId c = stack.back();
            stack.pop_back();
            for (NodeId p : g.neighbors(c)) {
                if (g.is_directed(p, c) && !ancestor_[index(p, x)]) {
                    ancestor_[index(p, x)] = true;
                    stack.push_back(p);
                }
            }
        }

        // anteriors: directed edges backwards (phase 0), then undirected only (phase 1)
        std::vector<char> seen(2 * n_, 0);
        std::vector<std::pair<NodeId, int>> work{{x, 0}};
        seen[2 * static_cast<std::size_t>(x)] = 1;
        while (!work.empty()) {
            auto [c, phase] = work.back();
            work.pop_back();
            anterior_[index(c, x)] = true;
            for (NodeId w : g.neighbors(c)) {
                int next = -1;
                if (g.is_undirected(w, c)) {
                    next = 1;
                } else if (phase == 0 && g.is_directed(w, c)) {
                    next = 0;
                }
                if (next < 0) continue;
                char& flag = seen[2 * static_cast<std::size_t>(w) + static_cast<std::size_t>(next)];
                if (!flag) {
                    flag = 1;
                    work.emplace_back(w, next);
                }
            }
        }
    }
}

NodeSet AncestryCache::ancestors(NodeId x) const {
    NodeSet out;
    for (std::size_t w = 0; w < n_; ++w) {
        if (is_ancestor(static_cast<NodeId>(w), x)) out.insert(static_cast<NodeId>(w));
    }
    return out;
}

NodeSet AncestryCache::anteriors(NodeId x) const {
    NodeSet out;
    for (std::size_t w = 0; w < n_; ++w) {
        if (is_anterior(static_cast<NodeId>(w), x)) out.insert(static_cast<NodeId>(w));
    }
    return out;
}

std::vector<bool> AncestryCache::ancestors_of(const NodeSet& xs) const {
    std::vector<bool> out(n_, false);
    for (NodeId x : xs) {
        for (std::size_t w = 0; w < n_; ++w) {
            if (is_ancestor(static_cast<NodeId>(w), x)) out[w] = true;
        }
    }
    return out;
}

std::vector<bool> AncestryCache::anteriors_of(const NodeSet& xs) const {
    std::vector<bool> out(n_, false);
    for (NodeId x : xs) {
        for (std::size_t w = 0; w < n_; ++w) {
            if (is_anterior(static_cast<NodeId>(w), x)) out[w] = true;
        }
    }
    return out;
}

//============================ MixedGraph ============================//

MixedGraph::MixedGraph(const MixedGraph& other)
    : names_(other.names_),
      kinds_(other.kinds_),
      index_(other.index_),
      edges_(other.edges_),
      adjacency_(other.adjacency_) {
    std::lock_guard lock(other.cache_mutex_);
    cache_ = other.cache_;
}

MixedGraph::MixedGraph(MixedGraph&& other) noexcept
    : names_(std::move(other.names_)),
      kinds_(std::move(other.kinds_)),
      index_(std::move(other.index_)),
      edges_(std::move(other.edges_)),
      adjacency_(std::move(other.adjacency_)),
      cache_(std::move(other.cache_)) {}

MixedGraph& MixedGraph::operator=(const MixedGraph& other) {
    if (this == &other) return *this;
    MixedGraph copy(other);
    return *this = std::move(copy);
}

MixedGraph& MixedGraph::operator=(MixedGraph&& other) noexcept {
    if (this == &other) return *this;
    names_ = std::move(other.names_);
    kinds_ = std::move(other.kinds_);
    index_ = std::move(other.index_);
    edges_ = std::move(other.edges_);
    adjacency_ = std::move(other.adjacency_);
    std::lock_guard lock(cache_mutex_);
    cache_ = std::move(other.cache_);
    return *this;
}

NodeId MixedGraph::add_node(std::string name, NodeKind kind) {
    if (name.empty()) throw std::invalid_argument("node name must not be empty");
    if (std::any_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c) != 0; })) {
        throw std::invalid_argument("node name must not contain whitespace: '" + name + "'");
    }
    if (index_.contains(name)) throw std::invalid_argument("duplicate node name: " + name);
    const auto id = static_cast<NodeId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    kinds_.push_back(kind);
    adjacency_.emplace_back();
    invalidate();
    return id;
}

void MixedGraph::check_node(NodeId x) const {
    if (!contains(x)) throw std::out_of_range("unknown node id " + std::to_string(x));
}

const std::string& MixedGraph::name(NodeId x) const {
    check_node(x);
    return names_[static_cast<std::size_t>(x)];
}

NodeKind MixedGraph::kind(NodeId x) const {
    check_node(x);
    return kinds_[static_cast<std::size_t>(x)];
}

void MixedGraph::set_kind(NodeId x, NodeKind kind) {
    check_node(x);
    kinds_[static_cast<std::size_t>(x)] = kind;
}

std::optional<NodeId> MixedGraph::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId MixedGraph::id_of(std::string_view name) const {
    auto id = find(name);
    if (!id) throw std::out_of_range("unknown node name: " + std::string(name));
    return *id;
}

void MixedGraph::set_edge(NodeId x, NodeId y, Mark at_x, Mark at_y) {
    check_node(x);
    check_node(y);
    if (x == y) throw std::invalid_argument("self edges are not allowed");
    if (x < y) {
        edges_[{x, y}] = {at_x, at_y};
    } else {
        edges_[{y, x}] = {at_y, at_x};
    }
    adjacency_[static_cast<std::size_t>(x)].insert(y);
    adjacency_[static_cast<std::size_t>(y)].insert(x);
    invalidate();
}

bool MixedGraph::remove_edge(NodeId x, NodeId y) {
    check_node(x);
    check_node(y);
    if (edges_.erase(make_pair_key(x, y)) == 0) return false;
    adjacency_[static_cast<std::size_t>(x)].erase(y);
    adjacency_[static_cast<std::size_t>(y)].erase(x);
    invalidate();
    return true;
}

bool MixedGraph::adjacent(NodeId x, NodeId y) const {
    check_node(x);
    check_node(y);
    return edges_.contains(make_pair_key(x, y));
}

std::optional<Mark> MixedGraph::mark(NodeId at, NodeId other) const {
    auto it = edges_.find(make_pair_key(at, other));
    if (it == edges_.end()) return std::nullopt;
    return at < other ? it->second.first : it->second.second;
}

void MixedGraph::set_mark(NodeId at, NodeId other, Mark m) {
    auto it = edges_.find(make_pair_key(at, other));
    if (it == edges_.end()) {
        throw std::invalid_argument("no edge between " + std::to_string(at) + " and " + std::to_string(other));
    }
    (at < other ? it->second.first : it->second.second) = m;
    invalidate();
}

const NodeSet& MixedGraph::neighbors(NodeId x) const {
    check_node(x);
    return adjacency_[static_cast<std::size_t>(x)];
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [pair, marks] : edges_) out.push_back({pair.first, pair.second, marks.first, marks.second});
    return out;
}

std::size_t MixedGraph::max_degree() const {
    std::size_t best = 0;
    for (const auto& adj : adjacency_) best = std::max(best, adj.size());
    return best;
}

bool MixedGraph::has_circles() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const auto& e) {
        return e.second.first == Mark::circle || e.second.second == Mark::circle;
    });
}

bool MixedGraph::is_directed(NodeId from, NodeId to) const {
    return mark(from, to) == Mark::tail && mark(to, from) == Mark::arrow;
}

bool MixedGraph::is_bidirected(NodeId x, NodeId y) const {
    return mark(x, y) == Mark::arrow && mark(y, x) == Mark::arrow;
}

bool MixedGraph::is_undirected(NodeId x, NodeId y) const {
    return mark(x, y) == Mark::tail && mark(y, x) == Mark::tail;
}

std::shared_ptr<const AncestryCache> MixedGraph::ancestry() const {
    std::lock_guard lock(cache_mutex_);
    if (!cache_) cache_ = std::make_shared<const AncestryCache>(*this);
    return cache_;
}

void MixedGraph::invalidate() {
    std::lock_guard lock(cache_mutex_);
    cache_.reset();
}

bool MixedGraph::operator==(const MixedGraph& other) const {
    return names_ == other.names_ && kinds_ == other.kinds_ && edges_ == other.edges_;
}

//============================ free functions ============================//

namespace {

void require_no_circles(const MixedGraph& g, const char* what) {
    if (g.has_circles()) throw std::invalid_argument(std::string(what) + " is undefined on graphs with circle marks");
}

}  // namespace

NodeSet ancestors(const MixedGraph& g, NodeId x) {
    if (!g.contains(x)) throw std::out_of_range("unknown node id " + std::to_string(x));
    require_no_circles(g, "ancestors");
    return g.ancestry()->ancestors(x);
}

NodeSet anteriors(const MixedGraph& g, NodeId x) {
    if (!g.contains(x)) throw std::out_of_range("unknown node id " + std::to_string(x));
    require_no_circles(g, "anteriors");
    return g.ancestry()->anteriors(x);
}

NodeSet ancestors(const MixedGraph& g, const NodeSet& xs) {
    NodeSet out;
    for (NodeId x : xs) out.merge(ancestors(g, x));
    return out;
}

NodeSet anteriors(const MixedGraph& g, const NodeSet& xs) {
    NodeSet out;
    for (NodeId x : xs) out.merge(anteriors(g, x));
    return out;
}

std::string describe(const MixedGraph& g, const Violation& v) {
    const std::string& a = g.name(v.node);
    switch (v.kind) {
        case ViolationKind::circle_mark: return "circle mark at " + a + " on edge to " + g.name(v.other);
        case ViolationKind::directed_cycle: return a + " lies on a directed cycle";
        case ViolationKind::arrowhead_at_ancestor:
            return "arrowhead at " + a + " on edge to " + g.name(v.other) + " but " + a + " is an ancestor of " +
                   g.name(v.other);
        case ViolationKind::arrowhead_at_undirected: return a + " has an undirected edge and an arrowhead";
    }
    return "unknown violation";
}

std::vector<Violation> validate_ancestral(const MixedGraph& g) {
    std::vector<Violation> out;
    const auto n = static_cast<NodeId>(g.size());
    const auto cache = g.ancestry();

    for (const Edge& e : g.edges()) {
        if (e.at_a == Mark::circle) out.push_back({ViolationKind::circle_mark, e.a, e.b});
        if (e.at_b == Mark::circle) out.push_back({ViolationKind::circle_mark, e.b, e.a});
    }
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId p : g.neighbors(x)) {
            if (g.is_directed(p, x) && cache->is_ancestor(x, p)) {
                out.push_back({ViolationKind::directed_cycle, x, -1});
                break;
            }
        }
    }
    for (const Edge& e : g.edges()) {
        if (e.at_a == Mark::arrow && cache->is_ancestor(e.a, e.b)) {
            out.push_back({ViolationKind::arrowhead_at_ancestor, e.a, e.b});
        }
        if (e.at_b == Mark::arrow && cache->is_ancestor(e.b, e.a)) {
            out.push_back({ViolationKind::arrowhead_at_ancestor, e.b, e.a});
        }
    }
    for (NodeId x = 0; x < n; ++x) {
        bool undirected = false;
        bool arrowhead = false;
        for (NodeId w : g.neighbors(x)) {
            undirected = undirected || g.is_undirected(x, w);
            arrowhead = arrowhead || g.mark(x, w) == Mark::arrow;
        }
        if (undirected && arrowhead) out.push_back({ViolationKind::arrowhead_at_undirected, x, -1});
    }
    return out;
}

std::vector<NodePair> validate_maximal(const MixedGraph& g, const SeparationTest& separated) {
    std::vector<NodePair> out;
    const auto n = static_cast<NodeId>(g.size());
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y = x + 1; y < n; ++y) {
            if (g.adjacent(x, y)) continue;
            std::vector<NodeId> pool;
            for (NodeId w = 0; w < n; ++w) {
                if (w != x && w != y) pool.push_back(w);
            }
            bool found = false;
            const std::size_t subsets = std::size_t{1} << pool.size();
            for (std::size_t mask = 0; mask < subsets && !found; ++mask) {
                NodeSet z;
                for (std::size_t i = 0; i < pool.size(); ++i) {
                    if (mask & (std::size_t{1} << i)) z.insert(pool[i]);
                }
                found = separated(g, x, y, z);
            }
            if (!found) out.emplace_back(x, y);
        }
    }
    return out;
}

MixedGraph skeleton(const MixedGraph& g) {
    MixedGraph out;
    for (NodeId x = 0; x < static_cast<NodeId>(g.size()); ++x) out.add_node(g.name(x), g.kind(x));
    for (const Edge& e : g.edges()) out.set_edge(e.a, e.b, Mark::circle, Mark::circle);
    return out;
}

}  // namespace fciplus
