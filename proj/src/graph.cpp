#include "dynlay/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_set>

namespace dynlay {

namespace {

const std::vector<NodeId> kNoNeighbors;

std::uint64_t pair_key(int a, int b)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

const Position& Layout::at(const NodeId& id) const
{
    auto it = positions.find(id);
    if (it == positions.end())
        throw GraphError("node '" + id + "' has no position");
    return it->second;
}

bool Graph::contains_edge(const NodeId& src, const NodeId& dst) const
{
    auto it = adjacency_.find(src);
    if (it == adjacency_.end())
        return false;
    const auto& out = it->second.out;
    return std::find(out.begin(), out.end(), dst) != out.end();
}

const std::vector<NodeId>& Graph::out_neighbors(const NodeId& id) const
{
    auto it = adjacency_.find(id);
    if (it == adjacency_.end())
        throw GraphError("unknown node '" + id + "'");
    return it->second.out;
}

const std::vector<NodeId>& Graph::in_neighbors(const NodeId& id) const
{
    auto it = adjacency_.find(id);
    if (it == adjacency_.end())
        throw GraphError("unknown node '" + id + "'");
    return it->second.in;
}

std::vector<NodeId> Graph::neighbors(const NodeId& id) const
{
    auto it = adjacency_.find(id);
    if (it == adjacency_.end())
        throw GraphError("unknown node '" + id + "'");
    std::vector<NodeId> result;
    std::unordered_set<NodeId> seen;
    for (const auto* list : {&it->second.out, &it->second.in}) {
        for (const auto& n : *list) {
            if (seen.insert(n).second)
                result.push_back(n);
        }
    }
    return result;
}

std::vector<std::pair<NodeId, NodeId>> Graph::undirected_edges() const
{
    std::vector<std::pair<NodeId, NodeId>> result;
    std::unordered_set<std::string> seen;
    for (const auto& e : edges_) {
        const auto& a = std::min(e.src, e.dst);
        const auto& b = std::max(e.src, e.dst);
        std::string key = a;
        key.push_back('\0');
        key += b;
        if (seen.insert(std::move(key)).second)
            result.emplace_back(e.src, e.dst);
    }
    return result;
}

void Graph::erase_edge_at(std::size_t index)
{
    const Edge edge = edges_[index];
    edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(index));
    auto& out = adjacency_.at(edge.src).out;
    out.erase(std::find(out.begin(), out.end(), edge.dst));
    auto& in = adjacency_.at(edge.dst).in;
    in.erase(std::find(in.begin(), in.end(), edge.src));
}

DeltaReport Graph::apply_update(const UpdateBatch& batch)
{
    DeltaReport delta;

    // Validation pass: nothing is mutated until the whole batch is accepted.
    std::unordered_set<NodeId> new_nodes;
    for (const auto& id : batch.added_nodes) {
        if (!contains(id))
            new_nodes.insert(id);
    }
    auto will_exist = [&](const NodeId& id) { return contains(id) || new_nodes.count(id) != 0; };

    std::map<std::pair<NodeId, NodeId>, long> multiplicity;
    auto count_of = [&](const NodeId& s, const NodeId& d) -> long& {
        auto key = std::make_pair(s, d);
        auto it = multiplicity.find(key);
        if (it == multiplicity.end()) {
            long n = 0;
            if (contains(s)) {
                const auto& out = adjacency_.at(s).out;
                n = static_cast<long>(std::count(out.begin(), out.end(), d));
            }
            it = multiplicity.emplace(std::move(key), n).first;
        }
        return it->second;
    };

    std::vector<const Edge*> edges_to_add;
    for (const auto& e : batch.added_edges) {
        if (e.src == e.dst) {
            delta.warnings.push_back("dropped self-loop on '" + e.src + "'");
            continue;
        }
        if (!will_exist(e.src) || !will_exist(e.dst))
            throw GraphError("edge (" + e.src + ", " + e.dst + ") has a dangling endpoint");
        long& n = count_of(e.src, e.dst);
        if (options_.dedup_edges && n > 0)
            continue;
        ++n;
        edges_to_add.push_back(&e);
    }

    std::vector<const Edge*> edges_to_remove;
    for (const auto& e : batch.removed_edges) {
        long& n = count_of(e.src, e.dst);
        if (n <= 0) {
            if (options_.strict)
                throw GraphError("cannot remove missing edge (" + e.src + ", " + e.dst + ")");
            delta.warnings.push_back("skipped removal of missing edge (" + e.src + ", " + e.dst + ")");
            continue;
        }
        --n;
        edges_to_remove.push_back(&e);
    }

    std::vector<const NodeId*> nodes_to_remove;
    std::unordered_set<NodeId> removing;
    for (const auto& id : batch.removed_nodes) {
        if (!will_exist(id) || removing.count(id)) {
            if (options_.strict)
                throw GraphError("cannot remove missing node '" + id + "'");
            delta.warnings.push_back("skipped removal of missing node '" + id + "'");
            continue;
        }
        removing.insert(id);
        nodes_to_remove.push_back(&id);
    }

    // Mutation pass.
    for (const auto& id : batch.added_nodes) {
        if (contains(id))
            continue;
        adjacency_.emplace(id, Adjacency{});
        order_.push_back(id);
        delta.added_nodes.push_back(id);
    }
    for (const Edge* e : edges_to_add) {
        edges_.push_back(*e);
        adjacency_.at(e->src).out.push_back(e->dst);
        adjacency_.at(e->dst).in.push_back(e->src);
        delta.added_edges.push_back(*e);
    }
    for (const Edge* e : edges_to_remove) {
        for (std::size_t i = edges_.size(); i-- > 0;) {
            if (edges_[i].src == e->src && edges_[i].dst == e->dst) {
                delta.removed_edges.push_back(edges_[i]);
                erase_edge_at(i);
                break;
            }
        }
    }
    for (const NodeId* id : nodes_to_remove) {
        for (std::size_t i = edges_.size(); i-- > 0;) {
            if (edges_[i].src == *id || edges_[i].dst == *id) {
                delta.removed_edges.push_back(edges_[i]);
                erase_edge_at(i);
            }
        }
        adjacency_.erase(*id);
        order_.erase(std::find(order_.begin(), order_.end(), *id));
        delta.removed_nodes.push_back(*id);
    }
    return delta;
}

Topology Graph::topology() const
{
    Topology topo;
    topo.ids = order_;
    topo.index.reserve(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i)
        topo.index.emplace(order_[i], static_cast<int>(i));
    topo.neighbors.assign(order_.size(), {});
    topo.degree.assign(order_.size(), 0);

    std::unordered_map<std::uint64_t, std::size_t> pair_slot;
    for (const auto& e : edges_) {
        int a = topo.index.at(e.src);
        int b = topo.index.at(e.dst);
        ++topo.degree[a];
        ++topo.degree[b];
        if (a > b)
            std::swap(a, b);
        auto [it, inserted] = pair_slot.emplace(pair_key(a, b), topo.edges.size());
        if (inserted) {
            topo.edges.emplace_back(a, b);
            topo.edge_weights.push_back(std::abs(e.weight));
            topo.neighbors[a].push_back(b);
            topo.neighbors[b].push_back(a);
        } else {
            topo.edge_weights[it->second] += std::abs(e.weight);
        }
    }
    return topo;
}

std::vector<int> bfs_hops(const Topology& topo, int source)
{
    std::vector<int> dist(topo.size(), -1);
    std::deque<int> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : topo.neighbors[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

std::optional<int> hop_count(const Graph& g, const NodeId& u, const NodeId& v)
{
    if (!g.contains(u))
        throw GraphError("unknown node '" + u + "'");
    if (!g.contains(v))
        throw GraphError("unknown node '" + v + "'");
    if (u == v)
        return 0;
    const Topology topo = g.topology();
    const auto dist = bfs_hops(topo, topo.index.at(u));
    const int d = dist[topo.index.at(v)];
    if (d < 0)
        return std::nullopt;
    return d;
}

int diameter(const Topology& topo)
{
    if (topo.size() == 0)
        throw GraphError("diameter of an empty graph");
    int best = 0;
    for (std::size_t s = 0; s < topo.size(); ++s) {
        for (int d : bfs_hops(topo, static_cast<int>(s)))
            best = std::max(best, d);
    }
    return best;
}

int diameter(const Graph& g)
{
    return diameter(g.topology());
}

double euclidean(const Layout& layout, const NodeId& u, const NodeId& v)
{
    const Position& a = layout.at(u);
    const Position& b = layout.at(v);
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::size_t degree(const Graph& g, const NodeId& u)
{
    return g.out_neighbors(u).size() + g.in_neighbors(u).size();
}

}  // namespace dynlay
