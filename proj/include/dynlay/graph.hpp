#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dynlay {

/// Opaque node identifier, taken verbatim from the input token.
using NodeId = std::string;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

struct Canvas {
    double width = 100.0;
    double height = 100.0;

    double min_side() const { return width < height ? width : height; }
    double area() const { return width * height; }
    friend bool operator==(const Canvas&, const Canvas&) = default;
};

struct Edge {
    NodeId src;
    NodeId dst;
    double weight = 1.0;
    double arrival = 0.0;
};

/// Node positions plus the canvas they live on.
struct Layout {
    std::unordered_map<NodeId, Position> positions;
    Canvas canvas;

    bool has(const NodeId& id) const { return positions.count(id) != 0; }
    const Position& at(const NodeId& id) const;
};

struct UpdateBatch {
    double at = 0.0;
    std::vector<NodeId> added_nodes;
    std::vector<Edge> added_edges;
    std::vector<NodeId> removed_nodes;
    std::vector<Edge> removed_edges;

    bool empty() const
    {
        return added_nodes.empty() && added_edges.empty() && removed_nodes.empty() &&
               removed_edges.empty();
    }
};

/// Effective changes made by one apply_update call. Cascaded edge removals
/// (edges incident to a removed node) are listed in removed_edges.
struct DeltaReport {
    std::vector<NodeId> added_nodes;
    std::vector<Edge> added_edges;
    std::vector<NodeId> removed_nodes;
    std::vector<Edge> removed_edges;
    std::vector<std::string> warnings;

    bool empty() const
    {
        return added_nodes.empty() && added_edges.empty() && removed_nodes.empty() &&
               removed_edges.empty();
    }
};

struct GraphOptions {
    bool dedup_edges = true;
    /// Strict mode rejects removal of missing elements; lenient mode skips them.
    bool strict = true;
};

/// Dense, undirected view of a Graph used by BFS and the force loops.
/// Neighbor lists are unique and exclude self.
struct Topology {
    std::vector<NodeId> ids;
    std::unordered_map<NodeId, int> index;
    std::vector<std::vector<int>> neighbors;
    /// Unique unordered pairs (a < b by index) in first-appearance order.
    std::vector<std::pair<int, int>> edges;
    /// Sum of |weight| over all directed edges joining the pair.
    std::vector<double> edge_weights;
    /// In + out degree in the directed multigraph.
    std::vector<int> degree;

    std::size_t size() const { return ids.size(); }
};

/// Directed node/edge multiset. Nodes keep insertion order.
class Graph {
public:
    Graph() = default;
    explicit Graph(GraphOptions options) : options_(options) {}

    const GraphOptions& options() const { return options_; }
    void set_options(GraphOptions options) { options_ = options; }

    std::size_t node_count() const { return order_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return order_.empty(); }
    bool contains(const NodeId& id) const { return adjacency_.count(id) != 0; }
    bool contains_edge(const NodeId& src, const NodeId& dst) const;

    const std::vector<NodeId>& nodes() const { return order_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Out-neighbors and in-neighbors with multiplicity.
    const std::vector<NodeId>& out_neighbors(const NodeId& id) const;
    const std::vector<NodeId>& in_neighbors(const NodeId& id) const;
    /// Unique neighbors ignoring direction.
    std::vector<NodeId> neighbors(const NodeId& id) const;

    /// Unique unordered endpoint pairs in first-appearance order.
    std::vector<std::pair<NodeId, NodeId>> undirected_edges() const;

    /// Validates the whole batch before touching the graph. Additions are
    /// applied before removals.
    DeltaReport apply_update(const UpdateBatch& batch);

    Topology topology() const;

private:
    struct Adjacency {
        std::vector<NodeId> out;
        std::vector<NodeId> in;
    };

    void erase_edge_at(std::size_t index);

    GraphOptions options_;
    std::vector<NodeId> order_;
    std::unordered_map<NodeId, Adjacency> adjacency_;
    std::vector<Edge> edges_;
};

/// Shortest-path edge count ignoring direction; nullopt when unreachable.
std::optional<int> hop_count(const Graph& g, const NodeId& u, const NodeId& v);

/// Hop counts from one source over a dense topology; -1 marks unreachable.
std::vector<int> bfs_hops(const Topology& topo, int source);

/// Largest finite hop count over all pairs.
int diameter(const Graph& g);
int diameter(const Topology& topo);

double euclidean(const Layout& layout, const NodeId& u, const NodeId& v);

std::size_t degree(const Graph& g, const NodeId& u);

}  // namespace dynlay
