#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dynlay/graph.hpp"

namespace dynlay {

struct MetricSample {
    double wall_s = 0.0;
    std::size_t iteration = 0;
    std::size_t ec = 0;
    double ec_sd = 0.0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    /// False when the graph had no edges and ec_sd was recorded as 0.
    bool ec_sd_defined = true;
};

using MetricSeries = std::vector<MetricSample>;

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

/// True iff the open segments a1-a2 and b1-b2 intersect. Touching at an
/// endpoint is not a crossing; collinear overlap of positive length is.
bool segments_properly_intersect(const Position& a1, const Position& a2, const Position& b1,
                                 const Position& b2);

/// Number of unordered edge pairs, excluding pairs sharing a node, whose
/// segments cross. Quadratic pairwise scan.
std::size_t edge_crossings(const Layout& layout, const EdgeList& edges);

/// max(ec) - min(ec) over the series.
std::size_t ec_vm(const MetricSeries& series);

/// Population standard deviation of Euclidean edge lengths.
double edge_length_sd(const Layout& layout, const EdgeList& edges);

/// Measures one layout. Edges are the graph's unique undirected pairs.
MetricSample sample_metrics(const Graph& g, const Layout& layout, double wall_s,
                            std::size_t iteration);

}  // namespace dynlay
