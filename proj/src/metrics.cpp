#include "dynlay/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynlay {

namespace {

constexpr double kCollinearTolerance = 1e-12;

// Sign of the turn a->b->c, with a relative dead band for near-collinear triples.
int orientation(const Position& a, const Position& b, const Position& c)
{
    const double ux = b.x - a.x;
    const double uy = b.y - a.y;
    const double vx = c.x - a.x;
    const double vy = c.y - a.y;
    const double cross = ux * vy - uy * vx;
    const double scale = std::hypot(ux, uy) * std::hypot(vx, vy);
    if (std::abs(cross) <= kCollinearTolerance * scale)
        return 0;
    return cross > 0 ? 1 : -1;
}

bool collinear_overlap(const Position& a1, const Position& a2, const Position& b1,
                       const Position& b2)
{
    // Project onto the dominant axis of the first segment.
    const bool use_x = std::abs(a2.x - a1.x) >= std::abs(a2.y - a1.y);
    auto coord = [use_x](const Position& p) { return use_x ? p.x : p.y; };
    const double a_lo = std::min(coord(a1), coord(a2));
    const double a_hi = std::max(coord(a1), coord(a2));
    const double b_lo = std::min(coord(b1), coord(b2));
    const double b_hi = std::max(coord(b1), coord(b2));
    const double overlap = std::min(a_hi, b_hi) - std::max(a_lo, b_lo);
    const double span = std::max(a_hi - a_lo, b_hi - b_lo);
    return overlap > kCollinearTolerance * span;
}

}  // namespace

bool segments_properly_intersect(const Position& a1, const Position& a2, const Position& b1,
                                 const Position& b2)
{
    const int o1 = orientation(a1, a2, b1);
    const int o2 = orientation(a1, a2, b2);
    const int o3 = orientation(b1, b2, a1);
    const int o4 = orientation(b1, b2, a2);
    if (o1 == 0 && o2 == 0)
        return collinear_overlap(a1, a2, b1, b2);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

std::size_t edge_crossings(const Layout& layout, const EdgeList& edges)
{
    struct Segment {
        const NodeId* u;
        const NodeId* v;
        Position a;
        Position b;
    };
    std::vector<Segment> segments;
    segments.reserve(edges.size());
    for (const auto& [u, v] : edges)
        segments.push_back({&u, &v, layout.at(u), layout.at(v)});

    std::size_t count = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment& s = segments[i];
        for (std::size_t j = i + 1; j < segments.size(); ++j) {
            const Segment& t = segments[j];
            if (*s.u == *t.u || *s.u == *t.v || *s.v == *t.u || *s.v == *t.v)
                continue;
            if (segments_properly_intersect(s.a, s.b, t.a, t.b))
                ++count;
        }
    }
    return count;
}

std::size_t ec_vm(const MetricSeries& series)
{
    if (series.empty())
        throw std::invalid_argument("ec_vm of an empty series");
    auto [lo, hi] = std::minmax_element(series.begin(), series.end(),
                                        [](const auto& a, const auto& b) { return a.ec < b.ec; });
    return hi->ec - lo->ec;
}

double edge_length_sd(const Layout& layout, const EdgeList& edges)
{
    if (edges.empty())
        throw std::invalid_argument("edge_length_sd needs at least one edge");
    std::vector<double> lengths;
    lengths.reserve(edges.size());
    double sum = 0.0;
    for (const auto& [u, v] : edges) {
        lengths.push_back(euclidean(layout, u, v));
        sum += lengths.back();
    }
    const double mean = sum / static_cast<double>(lengths.size());
    double sq = 0.0;
    for (double l : lengths)
        sq += (l - mean) * (l - mean);
    return std::sqrt(sq / static_cast<double>(lengths.size()));
}

MetricSample sample_metrics(const Graph& g, const Layout& layout, double wall_s,
                            std::size_t iteration)
{
    MetricSample s;
    s.wall_s = wall_s;
    s.iteration = iteration;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    const EdgeList edges = g.undirected_edges();
    s.ec = edge_crossings(layout, edges);
    if (edges.empty()) {
        s.ec_sd = 0.0;
        s.ec_sd_defined = false;
    } else {
        s.ec_sd = edge_length_sd(layout, edges);
    }
    return s;
}

}  // namespace dynlay
