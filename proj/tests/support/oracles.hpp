#pragma once

// Independent reference implementations used to check the library. None of
// these call into the code under test except for plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynlay/graph.hpp"

namespace oracle {

using dynlay::NodeId;
using dynlay::Position;

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Crossing test via the parametric form p = a1 + t r = b1 + u s solved by
/// Cramer's rule. Open segments: t and u strictly inside (0, 1).
inline bool segments_cross(const Position& a1, const Position& a2, const Position& b1,
                           const Position& b2)
{
    const double rx = a2.x - a1.x, ry = a2.y - a1.y;
    const double sx = b2.x - b1.x, sy = b2.y - b1.y;
    // A zero-length open segment is empty.
    if ((rx == 0.0 && ry == 0.0) || (sx == 0.0 && sy == 0.0))
        return false;
    const double qx = b1.x - a1.x, qy = b1.y - a1.y;
    const double denom = rx * sy - ry * sx;
    const double scale = std::hypot(rx, ry) * std::hypot(sx, sy);
    if (std::abs(denom) > 1e-12 * scale) {
        const double t = (qx * sy - qy * sx) / denom;
        const double u = (qx * ry - qy * rx) / denom;
        return t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0;
    }
    // Parallel: overlap only if collinear, then compare parameter intervals on r.
    const double offset = qx * ry - qy * rx;
    if (std::abs(offset) > 1e-12 * std::hypot(rx, ry) * std::hypot(qx, qy))
        return false;
    const double rr = rx * rx + ry * ry;
    const double t0 = (qx * rx + qy * ry) / rr;
    const double t1 = ((b2.x - a1.x) * rx + (b2.y - a1.y) * ry) / rr;
    const double lo = std::max(0.0, std::min(t0, t1));
    const double hi = std::min(1.0, std::max(t0, t1));
    return hi - lo > 1e-12;
}

/// Brute-force crossing count over index-based edges, skipping adjacent pairs.
inline std::size_t count_crossings(const std::vector<Position>& pos,
                                   const std::vector<std::pair<int, int>>& edges)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const auto [a, b] = edges[i];
            const auto [c, d] = edges[j];
            if (a == c || a == d || b == c || b == d)
                continue;
            if (segments_cross(pos[a], pos[b], pos[c], pos[d]))
                ++n;
        }
    }
    return n;
}

/// All-pairs hop counts by Floyd-Warshall over an undirected edge list;
/// kInf marks unreachable pairs.
inline std::vector<std::vector<int>> all_pairs_hops(std::size_t n,
                                                    const std::vector<std::pair<int, int>>& edges)
{
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 0;
    for (const auto& [a, b] : edges) {
        d[a][b] = std::min(d[a][b], 1);
        d[b][a] = std::min(d[b][a], 1);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j])
                    d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Index form of a graph: node order plus undirected index pairs.
struct Indexed {
    std::vector<NodeId> ids;
    std::map<NodeId, int> index;
    std::vector<std::pair<int, int>> edges;
};

inline Indexed index_graph(const dynlay::Graph& g)
{
    Indexed out;
    for (const auto& id : g.nodes()) {
        out.index[id] = static_cast<int>(out.ids.size());
        out.ids.push_back(id);
    }
    for (const auto& e : g.edges())
        out.edges.emplace_back(out.index.at(e.src), out.index.at(e.dst));
    return out;
}

/// Random simple directed graph on nodes "n0".."n{n-1}" with about m edges.
inline dynlay::Graph random_graph(std::mt19937_64& rng, int n, int m)
{
    dynlay::Graph g;
    dynlay::UpdateBatch b;
    for (int i = 0; i < n; ++i)
        b.added_nodes.push_back("n" + std::to_string(i));
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<std::pair<int, int>> used;
    for (int k = 0; k < m && n > 1; ++k) {
        int u = pick(rng), v = pick(rng);
        if (u == v || used.count({std::min(u, v), std::max(u, v)}))
            continue;
        used.insert({std::min(u, v), std::max(u, v)});
        b.added_edges.push_back({"n" + std::to_string(u), "n" + std::to_string(v), 1.0, 0.0});
    }
    g.apply_update(b);
    return g;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline dynlay::Graph random_connected_graph(std::mt19937_64& rng, int n, int extra)
{
    dynlay::Graph g;
    dynlay::UpdateBatch b;
    std::set<std::pair<int, int>> used;
    for (int i = 0; i < n; ++i) {
        b.added_nodes.push_back("n" + std::to_string(i));
        if (i > 0) {
            const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
            used.insert({parent, i});
            b.added_edges.push_back({"n" + std::to_string(parent), "n" + std::to_string(i), 1.0, 0.0});
        }
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < extra && n > 1; ++k) {
        int u = pick(rng), v = pick(rng);
        if (u == v || used.count({std::min(u, v), std::max(u, v)}))
            continue;
        used.insert({std::min(u, v), std::max(u, v)});
        b.added_edges.push_back({"n" + std::to_string(u), "n" + std::to_string(v), 1.0, 0.0});
    }
    g.apply_update(b);
    return g;
}

/// Point-mass aggregate over the points inside a closed rectangle.
struct Mass {
    std::size_t count = 0;
    double mass = 0.0;
    double cx = 0.0;
    double cy = 0.0;
};

inline Mass region_mass(const std::map<NodeId, std::pair<Position, double>>& points, double x0,
                        double y0, double x1, double y1)
{
    Mass m;
    double sx = 0.0, sy = 0.0;
    for (const auto& [id, pm] : points) {
        const auto& [p, w] = pm;
        if (p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1)
            continue;
        ++m.count;
        m.mass += w;
        sx += w * p.x;
        sy += w * p.y;
    }
    if (m.mass != 0.0) {
        m.cx = sx / m.mass;
        m.cy = sy / m.mass;
    }
    return m;
}

/// Pairwise log-potential field at p: sum w (p - q) / |p - q|^2 and the
/// matching sum of w ln |p - q|, skipping `skip`.
struct Field {
    double fx = 0.0;
    double fy = 0.0;
    double log_sum = 0.0;
};

inline Field pairwise_field(const std::map<NodeId, std::pair<Position, double>>& points,
                            const Position& p, const NodeId* skip = nullptr)
{
    Field f;
    for (const auto& [id, pm] : points) {
        if (skip && id == *skip)
            continue;
        const auto& [q, w] = pm;
        const double dx = p.x - q.x, dy = p.y - q.y;
        const double r2 = dx * dx + dy * dy;
        f.fx += w * dx / r2;
        f.fy += w * dy / r2;
        f.log_sum += w * 0.5 * std::log(r2);
    }
    return f;
}

inline double relative_error(double got, double want)
{
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

}  // namespace oracle
