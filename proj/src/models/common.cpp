#include "dynlay/models/common.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dynlay::models {

namespace {

// Direction in [0, 2pi) derived from an unordered pair.
double pair_angle(long lo, long hi)
{
    std::uint64_t h = static_cast<std::uint64_t>(lo) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(hi) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDULL;
    h ^= h >> 33;
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
}

}  // namespace

Separation separation(const Position& a, const Position& b, double jitter, long i, long j)
{
    Separation s{a.x - b.x, a.y - b.y, 0.0};
    s.dist = std::hypot(s.dx, s.dy);
    if (s.dist > 0.0)
        return s;
    const double angle = pair_angle(std::min(i, j), std::max(i, j));
    const double sign = i < j ? 1.0 : -1.0;
    s.dx = sign * jitter * std::cos(angle);
    s.dy = sign * jitter * std::sin(angle);
    s.dist = jitter;
    return s;
}

void absorb_common(const Graph& g, Layout& layout, const DeltaReport& delta, ModelContext& ctx)
{
    for (const auto& id : delta.removed_nodes)
        layout.positions.erase(id);
    std::vector<NodeId> fresh;
    for (const auto& id : delta.added_nodes) {
        if (g.contains(id) && !layout.has(id))
            fresh.push_back(id);
    }
    place_nodes(g, layout, fresh, ctx.placement, *ctx.rng);
}

void place_all(const Graph& g, Layout& layout, ModelContext& ctx)
{
    layout.positions.clear();
    for (const auto& id : g.nodes())
        layout.positions[id] = place_random(layout.canvas, *ctx.rng);
}

std::vector<Position> gather(const Topology& topo, const Layout& layout)
{
    std::vector<Position> out;
    out.reserve(topo.size());
    for (const auto& id : topo.ids)
        out.push_back(layout.at(id));
    return out;
}

void scatter(const Topology& topo, const std::vector<Position>& positions, Layout& layout)
{
    for (std::size_t i = 0; i < topo.size(); ++i)
        layout.positions[topo.ids[i]] = positions[i];
}

double param_or(const ModelParams& params, const std::string& key, double fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace dynlay::models
