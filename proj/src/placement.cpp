#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "dynlay/engine.hpp"

namespace dynlay {

Position place_random(const Canvas& canvas, Rng& rng)
{
    std::uniform_real_distribution<double> ux(0.0, canvas.width);
    std::uniform_real_distribution<double> uy(0.0, canvas.height);
    const double x = ux(rng);
    const double y = uy(rng);
    return {x, y};
}

Position place_barycenter(const Layout& layout, std::span<const NodeId> positioned_neighbors)
{
    if (positioned_neighbors.empty())
        throw std::invalid_argument("barycenter placement needs at least one positioned neighbor");
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& id : positioned_neighbors) {
        const Position& p = layout.at(id);
        sx += p.x;
        sy += p.y;
    }
    const double n = static_cast<double>(positioned_neighbors.size());
    return {sx / n, sy / n};
}

double barycenter_distance(double a, double m_i, double m_j)
{
    if (!(m_i > 0.0) || !(m_j > 0.0))
        throw std::invalid_argument("barycenter_distance needs positive masses");
    if (a < 0.0)
        throw std::invalid_argument("barycenter_distance needs a >= 0");
    return a / (1.0 + m_i / m_j);
}

void place_nodes(const Graph& g, Layout& layout, std::span<const NodeId> nodes,
                 Placement placement, Rng& rng)
{
    for (const auto& id : nodes) {
        if (placement == Placement::kBarycenter) {
            std::vector<NodeId> placed;
            for (auto& n : g.neighbors(id)) {
                if (layout.has(n))
                    placed.push_back(std::move(n));
            }
            if (!placed.empty()) {
                layout.positions[id] = place_barycenter(layout, placed);
                continue;
            }
        }
        layout.positions[id] = place_random(layout.canvas, rng);
    }
}

Canvas rescale_canvas(const Canvas& canvas, std::size_t added_count, std::size_t current_count)
{
    if (added_count == 0 || current_count == 0)
        return canvas;
    const double growth = 1.0 + static_cast<double>(added_count) / static_cast<double>(current_count);
    const double side = std::sqrt(growth);
    return {canvas.width * side, canvas.height * side};
}

std::vector<Snapshot> normalize_snapshots(std::vector<Snapshot> snapshots)
{
    if (snapshots.empty())
        return snapshots;
    std::size_t standard = 0;
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        const auto& s = snapshots[i];
        const auto& best = snapshots[standard];
        const auto key = std::make_tuple(s.node_count(), s.edge_count(), s.at);
        const auto best_key = std::make_tuple(best.node_count(), best.edge_count(), best.at);
        if (key >= best_key)
            standard = i;
    }
    const Canvas target = snapshots[standard].canvas;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        auto& s = snapshots[i];
        if (i == standard || s.canvas == target)
            continue;
        const double scale =
            std::min(target.width / s.canvas.width, target.height / s.canvas.height);
        const double dx = (target.width - scale * s.canvas.width) / 2.0;
        const double dy = (target.height - scale * s.canvas.height) / 2.0;
        for (auto& [id, p] : s.positions)
            p = {scale * p.x + dx, scale * p.y + dy};
        s.canvas = target;
    }
    return snapshots;
}

std::string_view to_string(Mode mode)
{
    return mode == Mode::kStatic ? "static" : "online";
}

std::string_view to_string(Placement placement)
{
    return placement == Placement::kRandom ? "random" : "barycenter";
}

}  // namespace dynlay
