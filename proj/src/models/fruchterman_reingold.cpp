#include "dynlay/models/fruchterman_reingold.hpp"

#include <algorithm>
#include <cmath>

namespace dynlay::models {

FruchtermanReingoldParams FruchtermanReingoldParams::from(const ModelParams& params)
{
    FruchtermanReingoldParams p;
    p.scale = param_or(params, "scale", p.scale);
    p.initial_temperature = param_or(params, "initial_temperature", p.initial_temperature);
    p.cooling = param_or(params, "cooling", p.cooling);
    p.rewarm = param_or(params, "rewarm", p.rewarm);
    p.stop_fraction = param_or(params, "stop_fraction", p.stop_fraction);
    return p;
}

double fr_ideal_distance(double scale, const Canvas& canvas, std::size_t node_count)
{
    if (node_count == 0)
        return 0.0;
    return scale * std::sqrt(canvas.area() / static_cast<double>(node_count));
}

double fr_repulsion(double k_ideal, double distance)
{
    return k_ideal * k_ideal / distance;
}

double fr_attraction(double k_ideal, double distance)
{
    return distance * distance / k_ideal;
}

std::vector<Position> fr_displacements(const Topology& topo, const std::vector<Position>& positions,
                                       double k_ideal, double jitter)
{
    const std::size_t n = topo.size();
    std::vector<Position> disp(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const Separation s = separation(positions[i], positions[j], jitter,
                                            static_cast<long>(i), static_cast<long>(j));
            const double f = fr_repulsion(k_ideal, s.dist) / s.dist;
            disp[i].x += s.dx * f;
            disp[i].y += s.dy * f;
            disp[j].x -= s.dx * f;
            disp[j].y -= s.dy * f;
        }
    }
    for (const auto& [a, b] : topo.edges) {
        const Separation s = separation(positions[a], positions[b], jitter, a, b);
        const double f = fr_attraction(k_ideal, s.dist) / s.dist;
        disp[a].x -= s.dx * f;
        disp[a].y -= s.dy * f;
        disp[b].x += s.dx * f;
        disp[b].y += s.dy * f;
    }
    return disp;
}

FruchtermanReingold::FruchtermanReingold(FruchtermanReingoldParams params) : params_(params) {}

void FruchtermanReingold::init_section(const Graph& g, Layout& layout, ModelContext& ctx)
{
    place_all(g, layout, ctx);
    t0_ = params_.initial_temperature * layout.canvas.min_side();
    temperature_ = t0_;
    k_ideal_ = fr_ideal_distance(params_.scale, layout.canvas, g.node_count());
}

void FruchtermanReingold::on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                                    ModelContext& ctx)
{
    if (delta.empty())
        return;
    absorb_common(g, layout, delta, ctx);
    t0_ = params_.initial_temperature * layout.canvas.min_side();
    temperature_ = params_.rewarm * t0_;
    k_ideal_ = fr_ideal_distance(params_.scale, layout.canvas, g.node_count());
}

StepReport FruchtermanReingold::iteration_step(const Graph& g, Layout& layout, ModelContext&)
{
    StepReport report;
    const Topology topo = g.topology();
    std::vector<Position> pos = gather(topo, layout);
    const double jitter = kJitterFraction * layout.canvas.min_side();
    const std::vector<Position> disp = fr_displacements(topo, pos, k_ideal_, jitter);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double len = std::hypot(disp[i].x, disp[i].y);
        if (len == 0.0 || temperature_ <= 0.0)
            continue;
        const double step = std::min(len, temperature_);
        const Position before = pos[i];
        pos[i].x = std::clamp(pos[i].x + disp[i].x / len * step, 0.0, layout.canvas.width);
        pos[i].y = std::clamp(pos[i].y + disp[i].y / len * step, 0.0, layout.canvas.height);
        const double moved = std::hypot(pos[i].x - before.x, pos[i].y - before.y);
        if (moved > 0.0)
            ++report.moved;
        report.max_displacement = std::max(report.max_displacement, moved);
    }
    scatter(topo, pos, layout);
    temperature_ *= params_.cooling;
    report.converged = is_good_layout(g, layout);
    return report;
}

bool FruchtermanReingold::is_good_layout(const Graph& g, const Layout&) const
{
    if (g.node_count() < 2)
        return true;
    return temperature_ <= params_.stop_fraction * t0_;
}

}  // namespace dynlay::models
