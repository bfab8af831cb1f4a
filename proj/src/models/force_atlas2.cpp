#include "dynlay/models/force_atlas2.hpp"

#include <algorithm>
#include <cmath>

namespace dynlay::models {

ForceAtlas2Params ForceAtlas2Params::from(const ModelParams& params)
{
    ForceAtlas2Params p;
    p.repulsion = param_or(params, "repulsion", p.repulsion);
    p.gravity = param_or(params, "gravity", p.gravity);
    p.tolerance = param_or(params, "tolerance", p.tolerance);
    p.speed = param_or(params, "speed", p.speed);
    p.max_speed = param_or(params, "max_speed", p.max_speed);
    p.max_speed_growth = param_or(params, "max_speed_growth", p.max_speed_growth);
    p.stop_fraction = param_or(params, "stop_fraction", p.stop_fraction);
    return p;
}

double fa2_repulsion(double kr, int degree_u, int degree_v, double distance)
{
    return kr * (degree_u + 1.0) * (degree_v + 1.0) / distance;
}

double fa2_node_speed(double ks, double global_speed, double swing, double force_magnitude,
                      double max_speed)
{
    double s = ks * global_speed / (1.0 + global_speed * std::sqrt(swing));
    if (force_magnitude > 0.0)
        s = std::min(s, max_speed / force_magnitude);
    return s;
}

std::vector<Position> fa2_forces(const Topology& topo, const std::vector<Position>& positions,
                                 const ForceAtlas2Params& params, const Position& center,
                                 double jitter)
{
    const std::size_t n = topo.size();
    std::vector<Position> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const Separation s = separation(positions[i], positions[j], jitter,
                                            static_cast<long>(i), static_cast<long>(j));
            const double r =
                fa2_repulsion(params.repulsion, topo.degree[i], topo.degree[j], s.dist) / s.dist;
            f[i].x += s.dx * r;
            f[i].y += s.dy * r;
            f[j].x -= s.dx * r;
            f[j].y -= s.dy * r;
        }
    }
    for (const auto& [a, b] : topo.edges) {
        // Attraction magnitude d: the separation vector itself.
        const Separation s = separation(positions[a], positions[b], jitter, a, b);
        f[a].x -= s.dx;
        f[a].y -= s.dy;
        f[b].x += s.dx;
        f[b].y += s.dy;
    }
    if (params.gravity != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double gx = center.x - positions[i].x;
            const double gy = center.y - positions[i].y;
            const double d = std::hypot(gx, gy);
            if (d == 0.0)
                continue;
            const double g = params.gravity * (topo.degree[i] + 1.0) / d;
            f[i].x += gx * g;
            f[i].y += gy * g;
        }
    }
    return f;
}

ForceAtlas2::ForceAtlas2(ForceAtlas2Params params) : params_(params) {}

void ForceAtlas2::init_section(const Graph& g, Layout& layout, ModelContext& ctx)
{
    place_all(g, layout, ctx);
    previous_force_.clear();
    global_speed_ = 1.0;
    last_max_move_ = 0.0;
    stepped_ = false;
}

void ForceAtlas2::on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                            ModelContext& ctx)
{
    if (delta.empty())
        return;
    absorb_common(g, layout, delta, ctx);
    for (const auto& id : delta.removed_nodes)
        previous_force_.erase(id);
    // New nodes start without force memory; degrees are read from the
    // topology on every step.
    for (const auto& id : delta.added_nodes)
        previous_force_.erase(id);
    stepped_ = false;
}

StepReport ForceAtlas2::iteration_step(const Graph& g, Layout& layout, ModelContext&)
{
    StepReport report;
    const Topology topo = g.topology();
    const std::size_t n = topo.size();
    std::vector<Position> pos = gather(topo, layout);
    const Canvas& canvas = layout.canvas;
    const Position center{canvas.width / 2.0, canvas.height / 2.0};
    const double jitter = kJitterFraction * canvas.min_side();
    const std::vector<Position> force = fa2_forces(topo, pos, params_, center, jitter);

    std::vector<double> swing(n, 0.0);
    double total_swing = 0.0;
    double total_traction = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Position prev;
        if (auto it = previous_force_.find(topo.ids[i]); it != previous_force_.end())
            prev = it->second;
        swing[i] = std::hypot(force[i].x - prev.x, force[i].y - prev.y);
        const double traction = std::hypot(force[i].x + prev.x, force[i].y + prev.y) / 2.0;
        total_swing += (topo.degree[i] + 1.0) * swing[i];
        total_traction += (topo.degree[i] + 1.0) * traction;
    }
    const double growth_cap = params_.max_speed_growth * global_speed_;
    if (total_swing > 0.0)
        global_speed_ = std::min(params_.tolerance * total_traction / total_swing, growth_cap);
    else
        global_speed_ = growth_cap;

    for (std::size_t i = 0; i < n; ++i) {
        const double fmag = std::hypot(force[i].x, force[i].y);
        previous_force_[topo.ids[i]] = force[i];
        if (fmag == 0.0)
            continue;
        const double s =
            fa2_node_speed(params_.speed, global_speed_, swing[i], fmag, params_.max_speed);
        const Position before = pos[i];
        pos[i].x = std::clamp(pos[i].x + force[i].x * s, 0.0, canvas.width);
        pos[i].y = std::clamp(pos[i].y + force[i].y * s, 0.0, canvas.height);
        const double moved = std::hypot(pos[i].x - before.x, pos[i].y - before.y);
        if (moved > 0.0)
            ++report.moved;
        report.max_displacement = std::max(report.max_displacement, moved);
    }
    scatter(topo, pos, layout);
    last_max_move_ = report.max_displacement;
    stepped_ = true;
    report.converged = is_good_layout(g, layout);
    return report;
}

bool ForceAtlas2::is_good_layout(const Graph& g, const Layout& layout) const
{
    if (g.node_count() < 2)
        return true;
    return stepped_ && last_max_move_ <= params_.stop_fraction * layout.canvas.min_side();
}

}  // namespace dynlay::models
