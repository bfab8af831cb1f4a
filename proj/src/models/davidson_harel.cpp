#include "dynlay/models/davidson_harel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dynlay/metrics.hpp"

namespace dynlay::models {

namespace {

// Border distances are kept at least this fraction of min(W, H) away from zero.
constexpr double kBorderGap = 1e-6;

double border_term(const Position& p, const Canvas& c)
{
    const double gap = kBorderGap * c.min_side();
    const double l = std::max(p.x, gap);
    const double r = std::max(c.width - p.x, gap);
    const double b = std::max(p.y, gap);
    const double t = std::max(c.height - p.y, gap);
    return 1.0 / (l * l) + 1.0 / (r * r) + 1.0 / (b * b) + 1.0 / (t * t);
}

bool shares_node(const std::pair<int, int>& e, const std::pair<int, int>& f)
{
    return e.first == f.first || e.first == f.second || e.second == f.first ||
           e.second == f.second;
}

}  // namespace

DavidsonHarelParams DavidsonHarelParams::from(const ModelParams& params)
{
    DavidsonHarelParams p;
    p.initial_radius = param_or(params, "initial_radius", p.initial_radius);
    p.radius_decay = param_or(params, "radius_decay", p.radius_decay);
    p.radius_floor = param_or(params, "radius_floor", p.radius_floor);
    p.rewarm = param_or(params, "rewarm", p.rewarm);
    p.node_weight = param_or(params, "node_weight", p.node_weight);
    p.border_weight = param_or(params, "border_weight", p.border_weight);
    p.edge_weight = param_or(params, "edge_weight", p.edge_weight);
    p.crossing_weight = param_or(params, "crossing_weight", p.crossing_weight);
    p.boltzmann = param_or(params, "boltzmann", p.boltzmann);
    return p;
}

DhWeights dh_weights(const DavidsonHarelParams& params, const Canvas& canvas, std::size_t node_count)
{
    const double n = static_cast<double>(std::max<std::size_t>(node_count, 1));
    const double s2 = canvas.area() / n;
    return {params.node_weight, params.border_weight, params.edge_weight / (s2 * s2),
            params.crossing_weight / s2};
}

double dh_energy(const Topology& topo, const std::vector<Position>& positions,
                 const Canvas& canvas, const DhWeights& weights, double jitter)
{
    const std::size_t n = topo.size();
    double nodes = 0.0;
    double border = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        border += border_term(positions[i], canvas);
        for (std::size_t j = 0; j < i; ++j) {
            const double d = separation(positions[i], positions[j], jitter, static_cast<long>(i),
                                        static_cast<long>(j))
                                 .dist;
            nodes += 1.0 / (d * d);
        }
    }
    double lengths = 0.0;
    for (const auto& [a, b] : topo.edges) {
        const double dx = positions[a].x - positions[b].x;
        const double dy = positions[a].y - positions[b].y;
        lengths += dx * dx + dy * dy;
    }
    double crossings = 0.0;
    for (std::size_t e = 0; e < topo.edges.size(); ++e) {
        for (std::size_t f = 0; f < e; ++f) {
            const auto& ea = topo.edges[e];
            const auto& fa = topo.edges[f];
            if (shares_node(ea, fa))
                continue;
            if (segments_properly_intersect(positions[ea.first], positions[ea.second],
                                            positions[fa.first], positions[fa.second]))
                crossings += 1.0;
        }
    }
    return weights.node * nodes + weights.border * border + weights.edge * lengths +
           weights.crossing * crossings;
}

DavidsonHarel::DavidsonHarel(DavidsonHarelParams params) : params_(params) {}

void DavidsonHarel::rebuild(const Graph& g, const Layout& layout)
{
    topo_ = g.topology();
    pos_ = gather(topo_, layout);
    canvas_ = layout.canvas;
    jitter_ = kJitterFraction * canvas_.min_side();
    weights_ = dh_weights(params_, canvas_, topo_.size());
    energy_ = dh_energy(topo_, pos_, canvas_, weights_, jitter_);
}

void DavidsonHarel::init_section(const Graph& g, Layout& layout, ModelContext& ctx)
{
    place_all(g, layout, ctx);
    initial_radius_ = params_.initial_radius * layout.canvas.min_side();
    radius_ = initial_radius_;
    rebuild(g, layout);
}

void DavidsonHarel::on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                              ModelContext& ctx)
{
    if (delta.empty())
        return;
    absorb_common(g, layout, delta, ctx);
    initial_radius_ = params_.initial_radius * layout.canvas.min_side();
    radius_ = params_.rewarm * initial_radius_;
    rebuild(g, layout);
}

// Every energy term that depends on node v, evaluated with v at p.
double DavidsonHarel::node_terms(std::size_t v, const Position& p) const
{
    double nodes = 0.0;
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        if (i == v)
            continue;
        const double d =
            separation(p, pos_[i], jitter_, static_cast<long>(v), static_cast<long>(i)).dist;
        nodes += 1.0 / (d * d);
    }
    double lengths = 0.0;
    double crossings = 0.0;
    const int vi = static_cast<int>(v);
    for (const int u : topo_.neighbors[v]) {
        const double dx = p.x - pos_[u].x;
        const double dy = p.y - pos_[u].y;
        lengths += dx * dx + dy * dy;
        const std::pair<int, int> e{vi, u};
        for (const auto& f : topo_.edges) {
            if (shares_node(e, f))
                continue;
            if (segments_properly_intersect(p, pos_[u], pos_[f.first], pos_[f.second]))
                crossings += 1.0;
        }
    }
    return weights_.node * nodes + weights_.border * border_term(p, canvas_) +
           weights_.edge * lengths + weights_.crossing * crossings;
}

StepReport DavidsonHarel::iteration_step(const Graph& g, Layout& layout, ModelContext& ctx)
{
    StepReport report;
    const std::size_t n = pos_.size();
    if (n > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t v = pick(*ctx.rng);
        const double a = angle(*ctx.rng);
        // (0, radius]: 1 - U with U in [0, 1).
        const double r = radius_ * (1.0 - unit(*ctx.rng));
        const double gap = kBorderGap * canvas_.min_side();
        const Position cand{std::clamp(pos_[v].x + r * std::cos(a), gap, canvas_.width - gap),
                            std::clamp(pos_[v].y + r * std::sin(a), gap, canvas_.height - gap)};
        const double change = node_terms(v, cand) - node_terms(v, pos_[v]);
        bool accept = change < 0.0;
        if (!accept && params_.boltzmann > 0.0 && std::isfinite(change)) {
            const double temperature =
                params_.boltzmann * weights_.node * (radius_ / std::max(initial_radius_, 1e-300));
            accept = unit(*ctx.rng) < std::exp(-change / temperature);
        }
        if (accept) {
            report.max_displacement = std::hypot(cand.x - pos_[v].x, cand.y - pos_[v].y);
            report.moved = 1;
            pos_[v] = cand;
            layout.positions[topo_.ids[v]] = cand;
            energy_ += change;
        }
    }
    radius_ = std::max(radius_ * params_.radius_decay, params_.radius_floor * initial_radius_);
    report.converged = is_good_layout(g, layout);
    return report;
}

bool DavidsonHarel::is_good_layout(const Graph& g, const Layout&) const
{
    if (g.node_count() < 2)
        return true;
    return radius_ <= params_.radius_floor * initial_radius_;
}

}  // namespace dynlay::models
