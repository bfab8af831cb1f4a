#include "dynlay/models/linlog.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dynlay::models {

LinLogParams LinLogParams::from(const ModelParams& params)
{
    LinLogParams p;
    p.theta = param_or(params, "theta", p.theta);
    p.stop_fraction = param_or(params, "stop_fraction", p.stop_fraction);
    p.max_halvings = static_cast<int>(param_or(params, "max_halvings", p.max_halvings));
    return p;
}

void rebuild_weight_rows(const Graph& g, const std::unordered_set<NodeId>& touched, WeightRows& rows)
{
    std::unordered_map<NodeId, std::map<NodeId, double>> fresh;
    for (const auto& id : touched) {
        rows.erase(id);
        if (g.contains(id))
            fresh[id];
    }
    for (const Edge& e : g.edges()) {
        const double w = std::abs(e.weight);
        if (auto it = fresh.find(e.src); it != fresh.end())
            it->second[e.dst] += w;
        if (auto it = fresh.find(e.dst); it != fresh.end())
            it->second[e.src] += w;
    }
    for (auto& [id, row] : fresh)
        rows[id].assign(row.begin(), row.end());
}

double linlog_energy(const Graph& g, const Layout& layout, double jitter)
{
    const Topology topo = g.topology();
    const std::vector<Position> pos = gather(topo, layout);
    double e = 0.0;
    for (std::size_t k = 0; k < topo.edges.size(); ++k) {
        const auto [a, b] = topo.edges[k];
        e += topo.edge_weights[k] * separation(pos[a], pos[b], jitter, a, b).dist;
    }
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            e -= std::log(separation(pos[i], pos[j], jitter, static_cast<long>(i),
                                     static_cast<long>(j))
                              .dist);
    }
    return e;
}

LinLog::LinLog(LinLogParams params) : params_(params) {}

void LinLog::init_section(const Graph& g, Layout& layout, ModelContext& ctx)
{
    place_all(g, layout, ctx);
    const Canvas& c = layout.canvas;
    tree_ = QuadTree(Rect{0.0, 0.0, c.width, c.height}, kJitterFraction * c.min_side());
    for (const auto& id : g.nodes())
        tree_.insert(id, layout.at(id));
    weights_.clear();
    rebuild_weight_rows(g, {g.nodes().begin(), g.nodes().end()}, weights_);
    last_max_move_ = 0.0;
    stepped_ = false;
}

void LinLog::on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                       ModelContext& ctx)
{
    if (delta.empty())
        return;
    absorb_common(g, layout, delta, ctx);
    tree_.set_jitter(kJitterFraction * layout.canvas.min_side());
    std::unordered_set<NodeId> touched;
    for (const auto& id : delta.removed_nodes) {
        tree_.remove(id);
        touched.insert(id);
    }
    for (const auto& id : delta.added_nodes) {
        if (g.contains(id) && !tree_.contains(id))
            tree_.insert(id, layout.at(id));
        touched.insert(id);
    }
    for (const auto* edges : {&delta.added_edges, &delta.removed_edges}) {
        for (const Edge& e : *edges) {
            touched.insert(e.src);
            touched.insert(e.dst);
        }
    }
    rebuild_weight_rows(g, touched, weights_);
    stepped_ = false;
}

// Energy terms that involve v, with v already taken out of the tree.
double LinLog::node_energy(const NodeId& v, const Position& p, const Layout& layout) const
{
    double e = 0.0;
    if (auto it = weights_.find(v); it != weights_.end()) {
        for (const auto& [u, w] : it->second) {
            const Position& q = layout.at(u);
            e += w * separation(p, q, kJitterFraction * layout.canvas.min_side(), 0, 1).dist;
        }
    }
    return e - tree_.field(p, params_.theta).log_sum;
}

StepReport LinLog::iteration_step(const Graph& g, Layout& layout, ModelContext&)
{
    StepReport report;
    const Canvas& canvas = layout.canvas;
    const double jitter = kJitterFraction * canvas.min_side();
    for (const auto& v : g.nodes()) {
        const Position p = layout.at(v);
        tree_.remove(v);
        const FieldSample field = tree_.field(p, params_.theta);
        double gx = -field.fx;
        double gy = -field.fy;
        double h = field.inverse_square;
        if (auto it = weights_.find(v); it != weights_.end()) {
            for (const auto& [u, w] : it->second) {
                const Separation s = separation(p, layout.at(u), jitter, 0, 1);
                gx += w * s.dx / s.dist;
                gy += w * s.dy / s.dist;
                h += w / s.dist;
            }
        }
        Position next = p;
        if (h > 0.0 && std::isfinite(h) && (gx != 0.0 || gy != 0.0)) {
            const double e0 = node_energy(v, p, layout);
            double scale = 1.0;
            for (int t = 0; t <= params_.max_halvings; ++t, scale *= 0.5) {
                const Position cand{std::clamp(p.x - scale * gx / h, 0.0, canvas.width),
                                    std::clamp(p.y - scale * gy / h, 0.0, canvas.height)};
                if (cand == p)
                    break;
                if (node_energy(v, cand, layout) < e0) {
                    next = cand;
                    break;
                }
            }
        }
        layout.positions[v] = next;
        tree_.insert(v, next);
        const double moved = std::hypot(next.x - p.x, next.y - p.y);
        if (moved > 0.0)
            ++report.moved;
        report.max_displacement = std::max(report.max_displacement, moved);
    }
    last_max_move_ = report.max_displacement;
    stepped_ = true;
    report.converged = is_good_layout(g, layout);
    return report;
}

bool LinLog::is_good_layout(const Graph& g, const Layout& layout) const
{
    if (g.node_count() < 2)
        return true;
    return stepped_ && last_max_move_ <= params_.stop_fraction * layout.canvas.min_side();
}

}  // namespace dynlay::models
