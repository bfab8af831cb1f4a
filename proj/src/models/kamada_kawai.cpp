#include "dynlay/models/kamada_kawai.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace dynlay::models {

namespace {

constexpr int kBacktrackTries = 40;

struct Local {
    double energy = 0.0;
    double gx = 0.0;
    double gy = 0.0;
    double hxx = 0.0;
    double hyy = 0.0;
    double hxy = 0.0;

    double delta() const { return std::hypot(gx, gy); }
};

// Energy, gradient and Hessian of the springs attached to slot m placed at p.
Local evaluate(const KamadaKawaiState& s, const std::vector<Position>& pos, std::size_t m,
               const Position& p, double jitter)
{
    Local out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == m)
            continue;
        const Separation sep = separation(p, pos[i], jitter, static_cast<long>(m),
                                          static_cast<long>(i));
        const double l = s.ideal(m, i);
        const double k = s.stiffness(m, i);
        const double d = sep.dist;
        const double d3 = d * d * d;
        out.energy += 0.5 * k * (d - l) * (d - l);
        out.gx += k * sep.dx * (1.0 - l / d);
        out.gy += k * sep.dy * (1.0 - l / d);
        out.hxx += k * (1.0 - l * sep.dy * sep.dy / d3);
        out.hyy += k * (1.0 - l * sep.dx * sep.dx / d3);
        out.hxy += k * l * sep.dx * sep.dy / d3;
    }
    return out;
}

// Energy-only descent of node m from p, used as a search when no short
// step lowers both E_m and Delta_m. Stops once Delta falls to `target`.
std::pair<Position, Local> descend(const KamadaKawaiState& s, const std::vector<Position>& pos,
                                   std::size_t m, Position p, double jitter, double max_step,
                                   double target)
{
    Local cur = evaluate(s, pos, m, p, jitter);
    for (int it = 0; it < 500 && cur.delta() > target; ++it) {
        const double det = cur.hxx * cur.hyy - cur.hxy * cur.hxy;
        double sx = 0.0;
        double sy = 0.0;
        if (cur.hxx > 0.0 && det > 0.0) {
            sx = (-cur.gx * cur.hyy + cur.gy * cur.hxy) / det;
            sy = (-cur.gy * cur.hxx + cur.gx * cur.hxy) / det;
        } else {
            sx = -cur.gx / cur.delta() * max_step;
            sy = -cur.gy / cur.delta() * max_step;
        }
        bool moved = false;
        double scale = 1.0;
        for (int t = 0; t < kBacktrackTries && !moved; ++t, scale *= 0.5) {
            const Position cand{p.x + scale * sx, p.y + scale * sy};
            const Local next = evaluate(s, pos, m, cand, jitter);
            if (next.energy < cur.energy) {
                p = cand;
                cur = next;
                moved = true;
            }
        }
        if (!moved)
            break;
    }
    return {p, cur};
}

int max_finite(const SymmetricMatrix<int>& hops)
{
    int best = 0;
    for (std::size_t i = 0; i < hops.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            best = std::max(best, hops(i, j));
    }
    return best;
}

}  // namespace

KamadaKawaiParams KamadaKawaiParams::from(const ModelParams& params)
{
    KamadaKawaiParams p;
    p.epsilon = param_or(params, "epsilon", p.epsilon);
    p.stiffness = param_or(params, "stiffness", p.stiffness);
    p.max_inner = static_cast<std::size_t>(
        param_or(params, "max_inner", static_cast<double>(p.max_inner)));
    return p;
}

double ideal_length(double base_length, int diameter, int hops)
{
    const int span = std::max(diameter, 1);
    const int d = hops == kUnreachable ? diameter + 1 : hops;
    return base_length / static_cast<double>(span) * static_cast<double>(d);
}

std::vector<double> kk_init_lij(const Graph& g, const NodeId& i, const Canvas& canvas)
{
    const Topology topo = g.topology();
    auto it = topo.index.find(i);
    if (it == topo.index.end())
        throw GraphError("unknown node '" + i + "'");
    const int diam = diameter(topo);
    if (diam == 0)
        return {};
    const std::vector<int> row = bfs_hops(topo, it->second);
    std::vector<double> out(row.size(), 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (static_cast<int>(j) != it->second)
            out[j] = ideal_length(canvas.min_side(), diam, row[j]);
    }
    return out;
}

double PartialGradient::magnitude() const
{
    return std::hypot(dx, dy);
}

PartialGradient spring_gradient(const Position& at, std::span<const Spring> springs, double jitter)
{
    PartialGradient g;
    long j = 1;
    for (const Spring& s : springs) {
        const Separation sep = separation(at, s.other, jitter, 0, j++);
        g.dx += s.stiffness * sep.dx * (1.0 - s.length / sep.dist);
        g.dy += s.stiffness * sep.dy * (1.0 - s.length / sep.dist);
    }
    return g;
}

double kk_energy(const KamadaKawaiState& state, const Layout& layout)
{
    const double jitter = kJitterFraction * state.base_length;
    double e = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Position& pi = layout.at(state.slots[i]);
        for (std::size_t j = 0; j < i; ++j) {
            const Separation sep = separation(pi, layout.at(state.slots[j]), jitter,
                                              static_cast<long>(i), static_cast<long>(j));
            const double diff = sep.dist - state.ideal(i, j);
            e += 0.5 * state.stiffness(i, j) * diff * diff;
        }
    }
    return e;
}

double kk_delta_m(const KamadaKawaiState& state, const Layout& layout, const NodeId& m)
{
    auto it = state.slot_of.find(m);
    if (it == state.slot_of.end())
        throw GraphError("unknown node '" + m + "'");
    std::vector<Position> pos;
    pos.reserve(state.size());
    for (const auto& id : state.slots)
        pos.push_back(layout.at(id));
    const double jitter = kJitterFraction * state.base_length;
    return evaluate(state, pos, it->second, pos[it->second], jitter).delta();
}

KamadaKawai::KamadaKawai(KamadaKawaiParams params) : params_(params) {}

void KamadaKawai::add_slot(const NodeId& id)
{
    state_.slot_of[id] = state_.slots.size();
    state_.slots.push_back(id);
    state_.hops.grow(kUnreachable);
    state_.hops(state_.size() - 1, state_.size() - 1) = 0;
    state_.ideal.grow(0.0);
    state_.stiffness.grow(0.0);
}

void KamadaKawai::remove_slot(const NodeId& id)
{
    auto it = state_.slot_of.find(id);
    if (it == state_.slot_of.end())
        return;
    const std::size_t r = it->second;
    const std::size_t last = state_.size() - 1;
    state_.hops.swap_remove(r);
    state_.ideal.swap_remove(r);
    state_.stiffness.swap_remove(r);
    state_.slot_of.erase(it);
    if (r != last) {
        state_.slots[r] = state_.slots[last];
        state_.slot_of[state_.slots[r]] = r;
    }
    state_.slots.pop_back();
}

void KamadaKawai::refresh_springs(const Canvas& canvas)
{
    state_.diameter = max_finite(state_.hops);
    state_.base_length = canvas.min_side();
    for (std::size_t i = 0; i < state_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double l = ideal_length(state_.base_length, state_.diameter, state_.hops(i, j));
            state_.ideal(i, j) = l;
            state_.stiffness(i, j) = params_.stiffness / (l * l);
        }
    }
}

void KamadaKawai::relax_through_edge(std::size_t a, std::size_t b)
{
    auto& d = state_.hops;
    const std::size_t n = state_.size();
    // Snapshot the endpoint rows: they are themselves relaxed in the loop.
    std::vector<int> da(n);
    std::vector<int> db(n);
    for (std::size_t i = 0; i < n; ++i) {
        da[i] = d(i, a);
        db[i] = d(i, b);
    }
    auto via = [](int x, int y) {
        return x == kUnreachable || y == kUnreachable ? std::numeric_limits<int>::max()
                                                      : x + 1 + y;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const int best = std::min(via(da[i], db[j]), via(db[i], da[j]));
            if (best == std::numeric_limits<int>::max())
                continue;
            if (d(i, j) == kUnreachable || best < d(i, j))
                d(i, j) = best;
        }
    }
}

void KamadaKawai::init_section(const Graph& g, Layout& layout, ModelContext& ctx)
{
    place_all(g, layout, ctx);
    state_ = {};
    const Topology topo = g.topology();
    for (const auto& id : topo.ids)
        add_slot(id);
    for (std::size_t i = 0; i < topo.size(); ++i) {
        const std::vector<int> row = bfs_hops(topo, static_cast<int>(i));
        for (std::size_t j = 0; j < i; ++j)
            state_.hops(i, j) = row[j];
    }
    refresh_springs(layout.canvas);
    inner_trace_.clear();
    last_max_delta_ = 0.0;
    converged_ = false;
    grad_.clear();
}

void KamadaKawai::on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                            ModelContext& ctx)
{
    absorb_common(g, layout, delta, ctx);
    if (delta.empty() && layout.canvas.min_side() == state_.base_length)
        return;

    // Pairs whose shortest path may have used a removed edge lie in that
    // edge's old component; their rows are rebuilt by BFS below.
    std::unordered_set<NodeId> affected;
    for (const Edge& e : delta.removed_edges) {
        auto it = state_.slot_of.find(e.src);
        if (it == state_.slot_of.end())
            it = state_.slot_of.find(e.dst);
        if (it == state_.slot_of.end())
            continue;
        const std::size_t s = it->second;
        if (affected.count(state_.slots[s]))
            continue;
        for (std::size_t j = 0; j < state_.size(); ++j) {
            if (state_.hops(s, j) != kUnreachable)
                affected.insert(state_.slots[j]);
        }
    }
    for (const auto& id : delta.removed_nodes)
        remove_slot(id);
    for (const auto& id : delta.added_nodes) {
        if (g.contains(id) && !state_.slot_of.count(id)) {
            add_slot(id);
            affected.insert(id);
        }
    }

    const Topology topo = g.topology();
    for (const auto& id : affected) {
        auto slot = state_.slot_of.find(id);
        if (slot == state_.slot_of.end())
            continue;
        const std::vector<int> row = bfs_hops(topo, topo.index.at(id));
        for (std::size_t j = 0; j < state_.size(); ++j)
            state_.hops(slot->second, j) = row[topo.index.at(state_.slots[j])];
    }
    // Added edges can only shorten paths; one relaxation pass per edge is exact.
    for (const Edge& e : delta.added_edges) {
        if (!g.contains_edge(e.src, e.dst) && !g.contains_edge(e.dst, e.src))
            continue;
        relax_through_edge(state_.slot_of.at(e.src), state_.slot_of.at(e.dst));
    }
    refresh_springs(layout.canvas);
    converged_ = false;
    grad_.clear();
}

void KamadaKawai::rebuild_gradients(const std::vector<Position>& pos, double jitter)
{
    grad_.resize(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const Local li = evaluate(state_, pos, i, pos[i], jitter);
        grad_[i] = {li.gx, li.gy};
    }
    grad_pos_ = pos;
    steps_since_rebuild_ = 0;
}

// Slot m moved from `from` to pos[m]: swap its spring term in every other gradient.
void KamadaKawai::move_gradients(const std::vector<Position>& pos, std::size_t m,
                                 const Position& from, double jitter)
{
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (i == m)
            continue;
        const double l = state_.ideal(i, m);
        const double k = state_.stiffness(i, m);
        const Separation was = separation(pos[i], from, jitter, static_cast<long>(i),
                                          static_cast<long>(m));
        const Separation now = separation(pos[i], pos[m], jitter, static_cast<long>(i),
                                          static_cast<long>(m));
        grad_[i].x += k * (now.dx * (1.0 - l / now.dist) - was.dx * (1.0 - l / was.dist));
        grad_[i].y += k * (now.dy * (1.0 - l / now.dist) - was.dy * (1.0 - l / was.dist));
    }
    const Local lm = evaluate(state_, pos, m, pos[m], jitter);
    grad_[m] = {lm.gx, lm.gy};
    grad_pos_[m] = pos[m];
}

StepReport KamadaKawai::iteration_step(const Graph&, Layout& layout, ModelContext&)
{
    StepReport report;
    inner_trace_.clear();
    const std::size_t n = state_.size();
    if (n < 2) {
        last_max_delta_ = 0.0;
        converged_ = true;
        report.converged = true;
        return report;
    }
    const double jitter = kJitterFraction * state_.base_length;
    std::vector<Position> pos;
    pos.reserve(n);
    for (const auto& id : state_.slots)
        pos.push_back(layout.at(id));

    // Positions can change outside the model (rescaling, placement).
    if (grad_.size() != n || grad_pos_ != pos || steps_since_rebuild_ >= n)
        rebuild_gradients(pos, jitter);
    std::size_t m = 0;
    double worst = -1.0;
    const auto select = [&] {
        m = 0;
        worst = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double di = std::hypot(grad_[i].x, grad_[i].y);
            if (di > worst) {
                worst = di;
                m = i;
            }
        }
    };
    select();
    // Convergence is only declared on freshly computed gradients.
    if (worst <= params_.epsilon && steps_since_rebuild_ > 0) {
        rebuild_gradients(pos, jitter);
        select();
    }
    ++steps_since_rebuild_;
    last_max_delta_ = worst;
    if (worst <= params_.epsilon) {
        converged_ = true;
        report.converged = true;
        return report;
    }

    const Position start = pos[m];
    Local cur = evaluate(state_, pos, m, pos[m], jitter);
    inner_trace_.push_back(cur.delta());
    const double max_gradient_step = 0.1 * state_.base_length;
    for (std::size_t it = 0; it < params_.max_inner && cur.delta() > params_.epsilon; ++it) {
        const double gnorm = cur.delta();
        std::vector<std::pair<double, double>> directions;
        const double det = cur.hxx * cur.hyy - cur.hxy * cur.hxy;
        if (std::isfinite(det) && std::abs(det) > 1e-300) {
            directions.emplace_back((-cur.gx * cur.hyy + cur.gy * cur.hxy) / det,
                                    (-cur.gy * cur.hxx + cur.gx * cur.hxy) / det);
        }
        const double ux = cur.gx / gnorm;
        const double uy = cur.gy / gnorm;
        const double gstep = std::min(gnorm, max_gradient_step);
        directions.emplace_back(-ux * gstep, -uy * gstep);
        const double hgx = cur.hxx * cur.gx + cur.hxy * cur.gy;
        const double hgy = cur.hxy * cur.gx + cur.hyy * cur.gy;
        const double hgn = std::hypot(hgx, hgy);
        if (hgn > 0.0 && std::isfinite(hgn))
            directions.emplace_back(-(ux + hgx / hgn) * 0.5 * gstep,
                                    -(uy + hgy / hgn) * 0.5 * gstep);

        bool accepted = false;
        for (const auto& [sx, sy] : directions) {
            double scale = 1.0;
            for (int t = 0; t < kBacktrackTries && !accepted; ++t, scale *= 0.5) {
                const Position cand{pos[m].x + scale * sx, pos[m].y + scale * sy};
                if (!std::isfinite(cand.x) || !std::isfinite(cand.y))
                    continue;
                const Local next = evaluate(state_, pos, m, cand, jitter);
                if (next.energy <= cur.energy && next.delta() < cur.delta()) {
                    pos[m] = cand;
                    cur = next;
                    accepted = true;
                }
            }
            if (accepted)
                break;
        }
        if (!accepted) {
            // Jump to where an energy-only descent comes to rest: a single
            // move that lowers both E_m and Delta_m.
            const auto [rest, at_rest] = descend(state_, pos, m, pos[m], jitter,
                                                 max_gradient_step, 0.5 * params_.epsilon);
            if (at_rest.energy <= cur.energy && at_rest.delta() < cur.delta()) {
                pos[m] = rest;
                cur = at_rest;
                accepted = true;
            }
        }
        if (!accepted)
            break;
        inner_trace_.push_back(cur.delta());
    }

    layout.positions[state_.slots[m]] = pos[m];
    report.max_displacement = std::hypot(pos[m].x - start.x, pos[m].y - start.y);
    report.moved = report.max_displacement > 0.0 ? 1 : 0;

    move_gradients(pos, m, start, jitter);
    const auto max_delta = [&] {
        double out = 0.0;
        for (const Position& gi : grad_)
            out = std::max(out, std::hypot(gi.x, gi.y));
        return out;
    };
    double after = max_delta();
    if (after <= params_.epsilon) {
        rebuild_gradients(pos, jitter);
        after = max_delta();
    }
    converged_ = after <= params_.epsilon;
    report.converged = converged_;
    return report;
}

bool KamadaKawai::is_good_layout(const Graph&, const Layout&) const
{
    return converged_ || state_.size() < 2;
}

}  // namespace dynlay::models
