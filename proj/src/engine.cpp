#include "dynlay/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

namespace dynlay {

Snapshot capture_snapshot(const Graph& g, const Layout& layout, double at, std::size_t iteration)
{
    Snapshot s;
    s.at = at;
    s.iteration = iteration;
    s.canvas = layout.canvas;
    s.positions.reserve(g.node_count());
    for (const auto& id : g.nodes()) {
        if (layout.has(id))
            s.positions.emplace_back(id, layout.at(id));
    }
    s.edges = g.undirected_edges();
    return s;
}

namespace {

class Clock {
public:
    Clock(bool realtime, double step) : realtime_(realtime), step_(step), start_(now_wall()) {}

    double now() const { return realtime_ ? elapsed_wall() : simulated_; }
    void tick()
    {
        if (!realtime_)
            simulated_ += step_;
    }
    /// Idle until `t` (or one step when unknown).
    void wait_until(std::optional<double> t)
    {
        if (realtime_) {
            const double target = t ? *t : elapsed_wall() + step_;
            const double gap = std::min(target - elapsed_wall(), step_);
            if (gap > 0.0)
                std::this_thread::sleep_for(std::chrono::duration<double>(gap));
            return;
        }
        simulated_ = t && *t > simulated_ ? *t : simulated_ + step_;
    }
    double elapsed_wall() const
    {
        return std::chrono::duration<double>(now_wall() - start_).count();
    }

private:
    static std::chrono::steady_clock::time_point now_wall() { return std::chrono::steady_clock::now(); }

    bool realtime_;
    double step_;
    double simulated_ = 0.0;
    std::chrono::steady_clock::time_point start_;
};

bool all_finite(const Graph& g, const Layout& layout)
{
    for (const auto& id : g.nodes()) {
        auto it = layout.positions.find(id);
        if (it == layout.positions.end())
            continue;
        if (!std::isfinite(it->second.x) || !std::isfinite(it->second.y))
            return false;
    }
    return true;
}

}  // namespace

RunResult run(ForceModel& model, Graph& g, UpdateSource* trigger, const EngineConfig& cfg,
              const EngineObserver* observer)
{
    RunResult result;
    Rng rng(cfg.seed);
    ModelContext ctx{&rng, cfg.placement, cfg.level};
    Layout layout;
    layout.canvas = cfg.canvas;
    Clock clock(cfg.realtime, cfg.sim_step_s);

    std::size_t iteration = 0;
    bool dirty = true;
    bool post_update_pending = false;
    double next_sample_at = cfg.snapshot_every.every;

    // A state already recorded at the current time is not recorded again.
    bool snapshot_stale = true;
    auto sample = [&] {
        if (!dirty && !result.metrics.empty() && result.metrics.back().wall_s == clock.now())
            return;
        result.metrics.push_back(sample_metrics(g, layout, clock.now(), iteration));
        dirty = false;
    };
    auto snapshot = [&] {
        if (!cfg.keep_snapshots)
            return;
        if (!snapshot_stale && !result.snapshots.empty() && result.snapshots.back().at == clock.now())
            return;
        result.snapshots.push_back(capture_snapshot(g, layout, clock.now(), iteration));
        snapshot_stale = false;
    };
    auto cadence_due = [&] {
        if (cfg.snapshot_every.every <= 0.0)
            return false;
        if (cfg.snapshot_every.unit == Cadence::Unit::kIterations) {
            const auto every = static_cast<std::size_t>(std::max(1.0, cfg.snapshot_every.every));
            return iteration % every == 0;
        }
        if (clock.now() < next_sample_at)
            return false;
        while (next_sample_at <= clock.now())
            next_sample_at += cfg.snapshot_every.every;
        return true;
    };

    model.init_section(g, layout, ctx);
    sample();
    snapshot();

    for (;;) {
        if (clock.now() >= cfg.duration_s)
            break;
        if (cfg.max_iterations != 0 && iteration >= cfg.max_iterations)
            break;

        if (trigger) {
            std::vector<UpdateBatch> due = trigger->poll(clock.now());
            if (!due.empty()) {
                if (dirty)
                    sample();
                Layout before;
                if (observer && observer->on_batch)
                    before = layout;
                DeltaReport combined;
                bool changed = false;
                for (const UpdateBatch& batch : due) {
                    const std::size_t previous_nodes = g.node_count();
                    DeltaReport delta;
                    try {
                        delta = g.apply_update(batch);
                    } catch (const GraphError& e) {
                        ++result.batches_rejected;
                        result.diagnostics.push_back(std::string("rejected batch: ") + e.what());
                        spdlog::warn("rejected batch at t={}: {}", batch.at, e.what());
                        continue;
                    }
                    ++result.batches_applied;
                    for (const auto& w : delta.warnings)
                        result.diagnostics.push_back(w);
                    if (delta.empty())
                        continue;
                    changed = true;
                    if (cfg.dynamic_canvas)
                        layout.canvas =
                            rescale_canvas(layout.canvas, delta.added_nodes.size(), previous_nodes);
                    if (cfg.mode == Mode::kOnline) {
                        model.on_update(g, layout, delta, ctx);
                        if (observer && observer->on_batch) {
                            observer->on_batch(before, layout, delta);
                            before = layout;
                        }
                    } else {
                        auto append = [](auto& into, const auto& from) {
                            into.insert(into.end(), from.begin(), from.end());
                        };
                        append(combined.added_nodes, delta.added_nodes);
                        append(combined.added_edges, delta.added_edges);
                        append(combined.removed_nodes, delta.removed_nodes);
                        append(combined.removed_edges, delta.removed_edges);
                    }
                }
                if (changed && cfg.mode == Mode::kStatic) {
                    model.init_section(g, layout, ctx);
                    ++result.restarts;
                    if (observer && observer->on_batch)
                        observer->on_batch(before, layout, combined);
                }
                if (changed) {
                    post_update_pending = true;
                    dirty = true;
                    snapshot_stale = true;
                }
            }
        }

        if (model.is_good_layout(g, layout)) {
            if (!trigger || trigger->exhausted())
                break;
            std::optional<double> wake = trigger->next_arrival();
            if (wake)
                wake = std::min(*wake, cfg.duration_s);
            clock.wait_until(wake);
            if (cadence_due()) {
                sample();
                snapshot();
            }
            continue;
        }

        const StepReport report = model.iteration_step(g, layout, ctx);
        ++iteration;
        dirty = true;
        snapshot_stale = true;
        if (observer && observer->on_step)
            observer->on_step(report, iteration);
        if (!all_finite(g, layout))
            throw NonFiniteLayoutError("non-finite position after iteration " +
                                           std::to_string(iteration),
                                       capture_snapshot(g, layout, clock.now(), iteration));
        clock.tick();
        if (post_update_pending) {
            sample();
            post_update_pending = false;
        }
        if (cadence_due()) {
            sample();
            snapshot();
        }
    }

    sample();
    snapshot();
    result.layout = std::move(layout);
    result.iterations = iteration;
    result.clock_s = clock.now();
    result.elapsed_wall_s = clock.elapsed_wall();
    return result;
}

}  // namespace dynlay
