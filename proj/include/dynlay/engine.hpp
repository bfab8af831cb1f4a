#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynlay/graph.hpp"
#include "dynlay/metrics.hpp"
#include "dynlay/stream.hpp"

namespace dynlay {

enum class Mode { kStatic, kOnline };
enum class Placement { kRandom, kBarycenter };

/// Per-call services the engine lends to a force model.
struct ModelContext {
    Rng* rng = nullptr;
    Placement placement = Placement::kRandom;
    int level = 1;
};

struct StepReport {
    bool converged = false;
    std::size_t moved = 0;
    double max_displacement = 0.0;
};

/// Lifecycle shared by every force-directed model.
///
/// init_section sets up constants, state and the position of every node.
/// iteration_step applies one full round of the model's forces.
/// on_update is the online entry task: it runs once per applied batch, places
/// the batch's new nodes and extends model state, and must not touch the
/// position of any node that was already placed.
class ForceModel {
public:
    virtual ~ForceModel() = default;

    virtual std::string_view name() const = 0;
    virtual void init_section(const Graph& g, Layout& layout, ModelContext& ctx) = 0;
    virtual StepReport iteration_step(const Graph& g, Layout& layout, ModelContext& ctx) = 0;
    virtual void on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                           ModelContext& ctx) = 0;
    virtual bool is_good_layout(const Graph& g, const Layout& layout) const = 0;
};

struct Cadence {
    enum class Unit { kIterations, kSeconds };
    Unit unit = Unit::kSeconds;
    double every = 1.0;
};

struct EngineConfig {
    Mode mode = Mode::kOnline;
    double duration_s = 300.0;
    Placement placement = Placement::kRandom;
    Canvas canvas;
    std::uint64_t seed = 1;
    Cadence snapshot_every;
    int level = 1;
    bool dynamic_canvas = true;
    /// Wall-clock pacing; otherwise each iteration advances a simulated clock.
    bool realtime = false;
    double sim_step_s = 0.01;
    bool keep_snapshots = true;
    /// 0 means no cap.
    std::size_t max_iterations = 0;
};

struct Snapshot {
    double at = 0.0;
    std::size_t iteration = 0;
    std::vector<std::pair<NodeId, Position>> positions;
    EdgeList edges;
    Canvas canvas;

    std::size_t node_count() const { return positions.size(); }
    std::size_t edge_count() const { return edges.size(); }
};

Snapshot capture_snapshot(const Graph& g, const Layout& layout, double at, std::size_t iteration);

class NonFiniteLayoutError : public std::runtime_error {
public:
    NonFiniteLayoutError(const std::string& what, Snapshot snapshot)
        : std::runtime_error(what), snapshot_(std::move(snapshot))
    {
    }
    const Snapshot& snapshot() const { return snapshot_; }

private:
    Snapshot snapshot_;
};

struct RunResult {
    Layout layout;
    std::vector<Snapshot> snapshots;
    MetricSeries metrics;
    std::size_t iterations = 0;
    std::size_t batches_applied = 0;
    std::size_t batches_rejected = 0;
    std::size_t restarts = 0;
    double clock_s = 0.0;
    double elapsed_wall_s = 0.0;
    std::vector<std::string> diagnostics;
};

/// Optional instrumentation hooks.
struct EngineObserver {
    /// Called after a batch has been absorbed (re-initialization in static
    /// mode, entry task in online mode), before the next iteration.
    std::function<void(const Layout& before, const Layout& after, const DeltaReport& delta)>
        on_batch;
    std::function<void(const StepReport&, std::size_t iteration)> on_step;
};

/// Drives a model over a dynamic graph until the layout is good and no more
/// updates can arrive, or until the duration elapses. Batches are absorbed
/// only between iterations.
RunResult run(ForceModel& model, Graph& g, UpdateSource* trigger, const EngineConfig& cfg,
              const EngineObserver* observer = nullptr);

// Placement and canvas utilities.

Position place_random(const Canvas& canvas, Rng& rng);

/// Mean of the neighbors' positions. Throws std::invalid_argument when the
/// list is empty; callers fall back to place_random.
Position place_barycenter(const Layout& layout, std::span<const NodeId> positioned_neighbors);

/// Distance from node i to the two-body barycenter: a / (1 + m_i / m_j).
double barycenter_distance(double a, double m_i, double m_j);

/// Positions each listed node in order. Barycenter placement uses the node's
/// neighbors that already have a position (including nodes placed earlier in
/// this call) and falls back to random placement when none exist.
void place_nodes(const Graph& g, Layout& layout, std::span<const NodeId> nodes,
                 Placement placement, Rng& rng);

/// Grows the area by (1 + added / current), keeping the aspect ratio.
/// Unchanged when nothing was added or the graph was empty.
Canvas rescale_canvas(const Canvas& canvas, std::size_t added_count, std::size_t current_count);

/// Maps every snapshot into the frame of the standard snapshot (most nodes,
/// then most edges, then latest) with a uniform scale and centering shift.
std::vector<Snapshot> normalize_snapshots(std::vector<Snapshot> snapshots);

std::string_view to_string(Mode mode);
std::string_view to_string(Placement placement);

}  // namespace dynlay
