#pragma once

#include <string_view>
#include <vector>

#include "dynlay/models/common.hpp"

namespace dynlay::models {

struct FruchtermanReingoldParams {
    /// C in k = C * sqrt(area / n).
    double scale = 1.0;
    /// Initial temperature as a fraction of min(W, H).
    double initial_temperature = 0.1;
    double cooling = 0.98;
    /// Temperature after an update, as a fraction of the initial one.
    double rewarm = 0.3;
    /// The layout is good once t <= stop_fraction * t0.
    double stop_fraction = 1e-3;

    static FruchtermanReingoldParams from(const ModelParams& params);
};

double fr_ideal_distance(double scale, const Canvas& canvas, std::size_t node_count);
double fr_repulsion(double k_ideal, double distance);
double fr_attraction(double k_ideal, double distance);

/// Net force on every node of `topo` at `positions`, before the temperature cap.
std::vector<Position> fr_displacements(const Topology& topo, const std::vector<Position>& positions,
                                       double k_ideal, double jitter);

class FruchtermanReingold final : public ForceModel {
public:
    explicit FruchtermanReingold(FruchtermanReingoldParams params = {});

    std::string_view name() const override { return "fr"; }
    void init_section(const Graph& g, Layout& layout, ModelContext& ctx) override;
    StepReport iteration_step(const Graph& g, Layout& layout, ModelContext& ctx) override;
    void on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                   ModelContext& ctx) override;
    bool is_good_layout(const Graph& g, const Layout& layout) const override;

    double temperature() const { return temperature_; }
    double initial_temperature() const { return t0_; }
    double k_ideal() const { return k_ideal_; }

private:
    FruchtermanReingoldParams params_;
    double temperature_ = 0.0;
    double t0_ = 0.0;
    double k_ideal_ = 0.0;
};

}  // namespace dynlay::models
