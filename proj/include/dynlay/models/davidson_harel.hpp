#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dynlay/models/common.hpp"

namespace dynlay::models {

struct DavidsonHarelParams {
    /// Initial move radius as a fraction of min(W, H).
    double initial_radius = 0.1;
    double radius_decay = 0.999;
    /// Radius floor as a fraction of the initial radius; reaching it ends the run.
    double radius_floor = 1e-3;
    /// Radius after an update, as a fraction of the initial radius.
    double rewarm = 0.3;
    double node_weight = 1.0;
    double border_weight = 1.0;
    /// Multipliers on the scale-derived edge-length and crossing weights.
    double edge_weight = 1.0;
    double crossing_weight = 1.0;
    /// Nonzero restores Boltzmann acceptance of uphill moves.
    double boltzmann = 0.0;

    static DavidsonHarelParams from(const ModelParams& params);
};

/// Term weights for one graph size and canvas. With s = sqrt(area / n):
/// node lambda1, border lambda2, edge lambda3 / s^4, crossing lambda4 / s^2.
struct DhWeights {
    double node = 1.0;
    double border = 1.0;
    double edge = 1.0;
    double crossing = 1.0;
};

DhWeights dh_weights(const DavidsonHarelParams& params, const Canvas& canvas, std::size_t node_count);

/// Full energy: node repulsion 1/d^2 over pairs, border 1/x^2 terms, squared
/// edge lengths, and the edge crossing count, each times its weight.
double dh_energy(const Topology& topo, const std::vector<Position>& positions,
                 const Canvas& canvas, const DhWeights& weights, double jitter);

class DavidsonHarel final : public ForceModel {
public:
    explicit DavidsonHarel(DavidsonHarelParams params = {});

    std::string_view name() const override { return "dh"; }
    void init_section(const Graph& g, Layout& layout, ModelContext& ctx) override;
    StepReport iteration_step(const Graph& g, Layout& layout, ModelContext& ctx) override;
    void on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                   ModelContext& ctx) override;
    bool is_good_layout(const Graph& g, const Layout& layout) const override;

    /// Incumbent energy, maintained incrementally between full recomputations.
    double energy() const { return energy_; }
    double radius() const { return radius_; }
    const DhWeights& weights() const { return weights_; }

private:
    void rebuild(const Graph& g, const Layout& layout);
    double node_terms(std::size_t v, const Position& p) const;

    DavidsonHarelParams params_;
    Topology topo_;
    std::vector<Position> pos_;
    Canvas canvas_;
    DhWeights weights_;
    double energy_ = 0.0;
    double radius_ = 0.0;
    double initial_radius_ = 0.0;
    double jitter_ = 0.0;
};

}  // namespace dynlay::models
