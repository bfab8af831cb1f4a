#pragma once

#include <string_view>
#include <vector>

#include "dynlay/models/common.hpp"

namespace dynlay::models {

struct ForceAtlas2Params {
    double repulsion = 2.0;
    double gravity = 1.0;
    /// Swing tolerance (tau).
    double tolerance = 1.0;
    /// Per-node speed scale (ks).
    double speed = 0.1;
    /// Bound on |F| * node speed (ks_max).
    double max_speed = 10.0;
    /// Global speed may grow by at most this factor per step.
    double max_speed_growth = 1.5;
    /// The layout is good once no node moves more than stop_fraction * min(W, H).
    double stop_fraction = 1e-4;

    static ForceAtlas2Params from(const ModelParams& params);
};

/// k_r (deg_u + 1)(deg_v + 1) / d.
double fa2_repulsion(double kr, int degree_u, int degree_v, double distance);

/// ks * gs / (1 + gs * sqrt(swing)), bounded by max_speed / |F|.
double fa2_node_speed(double ks, double global_speed, double swing, double force_magnitude,
                      double max_speed);

/// Net force per node: linear attraction along edges, degree-scaled
/// repulsion between all pairs, and gravity of magnitude k_g (deg + 1)
/// toward `center`.
std::vector<Position> fa2_forces(const Topology& topo, const std::vector<Position>& positions,
                                 const ForceAtlas2Params& params, const Position& center,
                                 double jitter);

class ForceAtlas2 final : public ForceModel {
public:
    explicit ForceAtlas2(ForceAtlas2Params params = {});

    std::string_view name() const override { return "fa2"; }
    void init_section(const Graph& g, Layout& layout, ModelContext& ctx) override;
    StepReport iteration_step(const Graph& g, Layout& layout, ModelContext& ctx) override;
    void on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                   ModelContext& ctx) override;
    bool is_good_layout(const Graph& g, const Layout& layout) const override;

    double global_speed() const { return global_speed_; }

private:
    ForceAtlas2Params params_;
    std::unordered_map<NodeId, Position> previous_force_;
    double global_speed_ = 1.0;
    double last_max_move_ = 0.0;
    bool stepped_ = false;
};

}  // namespace dynlay::models
