#pragma once

#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dynlay/models/common.hpp"
#include "dynlay/models/quadtree.hpp"

namespace dynlay::models {

struct LinLogParams {
    /// Barnes-Hut opening threshold.
    double theta = 0.9;
    /// The layout is good once a sweep moves no node farther than
    /// stop_fraction * min(W, H).
    double stop_fraction = 1e-6;
    /// Halvings tried along the Newton direction before a node stays put.
    int max_halvings = 10;

    static LinLogParams from(const ModelParams& params);
};

/// Per-node weight rows: neighbor and summed |edge weight| (1 when absent).
using WeightRows = std::unordered_map<NodeId, std::vector<std::pair<NodeId, double>>>;

/// Rebuilds the rows of `touched` from the graph's current edges; rows of
/// nodes no longer in the graph are dropped.
void rebuild_weight_rows(const Graph& g, const std::unordered_set<NodeId>& touched, WeightRows& rows);

/// Sum over edges of w |p_u - p_v| minus sum over unordered node pairs of ln |p_u - p_v|.
double linlog_energy(const Graph& g, const Layout& layout, double jitter);

class LinLog final : public ForceModel {
public:
    explicit LinLog(LinLogParams params = {});

    std::string_view name() const override { return "linlog"; }
    void init_section(const Graph& g, Layout& layout, ModelContext& ctx) override;
    StepReport iteration_step(const Graph& g, Layout& layout, ModelContext& ctx) override;
    void on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                   ModelContext& ctx) override;
    bool is_good_layout(const Graph& g, const Layout& layout) const override;

    const QuadTree& tree() const { return tree_; }
    const WeightRows& weights() const { return weights_; }

private:
    double node_energy(const NodeId& v, const Position& p, const Layout& layout) const;

    LinLogParams params_;
    QuadTree tree_;
    WeightRows weights_;
    double last_max_move_ = 0.0;
    bool stepped_ = false;
};

}  // namespace dynlay::models
