#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dynlay/models/common.hpp"
#include "dynlay/models/symmetric_matrix.hpp"

namespace dynlay::models {

/// Hop-count entry for a pair with no connecting path.
inline constexpr int kUnreachable = -1;

struct KamadaKawaiParams {
    double epsilon = 1e-2;
    /// Stiffness constant K in k_ij = K / l_ij^2.
    double stiffness = 1.0;
    std::size_t max_inner = 50;

    static KamadaKawaiParams from(const ModelParams& params);
};

/// Spring-model state over a growable node index ("slot").
struct KamadaKawaiState {
    std::vector<NodeId> slots;
    std::unordered_map<NodeId, std::size_t> slot_of;
    SymmetricMatrix<int> hops;
    SymmetricMatrix<double> ideal;
    SymmetricMatrix<double> stiffness;
    int diameter = 0;
    double base_length = 0.0;

    std::size_t size() const { return slots.size(); }
};

/// l_ij = base_length / diameter * d_ij. Unreachable pairs use diameter + 1;
/// a zero diameter is treated as 1.
double ideal_length(double base_length, int diameter, int hops);

/// Ideal spring lengths from node i to every other node, in graph order
/// (the entry for i itself is 0).
std::vector<double> kk_init_lij(const Graph& g, const NodeId& i, const Canvas& canvas);

/// One spring acting on the moving node.
struct Spring {
    Position other;
    double length = 0.0;
    double stiffness = 0.0;
};

struct PartialGradient {
    double dx = 0.0;
    double dy = 0.0;
    double magnitude() const;
};

/// Energy gradient of the springs attached to a node at `at`. Coincident
/// endpoints are separated by `jitter` before evaluation.
PartialGradient spring_gradient(const Position& at, std::span<const Spring> springs, double jitter);

/// Sum over pairs of 1/2 k_ij (|p_i - p_j| - l_ij)^2.
double kk_energy(const KamadaKawaiState& state, const Layout& layout);

/// Gradient magnitude of the energy with respect to node m.
double kk_delta_m(const KamadaKawaiState& state, const Layout& layout, const NodeId& m);

class KamadaKawai final : public ForceModel {
public:
    explicit KamadaKawai(KamadaKawaiParams params = {});

    std::string_view name() const override { return "kk"; }
    void init_section(const Graph& g, Layout& layout, ModelContext& ctx) override;
    StepReport iteration_step(const Graph& g, Layout& layout, ModelContext& ctx) override;
    void on_update(const Graph& g, Layout& layout, const DeltaReport& delta,
                   ModelContext& ctx) override;
    bool is_good_layout(const Graph& g, const Layout& layout) const override;

    const KamadaKawaiState& state() const { return state_; }
    const KamadaKawaiParams& params() const { return params_; }
    /// Delta_m before each inner Newton move of the last step, plus the final value.
    const std::vector<double>& last_inner_trace() const { return inner_trace_; }
    /// Largest Delta_i seen at the start of the last step.
    double last_max_delta() const { return last_max_delta_; }

private:
    void add_slot(const NodeId& id);
    void remove_slot(const NodeId& id);
    void refresh_springs(const Canvas& canvas);
    void relax_through_edge(std::size_t a, std::size_t b);
    void rebuild_gradients(const std::vector<Position>& pos, double jitter);
    void move_gradients(const std::vector<Position>& pos, std::size_t m, const Position& from,
                        double jitter);

    KamadaKawaiParams params_;
    KamadaKawaiState state_;
    std::vector<double> inner_trace_;
    double last_max_delta_ = 0.0;
    bool converged_ = false;
    // Per-slot gradient of E at grad_pos_; empty when stale. Updated in O(n)
    // per move and rebuilt every n steps to bound rounding drift.
    std::vector<Position> grad_;
    std::vector<Position> grad_pos_;
    std::size_t steps_since_rebuild_ = 0;
};

}  // namespace dynlay::models
