#pragma once

#include <map>
#include <string>
#include <vector>

#include "dynlay/engine.hpp"

namespace dynlay::models {

/// Named numeric overrides, e.g. {"kk.epsilon", 1e-3}.
using ModelParams = std::map<std::string, double>;

/// Coincident positions are separated by this fraction of min(W, H).
inline constexpr double kJitterFraction = 1e-6;

struct Separation {
    double dx = 0.0;
    double dy = 0.0;
    double dist = 0.0;
};

/// Vector from b to a. When the points coincide, returns a vector of length
/// `jitter` along a direction fixed by the (i, j) pair, antisymmetric in i, j.
Separation separation(const Position& a, const Position& b, double jitter, long i, long j);

/// Entry-task work every model shares: drop positions of removed nodes and
/// place the batch's new nodes. Never writes an existing node's position.
void absorb_common(const Graph& g, Layout& layout, const DeltaReport& delta, ModelContext& ctx);

/// Static-restart placement: forget all positions, draw every node afresh.
void place_all(const Graph& g, Layout& layout, ModelContext& ctx);

std::vector<Position> gather(const Topology& topo, const Layout& layout);
void scatter(const Topology& topo, const std::vector<Position>& positions, Layout& layout);

/// Value of `key` in params, or `fallback`.
double param_or(const ModelParams& params, const std::string& key, double fallback);

}  // namespace dynlay::models
