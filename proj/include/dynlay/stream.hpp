#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "dynlay/graph.hpp"

namespace dynlay {

using Rng = std::mt19937_64;

struct GaussianSpec {
    double mean = 10.0;
    double stddev = 0.0;
};

struct PoissonSpec {
    double mean = 10.0;
};

struct UniformSpec {
    double min = 5.0;
    double max = 15.0;
};

/// Inter-arrival distribution for synthetic update schedules.
using DistributionSpec = std::variant<GaussianSpec, PoissonSpec, UniformSpec>;

/// Throws std::invalid_argument when parameters are out of range.
void validate(const DistributionSpec& spec);

/// Smallest interval a sampler returns, in seconds.
inline constexpr double kMinInterval = 1e-3;

double sample_interval(const DistributionSpec& spec, Rng& rng);

/// Maps timestamps linearly so that min -> 0 and max -> span. All-equal
/// input maps to 0.
std::vector<double> normalize_timestamps(const std::vector<double>& raw, double span = 300.0);

/// One row of a temporal edge list.
struct TemporalEdge {
    NodeId src;
    NodeId dst;
    double weight = 1.0;
    double timestamp = 0.0;
};

struct ScheduledBatch {
    double arrival = 0.0;
    UpdateBatch batch;
};

/// Batches ordered by non-decreasing arrival time.
using UpdateSchedule = std::vector<ScheduledBatch>;

/// Native replay uses normalized dataset timestamps; a DistributionSpec
/// replaces them with cumulative sampled intervals, one per timestamp group.
/// Endpoints not in `known_nodes` and not seen earlier become added_nodes of
/// the batch that first mentions them.
UpdateSchedule build_schedule(std::vector<TemporalEdge> dataset,
                              const std::optional<DistributionSpec>& spec, double span, Rng& rng,
                              const std::unordered_set<NodeId>& known_nodes = {});

/// Trigger contract polled by the engine between iterations.
class UpdateSource {
public:
    virtual ~UpdateSource() = default;
    /// Every batch due by `now` that has not been delivered yet, in order.
    virtual std::vector<UpdateBatch> poll(double now) = 0;
    /// Arrival time of the next pending batch, when known.
    virtual std::optional<double> next_arrival() const = 0;
    /// No batch will ever be delivered again.
    virtual bool exhausted() const = 0;
};

/// Timer-driven trigger over a precomputed schedule.
class InternalClockSource final : public UpdateSource {
public:
    explicit InternalClockSource(UpdateSchedule schedule);

    std::vector<UpdateBatch> poll(double now) override;
    std::optional<double> next_arrival() const override;
    bool exhausted() const override { return next_ >= schedule_.size(); }

    std::size_t delivered() const { return next_; }

private:
    UpdateSchedule schedule_;
    std::size_t next_ = 0;
};

/// Parses one wire-format line. Returns nullopt and fills `error` on a
/// malformed line. `known` tracks node ids so ADD_EDGE can auto-add
/// endpoints; it is updated by the parsed message.
std::optional<UpdateBatch> parse_stream_message(std::string_view line,
                                                std::unordered_set<NodeId>& known,
                                                std::string& error);

/// Line-delimited message stream trigger. feed_line/close may be called
/// from a reader thread; poll is engine-thread only.
class StreamAdapter final : public UpdateSource {
public:
    explicit StreamAdapter(std::unordered_set<NodeId> known_nodes = {});

    void feed_line(std::string_view line);
    /// Reads until EOF, then closes the stream.
    void feed(std::istream& in);
    void close();

    std::vector<UpdateBatch> poll(double now) override;
    std::optional<double> next_arrival() const override;
    bool exhausted() const override;

    std::vector<std::string> diagnostics() const;

private:
    mutable std::mutex mutex_;
    std::deque<UpdateBatch> queue_;
    std::unordered_set<NodeId> known_;
    std::vector<std::string> diagnostics_;
    std::size_t line_number_ = 0;
    bool closed_ = false;
};

}  // namespace dynlay
