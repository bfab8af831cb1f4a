#include "dynlay/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace dynlay {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

bool parse_double(std::string_view text, double& out)
{
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

void validate(const DistributionSpec& spec)
{
    std::visit(Overloaded{
                   [](const GaussianSpec& g) {
                       if (!(g.mean > 0.0) || !(g.stddev >= 0.0))
                           throw std::invalid_argument("gaussian needs mean > 0 and stddev >= 0");
                   },
                   [](const PoissonSpec& p) {
                       if (!(p.mean > 0.0))
                           throw std::invalid_argument("poisson needs mean > 0");
                   },
                   [](const UniformSpec& u) {
                       if (!(u.min > 0.0) || !(u.max >= u.min))
                           throw std::invalid_argument("uniform needs max >= min > 0");
                   },
               },
               spec);
}

double sample_interval(const DistributionSpec& spec, Rng& rng)
{
    const double draw = std::visit(
        Overloaded{
            [&](const GaussianSpec& g) {
                if (g.stddev == 0.0)
                    return g.mean;
                return std::normal_distribution<double>(g.mean, g.stddev)(rng);
            },
            [&](const PoissonSpec& p) {
                return static_cast<double>(std::poisson_distribution<long>(p.mean)(rng));
            },
            [&](const UniformSpec& u) {
                if (u.min == u.max)
                    return u.min;
                return std::uniform_real_distribution<double>(u.min, u.max)(rng);
            },
        },
        spec);
    return std::max(draw, kMinInterval);
}

std::vector<double> normalize_timestamps(const std::vector<double>& raw, double span)
{
    if (raw.empty())
        throw std::invalid_argument("normalize_timestamps needs at least one timestamp");
    auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double min = *lo;
    const double range = *hi - min;
    std::vector<double> z(raw.size(), 0.0);
    if (range == 0.0)
        return z;
    for (std::size_t i = 0; i < raw.size(); ++i)
        z[i] = (raw[i] - min) / range * span;
    return z;
}

UpdateSchedule build_schedule(std::vector<TemporalEdge> dataset,
                              const std::optional<DistributionSpec>& spec, double span, Rng& rng,
                              const std::unordered_set<NodeId>& known_nodes)
{
    UpdateSchedule schedule;
    if (dataset.empty())
        return schedule;
    if (spec)
        validate(*spec);

    std::stable_sort(dataset.begin(), dataset.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });

    // Group keys: normalized time for native replay, raw timestamp otherwise.
    std::vector<double> keys;
    keys.reserve(dataset.size());
    if (spec) {
        for (const auto& e : dataset)
            keys.push_back(e.timestamp);
    } else {
        std::vector<double> raw;
        raw.reserve(dataset.size());
        for (const auto& e : dataset)
            raw.push_back(e.timestamp);
        keys = normalize_timestamps(raw, span);
    }

    std::unordered_set<NodeId> seen = known_nodes;
    double clock = 0.0;
    for (std::size_t i = 0; i < dataset.size();) {
        ScheduledBatch sb;
        if (spec) {
            clock += sample_interval(*spec, rng);
            sb.arrival = clock;
        } else {
            sb.arrival = keys[i];
        }
        sb.batch.at = sb.arrival;
        const double key = keys[i];
        for (; i < dataset.size() && keys[i] == key; ++i) {
            const auto& row = dataset[i];
            for (const NodeId* id : {&row.src, &row.dst}) {
                if (seen.insert(*id).second)
                    sb.batch.added_nodes.push_back(*id);
            }
            sb.batch.added_edges.push_back({row.src, row.dst, row.weight, sb.arrival});
        }
        schedule.push_back(std::move(sb));
    }
    return schedule;
}

InternalClockSource::InternalClockSource(UpdateSchedule schedule) : schedule_(std::move(schedule))
{
    for (std::size_t i = 1; i < schedule_.size(); ++i) {
        if (schedule_[i].arrival < schedule_[i - 1].arrival)
            throw std::invalid_argument("schedule arrivals must be non-decreasing");
    }
}

std::vector<UpdateBatch> InternalClockSource::poll(double now)
{
    std::vector<UpdateBatch> due;
    while (next_ < schedule_.size() && schedule_[next_].arrival <= now)
        due.push_back(schedule_[next_++].batch);
    return due;
}

std::optional<double> InternalClockSource::next_arrival() const
{
    if (exhausted())
        return std::nullopt;
    return schedule_[next_].arrival;
}

std::optional<UpdateBatch> parse_stream_message(std::string_view line,
                                                std::unordered_set<NodeId>& known,
                                                std::string& error)
{
    const auto f = split_ws(line);
    if (f.empty()) {
        error = "empty message";
        return std::nullopt;
    }
    UpdateBatch batch;
    const std::string_view verb = f[0];
    if (verb == "ADD_NODE" && f.size() == 2) {
        NodeId id(f[1]);
        known.insert(id);
        batch.added_nodes.push_back(std::move(id));
    } else if (verb == "ADD_EDGE" && (f.size() == 3 || f.size() == 4)) {
        Edge e{NodeId(f[1]), NodeId(f[2]), 1.0, 0.0};
        if (f.size() == 4 && !parse_double(f[3], e.weight)) {
            error = "bad edge weight '" + std::string(f[3]) + "'";
            return std::nullopt;
        }
        for (const NodeId* id : {&e.src, &e.dst}) {
            if (known.insert(*id).second)
                batch.added_nodes.push_back(*id);
        }
        batch.added_edges.push_back(std::move(e));
    } else if (verb == "DEL_NODE" && f.size() == 2) {
        NodeId id(f[1]);
        known.erase(id);
        batch.removed_nodes.push_back(std::move(id));
    } else if (verb == "DEL_EDGE" && f.size() == 3) {
        batch.removed_edges.push_back({NodeId(f[1]), NodeId(f[2]), 1.0, 0.0});
    } else if (verb == "ADD_NODE" || verb == "ADD_EDGE" || verb == "DEL_NODE" ||
               verb == "DEL_EDGE") {
        error = "wrong field count for " + std::string(verb);
        return std::nullopt;
    } else {
        error = "unknown verb '" + std::string(verb) + "'";
        return std::nullopt;
    }
    return batch;
}

StreamAdapter::StreamAdapter(std::unordered_set<NodeId> known_nodes) : known_(std::move(known_nodes))
{
}

void StreamAdapter::feed_line(std::string_view line)
{
    std::lock_guard lock(mutex_);
    ++line_number_;
    if (split_ws(line).empty())
        return;
    std::string error;
    if (auto batch = parse_stream_message(line, known_, error)) {
        queue_.push_back(std::move(*batch));
        return;
    }
    std::ostringstream msg;
    msg << "stream line " << line_number_ << ": " << error;
    diagnostics_.push_back(msg.str());
    spdlog::warn("{}", diagnostics_.back());
}

void StreamAdapter::feed(std::istream& in)
{
    std::string line;
    while (std::getline(in, line))
        feed_line(line);
    close();
}

void StreamAdapter::close()
{
    std::lock_guard lock(mutex_);
    closed_ = true;
}

std::vector<UpdateBatch> StreamAdapter::poll(double now)
{
    std::lock_guard lock(mutex_);
    std::vector<UpdateBatch> due(std::make_move_iterator(queue_.begin()),
                                 std::make_move_iterator(queue_.end()));
    queue_.clear();
    for (auto& b : due)
        b.at = now;
    return due;
}

std::optional<double> StreamAdapter::next_arrival() const
{
    std::lock_guard lock(mutex_);
    if (queue_.empty())
        return std::nullopt;
    return 0.0;
}

bool StreamAdapter::exhausted() const
{
    std::lock_guard lock(mutex_);
    return closed_ && queue_.empty();
}

std::vector<std::string> StreamAdapter::diagnostics() const
{
    std::lock_guard lock(mutex_);
    return diagnostics_;
}

}  // namespace dynlay
