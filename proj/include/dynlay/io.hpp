#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynlay/engine.hpp"
#include "dynlay/metrics.hpp"
#include "dynlay/stream.hpp"

namespace dynlay::io {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line)
    {
    }
    /// 1-based line number of the offending input.
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct EdgeListParse {
    std::vector<TemporalEdge> edges;
    /// Malformed lines dropped in lenient mode.
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Reads "SRC DST TIMESTAMP" (whitespace) or "SRC,DST,WEIGHT,TIME" (comma)
/// rows, detected per line by delimiter and column count. Blank lines and
/// lines starting with '#' are ignored. Strict mode throws ParseError on the
/// first malformed line; lenient mode counts and skips it.
EdgeListParse parse_temporal_edge_list(std::istream& in, bool lenient = false);
EdgeListParse parse_temporal_edge_list(const std::filesystem::path& path, bool lenient = false);

/// Shortest decimal form that round-trips, with ".0" appended to integral values.
std::string format_number(double value);

std::string metrics_csv(const MetricSeries& series);
void write_metrics_csv(const MetricSeries& series, const std::filesystem::path& path);
MetricSeries parse_metrics_csv(std::istream& in);
MetricSeries read_metrics_csv(const std::filesystem::path& path);

std::string svg_snapshot(const Snapshot& snapshot);
void write_svg_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);

/// Nodes sorted by id so the text is independent of hash order.
std::string layout_json(const Layout& layout);
void write_layout_json(const Layout& layout, const std::filesystem::path& path);
Layout parse_layout_json(const std::string& text);
Layout read_layout_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of the file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace dynlay::io
