#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynlay/engine.hpp"
#include "dynlay/models/common.hpp"

namespace dynlay::cli {

enum class InputMode { kEmptyStream, kFilePlusStream, kFileOnly };

/// Everything needed to reproduce one run.
struct RunSpec {
    std::string algo = "kk";
    Mode mode = Mode::kOnline;
    InputMode input_mode = InputMode::kEmptyStream;
    std::filesystem::path dataset;
    /// Initial graph for file-plus-stream input.
    std::filesystem::path initial;
    /// Raw --dist text; "native" replays dataset timestamps.
    std::string dist = "native";
    double duration_s = 300.0;
    std::uint64_t seed = 1;
    Placement placement = Placement::kBarycenter;
    Canvas canvas;
    Cadence snapshot_every;
    std::filesystem::path out;
    bool lenient = false;
    bool realtime = false;
    std::size_t max_iterations = 0;
    models::ModelParams params;
};

/// nullopt for "native"; throws std::invalid_argument on bad syntax or values.
std::optional<DistributionSpec> parse_distribution(const std::string& text);
/// "WxH" with positive finite sides.
Canvas parse_canvas(const std::string& text);
/// "<n>s" (seconds, also the default unit) or "<n>it" (iterations).
Cadence parse_cadence(const std::string& text);
std::string to_string(InputMode mode);

/// Loads inputs, runs the engine and writes manifest.json, metrics.csv,
/// snapshots/NNNN.svg and layout.json into spec.out. When `stream` is set the
/// updates come from its wire-format lines instead of the dataset.
RunResult execute_run(const RunSpec& spec, std::istream* stream = nullptr);

/// Full command-line entry point. Returns 0 on success, 2 on bad flags and
/// 1 on runtime failure.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace dynlay::cli
