#include "dynlay/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "dynlay/io.hpp"
#include "dynlay/models/factory.hpp"

#ifndef DYNLAY_VERSION
#define DYNLAY_VERSION "unknown"
#endif

namespace dynlay::cli {

namespace {

using nlohmann::ordered_json;

double parse_real(std::string_view text, const std::string& what)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw std::invalid_argument("bad " + what + " '" + std::string(text) + "'");
    return v;
}

std::vector<std::string_view> split_commas(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(',', start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::string describe(const Cadence& c)
{
    return io::format_number(c.every) + (c.unit == Cadence::Unit::kIterations ? "it" : "s");
}

// Initial graph batch: every endpoint once, then every row as an edge.
UpdateBatch initial_batch(const std::vector<TemporalEdge>& rows)
{
    UpdateBatch b;
    std::unordered_set<NodeId> seen;
    for (const auto& r : rows) {
        for (const NodeId* id : {&r.src, &r.dst}) {
            if (seen.insert(*id).second)
                b.added_nodes.push_back(*id);
        }
        b.added_edges.push_back({r.src, r.dst, r.weight, 0.0});
    }
    return b;
}

ordered_json spec_json(const RunSpec& s)
{
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : s.params)
        params[k] = v;
    return {{"algo", s.algo},
            {"mode", std::string(to_string(s.mode))},
            {"input_mode", to_string(s.input_mode)},
            {"dataset", s.dataset.string()},
            {"initial", s.initial.string()},
            {"dist", s.dist},
            {"duration_s", s.duration_s},
            {"seed", s.seed},
            {"placement", std::string(to_string(s.placement))},
            {"canvas", {{"width", s.canvas.width}, {"height", s.canvas.height}}},
            {"snapshot_every", describe(s.snapshot_every)},
            {"lenient", s.lenient},
            {"realtime", s.realtime},
            {"max_iterations", s.max_iterations},
            {"params", params}};
}

// Wire-format stream input: fully buffered and re-timed in simulated mode,
// fed live by a reader thread in realtime mode.
struct StreamInput {
    std::shared_ptr<StreamAdapter> adapter;
    std::unique_ptr<InternalClockSource> clocked;
    std::vector<std::string> diagnostics;

    UpdateSource* source() { return clocked ? static_cast<UpdateSource*>(clocked.get()) : adapter.get(); }
};

StreamInput open_stream(std::istream& in, const RunSpec& spec,
                        const std::optional<DistributionSpec>& dist,
                        std::unordered_set<NodeId> known, Rng& rng)
{
    StreamInput s;
    s.adapter = std::make_shared<StreamAdapter>(std::move(known));
    if (spec.realtime) {
        auto adapter = s.adapter;
        std::thread([adapter, &in] { adapter->feed(in); }).detach();
        return s;
    }
    s.adapter->feed(in);
    s.diagnostics = s.adapter->diagnostics();
    UpdateSchedule schedule;
    double clock = 0.0;
    for (UpdateBatch& b : s.adapter->poll(0.0)) {
        if (dist)
            clock += sample_interval(*dist, rng);
        b.at = clock;
        schedule.push_back({clock, std::move(b)});
    }
    s.clocked = std::make_unique<InternalClockSource>(std::move(schedule));
    return s;
}

}  // namespace

std::optional<DistributionSpec> parse_distribution(const std::string& text)
{
    if (text == "native")
        return std::nullopt;
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("distribution must be gaussian:d,d1 | poisson:d | uniform:min,max | native");
    const std::string kind = text.substr(0, colon);
    const auto args = split_commas(std::string_view(text).substr(colon + 1));
    DistributionSpec spec;
    if (kind == "gaussian" && args.size() == 2)
        spec = GaussianSpec{parse_real(args[0], "mean"), parse_real(args[1], "stddev")};
    else if (kind == "poisson" && args.size() == 1)
        spec = PoissonSpec{parse_real(args[0], "mean")};
    else if (kind == "uniform" && args.size() == 2)
        spec = UniformSpec{parse_real(args[0], "min"), parse_real(args[1], "max")};
    else
        throw std::invalid_argument("bad distribution '" + text + "'");
    validate(spec);
    return spec;
}

Canvas parse_canvas(const std::string& text)
{
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos)
        throw std::invalid_argument("canvas must be WxH");
    const double w = parse_real(std::string_view(text).substr(0, x), "canvas width");
    const double h = parse_real(std::string_view(text).substr(x + 1), "canvas height");
    if (!(w > 0.0) || !(h > 0.0))
        throw std::invalid_argument("canvas sides must be positive");
    return {w, h};
}

Cadence parse_cadence(const std::string& text)
{
    Cadence c;
    std::string_view v = text;
    if (v.size() > 2 && v.substr(v.size() - 2) == "it") {
        c.unit = Cadence::Unit::kIterations;
        v.remove_suffix(2);
    } else if (!v.empty() && v.back() == 's') {
        v.remove_suffix(1);
    }
    c.every = parse_real(v, "snapshot cadence");
    if (!(c.every > 0.0))
        throw std::invalid_argument("snapshot cadence must be positive");
    return c;
}

std::string to_string(InputMode mode)
{
    switch (mode) {
    case InputMode::kEmptyStream:
        return "empty-stream";
    case InputMode::kFilePlusStream:
        return "file-plus-stream";
    case InputMode::kFileOnly:
        return "file-only";
    }
    return "empty-stream";
}

RunResult execute_run(const RunSpec& spec, std::istream* stream)
{
    const std::optional<DistributionSpec> dist = parse_distribution(spec.dist);
    auto model = models::make_model(spec.algo, spec.params);
    const bool needs_dataset = stream == nullptr;
    if (needs_dataset && spec.dataset.empty())
        throw std::invalid_argument("--dataset is required");
    if (spec.input_mode == InputMode::kFilePlusStream && spec.initial.empty())
        throw std::invalid_argument("file-plus-stream input needs --initial");

    std::filesystem::create_directories(spec.out);
    ordered_json manifest{{"version", DYNLAY_VERSION}, {"spec", spec_json(spec)}};
    ordered_json digests = ordered_json::object();
    if (!spec.dataset.empty())
        digests["dataset"] = io::sha256_file(spec.dataset);
    if (!spec.initial.empty())
        digests["initial"] = io::sha256_file(spec.initial);
    manifest["digests"] = digests;
    manifest["status"] = "running";
    io::atomic_write(spec.out / "manifest.json", manifest.dump(2) + "\n");

    Graph g(GraphOptions{true, !spec.lenient});
    std::vector<std::string> load_warnings;
    std::vector<TemporalEdge> updates;
    if (!spec.dataset.empty() && needs_dataset) {
        auto parsed = io::parse_temporal_edge_list(spec.dataset, spec.lenient);
        load_warnings = parsed.warnings;
        updates = std::move(parsed.edges);
    }
    if (spec.input_mode == InputMode::kFilePlusStream) {
        auto parsed = io::parse_temporal_edge_list(spec.initial, spec.lenient);
        load_warnings.insert(load_warnings.end(), parsed.warnings.begin(), parsed.warnings.end());
        g.apply_update(initial_batch(parsed.edges));
    } else if (spec.input_mode == InputMode::kFileOnly && needs_dataset) {
        g.apply_update(initial_batch(updates));
        updates.clear();
    }

    std::unordered_set<NodeId> known(g.nodes().begin(), g.nodes().end());
    // Arrival sampling draws from its own stream so the layout RNG is unaffected.
    Rng schedule_rng(spec.seed ^ 0x5DEECE66DULL);
    std::unique_ptr<InternalClockSource> clocked;
    StreamInput streamed;
    UpdateSource* trigger = nullptr;
    if (stream) {
        streamed = open_stream(*stream, spec, dist, known, schedule_rng);
        trigger = streamed.source();
    } else if (spec.input_mode != InputMode::kFileOnly) {
        clocked = std::make_unique<InternalClockSource>(
            build_schedule(updates, dist, spec.duration_s, schedule_rng, known));
        trigger = clocked.get();
    }

    EngineConfig cfg;
    cfg.mode = spec.mode;
    cfg.duration_s = spec.duration_s;
    cfg.placement = spec.placement;
    cfg.canvas = spec.canvas;
    cfg.seed = spec.seed;
    cfg.snapshot_every = spec.snapshot_every;
    cfg.realtime = spec.realtime;
    cfg.max_iterations = spec.max_iterations;
    RunResult result = run(*model, g, trigger, cfg);
    if (stream) {
        const auto notes = spec.realtime ? streamed.adapter->diagnostics() : streamed.diagnostics;
        result.diagnostics.insert(result.diagnostics.begin(), notes.begin(), notes.end());
    }
    result.diagnostics.insert(result.diagnostics.begin(), load_warnings.begin(), load_warnings.end());

    io::write_metrics_csv(result.metrics, spec.out / "metrics.csv");
    const auto snaps = normalize_snapshots(result.snapshots);
    const auto snap_dir = spec.out / "snapshots";
    std::filesystem::remove_all(snap_dir);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%04zu.svg", i);
        io::write_svg_snapshot(snaps[i], snap_dir / name);
    }
    io::write_layout_json(result.layout, spec.out / "layout.json");

    manifest["status"] = "complete";
    manifest["timing"] = {{"iterations", result.iterations},
                          {"batches_applied", result.batches_applied},
                          {"batches_rejected", result.batches_rejected},
                          {"restarts", result.restarts},
                          {"clock_s", result.clock_s},
                          {"elapsed_wall_s", result.elapsed_wall_s}};
    manifest["diagnostics"] = result.diagnostics;
    io::atomic_write(spec.out / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

namespace {

struct CompareRow {
    std::string run;
    std::string algo;
    std::string mode;
    std::size_t final_ec = 0;
    std::size_t ec_vm = 0;
    double mean_ec_sd = 0.0;
    double max_ec_sd = 0.0;
    double wall_s = 0.0;
};

CompareRow load_row(const std::filesystem::path& dir)
{
    const auto manifest_path = dir / "manifest.json";
    const auto metrics_path = dir / "metrics.csv";
    if (!std::filesystem::exists(manifest_path) || !std::filesystem::exists(metrics_path))
        throw std::runtime_error("missing run artifacts in " + dir.string());
    const auto manifest = nlohmann::json::parse(io::read_file(manifest_path));
    const MetricSeries series = io::read_metrics_csv(metrics_path);
    if (series.empty())
        throw std::runtime_error("empty metrics in " + dir.string());
    CompareRow row;
    row.run = dir.filename().string();
    if (row.run.empty())
        row.run = dir.parent_path().filename().string();
    row.algo = manifest.at("spec").at("algo").get<std::string>();
    row.mode = manifest.at("spec").at("mode").get<std::string>();
    if (manifest.contains("timing"))
        row.wall_s = manifest["timing"].at("elapsed_wall_s").get<double>();
    row.final_ec = series.back().ec;
    row.ec_vm = ec_vm(series);
    std::size_t defined = 0;
    for (const auto& m : series) {
        if (!m.ec_sd_defined)
            continue;
        ++defined;
        row.mean_ec_sd += m.ec_sd;
        row.max_ec_sd = std::max(row.max_ec_sd, m.ec_sd);
    }
    if (defined)
        row.mean_ec_sd /= static_cast<double>(defined);
    return row;
}

const std::vector<std::string> kCompareHeader{"run",        "algo",      "mode",  "final_ec",
                                              "ec_vm",      "mean_ec_sd", "max_ec_sd", "wall_s"};

std::vector<std::string> cells(const CompareRow& r)
{
    return {r.run,
            r.algo,
            r.mode,
            std::to_string(r.final_ec),
            std::to_string(r.ec_vm),
            io::format_number(r.mean_ec_sd),
            io::format_number(r.max_ec_sd),
            io::format_number(r.wall_s)};
}

std::string compare_csv(const std::vector<CompareRow>& rows)
{
    std::string out;
    auto line = [&](const std::vector<std::string>& c) {
        for (std::size_t i = 0; i < c.size(); ++i)
            out += (i ? "," : "") + c[i];
        out += '\n';
    };
    line(kCompareHeader);
    for (const auto& r : rows)
        line(cells(r));
    return out;
}

std::string compare_text(const std::vector<CompareRow>& rows)
{
    std::vector<std::vector<std::string>> table{kCompareHeader};
    for (const auto& r : rows)
        table.push_back(cells(r));
    std::vector<std::size_t> width(kCompareHeader.size(), 0);
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream out;
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            // Text columns left-aligned, numbers right-aligned.
            if (i < 3)
                out << std::left;
            else
                out << std::right;
            out << std::setw(static_cast<int>(width[i])) << row[i];
            out << (i + 1 < row.size() ? "  " : "\n");
        }
    }
    return out.str();
}

struct RunFlags {
    RunSpec spec;
    std::string mode = "online";
    std::string input_mode;
    std::string placement = "barycenter";
    std::string canvas = "100x100";
    std::string cadence = "1s";
    std::vector<std::string> sets;
};

void add_run_flags(CLI::App& app, RunFlags& f, bool require_algo)
{
    auto* algo = app.add_option("--algo", f.spec.algo, "fr, kk, fa2, dh or linlog")
                     ->check(CLI::IsMember(models::model_names()));
    if (require_algo)
        algo->required();
    app.add_option("--mode", f.mode, "static or online")
        ->check(CLI::IsMember({"static", "online"}))
        ->capture_default_str();
    app.add_option("--input-mode", f.input_mode, "empty-stream, file-plus-stream or file-only")
        ->check(CLI::IsMember({"empty-stream", "file-plus-stream", "file-only"}));
    app.add_option("--dataset", f.spec.dataset, "temporal edge list (3 or 4 columns)");
    app.add_option("--initial", f.spec.initial, "initial graph for file-plus-stream input");
    app.add_option("--dist", f.spec.dist, "gaussian:d,d1 | poisson:d | uniform:min,max | native")
        ->check([](const std::string& v) {
            try {
                parse_distribution(v);
                return std::string();
            } catch (const std::exception& e) {
                return std::string(e.what());
            }
        })
        ->capture_default_str();
    app.add_option("--duration", f.spec.duration_s, "run length in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", f.spec.seed, "random seed")->capture_default_str();
    app.add_option("--placement", f.placement, "random or barycenter")
        ->check(CLI::IsMember({"random", "barycenter"}))
        ->capture_default_str();
    app.add_option("--canvas", f.canvas, "canvas size WxH")
        ->check([](const std::string& v) {
            try {
                parse_canvas(v);
                return std::string();
            } catch (const std::exception& e) {
                return std::string(e.what());
            }
        })
        ->capture_default_str();
    app.add_option("--snapshot-every", f.cadence, "snapshot cadence: <n>s or <n>it")
        ->check([](const std::string& v) {
            try {
                parse_cadence(v);
                return std::string();
            } catch (const std::exception& e) {
                return std::string(e.what());
            }
        })
        ->capture_default_str();
    const char* env_out = std::getenv("DYNLAY_OUT");
    f.spec.out = env_out && *env_out ? env_out : "dynlay-out";
    app.add_option("--out", f.spec.out, "output directory (default $DYNLAY_OUT)")
        ->capture_default_str();
    app.add_flag("--lenient", f.spec.lenient, "skip malformed rows and missing removals");
    app.add_flag("--realtime", f.spec.realtime, "pace the run by the wall clock");
    app.add_option("--max-iterations", f.spec.max_iterations, "iteration cap (0 = none)");
    app.add_option("--set", f.sets, "model parameter key=value (repeatable)")
        ->check([](const std::string& v) {
            const auto eq = v.find('=');
            if (eq == std::string::npos || eq == 0)
                return std::string("expected key=value");
            try {
                parse_real(std::string_view(v).substr(eq + 1), "value");
            } catch (const std::exception& e) {
                return std::string(e.what());
            }
            return std::string();
        });
}

RunSpec finish(RunFlags& f)
{
    RunSpec s = f.spec;
    s.mode = f.mode == "static" ? Mode::kStatic : Mode::kOnline;
    s.placement = f.placement == "random" ? Placement::kRandom : Placement::kBarycenter;
    s.canvas = parse_canvas(f.canvas);
    s.snapshot_every = parse_cadence(f.cadence);
    if (f.input_mode == "file-plus-stream")
        s.input_mode = InputMode::kFilePlusStream;
    else if (f.input_mode == "file-only")
        s.input_mode = InputMode::kFileOnly;
    else if (f.input_mode.empty() && !s.initial.empty())
        s.input_mode = InputMode::kFilePlusStream;
    else
        s.input_mode = InputMode::kEmptyStream;
    for (const auto& kv : f.sets) {
        const auto eq = kv.find('=');
        s.params[kv.substr(0, eq)] = parse_real(std::string_view(kv).substr(eq + 1), "value");
    }
    // Reject unknown parameter keys before any file is touched.
    models::make_model(s.algo, s.params);
    return s;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err)
{
    CLI::App app{"Dynamic graph force-directed layout engine", "dynlay"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DYNLAY_VERSION);

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "run one layout over a temporal dataset");
    add_run_flags(*run_cmd, run_flags, true);

    RunFlags replay_flags;
    auto* replay_cmd =
        app.add_subcommand("replay", "run one layout over wire-format updates read from stdin");
    add_run_flags(*replay_cmd, replay_flags, true);

    RunFlags compare_flags;
    std::vector<std::string> run_dirs;
    std::string matrix;
    std::string format = "text";
    auto* compare_cmd = app.add_subcommand("compare", "tabulate metrics of finished runs");
    compare_cmd->add_option("runs", run_dirs, "run directories");
    compare_cmd->add_option("--matrix", matrix, "algo:mode list to run first, e.g. fr:static,fr:online");
    compare_cmd->add_option("--format", format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
    add_run_flags(*compare_cmd, compare_flags, false);

    std::vector<std::string> argv_store{"dynlay"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    RunSpec spec;
    try {
        if (*run_cmd)
            spec = finish(run_flags);
        else if (*replay_cmd)
            spec = finish(replay_flags);
        else
            spec = finish(compare_flags);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*run_cmd) {
            const RunResult r = execute_run(spec);
            out << "wrote " << spec.out.string() << " (" << r.iterations << " iterations, "
                << r.metrics.size() << " samples)\n";
            return 0;
        }
        if (*replay_cmd) {
            const RunResult r = execute_run(spec, &in);
            out << "wrote " << spec.out.string() << " (" << r.iterations << " iterations, "
                << r.batches_applied << " batches)\n";
            return 0;
        }

        std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
        if (!matrix.empty()) {
            for (const auto entry : split_commas(matrix)) {
                const auto colon = entry.find(':');
                if (colon == std::string_view::npos) {
                    err << "error: matrix entries are algo:mode\n";
                    return 2;
                }
                RunSpec cell = spec;
                cell.algo = std::string(entry.substr(0, colon));
                const std::string mode(entry.substr(colon + 1));
                if (mode != "static" && mode != "online") {
                    err << "error: bad mode '" << mode << "' in matrix\n";
                    return 2;
                }
                cell.mode = mode == "static" ? Mode::kStatic : Mode::kOnline;
                try {
                    models::make_model(cell.algo, cell.params);
                } catch (const std::invalid_argument& e) {
                    err << "error: " << e.what() << "\n";
                    return 2;
                }
                cell.out = spec.out / (cell.algo + "-" + mode);
                execute_run(cell);
                dirs.push_back(cell.out);
            }
        }
        if (dirs.empty()) {
            err << "error: compare needs run directories or --matrix\n";
            return 2;
        }
        std::vector<CompareRow> rows;
        for (const auto& d : dirs)
            rows.push_back(load_row(d));
        if (!matrix.empty())
            io::atomic_write(spec.out / "compare.csv", compare_csv(rows));
        out << (format == "csv" ? compare_csv(rows) : compare_text(rows));
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dynlay::cli
