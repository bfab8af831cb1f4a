#include "dynlay/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>
#include <openssl/evp.h>

namespace dynlay::io {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, bool comma)
{
    std::vector<std::string_view> out;
    if (comma) {
        std::size_t start = 0;
        for (;;) {
            const auto pos = line.find(',', start);
            out.push_back(trim(line.substr(start, pos - start)));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        return out;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_double(std::string_view text, double& out)
{
    if (text.empty())
        return false;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_size(std::string_view text, std::size_t& out)
{
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return !text.empty() && ec == std::errc() && ptr == end;
}

// Parses one data row; returns an error message on failure.
std::string parse_row(std::string_view line, TemporalEdge& edge)
{
    const bool comma = line.find(',') != std::string_view::npos;
    const auto fields = split(line, comma);
    if (fields.size() != 3 && fields.size() != 4)
        return "expected 3 or 4 columns, found " + std::to_string(fields.size());
    for (const auto f : fields) {
        if (f.empty())
            return "empty field";
    }
    edge.src = std::string(fields[0]);
    edge.dst = std::string(fields[1]);
    edge.weight = 1.0;
    if (fields.size() == 4 && !parse_double(fields[2], edge.weight))
        return "bad weight '" + std::string(fields[2]) + "'";
    if (!parse_double(fields.back(), edge.timestamp))
        return "bad timestamp '" + std::string(fields.back()) + "'";
    return {};
}

}  // namespace

EdgeListParse parse_temporal_edge_list(std::istream& in, bool lenient)
{
    EdgeListParse result;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        TemporalEdge edge;
        const std::string error = parse_row(line, edge);
        if (error.empty()) {
            result.edges.push_back(std::move(edge));
            continue;
        }
        const std::string message = "line " + std::to_string(line_no) + ": " + error;
        if (!lenient)
            throw ParseError(message, line_no);
        ++result.skipped;
        result.warnings.push_back(message);
    }
    return result;
}

EdgeListParse parse_temporal_edge_list(const std::filesystem::path& path, bool lenient)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open dataset " + path.string());
    return parse_temporal_edge_list(in, lenient);
}

std::string format_number(double value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    std::string s(buf.data(), ptr);
    if (s.find_first_of(".eni") == std::string::npos)
        s += ".0";
    return s;
}

std::string metrics_csv(const MetricSeries& series)
{
    std::string out = "wall_s,iteration,ec,ec_sd,nodes,edges\n";
    for (const MetricSample& m : series) {
        out += format_number(m.wall_s) + ',' + std::to_string(m.iteration) + ',' +
               std::to_string(m.ec) + ',' + format_number(m.ec_sd) + ',' +
               std::to_string(m.node_count) + ',' + std::to_string(m.edge_count) + '\n';
    }
    return out;
}

void write_metrics_csv(const MetricSeries& series, const std::filesystem::path& path)
{
    atomic_write(path, metrics_csv(series));
}

MetricSeries parse_metrics_csv(std::istream& in)
{
    MetricSeries series;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (line_no == 1) {
            if (trim(raw) != "wall_s,iteration,ec,ec_sd,nodes,edges")
                throw ParseError("unexpected metrics header", line_no);
            continue;
        }
        if (trim(raw).empty())
            continue;
        const auto f = split(trim(raw), true);
        MetricSample m;
        if (f.size() != 6 || !parse_double(f[0], m.wall_s) || !parse_size(f[1], m.iteration) ||
            !parse_size(f[2], m.ec) || !parse_double(f[3], m.ec_sd) ||
            !parse_size(f[4], m.node_count) || !parse_size(f[5], m.edge_count))
            throw ParseError("malformed metrics row " + std::to_string(line_no), line_no);
        m.ec_sd_defined = m.edge_count > 0;
        series.push_back(m);
    }
    return series;
}

MetricSeries read_metrics_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return parse_metrics_csv(in);
}

std::string svg_snapshot(const Snapshot& snapshot)
{
    const Canvas& c = snapshot.canvas;
    const double radius = std::max(1.0, 0.004 * c.min_side());
    std::unordered_map<NodeId, Position> where(snapshot.positions.begin(), snapshot.positions.end());
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << format_number(c.width)
        << ' ' << format_number(c.height) << "\" width=\"" << format_number(c.width)
        << "\" height=\"" << format_number(c.height) << "\">\n";
    out << "<g stroke=\"#888\" stroke-width=\"" << format_number(radius / 4.0) << "\">\n";
    for (const auto& [u, v] : snapshot.edges) {
        auto a = where.find(u);
        auto b = where.find(v);
        if (a == where.end() || b == where.end())
            continue;
        out << "<line x1=\"" << format_number(a->second.x) << "\" y1=\""
            << format_number(a->second.y) << "\" x2=\"" << format_number(b->second.x)
            << "\" y2=\"" << format_number(b->second.y) << "\"/>\n";
    }
    out << "</g>\n<g fill=\"#1f77b4\">\n";
    for (const auto& [id, p] : snapshot.positions) {
        out << "<circle cx=\"" << format_number(p.x) << "\" cy=\"" << format_number(p.y)
            << "\" r=\"" << format_number(radius) << "\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

void write_svg_snapshot(const Snapshot& snapshot, const std::filesystem::path& path)
{
    atomic_write(path, svg_snapshot(snapshot));
}

std::string layout_json(const Layout& layout)
{
    std::vector<const std::pair<const NodeId, Position>*> nodes;
    nodes.reserve(layout.positions.size());
    for (const auto& entry : layout.positions)
        nodes.push_back(&entry);
    std::sort(nodes.begin(), nodes.end(), [](auto* a, auto* b) { return a->first < b->first; });
    nlohmann::ordered_json j;
    j["canvas"] = {{"width", layout.canvas.width}, {"height", layout.canvas.height}};
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto* n : nodes)
        j["nodes"].push_back({{"id", n->first}, {"x", n->second.x}, {"y", n->second.y}});
    return j.dump(2) + "\n";
}

void write_layout_json(const Layout& layout, const std::filesystem::path& path)
{
    atomic_write(path, layout_json(layout));
}

Layout parse_layout_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    Layout layout;
    layout.canvas = {j.at("canvas").at("width").get<double>(),
                     j.at("canvas").at("height").get<double>()};
    for (const auto& n : j.at("nodes"))
        layout.positions[n.at("id").get<std::string>()] = {n.at("x").get<double>(),
                                                           n.at("y").get<double>()};
    return layout;
}

Layout read_layout_json(const std::filesystem::path& path)
{
    return parse_layout_json(read_file(path));
}

void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string sha256_file(const std::filesystem::path& path)
{
    const std::string bytes = read_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed for " + path.string());
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xF];
    }
    return hex;
}

}  // namespace dynlay::io
