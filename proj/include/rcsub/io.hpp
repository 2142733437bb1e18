#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rcsub/rc.hpp"
#include "rcsub/tensor2d.hpp"

namespace rcsub {

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Parses "# key=value, key=value".
inline std::map<std::string, std::string> parse_header(const std::string& line)
{
    if (line.empty() || line[0] != '#')
        throw Error(ErrorCode::io, "missing '#' header line");
    std::map<std::string, std::string> out;
    std::stringstream ss(line.substr(1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::io, "malformed header entry '" + item + "'");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

namespace detail {

inline double parse_double(const std::string& s)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (s.find_first_not_of(" \t\r", used) != std::string::npos)
            throw Error(ErrorCode::io, "trailing characters in number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::io, "not a number: '" + s + "'");
    }
}

inline const std::string& header_value(const std::map<std::string, std::string>& h, const std::string& key)
{
    const auto it = h.find(key);
    if (it == h.end())
        throw Error(ErrorCode::io, "header lacks '" + key + "'");
    return it->second;
}

inline Framework parse_framework(const std::string& kind)
{
    if (kind == "point") return Framework::point;
    if (kind == "cell") return Framework::cell;
    throw Error(ErrorCode::io, "unknown kind '" + kind + "'");
}

inline std::ofstream open_out(const std::filesystem::path& p)
{
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::io, "cannot write " + p.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot read " + p.string());
    return in;
}

} // namespace detail

// ---- 1D series ----

inline void write_series(std::ostream& out, const SampleSeries& s)
{
    out << "# kind=point, origin=" << format_number(s.grid().origin()) << ", h=" << format_number(s.grid().spacing())
        << '\n';
    for (double v : s.values())
        out << format_number(v) << '\n';
}

inline void write_series(std::ostream& out, const CellAverageSeries& s)
{
    out << "# kind=cell, origin=" << format_number(s.grid().origin()) << ", h=" << format_number(s.grid().spacing())
        << '\n';
    for (double v : s.averages())
        out << format_number(v) << '\n';
}

using AnySeries = std::variant<SampleSeries, CellAverageSeries>;

inline AnySeries read_series(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::io, "empty series file");
    const auto h = parse_header(line);
    const Framework fw = detail::parse_framework(detail::header_value(h, "kind"));
    const double origin = detail::parse_double(detail::header_value(h, "origin"));
    const double spacing = detail::parse_double(detail::header_value(h, "h"));
    std::vector<double> v;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        v.push_back(detail::parse_double(line));
    }
    const std::size_t nodes = fw == Framework::point ? v.size() : v.size() + 1;
    if (nodes < 2)
        throw Error(ErrorCode::too_few_nodes, "series has too few values");
    const UniformGrid1D grid(origin, spacing, nodes);
    if (fw == Framework::point)
        return SampleSeries(grid, std::move(v));
    return CellAverageSeries(grid, std::move(v));
}

template <class Series>
void write_series_file(const std::filesystem::path& p, const Series& s)
{
    auto out = detail::open_out(p);
    write_series(out, s);
}

inline AnySeries read_series_file(const std::filesystem::path& p)
{
    auto in = detail::open_in(p);
    return read_series(in);
}

// ---- matrices ----

inline void write_matrix(std::ostream& out, const Grid2DSamples& m)
{
    out << "# kind=" << to_string(m.framework) << ", x_origin=" << format_number(m.x_grid.origin())
        << ", x_h=" << format_number(m.x_grid.spacing()) << ", y_origin=" << format_number(m.y_grid.origin())
        << ", y_h=" << format_number(m.y_grid.spacing()) << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c)
                out << ',';
            out << format_number(m.values(r, c));
        }
        out << '\n';
    }
}

inline Grid2DSamples read_matrix(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::io, "empty matrix file");
    const auto h = parse_header(line);
    const Framework fw = detail::parse_framework(detail::header_value(h, "kind"));
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            r.push_back(detail::parse_double(cell));
        if (!rows.empty() && r.size() != rows.front().size())
            throw Error(ErrorCode::io, "ragged matrix rows");
        rows.push_back(std::move(r));
    }
    if (rows.empty() || rows.front().empty())
        throw Error(ErrorCode::too_few_nodes, "matrix has no values");
    const std::size_t extra = fw == Framework::point ? 0 : 1;
    const UniformGrid1D xg(detail::parse_double(detail::header_value(h, "x_origin")),
                           detail::parse_double(detail::header_value(h, "x_h")), rows.front().size() + extra);
    const UniformGrid1D yg(detail::parse_double(detail::header_value(h, "y_origin")),
                           detail::parse_double(detail::header_value(h, "y_h")), rows.size() + extra);
    Matrix v(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            v(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return Grid2DSamples(xg, yg, std::move(v), fw);
}

inline void write_matrix_file(const std::filesystem::path& p, const Grid2DSamples& m)
{
    auto out = detail::open_out(p);
    write_matrix(out, m);
}

inline Grid2DSamples read_matrix_file(const std::filesystem::path& p)
{
    auto in = detail::open_in(p);
    return read_matrix(in);
}

// Fitted curve sampled at the given ys.
inline void write_curve(std::ostream& out, const SingularityCurve& curve, const UniformGrid1D& ys)
{
    out << "y,c\n";
    for (std::size_t i = 0; i < ys.node_count(); ++i) {
        const double y = ys.node(static_cast<std::ptrdiff_t>(i));
        out << format_number(y) << ',' << format_number(curve(y)) << '\n';
    }
}

// ---- hypotheses and jumps ----

inline void write_hypotheses(std::ostream& out, const std::vector<SingularityHypothesis>& hyps)
{
    out << "cell_index,kind,x_star,score\n";
    for (const auto& h : hyps) {
        out << h.cell_index << ',' << to_string(h.kind) << ','
            << (h.location ? format_number(*h.location) : std::string("nan")) << ','
            << format_number(h.detection_score) << '\n';
    }
}

inline void write_jumps(std::ostream& out, const CorrectionTerm& term)
{
    out << "x_star,j0,j1,j2,j3,role\n";
    for (const auto& t : term.terms()) {
        out << format_number(t.location);
        for (double j : t.jumps)
            out << ',' << format_number(j);
        out << ',' << to_string(t.role) << '\n';
    }
}

struct RunMeta {
    int levels = 0;
    Framework framework = Framework::point;
    Scheme scheme = Scheme::rc;
    DetectionParams params;
    bool degraded = false;
};

inline void write_meta(std::ostream& out, const RunMeta& m)
{
    out << "levels=" << m.levels << '\n'
        << "framework=" << to_string(m.framework) << '\n'
        << "scheme=" << to_string(m.scheme) << '\n'
        << "policy=discontinuity\n"
        << "threshold=" << format_number(m.params.score_threshold) << '\n'
        << "min_separation_cells=" << m.params.min_separation_cells << '\n'
        << "bisection_tolerance=" << format_number(m.params.bisection_tolerance) << '\n'
        << "jump_factor=" << format_number(m.params.jump_factor) << '\n'
        << "degraded=" << (m.degraded ? "true" : "false") << '\n';
}

// levels/level_<k>.csv, hypotheses.csv, jumps.csv, meta. Timings go to a
// separate file so the rest stays byte-stable.
inline void write_result_dir(const std::filesystem::path& dir, const RCResult& res, const RunMeta& meta)
{
    for (const auto& lvl : res.levels)
        write_series_file(dir / "levels" / ("level_" + std::to_string(lvl.level) + ".csv"), lvl.series);
    {
        auto out = detail::open_out(dir / "hypotheses.csv");
        write_hypotheses(out, res.hypotheses);
    }
    {
        auto out = detail::open_out(dir / "jumps.csv");
        write_jumps(out, res.correction);
    }
    auto out = detail::open_out(dir / "meta");
    write_meta(out, meta);
}

inline void write_result_dir(const std::filesystem::path& dir, const CellRCResult& res, const RunMeta& meta)
{
    for (std::size_t k = 0; k < res.cells.size(); ++k)
        write_series_file(dir / "levels" / ("level_" + std::to_string(k) + ".csv"), res.cells[k]);
    {
        auto out = detail::open_out(dir / "hypotheses.csv");
        write_hypotheses(out, res.hypotheses());
    }
    {
        auto out = detail::open_out(dir / "jumps.csv");
        write_jumps(out, res.primitive.correction);
    }
    auto out = detail::open_out(dir / "meta");
    write_meta(out, meta);
}

inline void write_timings(const std::filesystem::path& dir, double elapsed_ms)
{
    auto out = detail::open_out(dir / "timings");
    out << "elapsed_ms=" << format_number(elapsed_ms) << '\n';
}

} // namespace rcsub
