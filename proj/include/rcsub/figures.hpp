#pragma once

#include <algorithm>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcsub/io.hpp"
#include "rcsub/tensor2d.hpp"

namespace rcsub {

// File name -> CSV text; written in order.
struct FigureBundle {
    int id = 0;
    std::string title;
    std::vector<std::pair<std::string, std::string>> files;

    void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

inline constexpr int figure_count = 11;

namespace detail {

struct XY {
    std::vector<double> x, y;
};

inline std::string xy_csv(const XY& s, const char* value_name = "value")
{
    std::ostringstream out;
    out << "x," << value_name << '\n';
    for (std::size_t i = 0; i < s.x.size(); ++i)
        out << format_number(s.x[i]) << ',' << format_number(s.y[i]) << '\n';
    return out.str();
}

inline XY nodes(const SampleSeries& s)
{
    XY o;
    for (std::size_t j = 0; j < s.size(); ++j) {
        o.x.push_back(s.x(static_cast<std::ptrdiff_t>(j)));
        o.y.push_back(s[j]);
    }
    return o;
}

inline XY midpoints(const CellAverageSeries& s)
{
    XY o;
    for (std::size_t j = 0; j < s.size(); ++j) {
        o.x.push_back(s.midpoint(j));
        o.y.push_back(s[j]);
    }
    return o;
}

inline XY dense(const std::function<double(double)>& f, double lo, double hi, int count = 1025)
{
    XY o;
    for (int i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * i / (count - 1);
        o.x.push_back(x);
        o.y.push_back(f(x));
    }
    return o;
}

inline XY clip(const XY& s, double lo, double hi)
{
    XY o;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] >= lo && s.x[i] <= hi) {
            o.x.push_back(s.x[i]);
            o.y.push_back(s.y[i]);
        }
    return o;
}

inline double taylor(const TaylorCoefficients& t, double dx)
{
    return ((t.c[3] / 6.0 * dx + t.c[2] / 2.0) * dx + t.c[1]) * dx + t.c[0];
}

inline std::string matrix_csv(const Grid2DSamples& m)
{
    std::ostringstream out;
    write_matrix(out, m);
    return out.str();
}

inline std::string hypotheses_csv(const std::vector<SingularityHypothesis>& h)
{
    std::ostringstream out;
    write_hypotheses(out, h);
    return out.str();
}

constexpr int figure_levels = 5;

// Point values: exact, coarse, linear and RC limits, optionally zoomed.
inline FigureBundle point_limits(int id, std::string title, const PiecewiseFunction& fn, int n, bool with_linear,
                                 double lo, double hi, const DetectionParams& params)
{
    const SampleSeries s = sample(fn, UniformGrid1D::unit(static_cast<std::size_t>(n)));
    const RCResult rc = rc_point_values(s, figure_levels, params);
    FigureBundle b{id, std::move(title), {}};
    b.add("exact.csv", xy_csv(dense([&](double x) { return fn(x); }, lo, hi)));
    b.add("coarse.csv", xy_csv(clip(nodes(s), lo, hi)));
    if (with_linear)
        b.add("linear.csv", xy_csv(clip(nodes(linear_point_values(s, figure_levels).finest()), lo, hi)));
    b.add("rc.csv", xy_csv(clip(nodes(rc.finest()), lo, hi)));
    b.add("hypotheses.csv", hypotheses_csv(rc.hypotheses));
    return b;
}

inline FigureBundle cell_limits(int id, std::string title, double lo, double hi, const DetectionParams& params)
{
    const PiecewiseFunction fn = make_exp3();
    const CellAverageSeries c = average(fn, UniformGrid1D::unit(20));
    const CellRCResult rc = rc_cell_averages(c, figure_levels, params);
    FigureBundle b{id, std::move(title), {}};
    b.add("exact.csv", xy_csv(dense([&](double x) { return fn(x); }, lo, hi)));
    b.add("coarse.csv", xy_csv(clip(midpoints(c), lo, hi)));
    b.add("linear.csv", xy_csv(clip(midpoints(linear_cell_averages(c, figure_levels).finest()), lo, hi)));
    b.add("rc.csv", xy_csv(clip(midpoints(rc.finest()), lo, hi)));
    b.add("hypotheses.csv", hypotheses_csv(rc.hypotheses()));
    return b;
}

inline FigureBundle smoothed_data(const DetectionParams& params)
{
    const SampleSeries s = sample(make_exp1(0.0), UniformGrid1D::unit(16));
    const RCResult rc = rc_point_values(s, 0, params);
    FigureBundle b{1, "exp1 point values and the smoothed data, 16 cells", {}};
    b.add("original.csv", xy_csv(nodes(s)));
    b.add("smoothed.csv", xy_csv(nodes(rc.smoothed_levels.front().series)));
    return b;
}

inline FigureBundle primitive_steps(const DetectionParams& params)
{
    const PiecewiseFunction fn = make_exp3();
    const CellAverageSeries c = average(fn, UniformGrid1D::unit(20));
    const CellRCResult rc = rc_cell_averages(c, figure_levels, params);
    FigureBundle b{2, "exp3 cell averages, primitive, corrected primitive, RC result", {}};
    b.add("averages.csv", xy_csv(midpoints(c)));
    b.add("primitive.csv", xy_csv(nodes(rc.primitive.levels.front().series)));
    b.add("corrected_primitive.csv", xy_csv(nodes(rc.primitive.smoothed_levels.front().series)));
    b.add("rc.csv", xy_csv(midpoints(rc.finest())));
    b.add("exact.csv", xy_csv(dense([&](double x) { return fn(x); }, 0.0, 1.0)));
    return b;
}

// The two one-sided cubics around a located singularity.
inline void local_fits(FigureBundle& b, const std::string& prefix, const SampleSeries& s,
                       const SingularityHypothesis& h, const std::function<double(double)>& exact, double true_location)
{
    const double xs = *h.location;
    const TaylorCoefficients l = one_sided_cubic_fit(s, h.cell_index, xs, Side::left);
    const TaylorCoefficients r = one_sided_cubic_fit(s, h.cell_index, xs, Side::right);
    const double lo = s.x(h.cell_index - 2);
    const double hi = s.x(h.cell_index + 3);
    const XY ex = dense(exact, lo, hi, 257);
    std::ostringstream out;
    out << "x,exact,left_cubic,right_cubic\n";
    for (std::size_t i = 0; i < ex.x.size(); ++i)
        out << format_number(ex.x[i]) << ',' << format_number(ex.y[i]) << ','
            << format_number(taylor(l, ex.x[i] - xs)) << ',' << format_number(taylor(r, ex.x[i] - xs)) << '\n';
    b.add(prefix + "_fits.csv", out.str());
    std::ostringstream m;
    m << "s_star,x_star,cell_left,cell_right\n"
      << format_number(true_location) << ',' << format_number(xs) << ',' << format_number(s.x(h.cell_index)) << ','
      << format_number(s.x(h.cell_index + 1)) << '\n';
    b.add(prefix + "_markers.csv", m.str());
    b.add(prefix + "_data.csv", xy_csv(clip(nodes(s), lo, hi)));
}

inline FigureBundle localization(const DetectionParams& params)
{
    FigureBundle b{10, "Local cubics and located singularities: a corner and a jump seen through the primitive", {}};
    const PiecewiseFunction corner = make_exp1(0.0);
    const SampleSeries s = sample(corner, UniformGrid1D::unit(16));
    const auto hc = analyze_singularities(s, params, LocateMode::corner);
    if (hc.empty())
        throw Error(ErrorCode::degenerate_smoothness, "no corner detected for the localization figure");
    local_fits(b, "corner", s, hc.front(), [&](double x) { return corner(x); }, corner.breakpoints().front());

    const PiecewiseFunction jump = make_exp3();
    const UniformGrid1D g = UniformGrid1D::unit(20);
    const SampleSeries F = primitive(average(jump, g));
    const auto hj = analyze_singularities(F, params, LocateMode::corner);
    if (hj.empty())
        throw Error(ErrorCode::degenerate_smoothness, "no jump detected for the localization figure");
    local_fits(b, "jump", F, hj.front(), [&](double x) { return jump.integral(0.0, x); }, jump.breakpoints().front());
    return b;
}

inline FigureBundle surface(const DetectionParams& params)
{
    const Function2D f = make_exp2d_point();
    const UniformGrid1D g = UniformGrid1D::unit(16);
    const Grid2DSamples data = sample(f, g, g);
    const Rc2DResult r = rc2d_point_values(data, 1, params);
    FigureBundle b{7, "exp2D_point: data, subdivided data, correction, masked correction", {}};
    b.add("data.csv", matrix_csv(data));
    b.add("subdivided.csv", matrix_csv(r.output));
    b.add("correction.csv", matrix_csv(r.correction));
    b.add("masked.csv", matrix_csv(r.masked));
    if (r.curve) {
        std::ostringstream out;
        write_curve(out, *r.curve, r.output.y_grid);
        b.add("curve.csv", out.str());
    }
    return b;
}

inline FigureBundle surface_cells(const DetectionParams& params)
{
    const Function2D f = make_exp2d();
    const UniformGrid1D g = UniformGrid1D::unit(16);
    const Grid2DSamples data = average(f, g, g);
    FigureBundle b{11, "exp2D cell averages: data, one linear step, one RC step", {}};
    b.add("data.csv", matrix_csv(data));
    b.add("linear.csv", matrix_csv(rc2d_cell_averages(data, 1, params, Scheme::linear)));
    b.add("rc.csv", matrix_csv(rc2d_cell_averages(data, 1, params, Scheme::rc)));
    return b;
}

} // namespace detail

inline FigureBundle make_figure(int id, const DetectionParams& params = {})
{
    params.validate();
    const double s = std::numbers::pi / 6.0;
    switch (id) {
    case 1:
        return detail::smoothed_data(params);
    case 2:
        return detail::primitive_steps(params);
    case 3:
        return detail::point_limits(3, "exp1 (a=0), 16 cells, 5 levels: linear and RC limits", make_exp1(0.0), 16,
                                    true, 0.0, 1.0, params);
    case 4:
        return detail::point_limits(4, "Zoom of figure 3 around the corner", make_exp1(0.0), 16, true, s - 0.1,
                                    s + 0.1, params);
    case 5:
        return detail::point_limits(5, "exp2, 64 cells, 5 levels: RC limit around two corners", make_exp2(), 64,
                                    false, 0.0, 1.0, params);
    case 6:
        return detail::point_limits(6, "exp4, 100 cells, 5 levels: RC limit with two jumps", make_exp4(), 100, false,
                                    0.0, 1.0, params);
    case 7:
        return detail::surface(params);
    case 8:
        return detail::cell_limits(8, "exp3, 20 cells, 5 levels: linear and RC limits", 0.0, 1.0, params);
    case 9:
        return detail::cell_limits(9, "Zoom of figure 8 around the jump", s - 0.1, s + 0.1, params);
    case 10:
        return detail::localization(params);
    case 11:
        return detail::surface_cells(params);
    default:
        throw Error(ErrorCode::unknown_figure, "unknown figure " + std::to_string(id) + " (expected 1..11)");
    }
}

} // namespace rcsub
