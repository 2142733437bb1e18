#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rcsub/detect.hpp"
#include "rcsub/error.hpp"
#include "rcsub/functions.hpp"
#include "rcsub/grid.hpp"
#include "rcsub/jumps.hpp"
#include "rcsub/rc.hpp"
#include "rcsub/subdivision.hpp"

namespace rcsub {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows run along x at fixed y. Point data has one entry per node, cell data
// one per cell.
struct Grid2DSamples {
    UniformGrid1D x_grid;
    UniformGrid1D y_grid;
    Matrix values;
    Framework framework = Framework::point;

    Grid2DSamples(UniformGrid1D xg, UniformGrid1D yg, Matrix v, Framework fw = Framework::point)
        : x_grid(xg), y_grid(yg), values(std::move(v)), framework(fw)
    {
        const auto want_cols = fw == Framework::point ? xg.node_count() : xg.cell_count();
        const auto want_rows = fw == Framework::point ? yg.node_count() : yg.cell_count();
        if (static_cast<std::size_t>(values.rows()) != want_rows ||
            static_cast<std::size_t>(values.cols()) != want_cols)
            throw Error(ErrorCode::invalid_argument, "matrix shape does not match the grids");
        if (!values.allFinite())
            throw Error(ErrorCode::invalid_argument, "matrix contains a non-finite value");
    }

    Eigen::Index rows() const noexcept { return values.rows(); }
    Eigen::Index cols() const noexcept { return values.cols(); }

    std::vector<double> row(Eigen::Index r) const
    {
        return std::vector<double>(values.row(r).begin(), values.row(r).end());
    }

    std::vector<double> col(Eigen::Index c) const
    {
        std::vector<double> out(static_cast<std::size_t>(values.rows()));
        for (Eigen::Index r = 0; r < values.rows(); ++r)
            out[static_cast<std::size_t>(r)] = values(r, c);
        return out;
    }
};

inline Grid2DSamples sample(const Function2D& f, const UniformGrid1D& xg, const UniformGrid1D& yg)
{
    Matrix m(static_cast<Eigen::Index>(yg.node_count()), static_cast<Eigen::Index>(xg.node_count()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = f(xg.node(c), yg.node(r));
    return Grid2DSamples(xg, yg, std::move(m), Framework::point);
}

inline Grid2DSamples average(const Function2D& f, const UniformGrid1D& xg, const UniformGrid1D& yg, int panels = 2)
{
    Matrix m(static_cast<Eigen::Index>(yg.cell_count()), static_cast<Eigen::Index>(xg.cell_count()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = f.average(xg.node(c), xg.node(c + 1), yg.node(r), yg.node(r + 1), panels);
    return Grid2DSamples(xg, yg, std::move(m), Framework::cell);
}

// Least-squares polynomial in the normalised variable s = (t - center) / scale.
class PolynomialFit {
public:
    PolynomialFit() = default;

    PolynomialFit(const std::vector<double>& t, const std::vector<double>& v, int degree)
    {
        if (t.size() != v.size() || t.empty())
            throw Error(ErrorCode::invalid_argument, "polynomial fit needs matching, non-empty data");
        if (degree < 0)
            throw Error(ErrorCode::invalid_argument, "polynomial degree must be non-negative");
        degree_ = std::min<int>(degree, static_cast<int>(t.size()) - 1);
        const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
        center_ = 0.5 * (*lo + *hi);
        scale_ = *hi > *lo ? 0.5 * (*hi - *lo) : 1.0;

        const auto m = static_cast<Eigen::Index>(t.size());
        Eigen::MatrixXd A(m, degree_ + 1);
        Eigen::VectorXd b(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double s = (t[static_cast<std::size_t>(i)] - center_) / scale_;
            double p = 1.0;
            for (int k = 0; k <= degree_; ++k) {
                A(i, k) = p;
                p *= s;
            }
            b(i) = v[static_cast<std::size_t>(i)];
        }
        const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
        coefficients_.assign(c.data(), c.data() + c.size());

        double sq = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double r = (*this)(t[i]) - v[i];
            sq += r * r;
            residual_max_ = std::max(residual_max_, std::abs(r));
        }
        residual_rms_ = std::sqrt(sq / static_cast<double>(t.size()));
    }

    double operator()(double t) const
    {
        const double s = (t - center_) / scale_;
        double v = 0.0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
            v = v * s + *it;
        return v;
    }

    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    int degree() const noexcept { return degree_; }
    double residual_rms() const noexcept { return residual_rms_; }
    double residual_max() const noexcept { return residual_max_; }

private:
    std::vector<double> coefficients_;
    int degree_ = 0;
    double center_ = 0.0;
    double scale_ = 1.0;
    double residual_rms_ = 0.0;
    double residual_max_ = 0.0;
};

// The singularity as a graph x = c(y), fitted to one crossing per row.
class SingularityCurve {
public:
    SingularityCurve() = default;

    SingularityCurve(std::vector<double> ys, std::vector<double> crossings, int degree, bool mask_left = true)
        : ys_(std::move(ys)), crossings_(std::move(crossings)), fit_(ys_, crossings_, degree), mask_left_(mask_left)
    {
    }

    double operator()(double y) const { return fit_(y); }
    double signed_distance(double x, double y) const { return x - fit_(y); }

    // True where the correction is kept.
    bool keeps(double x, double y) const
    {
        const double d = signed_distance(x, y);
        return mask_left_ ? d >= 0.0 : d <= 0.0;
    }

    const std::vector<double>& row_y() const noexcept { return ys_; }
    const std::vector<double>& crossings() const noexcept { return crossings_; }
    const PolynomialFit& fit() const noexcept { return fit_; }
    int degree() const noexcept { return fit_.degree(); }
    bool mask_left() const noexcept { return mask_left_; }
    double residual_rms() const noexcept { return fit_.residual_rms(); }
    double residual_max() const noexcept { return fit_.residual_max(); }

private:
    std::vector<double> ys_;
    std::vector<double> crossings_;
    PolynomialFit fit_;
    bool mask_left_ = true;
};

// Re-expands the cubic j0 + j1 t + j2 t^2/2 + j3 t^3/6 about a new anchor.
inline std::array<double, 4> shift_taylor(const std::array<double, 4>& j, double from, double to)
{
    const double t = to - from;
    return {((j[3] / 6.0 * t + j[2] / 2.0) * t + j[1]) * t + j[0], (j[3] / 2.0 * t + j[2]) * t + j[1],
            j[3] * t + j[2], j[3]};
}

struct Rc2DOptions {
    int curve_degree = 4;
    int jump_field_degree = 8;
    bool mask_left = true;
};

namespace detail {

inline std::string line_label(const char* what, Eigen::Index i) { return std::string(what) + " " + std::to_string(i); }

[[noreturn]] inline void rethrow_annotated(const Error& e, const std::string& where)
{
    throw Error(e.code(), where + ": " + e.what());
}

struct RowAnalysis {
    std::optional<SingularityHypothesis> hypothesis;
    CorrectionTerm term;
};

inline std::vector<RowAnalysis> analyze_rows(const Grid2DSamples& data, const DetectionParams& params)
{
    std::vector<RowAnalysis> out(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        try {
            const SampleSeries row(data.x_grid, data.row(r));
            detail::require_rc_size(row);
            const auto hyps = analyze_singularities(row, params, LocateMode::by_kind);
            if (hyps.size() > 1)
                throw Error(ErrorCode::row_with_multiple_singularities,
                            std::to_string(hyps.size()) + " singularities detected");
            auto& a = out[static_cast<std::size_t>(r)];
            if (!hyps.empty())
                a.hypothesis = hyps.front();
            a.term = build_correction(row, hyps);
        } catch (const Error& e) {
            rethrow_annotated(e, line_label("row", r));
        }
    }
    return out;
}

inline SingularityCurve curve_from_rows(const Grid2DSamples& data, const std::vector<RowAnalysis>& rows,
                                        const Rc2DOptions& opts)
{
    std::vector<double> ys, xs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].hypothesis)
            throw Error(ErrorCode::row_without_singularity, line_label("row", static_cast<Eigen::Index>(r)));
        ys.push_back(data.y_grid.node(static_cast<std::ptrdiff_t>(r)));
        xs.push_back(*rows[r].hypothesis->location);
    }
    return SingularityCurve(std::move(ys), std::move(xs), opts.curve_degree, opts.mask_left);
}

// Replaces every row's interior jumps with values of jump fields that are
// polynomial in y. Per-row estimates switch stencils from row to row; left raw
// they would make the correction rough across rows.
inline std::array<PolynomialFit, 4> smooth_jump_fields(const Grid2DSamples& data, std::vector<RowAnalysis>& rows,
                                                       const SingularityCurve& curve, const Rc2DOptions& opts)
{
    std::vector<double> ys;
    std::array<std::vector<double>, 4> k;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double y = data.y_grid.node(static_cast<std::ptrdiff_t>(r));
        for (const auto& t : rows[r].term.terms()) {
            if (t.role != JumpRole::interior)
                continue;
            const auto shifted = shift_taylor(t.jumps, t.location, curve(y));
            ys.push_back(y);
            for (std::size_t i = 0; i < 4; ++i)
                k[i].push_back(shifted[i]);
        }
    }
    std::array<PolynomialFit, 4> fields;
    for (std::size_t i = 0; i < 4; ++i)
        fields[i] = PolynomialFit(ys, k[i], opts.jump_field_degree);

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double y = data.y_grid.node(static_cast<std::ptrdiff_t>(r));
        const std::array<double, 4> at_curve{fields[0](y), fields[1](y), fields[2](y), fields[3](y)};
        std::vector<JumpVector> terms = rows[r].term.terms();
        for (auto& t : terms) {
            if (t.role != JumpRole::interior)
                continue;
            t.jumps = shift_taylor(at_curve, curve(y), t.location);
            t.side_values.reset();
        }
        rows[r].term = CorrectionTerm(std::move(terms));
    }
    return fields;
}

// Boundary-corrected linear refinement along each column.
inline Matrix refine_columns(const UniformGrid1D& y_grid, const Matrix& m, int levels = 1)
{
    Matrix out((m.rows() - 1) * (Eigen::Index{1} << levels) + 1, m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::vector<double> col(static_cast<std::size_t>(m.rows()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            col[static_cast<std::size_t>(r)] = m(r, c);
        try {
            const auto fine = linear_point_values(SampleSeries(y_grid, std::move(col)), levels).finest();
            for (Eigen::Index r = 0; r < out.rows(); ++r)
                out(r, c) = fine[static_cast<std::size_t>(r)];
        } catch (const Error& e) {
            rethrow_annotated(e, line_label("column", c));
        }
    }
    return out;
}

// One step of a 1D refiner along every row.
inline Matrix refine_rows(const UniformGrid1D& x_grid, const Matrix& m,
                          const std::function<SampleSeries(const SampleSeries&)>& step)
{
    Matrix out(m.rows(), 2 * m.cols() - 1);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        try {
            const SampleSeries fine =
                step(SampleSeries(x_grid, std::vector<double>(m.row(r).begin(), m.row(r).end())));
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                out(r, c) = fine[static_cast<std::size_t>(c)];
        } catch (const Error& e) {
            rethrow_annotated(e, line_label("row", r));
        }
    }
    return out;
}

} // namespace detail

inline SingularityCurve fit_curve(const Grid2DSamples& data, const DetectionParams& params = {},
                                  const Rc2DOptions& opts = {})
{
    if (data.framework != Framework::point)
        throw Error(ErrorCode::invalid_argument, "curve fitting works on point values");
    params.validate();
    return detail::curve_from_rows(data, detail::analyze_rows(data, params), opts);
}

enum class TensorOrder { rows_first, columns_first };

// Plain zero-padded 4-point scheme in both directions.
inline Grid2DSamples tensor_dd4_step(const Grid2DSamples& data, TensorOrder order = TensorOrder::rows_first)
{
    const auto step = [](const SampleSeries& s) { return dd4_step(s, BoundaryPolicy::zero_pad()); };
    if (order == TensorOrder::rows_first) {
        const Matrix a = detail::refine_rows(data.x_grid, data.values, step);
        const Matrix b = detail::refine_rows(data.y_grid, a.transpose(), step).transpose();
        return Grid2DSamples(data.x_grid.refined(), data.y_grid.refined(), b);
    }
    const Matrix a = detail::refine_rows(data.y_grid, data.values.transpose(), step).transpose();
    const Matrix b = detail::refine_rows(data.x_grid, a, step);
    return Grid2DSamples(data.x_grid.refined(), data.y_grid.refined(), b);
}

// The 4-point scheme on boundary-corrected lines, rows then columns.
inline Grid2DSamples tensor_linear_step(const Grid2DSamples& data)
{
    const auto step = [](const SampleSeries& s) { return linear_point_values(s, 1).finest(); };
    const Matrix a = detail::refine_rows(data.x_grid, data.values, step);
    return Grid2DSamples(data.x_grid.refined(), data.y_grid.refined(), detail::refine_columns(data.y_grid, a));
}

struct Rc2DResult {
    Grid2DSamples output;
    Grid2DSamples smoothed;        // g after the tensor step
    Grid2DSamples correction;      // interior row corrections, unmasked, refined
    Grid2DSamples masked;          // the same after masking
    std::optional<SingularityCurve> curve;
    std::array<PolynomialFit, 4> jump_fields; // jump derivatives along the curve, as functions of y
};

namespace detail {

// Rows are analysed once on the coarse data; everything after that is refinement.
inline Rc2DResult rc2d_refine(const Grid2DSamples& data, int levels, const DetectionParams& params,
                              const Rc2DOptions& opts)
{
    std::vector<RowAnalysis> rows = analyze_rows(data, params);
    const bool any = std::any_of(rows.begin(), rows.end(), [](const RowAnalysis& a) { return a.hypothesis.has_value(); });
    std::optional<SingularityCurve> curve;
    std::array<PolynomialFit, 4> fields;
    if (any) {
        curve = curve_from_rows(data, rows, opts);
        fields = smooth_jump_fields(data, rows, *curve, opts);
    }

    UniformGrid1D xf = data.x_grid, yf = data.y_grid;
    for (int k = 0; k < levels; ++k) {
        xf = xf.refined();
        yf = yf.refined();
    }
    const Eigen::Index nxf = static_cast<Eigen::Index>(xf.node_count());
    Matrix g(data.rows(), nxf), boundary(data.rows(), nxf), interior(data.rows(), nxf);
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const auto& a = rows[static_cast<std::size_t>(r)];
        const SampleSeries row(data.x_grid, data.row(r));
        std::vector<SingularityHypothesis> hyps;
        if (a.hypothesis)
            hyps.push_back(*a.hypothesis);
        const RCResult res = apply_correction(row, levels, hyps, a.term);
        const SampleSeries& gr = res.smoothed_levels.back().series;
        std::vector<JumpVector> edge;
        std::optional<JumpVector> inner;
        for (const auto& t : a.term.terms()) {
            if (t.role == JumpRole::interior)
                inner = t;
            else
                edge.push_back(t);
        }
        const CorrectionTerm edge_term(edge);
        for (Eigen::Index c = 0; c < nxf; ++c) {
            const double x = xf.node(c);
            g(r, c) = gr[static_cast<std::size_t>(c)];
            boundary(r, c) = evaluate_correction(edge_term, x);
            interior(r, c) = inner ? inner->cubic(x) : 0.0;
        }
    }

    const Matrix G = refine_columns(data.y_grid, g, levels);
    const Matrix B = refine_columns(data.y_grid, boundary, levels);
    const Matrix C = refine_columns(data.y_grid, interior, levels);
    Matrix M = C;
    if (curve) {
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            for (Eigen::Index c = 0; c < M.cols(); ++c)
                if (!curve->keeps(xf.node(c), yf.node(r)))
                    M(r, c) = 0.0;
    } else {
        M.setZero();
    }
    Matrix out = G + B + M;
    return Rc2DResult{Grid2DSamples(xf, yf, std::move(out)), Grid2DSamples(xf, yf, G), Grid2DSamples(xf, yf, C),
                      Grid2DSamples(xf, yf, M), curve, fields};
}

} // namespace detail

// Row corrections from the coarse data, tensor refinement of the smoothed
// data, column refinement of the correction field, masking by the fitted curve.
inline Rc2DResult rc2d_point_values(const Grid2DSamples& data, int levels, const DetectionParams& params = {},
                                    const Rc2DOptions& opts = {})
{
    if (data.framework != Framework::point)
        throw Error(ErrorCode::invalid_argument, "rc2d_point_values expects point values");
    if (levels < 1)
        throw Error(ErrorCode::invalid_argument, "at least one level is required");
    params.validate();
    return detail::rc2d_refine(data, levels, params, opts);
}

// Rows then columns of the 1D cell-average pipeline, one level at a time.
inline Grid2DSamples rc2d_cell_averages(const Grid2DSamples& data, int levels, const DetectionParams& params = {},
                                        Scheme scheme = Scheme::rc)
{
    if (data.framework != Framework::cell)
        throw Error(ErrorCode::invalid_argument, "rc2d_cell_averages expects cell averages");
    if (levels < 0)
        throw Error(ErrorCode::invalid_argument, "level count must be non-negative");
    params.validate();
    const auto line = [&](const UniformGrid1D& grid, std::vector<double> v) {
        const CellAverageSeries s(grid, std::move(v));
        return scheme == Scheme::rc ? rc_cell_averages(s, 1, params).finest() : linear_cell_averages(s, 1).finest();
    };
    Grid2DSamples cur = data;
    for (int k = 0; k < levels; ++k) {
        const UniformGrid1D xf = cur.x_grid.refined();
        const UniformGrid1D yf = cur.y_grid.refined();
        Matrix a(cur.rows(), 2 * cur.cols());
        for (Eigen::Index r = 0; r < cur.rows(); ++r) {
            try {
                const auto fine = line(cur.x_grid, cur.row(r));
                for (Eigen::Index c = 0; c < a.cols(); ++c)
                    a(r, c) = fine[static_cast<std::size_t>(c)];
            } catch (const Error& e) {
                detail::rethrow_annotated(e, detail::line_label("row", r));
            }
        }
        Matrix b(2 * cur.rows(), a.cols());
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            try {
                std::vector<double> col(static_cast<std::size_t>(a.rows()));
                for (Eigen::Index r = 0; r < a.rows(); ++r)
                    col[static_cast<std::size_t>(r)] = a(r, c);
                const auto fine = line(cur.y_grid, std::move(col));
                for (Eigen::Index r = 0; r < b.rows(); ++r)
                    b(r, c) = fine[static_cast<std::size_t>(r)];
            } catch (const Error& e) {
                detail::rethrow_annotated(e, detail::line_label("column", c));
            }
        }
        cur = Grid2DSamples(xf, yf, std::move(b), Framework::cell);
    }
    return cur;
}

} // namespace rcsub
