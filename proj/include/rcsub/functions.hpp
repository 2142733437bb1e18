#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "rcsub/error.hpp"
#include "rcsub/grid.hpp"

namespace rcsub {

// p(x) + amplitude * sin(frequency * x), p in ascending monomial coefficients.
struct SmoothPiece {
    std::vector<double> poly;
    double amplitude = 0.0;
    double frequency = 0.0;

    double derivative(double x, int order) const
    {
        double p = 0.0;
        const int n = static_cast<int>(poly.size());
        for (int k = n - 1; k >= order; --k) {
            double c = poly[static_cast<std::size_t>(k)];
            for (int m = 0; m < order; ++m)
                c *= static_cast<double>(k - m);
            p = std::fma(p, x, c);
        }
        if (amplitude != 0.0) {
            const double w = std::pow(frequency, order);
            switch (order % 4) {
            case 0: p += amplitude * w * std::sin(frequency * x); break;
            case 1: p += amplitude * w * std::cos(frequency * x); break;
            case 2: p -= amplitude * w * std::sin(frequency * x); break;
            default: p -= amplitude * w * std::cos(frequency * x); break;
            }
        }
        return p;
    }

    double operator()(double x) const { return derivative(x, 0); }
};

enum class FunctionId { exp1, exp2, exp3, exp4, custom };

// Breakpoints are strictly increasing; a point on a breakpoint takes the right piece.
class PiecewiseFunction {
public:
    PiecewiseFunction(std::vector<double> breakpoints, std::vector<SmoothPiece> pieces,
                      std::string name = "custom", FunctionId id = FunctionId::custom,
                      double parameter = 0.0)
        : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), name_(std::move(name)),
          id_(id), parameter_(parameter)
    {
        if (pieces_.size() != breakpoints_.size() + 1)
            throw Error(ErrorCode::invalid_argument, "need one more piece than breakpoints");
        if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end(), std::less_equal<>()))
            throw Error(ErrorCode::invalid_argument, "breakpoints must be strictly increasing");
    }

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<SmoothPiece>& pieces() const noexcept { return pieces_; }
    const std::string& name() const noexcept { return name_; }
    FunctionId id() const noexcept { return id_; }
    double parameter() const noexcept { return parameter_; }

    std::size_t piece_index(double x) const
    {
        return static_cast<std::size_t>(
            std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
    }

    double operator()(double x) const { return pieces_[piece_index(x)](x); }
    double derivative(double x, int order) const { return pieces_[piece_index(x)].derivative(x, order); }

    // Right limit minus left limit of the order-th derivative at breakpoint b.
    double jump(std::size_t b, int order) const
    {
        const double s = breakpoints_.at(b);
        return pieces_[b + 1].derivative(s, order) - pieces_[b].derivative(s, order);
    }

    // Same pieces with breakpoint b moved.
    PiecewiseFunction relocated(std::size_t b, double location) const
    {
        PiecewiseFunction out = *this;
        out.breakpoints_.at(b) = location;
        if (!std::is_sorted(out.breakpoints_.begin(), out.breakpoints_.end(), std::less_equal<>()))
            throw Error(ErrorCode::invalid_argument, "relocated breakpoint breaks the ordering");
        return out;
    }

    // Composite 8-point Gauss-Legendre, split at breakpoints, panels no wider than 1/16.
    double integral(double a, double b) const
    {
        if (b < a)
            return -integral(b, a);
        double total = 0.0;
        double left = a;
        std::size_t piece = piece_index(a);
        while (left < b) {
            const double right = piece < breakpoints_.size() ? std::min(b, breakpoints_[piece]) : b;
            if (right > left)
                total += integrate_piece(pieces_[piece], left, right);
            left = std::max(left, right);
            ++piece;
        }
        return total;
    }

    double average(double a, double b) const { return integral(a, b) / (b - a); }

private:
    static double integrate_piece(const SmoothPiece& p, double a, double b)
    {
        const double width = b - a;
        const int panels = std::max(1, static_cast<int>(std::ceil(width * 16.0)));
        const double step = width / panels;
        double sum = 0.0;
        for (int k = 0; k < panels; ++k) {
            const double lo = a + k * step;
            const double hi = (k + 1 == panels) ? b : lo + step;
            sum += boost::math::quadrature::gauss<double, 8>::integrate(
                [&p](double x) { return p(x); }, lo, hi);
        }
        return sum;
    }

    std::vector<double> breakpoints_;
    std::vector<SmoothPiece> pieces_;
    std::string name_;
    FunctionId id_;
    double parameter_;
};

namespace detail {

// (x - s)(x - s - w) + x^2 + c + sin(10x), expanded in monomials.
inline SmoothPiece shifted_quadratic(double s, double w, double c)
{
    return SmoothPiece{{s * (s + w) + c, -(2.0 * s + w), 2.0}, 1.0, 10.0};
}

inline SmoothPiece base_piece(double c = 0.0)
{
    return SmoothPiece{{c, 0.0, 1.0}, 1.0, 10.0};
}

} // namespace detail

inline PiecewiseFunction make_exp1(double a)
{
    const double s = std::numbers::pi / 6.0;
    return PiecewiseFunction({s}, {detail::shifted_quadratic(s, 10.0, a), detail::base_piece()},
                             "exp1", FunctionId::exp1, a);
}

inline PiecewiseFunction make_exp3()
{
    PiecewiseFunction f = make_exp1(10.0);
    return PiecewiseFunction(f.breakpoints(), f.pieces(), "exp3", FunctionId::exp3, 10.0);
}

inline PiecewiseFunction make_exp2()
{
    const double s1 = std::numbers::pi / 12.0;
    const double s2 = 3.0 * std::numbers::pi / 12.0;
    return PiecewiseFunction({s1, s2},
                             {detail::shifted_quadratic(s1, 10.0, 0.0), detail::base_piece(),
                              detail::shifted_quadratic(s2, 5.0, 0.0)},
                             "exp2", FunctionId::exp2);
}

inline PiecewiseFunction make_exp4()
{
    const double s1 = std::numbers::pi / 12.0;
    const double s2 = 3.0 * std::numbers::pi / 12.0;
    return PiecewiseFunction({s1, s2},
                             {detail::shifted_quadratic(s1, 10.0, 1.0), detail::base_piece(),
                              detail::shifted_quadratic(s2, 5.0, 2.0)},
                             "exp4", FunctionId::exp4);
}

// x^2 + sin(10x), no singularity.
inline PiecewiseFunction make_smooth()
{
    return PiecewiseFunction({}, {detail::base_piece()}, "smooth", FunctionId::custom);
}

inline PiecewiseFunction make_function(const std::string& name, double a = 0.0)
{
    if (name == "exp1") return make_exp1(a);
    if (name == "exp2") return make_exp2();
    if (name == "exp3") return make_exp3();
    if (name == "exp4") return make_exp4();
    if (name == "smooth") return make_smooth();
    throw Error(ErrorCode::unknown_function, "no 1D function named '" + name + "'");
}

inline SampleSeries sample(const PiecewiseFunction& f, const UniformGrid1D& grid)
{
    std::vector<double> v(grid.node_count());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = f(grid.node(static_cast<std::ptrdiff_t>(j)));
    return SampleSeries(grid, std::move(v));
}

inline CellAverageSeries average(const PiecewiseFunction& f, const UniformGrid1D& grid)
{
    std::vector<double> v(grid.cell_count());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const auto i = static_cast<std::ptrdiff_t>(j);
        v[j] = f.average(grid.node(i), grid.node(i + 1));
    }
    return CellAverageSeries(grid, std::move(v));
}

// Bivariate test functions on [0,1]^2.
class Function2D {
public:
    using Evaluator = std::function<double(double, double)>;

    Function2D(std::string name, Evaluator f, std::vector<double> x_breaks = {},
               std::vector<double> y_breaks = {})
        : name_(std::move(name)), f_(std::move(f)), x_breaks_(std::move(x_breaks)),
          y_breaks_(std::move(y_breaks))
    {
    }

    const std::string& name() const noexcept { return name_; }
    double operator()(double x, double y) const { return f_(x, y); }

    // Tensor Gauss-Legendre; exact splits only along declared axis-aligned lines.
    double average(double x0, double x1, double y0, double y1, int panels = 1) const
    {
        using GL = boost::math::quadrature::gauss<double, 8>;
        const auto xs = split(x0, x1, x_breaks_, panels);
        const auto ys = split(y0, y1, y_breaks_, panels);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
                const double ya = ys[k], yb = ys[k + 1];
                sum += GL::integrate(
                    [&](double x) {
                        return GL::integrate([&](double y) { return f_(x, y); }, ya, yb);
                    },
                    xs[i], xs[i + 1]);
            }
        return sum / ((x1 - x0) * (y1 - y0));
    }

private:
    static std::vector<double> split(double a, double b, const std::vector<double>& breaks, int panels)
    {
        std::vector<double> cuts{a};
        for (double s : breaks)
            if (s > a && s < b)
                cuts.push_back(s);
        cuts.push_back(b);
        std::vector<double> out{a};
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            for (int p = 1; p <= panels; ++p)
                out.push_back(p == panels ? cuts[i + 1] : cuts[i] + (cuts[i + 1] - cuts[i]) * p / panels);
        return out;
    }

    std::string name_;
    Evaluator f_;
    std::vector<double> x_breaks_;
    std::vector<double> y_breaks_;
};

inline Function2D make_exp2d_point()
{
    return Function2D("exp2D_point", [](double x, double y) {
        const double pi = std::numbers::pi;
        const double r2 = (x + 0.5) * (x + 0.5) + (y - 0.5) * (y - 0.5);
        return r2 < 1.0 ? std::cos(pi * x) * std::cos(pi * y) : 1.0 - std::cos(pi * x) * std::sin(pi * y);
    });
}

// Crossing abscissa of the circle boundary in exp2D_point.
inline double exp2d_point_curve(double y)
{
    return -0.5 + std::sqrt(1.0 - (y - 0.5) * (y - 0.5));
}

inline Function2D make_exp2d()
{
    return Function2D(
        "exp2D",
        [](double x, double y) {
            const double c = std::cos(std::numbers::pi * x) * std::cos(std::numbers::pi * y);
            const bool right = x >= 0.5;
            const bool top = y >= 0.5;
            if (!right && !top) return c;
            if (right && top) return 4.0 - c;
            return 2.0 - c;
        },
        {0.5}, {0.5});
}

inline Function2D make_function_2d(const std::string& name)
{
    if (name == "exp2D_point") return make_exp2d_point();
    if (name == "exp2D") return make_exp2d();
    throw Error(ErrorCode::unknown_function, "no 2D function named '" + name + "'");
}

inline bool is_2d_function(const std::string& name)
{
    return name == "exp2D_point" || name == "exp2D";
}

} // namespace rcsub
