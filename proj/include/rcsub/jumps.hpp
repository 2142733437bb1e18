#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rcsub/error.hpp"
#include "rcsub/grid.hpp"

namespace rcsub {

enum class SingularityKind { corner, function_jump };

inline const char* to_string(SingularityKind k) noexcept
{
    return k == SingularityKind::corner ? "corner" : "function_jump";
}

struct SingularityHypothesis {
    std::ptrdiff_t cell_index = 0;           // singularity in [x_j, x_{j+1}]
    SingularityKind kind = SingularityKind::corner;
    std::optional<double> location;          // x*
    std::optional<double> true_location;     // s*, synthetic data only
    double detection_score = 0.0;            // negative once localization degraded

    bool degraded() const noexcept { return detection_score < 0.0; }
};

enum class Side { left, right };

// Value and first three derivatives of a local cubic at an anchor.
struct TaylorCoefficients {
    std::array<double, 4> c{};

    double value() const noexcept { return c[0]; }
    double d1() const noexcept { return c[1]; }
    double d2() const noexcept { return c[2]; }
    double d3() const noexcept { return c[3]; }
};

enum class JumpRole { interior, left_boundary, right_boundary };

inline const char* to_string(JumpRole r) noexcept
{
    switch (r) {
    case JumpRole::interior: return "interior";
    case JumpRole::left_boundary: return "left_boundary";
    case JumpRole::right_boundary: return "right_boundary";
    }
    return "interior";
}

// T(x) = j0 + j1 t + j2 t^2/2 + j3 t^3/6, t = x - location, switched on at
// x >= location (x > location for the right boundary, which must stay
// inactive on the closed domain).
struct JumpVector {
    double location = 0.0;
    std::array<double, 4> jumps{};
    std::optional<std::pair<double, double>> side_values;
    JumpRole role = JumpRole::interior;

    bool active(double x) const noexcept
    {
        return role == JumpRole::right_boundary ? x > location : x >= location;
    }

    template <std::floating_point Real = double>
    Real cubic(Real x) const
    {
        const Real t = x - static_cast<Real>(location);
        const Real a3 = static_cast<Real>(jumps[3]) / Real(6);
        const Real a2 = static_cast<Real>(jumps[2]) / Real(2);
        return ((a3 * t + a2) * t + static_cast<Real>(jumps[1])) * t + static_cast<Real>(jumps[0]);
    }
};

class CorrectionTerm {
public:
    CorrectionTerm() = default;

    explicit CorrectionTerm(std::vector<JumpVector> terms) : terms_(std::move(terms))
    {
        for (std::size_t i = 1; i < terms_.size(); ++i)
            if (!(terms_[i].location > terms_[i - 1].location))
                throw Error(ErrorCode::invalid_argument, "correction locations must be strictly increasing");
        for (const auto& t : terms_)
            for (double v : t.jumps)
                if (!std::isfinite(v))
                    throw Error(ErrorCode::invalid_argument, "jump vector is not finite");
    }

    const std::vector<JumpVector>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    std::vector<JumpVector> interior() const
    {
        std::vector<JumpVector> out;
        for (const auto& t : terms_)
            if (t.role == JumpRole::interior)
                out.push_back(t);
        return out;
    }

private:
    std::vector<JumpVector> terms_;
};

template <std::floating_point Real = double>
Real evaluate_correction(const CorrectionTerm& term, double x)
{
    Real sum = Real(0);
    for (const auto& t : term.terms()) {
        if (!t.active(x))
            break;
        sum += t.cubic<Real>(static_cast<Real>(x));
    }
    return sum;
}

template <std::floating_point Real>
BasicSampleSeries<Real> smooth_data(const BasicSampleSeries<Real>& samples, const CorrectionTerm& term)
{
    std::vector<Real> g(samples.values());
    for (std::size_t j = 0; j < g.size(); ++j)
        g[j] -= evaluate_correction<Real>(term, samples.x(static_cast<std::ptrdiff_t>(j)));
    return BasicSampleSeries<Real>(samples.grid(), std::move(g));
}

inline constexpr double max_fit_condition = 1e12;

// Cubic through {x_{j-3..j}} (left) or {x_{j+1..j+4}} (right), expanded about
// x*. Offsets are measured in units of h so the system stays O(1).
template <std::floating_point Real>
TaylorCoefficients one_sided_cubic_fit(const BasicSampleSeries<Real>& samples, std::ptrdiff_t anchor,
                                       double x_star, Side side)
{
    const auto n = static_cast<std::ptrdiff_t>(samples.size());
    const std::ptrdiff_t first = side == Side::left ? anchor - 3 : anchor + 1;
    if (first < 0 || first + 3 >= n)
        throw Error(ErrorCode::index_out_of_range,
                    "cubic fit needs nodes " + std::to_string(first) + ".." + std::to_string(first + 3));
    const double h = samples.grid().spacing();
    if (x_star < samples.x(anchor) || x_star > samples.x(anchor + 1))
        throw Error(ErrorCode::invalid_argument, "x* must lie in the anchor cell");

    using Mat = Eigen::Matrix<Real, 4, 4>;
    using Vec = Eigen::Matrix<Real, 4, 1>;
    Mat A;
    Vec b;
    const Real hs = static_cast<Real>(h);
    for (int r = 0; r < 4; ++r) {
        const std::ptrdiff_t i = first + r;
        const Real t = (static_cast<Real>(samples.x(i)) - static_cast<Real>(x_star)) / hs;
        A(r, 0) = Real(1);
        A(r, 1) = t;
        A(r, 2) = t * t / Real(2);
        A(r, 3) = t * t * t / Real(6);
        b(r) = samples[static_cast<std::size_t>(i)];
    }
    Eigen::PartialPivLU<Mat> lu(A);
    const Real rcond = lu.rcond();
    if (!(rcond > Real(1) / Real(max_fit_condition)))
        throw Error(ErrorCode::ill_conditioned, "one-sided fit matrix is ill-conditioned");
    const Vec s = lu.solve(b);

    TaylorCoefficients out;
    Real scale = Real(1);
    for (int k = 0; k < 4; ++k) {
        out.c[static_cast<std::size_t>(k)] = static_cast<double>(s(k) / scale);
        scale *= hs;
    }
    return out;
}

template <std::floating_point Real>
JumpVector estimate_jumps(const BasicSampleSeries<Real>& samples, const SingularityHypothesis& hyp)
{
    if (!hyp.location)
        throw Error(ErrorCode::invalid_argument, "hypothesis has no location");
    const double xs = *hyp.location;
    const TaylorCoefficients l = one_sided_cubic_fit(samples, hyp.cell_index, xs, Side::left);
    const TaylorCoefficients r = one_sided_cubic_fit(samples, hyp.cell_index, xs, Side::right);
    JumpVector jv;
    jv.location = xs;
    for (std::size_t k = 0; k < 4; ++k)
        jv.jumps[k] = r.c[k] - l.c[k];
    jv.side_values = std::make_pair(l.value(), r.value());
    jv.role = JumpRole::interior;
    return jv;
}

// The data are zero outside the grid. At x_0 the jump is the right-hand fit
// itself; at x_N it is minus the left-hand fit, and the term only acts
// beyond x_N.
template <std::floating_point Real>
std::pair<JumpVector, JumpVector> boundary_jumps(const BasicSampleSeries<Real>& samples)
{
    const auto n = static_cast<std::ptrdiff_t>(samples.size());
    JumpVector left;
    left.location = samples.x(0);
    left.role = JumpRole::left_boundary;
    left.jumps = one_sided_cubic_fit(samples, -1, left.location, Side::right).c;
    left.side_values = std::make_pair(0.0, left.jumps[0]);

    JumpVector right;
    right.location = samples.x(n - 1);
    right.role = JumpRole::right_boundary;
    const TaylorCoefficients fit = one_sided_cubic_fit(samples, n - 1, right.location, Side::left);
    for (std::size_t k = 0; k < 4; ++k)
        right.jumps[k] = -fit.c[k];
    right.side_values = std::make_pair(fit.value(), 0.0);
    return {left, right};
}

} // namespace rcsub
