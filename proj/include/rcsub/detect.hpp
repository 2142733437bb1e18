#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rcsub/error.hpp"
#include "rcsub/grid.hpp"
#include "rcsub/jumps.hpp"

namespace rcsub {

struct DetectionParams {
    double score_threshold = 2.5;
    int min_separation_cells = 8;
    double bisection_tolerance = 1e-14;
    // |[f]| > jump_factor * h * (|[f']| + 1) marks a function jump.
    double jump_factor = 1.0;

    void validate() const
    {
        if (!(score_threshold > 1.0))
            throw Error(ErrorCode::invalid_argument, "score threshold must exceed 1");
        if (min_separation_cells < 8)
            throw Error(ErrorCode::invalid_argument, "minimum separation is 8 cells");
        if (!(bisection_tolerance > 0.0))
            throw Error(ErrorCode::invalid_argument, "bisection tolerance must be positive");
        if (!(jump_factor > 0.0))
            throw Error(ErrorCode::invalid_argument, "jump factor must be positive");
    }
};

inline double critical_scale_corner(double jump_f_prime, double sup_f2)
{
    if (!(sup_f2 > 0.0))
        throw Error(ErrorCode::degenerate_smoothness, "sup |f''| must be positive");
    return std::abs(jump_f_prime) / (4.0 * sup_f2);
}

inline double critical_scale_jump(double jump_f, double sup_f1)
{
    if (!(sup_f1 > 0.0))
        throw Error(ErrorCode::degenerate_smoothness, "sup |f'| must be positive");
    return std::abs(jump_f) / (4.0 * sup_f1);
}

namespace detail {

inline double median(std::vector<double> v)
{
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    const double upper = v[m];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    return 0.5 * (lower + upper);
}

} // namespace detail

// Second differences below this multiple of eps * max|f| are treated as
// rounding noise and kept out of the median.
inline constexpr double noise_floor_ulps = 256.0;

template <std::floating_point Real>
std::vector<SingularityHypothesis> detect_cells(const BasicSampleSeries<Real>& samples,
                                                const DetectionParams& params = {})
{
    params.validate();
    const std::size_t n = samples.size();
    if (n < 3)
        throw Error(ErrorCode::too_few_nodes, "detection needs at least 3 nodes");
    const auto& f = samples.values();

    Real fmax = Real(0);
    for (const Real& v : f)
        fmax = std::max(fmax, std::abs(v));
    const double floor = noise_floor_ulps * std::numeric_limits<double>::epsilon() * static_cast<double>(fmax);

    // d[j] for j = 1..n-2. A flag needs both neighbouring differences, so
    // monotone growth towards an edge is never mistaken for a peak.
    std::vector<double> d(n, 0.0);
    std::vector<double> significant;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        d[j] = static_cast<double>(std::abs(f[j - 1] - Real(2) * f[j] + f[j + 1]));
        if (d[j] > floor)
            significant.push_back(d[j]);
    }
    if (significant.empty())
        return {};
    const double med = detail::median(std::move(significant));

    std::vector<SingularityHypothesis> out;
    for (std::size_t j = 2; j + 2 < n; ++j) {
        if (!(d[j] > floor) || !(d[j] > params.score_threshold * med))
            continue;
        if (!(d[j] > d[j - 1]) || !(d[j] > d[j + 1]))
            continue;
        SingularityHypothesis hyp;
        const auto jj = static_cast<std::ptrdiff_t>(j);
        hyp.cell_index = d[j + 1] > d[j - 1] ? jj : jj - 1;
        hyp.detection_score = d[j] / med;
        if (!out.empty() && out.back().cell_index == hyp.cell_index)
            continue;
        out.push_back(hyp);
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].cell_index - out[i - 1].cell_index < params.min_separation_cells)
            throw Error(ErrorCode::singularities_too_close,
                        "cells " + std::to_string(out[i - 1].cell_index) + " and " +
                            std::to_string(out[i].cell_index) + " are closer than " +
                            std::to_string(params.min_separation_cells) + " cells");
    return out;
}

template <std::floating_point Real>
SingularityHypothesis locate_jump_pointvalues(const BasicSampleSeries<Real>& samples, SingularityHypothesis hyp)
{
    hyp.kind = SingularityKind::function_jump;
    hyp.location = 0.5 * (samples.x(hyp.cell_index) + samples.x(hyp.cell_index + 1));
    return hyp;
}

template <std::floating_point Real>
SingularityHypothesis classify_kind(const BasicSampleSeries<Real>& samples, SingularityHypothesis hyp,
                                    const DetectionParams& params = {})
{
    SingularityHypothesis probe = locate_jump_pointvalues(samples, hyp);
    const JumpVector jv = estimate_jumps(samples, probe);
    const double h = samples.grid().spacing();
    hyp.kind = std::abs(jv.jumps[0]) > params.jump_factor * h * (std::abs(jv.jumps[1]) + 1.0)
                   ? SingularityKind::function_jump
                   : SingularityKind::corner;
    hyp.location.reset();
    return hyp;
}

// Root of H = p_R - p_L in the cell, by bisection. A root lying within half a
// cell outside the bracket (a corner sitting on a node) is clamped to the
// nearer endpoint; otherwise the midpoint is used and the score goes negative.
template <std::floating_point Real>
SingularityHypothesis locate_corner(const BasicSampleSeries<Real>& samples, SingularityHypothesis hyp,
                                    const DetectionParams& params = {})
{
    const std::ptrdiff_t j = hyp.cell_index;
    const double a = samples.x(j);
    const double b = samples.x(j + 1);
    const double h = samples.grid().spacing();
    const TaylorCoefficients L = one_sided_cubic_fit(samples, j, a, Side::left);
    const TaylorCoefficients R = one_sided_cubic_fit(samples, j, a, Side::right);
    const std::array<double, 4> D{R.c[0] - L.c[0], R.c[1] - L.c[1], R.c[2] - L.c[2], R.c[3] - L.c[3]};
    const auto H = [&](double x) {
        const double t = x - a;
        return ((D[3] / 6.0 * t + D[2] / 2.0) * t + D[1]) * t + D[0];
    };
    const auto sign_change = [](double u, double v) { return (u <= 0.0 && v >= 0.0) || (u >= 0.0 && v <= 0.0); };

    hyp.kind = SingularityKind::corner;
    double lo = a, hi = b;
    double Hlo = H(lo), Hhi = H(hi);
    if (!sign_change(Hlo, Hhi)) {
        if (sign_change(H(a - 0.5 * h), Hlo))
            hyp.location = a;
        else if (sign_change(Hhi, H(b + 0.5 * h)))
            hyp.location = b;
        else {
            hyp.location = 0.5 * (a + b);
            hyp.detection_score = -std::max(std::abs(hyp.detection_score), 1.0);
        }
        return hyp;
    }
    if (Hlo == 0.0) {
        hyp.location = lo;
        return hyp;
    }
    if (Hhi == 0.0) {
        hyp.location = hi;
        return hyp;
    }
    while (hi - lo > params.bisection_tolerance) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
            break;
        const double Hm = H(mid);
        if (Hm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((Hm < 0.0) == (Hlo < 0.0)) {
            lo = mid;
            Hlo = Hm;
        } else {
            hi = mid;
        }
    }
    hyp.location = lo + 0.5 * (hi - lo);
    return hyp;
}

} // namespace rcsub
