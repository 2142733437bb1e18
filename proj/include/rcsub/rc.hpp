#pragma once

#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rcsub/detect.hpp"
#include "rcsub/error.hpp"
#include "rcsub/grid.hpp"
#include "rcsub/jumps.hpp"
#include "rcsub/subdivision.hpp"

namespace rcsub {

enum class Framework { point, cell };
enum class Scheme { linear, rc };

inline const char* to_string(Framework f) noexcept { return f == Framework::point ? "point" : "cell"; }
inline const char* to_string(Scheme s) noexcept { return s == Scheme::rc ? "rc" : "linear"; }

template <std::floating_point Real>
struct BasicRCResult {
    std::vector<BasicSubdivisionLevel<Real>> levels;
    std::vector<BasicSubdivisionLevel<Real>> smoothed_levels;
    std::vector<SingularityHypothesis> hypotheses;
    CorrectionTerm correction;

    const BasicSampleSeries<Real>& finest() const { return levels.back().series; }

    bool degraded() const noexcept
    {
        for (const auto& h : hypotheses)
            if (h.degraded())
                return true;
        return false;
    }
};

using RCResult = BasicRCResult<double>;

struct CellRCResult {
    RCResult primitive;                     // F and its reconstruction G, level by level
    std::vector<CellAverageSeries> cells;   // recovered averages, level by level

    const CellAverageSeries& finest() const { return cells.back(); }
    const std::vector<SingularityHypothesis>& hypotheses() const noexcept { return primitive.hypotheses; }
};

inline constexpr std::size_t min_rc_nodes = 8;

enum class LocateMode { by_kind, corner };

// Detect, check room for both stencils, classify and locate.
template <std::floating_point Real>
std::vector<SingularityHypothesis> analyze_singularities(const BasicSampleSeries<Real>& samples,
                                                         const DetectionParams& params, LocateMode mode)
{
    std::vector<SingularityHypothesis> hyps = detect_cells(samples, params);
    const auto last = static_cast<std::ptrdiff_t>(samples.size()) - 1;
    for (auto& h : hyps) {
        if (h.cell_index < 3 || h.cell_index + 4 > last)
            throw Error(ErrorCode::singularity_near_boundary,
                        "cell " + std::to_string(h.cell_index) + " lacks 4 clean nodes on one side");
        if (mode == LocateMode::by_kind)
            h = classify_kind(samples, h, params);
        h = h.kind == SingularityKind::function_jump ? locate_jump_pointvalues(samples, h)
                                                     : locate_corner(samples, h, params);
    }
    return hyps;
}

template <std::floating_point Real>
CorrectionTerm build_correction(const BasicSampleSeries<Real>& samples,
                                const std::vector<SingularityHypothesis>& hyps)
{
    auto [left, right] = boundary_jumps(samples);
    std::vector<JumpVector> terms{left};
    for (const auto& h : hyps)
        terms.push_back(estimate_jumps(samples, h));
    terms.push_back(right);
    return CorrectionTerm(std::move(terms));
}

// Smooth, refine, correct. The padded exterior of the smoothed data is 0 - T.
template <std::floating_point Real>
BasicRCResult<Real> apply_correction(const BasicSampleSeries<Real>& samples, int levels,
                                     std::vector<SingularityHypothesis> hyps, CorrectionTerm term)
{
    if (levels < 0)
        throw Error(ErrorCode::invalid_argument, "level count must be non-negative");
    BasicRCResult<Real> out;
    const BasicSampleSeries<Real> g = smooth_data(samples, term);
    const auto policy = BasicBoundaryPolicy<Real>::discontinuity(
        [term](double x) { return -evaluate_correction<Real>(term, x); });
    out.smoothed_levels = dd4_refine(g, levels, policy);
    out.levels.reserve(out.smoothed_levels.size());
    // Retained nodes copy the coarser level, which equals g + T there but
    // avoids the rounding of the round trip.
    out.levels.push_back({0, samples});
    for (std::size_t k = 1; k < out.smoothed_levels.size(); ++k) {
        const auto& lvl = out.smoothed_levels[k];
        const auto& prev = out.levels.back().series.values();
        std::vector<Real> v(lvl.series.values());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = i % 2 == 0 ? prev[i / 2]
                              : v[i] + evaluate_correction<Real>(term, lvl.series.x(static_cast<std::ptrdiff_t>(i)));
        out.levels.push_back({lvl.level, BasicSampleSeries<Real>(lvl.series.grid(), std::move(v))});
    }
    out.hypotheses = std::move(hyps);
    out.correction = std::move(term);
    return out;
}

namespace detail {

template <std::floating_point Real>
void require_rc_size(const BasicSampleSeries<Real>& s)
{
    if (s.size() < min_rc_nodes)
        throw Error(ErrorCode::too_few_nodes,
                    "the pipeline needs at least " + std::to_string(min_rc_nodes) + " nodes, got " +
                        std::to_string(s.size()));
}

} // namespace detail

template <std::floating_point Real>
BasicRCResult<Real> rc_point_values(const BasicSampleSeries<Real>& samples, int levels,
                                    const DetectionParams& params = {},
                                    LocateMode mode = LocateMode::by_kind)
{
    detail::require_rc_size(samples);
    auto hyps = analyze_singularities(samples, params, mode);
    CorrectionTerm term = build_correction(samples, hyps);
    return apply_correction(samples, levels, std::move(hyps), std::move(term));
}

// The 4-point scheme on boundary-corrected data: the rc pipeline with no
// interior singularities.
template <std::floating_point Real>
BasicRCResult<Real> linear_point_values(const BasicSampleSeries<Real>& samples, int levels)
{
    detail::require_rc_size(samples);
    CorrectionTerm term = build_correction(samples, {});
    return apply_correction(samples, levels, {}, std::move(term));
}

namespace detail {

template <std::floating_point Real>
BasicRCResult<double> narrow(const BasicRCResult<Real>& r)
{
    BasicRCResult<double> out;
    const auto conv = [](const auto& lv) {
        std::vector<BasicSubdivisionLevel<double>> v;
        for (const auto& l : lv)
            v.push_back({l.level, l.series.template cast<double>()});
        return v;
    };
    out.levels = conv(r.levels);
    out.smoothed_levels = conv(r.smoothed_levels);
    out.hypotheses = r.hypotheses;
    out.correction = r.correction;
    return out;
}

// The primitive is differenced at spacing h/2^L, which costs about L bits;
// the whole cell pipeline therefore runs in extended precision.
using CellReal = long double;

inline CellRCResult run_cells(const CellAverageSeries& cells, int levels, const DetectionParams* params)
{
    const auto F = primitive(cells.cast<CellReal>());
    detail::require_rc_size(F);
    std::vector<SingularityHypothesis> hyps;
    if (params)
        hyps = analyze_singularities(F, *params, LocateMode::corner);
    CorrectionTerm term = build_correction(F, hyps);
    const BasicRCResult<CellReal> G = apply_correction(F, levels, std::move(hyps), std::move(term));

    CellRCResult out;
    out.cells.push_back(cells);
    for (std::size_t k = 1; k < G.levels.size(); ++k)
        out.cells.push_back(cell_averages_from_primitive(G.levels[k].series).template cast<double>());
    out.primitive = narrow(G);
    return out;
}

} // namespace detail

inline CellRCResult rc_cell_averages(const CellAverageSeries& cells, int levels, const DetectionParams& params = {})
{
    params.validate();
    return detail::run_cells(cells, levels, &params);
}

inline CellRCResult linear_cell_averages(const CellAverageSeries& cells, int levels)
{
    return detail::run_cells(cells, levels, nullptr);
}

} // namespace rcsub
