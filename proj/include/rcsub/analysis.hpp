#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "rcsub/error.hpp"
#include "rcsub/functions.hpp"
#include "rcsub/grid.hpp"
#include "rcsub/rc.hpp"

namespace rcsub {

enum class Norm { inf, l1 };

inline const char* to_string(Norm n) noexcept { return n == Norm::inf ? "inf" : "l1"; }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    bool touches(double a, double b) const noexcept { return b >= lo && a <= hi; }
};

inline bool excluded(double x, const std::vector<Interval>& set)
{
    return std::any_of(set.begin(), set.end(), [x](const Interval& i) { return i.contains(x); });
}

inline double error_inf(const std::function<double(double)>& exact, const SampleSeries& approx,
                        const std::vector<Interval>& exclusion = {})
{
    double e = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double x = approx.x(static_cast<std::ptrdiff_t>(i));
        if (!excluded(x, exclusion))
            e = std::max(e, std::abs(exact(x) - approx[i]));
    }
    return e;
}

// Max over cells that do not touch any excluded interval.
inline double error_inf_cells(const std::function<double(double, double)>& exact_average,
                              const CellAverageSeries& approx, const std::vector<Interval>& exclusion = {})
{
    double e = 0.0;
    for (std::size_t j = 0; j < approx.size(); ++j) {
        const double a = approx.grid().node(static_cast<std::ptrdiff_t>(j));
        const double b = approx.grid().node(static_cast<std::ptrdiff_t>(j) + 1);
        if (std::any_of(exclusion.begin(), exclusion.end(), [&](const Interval& i) { return i.touches(a, b); }))
            continue;
        e = std::max(e, std::abs(exact_average(a, b) - approx[j]));
    }
    return e;
}

inline double error_l1(const std::function<double(double, double)>& exact_average, const CellAverageSeries& approx)
{
    double s = 0.0;
    for (std::size_t j = 0; j < approx.size(); ++j) {
        const double a = approx.grid().node(static_cast<std::ptrdiff_t>(j));
        const double b = approx.grid().node(static_cast<std::ptrdiff_t>(j) + 1);
        s += std::abs(exact_average(a, b) - approx[j]);
    }
    return approx.grid().spacing() * s;
}

// Errors below this are rounding noise; orders built on them are NaN.
inline constexpr double error_floor = 1e-13;

inline std::vector<double> observed_orders(const std::vector<double>& errors)
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double a = errors[i], b = errors[i + 1];
        out.push_back(a >= error_floor && b >= error_floor && std::isfinite(a) && std::isfinite(b)
                          ? std::log2(a / b)
                          : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

inline constexpr std::size_t max_comparison_nodes = std::size_t{1} << 22;

// min(requested, deepest level whose grid has at most 2^22 nodes)
inline int comparison_level(std::size_t cells, int requested)
{
    int L = 0;
    while (L < requested && (cells << (L + 1)) + 1 <= max_comparison_nodes)
        ++L;
    return L;
}

inline unsigned worker_count(std::size_t jobs)
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RC_SUBDIV_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on a bounded pool; results are index-addressed.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job)
{
    const unsigned workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                job(i);
        });
    for (auto& t : pool)
        t.join();
}

struct RefinementReport {
    std::string function;
    Framework framework = Framework::point;
    Scheme scheme = Scheme::rc;
    Norm norm = Norm::inf;
    std::string exclusion;
    int comparison_level = 0;
    std::vector<int> resolutions;
    std::vector<int> levels;             // comparison level actually used per row
    std::vector<double> errors;          // NaN where the row failed
    std::vector<double> orders;
    std::vector<std::string> failures;   // empty string for a successful row
    std::vector<std::vector<SingularityHypothesis>> hypotheses;
};

namespace detail {

inline std::size_t nearest_breakpoint(const PiecewiseFunction& fn, double x)
{
    const auto& b = fn.breakpoints();
    std::size_t best = 0;
    for (std::size_t i = 1; i < b.size(); ++i)
        if (std::abs(b[i] - x) < std::abs(b[best] - x))
            best = i;
    return best;
}

inline std::vector<Interval> between_true_and_located(const PiecewiseFunction& fn,
                                                      const std::vector<SingularityHypothesis>& hyps)
{
    std::vector<Interval> out;
    if (fn.breakpoints().empty())
        return out;
    for (const auto& h : hyps) {
        const double s = fn.breakpoints()[nearest_breakpoint(fn, *h.location)];
        out.push_back({std::min(s, *h.location), std::max(s, *h.location)});
    }
    return out;
}

struct RowOutcome {
    double error = std::numeric_limits<double>::quiet_NaN();
    std::vector<SingularityHypothesis> hypotheses;
};

inline RowOutcome run_row(const PiecewiseFunction& fn, Framework framework, Scheme scheme, int n, int levels,
                          Norm norm, const DetectionParams& params)
{
    RowOutcome out;
    const UniformGrid1D grid = UniformGrid1D::unit(static_cast<std::size_t>(n));
    if (framework == Framework::point) {
        const SampleSeries s = sample(fn, grid);
        const RCResult r = scheme == Scheme::rc ? rc_point_values(s, levels, params) : linear_point_values(s, levels);
        out.hypotheses = r.hypotheses;
        // Corners: drop fine nodes between s* and x*. Jumps: compare with the
        // function whose breakpoint sits where the pipeline put it.
        PiecewiseFunction exact = fn;
        std::vector<Interval> excl;
        for (const auto& h : r.hypotheses) {
            const double xs = *h.location;
            if (h.kind == SingularityKind::function_jump && !fn.breakpoints().empty()) {
                exact = exact.relocated(nearest_breakpoint(fn, xs), xs);
            } else if (!fn.breakpoints().empty()) {
                const double s = fn.breakpoints()[nearest_breakpoint(fn, xs)];
                excl.push_back({std::min(s, xs), std::max(s, xs)});
            }
        }
        out.error = error_inf([&exact](double x) { return exact(x); }, r.finest(), excl);
        return out;
    }
    const CellAverageSeries c = average(fn, grid);
    const CellRCResult r = scheme == Scheme::rc ? rc_cell_averages(c, levels, params) : linear_cell_averages(c, levels);
    out.hypotheses = r.hypotheses();
    const auto exact = [&fn](double a, double b) { return fn.average(a, b); };
    if (norm == Norm::l1)
        out.error = error_l1(exact, r.finest());
    else
        out.error = error_inf_cells(exact, r.finest(), between_true_and_located(fn, r.hypotheses()));
    return out;
}

inline std::string exclusion_label(Framework framework, Scheme scheme, Norm norm)
{
    if (scheme == Scheme::linear || norm == Norm::l1)
        return "none";
    if (framework == Framework::point)
        return "nodes in [min(s*,x*), max(s*,x*)] (corners); breakpoint moved to x* (jumps)";
    return "fine cells touching [min(s*,x*), max(s*,x*)]";
}

} // namespace detail

inline RefinementReport refinement_study(const PiecewiseFunction& fn, Framework framework, Scheme scheme,
                                         const std::vector<int>& resolutions, int levels, Norm norm,
                                         const DetectionParams& params = {})
{
    if (framework == Framework::point && norm == Norm::l1)
        throw Error(ErrorCode::invalid_argument, "the L1 study is defined on cell averages");
    if (resolutions.empty())
        throw Error(ErrorCode::bad_resolution, "no resolutions given");
    if (levels < 0)
        throw Error(ErrorCode::invalid_argument, "level count must be non-negative");
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        if (resolutions[i] < 1)
            throw Error(ErrorCode::bad_resolution, "resolutions must be positive");
        if (i > 0 && resolutions[i] <= resolutions[i - 1])
            throw Error(ErrorCode::bad_resolution, "resolutions must be ascending");
    }
    RefinementReport rep;
    rep.function = fn.name();
    rep.framework = framework;
    rep.scheme = scheme;
    rep.norm = norm;
    rep.exclusion = detail::exclusion_label(framework, scheme, norm);
    rep.resolutions = resolutions;
    const std::size_t n = resolutions.size();
    rep.levels.resize(n);
    rep.errors.assign(n, std::numeric_limits<double>::quiet_NaN());
    rep.failures.assign(n, "");
    rep.hypotheses.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rep.levels[i] = comparison_level(static_cast<std::size_t>(resolutions[i]), levels);
    rep.comparison_level = n ? *std::min_element(rep.levels.begin(), rep.levels.end()) : levels;

    parallel_for(n, [&](std::size_t i) {
        try {
            auto row = detail::run_row(fn, framework, scheme, resolutions[i], rep.levels[i], norm, params);
            rep.errors[i] = row.error;
            rep.hypotheses[i] = std::move(row.hypotheses);
        } catch (const Error& e) {
            rep.failures[i] = e.what();
        }
    });
    rep.orders = observed_orders(rep.errors);
    return rep;
}

struct RegularityReport {
    std::vector<int> levels;
    std::vector<double> beta1;
    std::vector<double> beta2;
    double window_end = 0.0;   // differences use only nodes left of this
};

namespace detail {

// max |Delta^m v_i| over stencils whose nodes all lie left of `end`.
template <std::floating_point Real>
double max_difference(const std::vector<Real>& v, const std::vector<double>& x, int m, double end)
{
    Real best = Real(0);
    for (std::size_t i = 0; i + static_cast<std::size_t>(m) < v.size(); ++i) {
        if (!(x[i + static_cast<std::size_t>(m)] < end))
            break;
        Real d = Real(0);
        Real binom = Real(1);
        for (int k = 0; k <= m; ++k) {
            d += ((m - k) % 2 == 0 ? Real(1) : Real(-1)) * binom * v[i + static_cast<std::size_t>(k)];
            binom = binom * Real(m - k) / Real(k + 1);
        }
        best = std::max(best, std::abs(d));
    }
    return static_cast<double>(best);
}

inline double regularity_exponent(double coarse, double fine, int k)
{
    const double floor = error_floor;
    if (!(coarse > floor) || !(fine > floor))
        return std::numeric_limits<double>::quiet_NaN();
    return -std::log2(std::ldexp(fine / coarse, k));
}

} // namespace detail

// beta_k at level L compares undivided differences of order k+1 on levels L-1
// and L, restricted to the smooth region left of the first singularity.
// Third differences at level 10 sit a few ulps above rounding noise in
// double, so point-value runs are made in extended precision.
inline RegularityReport numerical_regularity(const PiecewiseFunction& fn, Framework framework, Scheme scheme, int n,
                                             const std::vector<int>& level_list, const DetectionParams& params = {})
{
    if (level_list.empty())
        return {};
    for (std::size_t i = 0; i < level_list.size(); ++i)
        if (level_list[i] < 1 || (i > 0 && level_list[i] <= level_list[i - 1]))
            throw Error(ErrorCode::invalid_argument, "levels must be ascending and at least 1");
    const int top = level_list.back();
    const UniformGrid1D grid = UniformGrid1D::unit(static_cast<std::size_t>(n));

    RegularityReport rep;
    rep.levels = level_list;
    double end = fn.breakpoints().empty() ? std::numeric_limits<double>::infinity() : fn.breakpoints().front();

    // Per level: values and abscissae (nodes, or cell right edges).
    std::vector<std::vector<long double>> vals;
    std::vector<std::vector<double>> xs;
    if (framework == Framework::point) {
        const auto s = sample(fn, grid).cast<long double>();
        const auto r = scheme == Scheme::rc ? rc_point_values(s, top, params) : linear_point_values(s, top);
        for (const auto& h : r.hypotheses)
            end = std::min(end, *h.location);
        for (const auto& l : r.levels) {
            vals.push_back(l.series.values());
            std::vector<double> x(l.series.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = l.series.x(static_cast<std::ptrdiff_t>(i));
            xs.push_back(std::move(x));
        }
    } else {
        const CellAverageSeries c = average(fn, grid);
        const CellRCResult r = scheme == Scheme::rc ? rc_cell_averages(c, top, params) : linear_cell_averages(c, top);
        for (const auto& h : r.hypotheses())
            end = std::min(end, *h.location);
        for (const auto& l : r.cells) {
            vals.emplace_back(l.averages().begin(), l.averages().end());
            std::vector<double> x(l.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = l.grid().node(static_cast<std::ptrdiff_t>(i) + 1);
            xs.push_back(std::move(x));
        }
    }
    rep.window_end = end;
    for (int L : level_list) {
        const auto l = static_cast<std::size_t>(L);
        const double d2c = detail::max_difference(vals[l - 1], xs[l - 1], 2, end);
        const double d2f = detail::max_difference(vals[l], xs[l], 2, end);
        const double d3c = detail::max_difference(vals[l - 1], xs[l - 1], 3, end);
        const double d3f = detail::max_difference(vals[l], xs[l], 3, end);
        rep.beta1.push_back(detail::regularity_exponent(d2c, d2f, 1));
        rep.beta2.push_back(detail::regularity_exponent(d3c, d3f, 2));
    }
    return rep;
}

} // namespace rcsub
