#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "rcsub/error.hpp"
#include "rcsub/grid.hpp"

namespace rcsub {

enum class BoundaryMode { zero_pad, boundary_as_discontinuity };

// Supplies the padded data outside the grid. Under boundary_as_discontinuity the
// exterior is whatever the smoothed data equals once the zero padding has been
// corrected, which the rc pipeline knows in closed form.
template <std::floating_point Real>
struct BasicBoundaryPolicy {
    BoundaryMode mode = BoundaryMode::zero_pad;
    std::function<Real(double)> exterior;

    static BasicBoundaryPolicy zero_pad() { return {}; }

    static BasicBoundaryPolicy discontinuity(std::function<Real(double)> exterior)
    {
        return {BoundaryMode::boundary_as_discontinuity, std::move(exterior)};
    }

    Real outside(double x) const
    {
        if (mode == BoundaryMode::zero_pad || !exterior)
            return Real(0);
        return exterior(x);
    }
};

template <std::floating_point Real>
struct BasicSubdivisionLevel {
    int level = 0;
    BasicSampleSeries<Real> series;
};

using BoundaryPolicy = BasicBoundaryPolicy<double>;
using SubdivisionLevelData = BasicSubdivisionLevel<double>;

template <std::floating_point Real>
BasicSampleSeries<Real> dd4_step(const BasicSampleSeries<Real>& input, const BasicBoundaryPolicy<Real>& policy)
{
    const std::size_t n = input.size();
    if (n < 4)
        throw Error(ErrorCode::too_few_nodes, "the 4-point scheme needs at least 4 nodes");

    const UniformGrid1D fine = input.grid().refined(1);
    const auto& f = input.values();
    std::vector<Real> out(2 * n - 1);

    const auto odd = [](Real a, Real b, Real c, Real d) {
        return (Real(9) * (b + c) - (a + d)) / Real(16);
    };

    const Real left = policy.outside(input.x(-1));
    const Real right = policy.outside(input.x(static_cast<std::ptrdiff_t>(n)));

    for (std::size_t i = 0; i < n; ++i)
        out[2 * i] = f[i];
    out[1] = odd(left, f[0], f[1], f[2]);
    for (std::size_t i = 1; i + 2 < n; ++i)
        out[2 * i + 1] = odd(f[i - 1], f[i], f[i + 1], f[i + 2]);
    out[2 * n - 3] = odd(f[n - 3], f[n - 2], f[n - 1], right);

    return BasicSampleSeries<Real>(fine, std::move(out));
}

template <std::floating_point Real>
std::vector<BasicSubdivisionLevel<Real>> dd4_refine(const BasicSampleSeries<Real>& input, int levels,
                                                     const BasicBoundaryPolicy<Real>& policy)
{
    if (levels < 0)
        throw Error(ErrorCode::invalid_argument, "level count must be non-negative");
    std::vector<BasicSubdivisionLevel<Real>> out;
    out.reserve(static_cast<std::size_t>(levels) + 1);
    out.push_back({0, input});
    for (int k = 1; k <= levels; ++k)
        out.push_back({k, dd4_step(out.back().series, policy)});
    return out;
}

} // namespace rcsub
