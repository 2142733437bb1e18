#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rcsub/error.hpp"

namespace rcsub {

// Node coordinates always live in double, whatever the value type of a
// series, so that every precision sees bit-identical nodes.
class UniformGrid1D {
public:
    UniformGrid1D(double origin, double spacing, std::size_t node_count)
        : origin_(origin), spacing_(spacing), node_count_(node_count)
    {
        if (!(spacing > 0.0) || !std::isfinite(spacing) || !std::isfinite(origin))
            throw Error(ErrorCode::invalid_argument, "grid spacing must be positive and finite");
        if (node_count < 2)
            throw Error(ErrorCode::too_few_nodes, "a grid needs at least 2 nodes");
    }

    // N cells on [0, 1].
    static UniformGrid1D unit(std::size_t cells)
    {
        if (cells < 1)
            throw Error(ErrorCode::bad_resolution, "at least one cell is required");
        return UniformGrid1D(0.0, 1.0 / static_cast<double>(cells), cells + 1);
    }

    double origin() const noexcept { return origin_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t cell_count() const noexcept { return node_count_ - 1; }

    // Valid for any index, including virtual nodes outside the grid.
    double node(std::ptrdiff_t j) const noexcept
    {
        return std::fma(static_cast<double>(j), spacing_, origin_);
    }

    double back() const noexcept { return node(static_cast<std::ptrdiff_t>(node_count_) - 1); }

    UniformGrid1D refined(int levels = 1) const
    {
        return UniformGrid1D(origin_, std::ldexp(spacing_, -levels),
                             ((node_count_ - 1) << levels) + 1);
    }

    friend bool operator==(const UniformGrid1D&, const UniformGrid1D&) = default;

private:
    double origin_;
    double spacing_;
    std::size_t node_count_;
};

namespace detail {

template <class Real>
void require_finite(const std::vector<Real>& v, const char* what)
{
    for (const Real& x : v)
        if (!std::isfinite(x))
            throw Error(ErrorCode::invalid_argument, std::string(what) + " contains a non-finite value");
}

} // namespace detail

template <std::floating_point Real>
class BasicSampleSeries {
public:
    using value_type = Real;

    BasicSampleSeries(UniformGrid1D grid, std::vector<Real> values)
        : grid_(grid), values_(std::move(values))
    {
        if (values_.size() != grid_.node_count())
            throw Error(ErrorCode::invalid_argument, "sample count does not match the grid");
        detail::require_finite(values_, "sample series");
    }

    const UniformGrid1D& grid() const noexcept { return grid_; }
    const std::vector<Real>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    Real operator[](std::size_t j) const { return values_[j]; }
    double x(std::ptrdiff_t j) const noexcept { return grid_.node(j); }

    template <std::floating_point Other>
    BasicSampleSeries<Other> cast() const
    {
        return BasicSampleSeries<Other>(grid_, std::vector<Other>(values_.begin(), values_.end()));
    }

private:
    UniformGrid1D grid_;
    std::vector<Real> values_;
};

// Averages over [x_{j-1}, x_j]; stored zero-based, so averages()[j-1] is cell j.
template <std::floating_point Real>
class BasicCellAverageSeries {
public:
    using value_type = Real;

    BasicCellAverageSeries(UniformGrid1D grid, std::vector<Real> averages)
        : grid_(grid), averages_(std::move(averages))
    {
        if (averages_.size() != grid_.cell_count())
            throw Error(ErrorCode::invalid_argument, "average count does not match the grid cells");
        detail::require_finite(averages_, "cell-average series");
    }

    const UniformGrid1D& grid() const noexcept { return grid_; }
    const std::vector<Real>& averages() const noexcept { return averages_; }
    std::size_t size() const noexcept { return averages_.size(); }
    Real operator[](std::size_t j) const { return averages_[j]; }
    double midpoint(std::size_t j) const noexcept
    {
        return 0.5 * (grid_.node(static_cast<std::ptrdiff_t>(j)) + grid_.node(static_cast<std::ptrdiff_t>(j) + 1));
    }

    template <std::floating_point Other>
    BasicCellAverageSeries<Other> cast() const
    {
        return BasicCellAverageSeries<Other>(grid_, std::vector<Other>(averages_.begin(), averages_.end()));
    }

private:
    UniformGrid1D grid_;
    std::vector<Real> averages_;
};

using SampleSeries = BasicSampleSeries<double>;
using CellAverageSeries = BasicCellAverageSeries<double>;

// F_0 = 0, F_j = F_{j-1} + h * avg_j, accumulated strictly left to right.
template <std::floating_point Real>
BasicSampleSeries<Real> primitive(const BasicCellAverageSeries<Real>& cells)
{
    const Real h = static_cast<Real>(cells.grid().spacing());
    std::vector<Real> F(cells.size() + 1);
    F[0] = Real(0);
    for (std::size_t j = 0; j < cells.size(); ++j)
        F[j + 1] = F[j] + h * cells[j];
    return BasicSampleSeries<Real>(cells.grid(), std::move(F));
}

template <std::floating_point Real>
BasicCellAverageSeries<Real> cell_averages_from_primitive(const BasicSampleSeries<Real>& samples)
{
    const Real h = static_cast<Real>(samples.grid().spacing());
    std::vector<Real> avg(samples.size() - 1);
    for (std::size_t j = 0; j < avg.size(); ++j)
        avg[j] = (samples[j + 1] - samples[j]) / h;
    return BasicCellAverageSeries<Real>(samples.grid(), std::move(avg));
}

} // namespace rcsub
