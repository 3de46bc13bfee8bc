#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rdsde {

/// Uniform grid t0 + k*step, k = 0..n_steps.
class TimeGrid {
public:
    TimeGrid(double t0, double t1, std::size_t n_steps);

    double t0() const noexcept { return t0_; }
    double t1() const noexcept { return t1_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t n_points() const noexcept { return n_steps_ + 1; }
    double step() const noexcept { return step_; }

    /// Time of grid point k; the last point is exactly t1.
    double time(std::size_t k) const noexcept;

    /// Index of the grid point at time `t`; throws DomainError when `t` is not
    /// a grid point (relative tolerance 1e-9 of the step).
    std::size_t index_of(double t) const;

    /// Grid of the points k0..k1 of this grid.
    TimeGrid slice(std::size_t k0, std::size_t k1) const;

    /// Same bounds, every `factor`-th point. `factor` must divide n_steps.
    TimeGrid coarsen(std::size_t factor) const;

    /// Same point count and bounds up to rounding.
    bool matches(const TimeGrid& other) const noexcept;

private:
    double t0_;
    double t1_;
    std::size_t n_steps_;
    double step_;
};

/// A d-dimensional path sampled on a TimeGrid. Values are stored row-major:
/// row k holds the `dim` components at grid point k.
class SamplePath {
public:
    SamplePath(TimeGrid grid, std::size_t dim);
    SamplePath(TimeGrid grid, std::size_t dim, std::vector<double> values);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t n_points() const noexcept { return grid_.n_points(); }

    double operator()(std::size_t k, std::size_t i) const noexcept { return values_[k * dim_ + i]; }
    double& operator()(std::size_t k, std::size_t i) noexcept { return values_[k * dim_ + i]; }

    std::span<const double> row(std::size_t k) const noexcept { return {values_.data() + k * dim_, dim_}; }
    std::span<double> row(std::size_t k) noexcept { return {values_.data() + k * dim_, dim_}; }

    std::vector<double> column(std::size_t i) const;
    SamplePath component(std::size_t i) const;

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Restriction to grid points k0..k1.
    SamplePath slice(std::size_t k0, std::size_t k1) const;
    /// Restriction to the grid points lying in [s, t] (both must be grid points).
    SamplePath restrict(double s, double t) const;
    /// Every `factor`-th grid point.
    SamplePath subsample(std::size_t factor) const;

    bool all_finite() const noexcept;

private:
    TimeGrid grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

/// Max over grid points and components of |a - b|. Grids must match.
double sup_distance(const SamplePath& a, const SamplePath& b);

/// Max over grid points and components of |a|.
double sup_norm(const SamplePath& a) noexcept;

}  // namespace rdsde
