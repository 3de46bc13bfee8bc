#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rdsde/path.hpp"

namespace rdsde {

/// Causal view of a path on [-r, T] at grid index `current`: only values at
/// grid points <= current are visible. Any look-ahead throws CausalityError.
class PathHistory {
public:
    /// `running_sup`, when given, holds sup_{u <= t_k} |x_i(u)| row-major for every
    /// grid point k (it may be filled only up to `current`).
    PathHistory(const SamplePath& path, std::size_t current, std::size_t delay_steps,
                std::span<const double> running_sup = {});

    double time() const noexcept { return path_->grid().time(current_); }
    std::size_t index() const noexcept { return current_; }
    std::size_t dim() const noexcept { return path_->dim(); }

    double value(std::size_t index, std::size_t component) const;
    /// Value at time u <= time(); linear interpolation between grid points.
    double at(double u, std::size_t component) const;
    double current(std::size_t component) const { return value(current_, component); }
    /// x(t - r).
    double delayed(std::size_t component) const;
    /// sup_{-r <= u <= t} |x_i(u)|.
    double running_sup(std::size_t component) const;

private:
    const SamplePath* path_;
    std::size_t current_;
    std::size_t delay_steps_;
    std::span<const double> running_sup_;
};

/// Hereditary drift b(t, x|[-r,t]) writing d values into `out`.
using DriftFunction = std::function<void(double t, const PathHistory& history, std::span<double> out)>;

/// Diffusion sigma(t, x(t-r)) writing a row-major d x m matrix into `out`.
using DiffusionFunction =
    std::function<void(double t, std::span<const double> delayed_state, std::span<double> out)>;

/// Fills `sup` (row-major, n_points x dim) with running sups of |x_i| for grid
/// points first..last, continuing from the value at first-1 when first > 0.
void update_running_sup(const SamplePath& path, std::size_t first, std::size_t last, std::vector<double>& sup);

}  // namespace rdsde
