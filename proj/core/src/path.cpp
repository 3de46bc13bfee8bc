#include "rdsde/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdsde/error.hpp"

namespace rdsde {

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_steps)
    : t0_(t0), t1_(t1), n_steps_(n_steps), step_(0.0) {
    if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw DomainError("time grid requires finite t0 < t1");
    }
    if (n_steps == 0) {
        throw DomainError("time grid requires at least one step");
    }
    step_ = (t1 - t0) / static_cast<double>(n_steps);
}

double TimeGrid::time(std::size_t k) const noexcept {
    if (k >= n_steps_) {
        return t1_;
    }
    return t0_ + static_cast<double>(k) * step_;
}

std::size_t TimeGrid::index_of(double t) const {
    const double pos = (t - t0_) / step_;
    const double k = std::round(pos);
    if (k < 0.0 || k > static_cast<double>(n_steps_) || std::abs(pos - k) > 1e-9) {
        throw DomainError("time " + std::to_string(t) + " is not a point of the grid [" +
                          std::to_string(t0_) + ", " + std::to_string(t1_) + "]");
    }
    return static_cast<std::size_t>(k);
}

TimeGrid TimeGrid::slice(std::size_t k0, std::size_t k1) const {
    if (k0 >= k1 || k1 > n_steps_) {
        throw DomainError("invalid grid slice");
    }
    TimeGrid g(time(k0), time(k1), k1 - k0);
    g.step_ = step_;
    return g;
}

TimeGrid TimeGrid::coarsen(std::size_t factor) const {
    if (factor == 0 || n_steps_ % factor != 0) {
        throw ShapeError("coarsening factor " + std::to_string(factor) + " does not divide " +
                         std::to_string(n_steps_) + " steps");
    }
    return TimeGrid(t0_, t1_, n_steps_ / factor);
}

bool TimeGrid::matches(const TimeGrid& other) const noexcept {
    if (n_steps_ != other.n_steps_) {
        return false;
    }
    const double tol = 1e-9 * step_;
    return std::abs(t0_ - other.t0_) <= tol && std::abs(t1_ - other.t1_) <= tol;
}

SamplePath::SamplePath(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim), values_(grid.n_points() * dim, 0.0) {
    if (dim == 0) {
        throw ShapeError("sample path needs at least one component");
    }
}

SamplePath::SamplePath(TimeGrid grid, std::size_t dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
    if (dim == 0) {
        throw ShapeError("sample path needs at least one component");
    }
    if (values_.size() != grid_.n_points() * dim_) {
        throw ShapeError("sample path expects " + std::to_string(grid_.n_points() * dim_) +
                         " values, got " + std::to_string(values_.size()));
    }
}

std::vector<double> SamplePath::column(std::size_t i) const {
    std::vector<double> out(n_points());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = (*this)(k, i);
    }
    return out;
}

SamplePath SamplePath::component(std::size_t i) const {
    if (i >= dim_) {
        throw ShapeError("component index out of range");
    }
    return SamplePath(grid_, 1, column(i));
}

SamplePath SamplePath::slice(std::size_t k0, std::size_t k1) const {
    TimeGrid g = grid_.slice(k0, k1);
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(k0 * dim_),
                          values_.begin() + static_cast<std::ptrdiff_t>((k1 + 1) * dim_));
    return SamplePath(g, dim_, std::move(v));
}

SamplePath SamplePath::restrict(double s, double t) const {
    return slice(grid_.index_of(s), grid_.index_of(t));
}

SamplePath SamplePath::subsample(std::size_t factor) const {
    TimeGrid g = grid_.coarsen(factor);
    SamplePath out(g, dim_);
    for (std::size_t k = 0; k < g.n_points(); ++k) {
        std::copy_n(row(k * factor).begin(), dim_, out.row(k).begin());
    }
    return out;
}

bool SamplePath::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double sup_distance(const SamplePath& a, const SamplePath& b) {
    if (!a.grid().matches(b.grid()) || a.dim() != b.dim()) {
        throw ShapeError("sup distance needs paths on the same grid and dimension");
    }
    double m = 0.0;
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t j = 0; j < va.size(); ++j) {
        m = std::max(m, std::abs(va[j] - vb[j]));
    }
    return m;
}

double sup_norm(const SamplePath& a) noexcept {
    double m = 0.0;
    for (double v : a.values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace rdsde
