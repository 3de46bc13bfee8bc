#include "rdsde/history.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdsde/error.hpp"

namespace rdsde {

PathHistory::PathHistory(const SamplePath& path, std::size_t current, std::size_t delay_steps,
                         std::span<const double> running_sup)
    : path_(&path), current_(current), delay_steps_(delay_steps), running_sup_(running_sup) {
    if (current >= path.n_points()) {
        throw DomainError("history index outside the path grid");
    }
}

double PathHistory::value(std::size_t index, std::size_t component) const {
    if (index > current_) {
        throw CausalityError("history at t = " + std::to_string(time()) + " queried at future index " +
                             std::to_string(index));
    }
    return (*path_)(index, component);
}

double PathHistory::at(double u, std::size_t component) const {
    const TimeGrid& g = path_->grid();
    if (u > time() + 1e-12 * g.step()) {
        throw CausalityError("history at t = " + std::to_string(time()) + " queried at u = " + std::to_string(u));
    }
    const double pos = (u - g.t0()) / g.step();
    if (pos < -1e-9) {
        throw DomainError("history queried before the start of the path");
    }
    const double base = std::floor(pos + 1e-9);
    const auto k = static_cast<std::size_t>(std::max(0.0, base));
    const double frac = pos - base;
    if (k >= current_ || frac <= 1e-9) {
        return value(std::min(k, current_), component);
    }
    return (1.0 - frac) * value(k, component) + frac * value(k + 1, component);
}

double PathHistory::delayed(std::size_t component) const {
    if (current_ < delay_steps_) {
        throw DomainError("delayed value before the start of the history");
    }
    return value(current_ - delay_steps_, component);
}

double PathHistory::running_sup(std::size_t component) const {
    if (!running_sup_.empty()) {
        return running_sup_[current_ * path_->dim() + component];
    }
    double m = 0.0;
    for (std::size_t k = 0; k <= current_; ++k) {
        m = std::max(m, std::abs((*path_)(k, component)));
    }
    return m;
}

void update_running_sup(const SamplePath& path, std::size_t first, std::size_t last, std::vector<double>& sup) {
    const std::size_t d = path.dim();
    sup.resize(path.n_points() * d);
    for (std::size_t k = first; k <= last; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            const double prev = k == 0 ? 0.0 : sup[(k - 1) * d + i];
            sup[k * d + i] = std::max(prev, std::abs(path(k, i)));
        }
    }
}

}  // namespace rdsde
