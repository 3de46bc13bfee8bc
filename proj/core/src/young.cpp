#include "rdsde/young.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rdsde/error.hpp"
#include "rdsde/fracnorm.hpp"

namespace rdsde {

IndefiniteIntegral young_integral(const SamplePath& f, const SamplePath& g, YoungScheme scheme) {
    if (!f.grid().matches(g.grid())) {
        throw ShapeError("Young integral needs integrand and integrator on the same grid");
    }
    const std::size_t m = g.dim();
    if (f.dim() % m != 0) {
        throw ShapeError("integrand has " + std::to_string(f.dim()) + " components, not a multiple of " +
                         std::to_string(m) + " driver columns");
    }
    const std::size_t d = f.dim() / m;
    SamplePath out(g.grid(), d);
    for (std::size_t k = 0; k + 1 < g.n_points(); ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            double inc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double dg = g(k + 1, j) - g(k, j);
                const double fk = scheme == YoungScheme::left_point
                                      ? f(k, i * m + j)
                                      : 0.5 * (f(k, i * m + j) + f(k + 1, i * m + j));
                inc += fk * dg;
            }
            out(k + 1, i) = out(k, i) + inc;
        }
    }
    return {std::move(out), scheme};
}

IndefiniteIntegral hereditary_lebesgue_integral(const DriftFunction& b, const SamplePath& x) {
    const TimeGrid& grid = x.grid();
    const std::size_t origin = grid.index_of(0.0);
    const std::size_t n = grid.n_steps();
    if (origin >= n) {
        throw DomainError("hereditary integral needs a path extending past t = 0");
    }
    const std::size_t d = x.dim();
    const double step = grid.step();
    std::vector<double> sup;
    update_running_sup(x, 0, n, sup);

    SamplePath out(grid.slice(origin, n), d);
    std::vector<double> prev(d);
    std::vector<double> next(d);
    auto evaluate = [&](std::size_t k, std::vector<double>& dst) {
        PathHistory h(x, k, origin, sup);
        b(h.time(), h, dst);
        for (std::size_t i = 0; i < d; ++i) {
            if (!std::isfinite(dst[i])) {
                throw EvaluationError("drift component " + std::to_string(i + 1) + " is not finite at u = " +
                                      std::to_string(h.time()));
            }
        }
    };
    evaluate(origin, prev);
    for (std::size_t k = origin; k < n; ++k) {
        evaluate(k + 1, next);
        const std::size_t row = k - origin;
        for (std::size_t i = 0; i < d; ++i) {
            out(row + 1, i) = out(row, i) + 0.5 * step * (prev[i] + next[i]);
        }
        prev.swap(next);
    }
    return {std::move(out), YoungScheme::trapezoid};
}

YoungConstantProbe young_constant_probe(const SamplePath& f, const SamplePath& g, double alpha, double s,
                                        double t) {
    if (f.dim() != 1 || g.dim() != 1) {
        throw ShapeError("Young constant probe works on scalar paths");
    }
    const IndefiniteIntegral integral = young_integral(f, g, YoungScheme::trapezoid);
    const double value = std::abs(integral.between(g.grid().index_of(s), g.grid().index_of(t), 0));
    const double lambda = lambda_alpha_bound(g, alpha).value;
    const double norm = w_alpha_inf_norm(f, AlphaParams{alpha, 1.0, f.grid().t0(), f.grid().t1()});
    const double denom = lambda * std::pow(t - s, 1.0 - alpha) * norm;
    if (denom == 0.0) {
        return {0.0, true};
    }
    return {value / denom, false};
}

}  // namespace rdsde
