#pragma once

#include <cstddef>

#include "rdsde/history.hpp"
#include "rdsde/path.hpp"

namespace rdsde {

enum class YoungScheme { left_point, trapezoid };

/// Cumulative integral on the integrand's grid: path(k) = int_{t_0}^{t_k}.
struct IndefiniteIntegral {
    SamplePath path;
    YoungScheme scheme = YoungScheme::left_point;

    /// int_{t_i}^{t_j} for component c, as a difference of the shared partial sums.
    double between(std::size_t i, std::size_t j, std::size_t c) const { return path(j, c) - path(i, c); }
};

/// Riemann-Stieltjes sums of f against g. With m = g.dim(), f carries a row-major
/// d x m matrix per grid point (f.dim() = d*m) and the result has d components:
/// sum_j f_ij dg^j. Sums run left to right, so results are bit-reproducible.
IndefiniteIntegral young_integral(const SamplePath& f, const SamplePath& g, YoungScheme scheme);

/// F(t) = int_0^t b(u, x|[-r,u]) du by the trapezoid rule. `x` lives on [-r, T]
/// with r = -x.grid().t0(); the result lives on [0, T]. `b` only ever sees a
/// causal history. Throws EvaluationError naming u when b is not finite.
IndefiniteIntegral hereditary_lebesgue_integral(const DriftFunction& b, const SamplePath& x);

struct YoungConstantProbe {
    double ratio = 0.0;
    bool indeterminate = false;
};

/// |int_s^t f dg| / (Lambda_alpha(g) (t-s)^{1-alpha} ||f||_{alpha,inf}) for scalar f, g,
/// with Lambda_alpha and the norm taken over the whole grid. Trapezoid sums.
YoungConstantProbe young_constant_probe(const SamplePath& f, const SamplePath& g, double alpha, double s,
                                        double t);

}  // namespace rdsde
