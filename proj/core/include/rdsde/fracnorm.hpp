#pragma once

#include <cstddef>
#include <optional>

#include <nlohmann/json.hpp>

#include "rdsde/path.hpp"

namespace rdsde {

/// Fractional order, optional exponential weight and the interval [s, t] a
/// norm is taken over. Requires 0 < alpha < 1/2 and s < t.
struct AlphaParams {
    double alpha = 0.25;
    double lambda_weight = 1.0;
    double s = 0.0;
    double t = 1.0;

    void validate() const;
};

/// Pair suprema are exact (all grid pairs) up to `exact_limit` steps; above it
/// the path is subsampled to at most `exact_limit` steps and the result is
/// flagged approximate.
struct PairSupOptions {
    std::size_t exact_limit = 8192;
};

struct NormEstimate {
    double value = 0.0;
    bool approximate = false;
};

/// sup_u ( |f(u)| + int_s^u |f(u)-f(v)| / (u-v)^{alpha+1} dv ) over grid points u in [s, t].
/// The singular integral integrates the piecewise-linear interpolant of
/// v -> |f(u)-f(v)| against the exact kernel antiderivative on each cell.
/// |.| is the Euclidean norm for vector paths.
double w_alpha_inf_norm(const SamplePath& f, const AlphaParams& p);

/// As w_alpha_inf_norm with every u-term weighted by exp(-lambda u). lambda = 0 is
/// accepted and reproduces the unweighted norm.
double weighted_alpha_norm(const SamplePath& f, const AlphaParams& p);

/// sup|f| + sup_{u<v} |f(v)-f(u)| / (v-u)^exponent over grid points of [s, t].
NormEstimate holder_norm(const SamplePath& f, double exponent, double s, double t,
                         const PairSupOptions& options = {});

/// sup_{s<t} ( |g(t)-g(s)| / (t-s)^{1-alpha} + int_s^t |g(y)-g(s)| / (y-s)^{2-alpha} dy )
/// over the whole grid of the scalar path g.
NormEstimate g_norm_one_minus_alpha(const SamplePath& g, double alpha, const PairSupOptions& options = {});

/// Upper bound ||g||_{1-alpha,inf,T} / (Gamma(1-alpha) Gamma(alpha)) of Lambda_alpha(g);
/// the maximum over components for vector g. This is a bound, not the exact
/// fractional-derivative supremum.
NormEstimate lambda_alpha_bound(const SamplePath& g, double alpha, const PairSupOptions& options = {});

/// int_0^T |f(s)| / s^alpha ds + int_0^T int_0^s |f(s)-f(y)| / (s-y)^{alpha+1} dy ds for a
/// scalar path; time is measured from the grid start.
double f_norm_alpha_1(const SamplePath& f, double alpha);

struct HolderExponent {
    double exponent = 1.0;
    bool constant_path = false;
    std::size_t scales = 0;
};

/// Slope of log(max increment at lag 2^j) against log(lag) over dyadic lags up to n/4.
/// Needs at least 64 steps.
HolderExponent holder_exponent_estimate(const SamplePath& f);

struct NormReport {
    double alpha = 0.0;
    double lambda = 0.0;
    double s = 0.0;
    double t = 0.0;
    std::size_t grid_points = 0;
    double w_alpha_inf = 0.0;
    double weighted_alpha = 0.0;
    NormEstimate holder_one_minus_alpha;
    NormEstimate g_norm;
    NormEstimate lambda_alpha;
    std::optional<double> f_alpha_1;  ///< scalar paths only
    HolderExponent holder_exponent;
    std::optional<double> phi;        ///< filled by callers that know the growth order
};

/// All norms of `f` restricted to [s, t].
NormReport make_norm_report(const SamplePath& f, double alpha, double lambda, double s, double t,
                            const PairSupOptions& options = {});

nlohmann::json to_json(const NormReport& report);

}  // namespace rdsde
