#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsde/fracnorm.hpp"
#include "rdsde/solver.hpp"
#include "rdsde/stats.hpp"

namespace rdsde {

struct PhiParams {
    double gamma = 1.0;  ///< growth order of sigma, in [0, 1]
    double alpha = 0.25; ///< in (0, 1/2)

    void validate() const;
};

/// (1 - 2 alpha) / (1 - alpha): below it phi = alpha.
double phi_region_boundary(double alpha);

/// Exponent of the a-priori bound.
///   gamma = 1                      -> 2 alpha
///   gamma < (1-2alpha)/(1-alpha)   -> alpha
///   otherwise, with lo = max(alpha, 1 + (2alpha-1)/gamma):
///     lo <  1/2 -> (lo + min(2alpha, 1/2)) / 2
///     lo >= 1/2 -> (lo + 2alpha) / 2
/// The split keeps 1/(1-phi) < 2 wherever alpha < (2-gamma)/4.
double phi(const PhiParams& p);

struct AprioriRun {
    const ReflectedSolution* solution = nullptr;
    double alpha = 0.25;
    double gamma = 1.0;
};

struct AprioriReport {
    std::vector<double> lambda;    ///< L = lambda_alpha_bound(driver)
    std::vector<double> norm;      ///< N = ||x||_{alpha,inf} on [-r, T]
    std::vector<double> feature;   ///< L^{1/(1-phi)}
    stats::LinearFit fit;          ///< log N against feature
    bool consistent = true;        ///< every log N <= fit + 3 residual SDs
    bool monotone_increasing = false;
};

/// Fits log N against L^{1/(1-phi)} over at least 5 runs.
AprioriReport apriori_scaling_probe(std::span<const AprioriRun> runs);

struct MomentRow {
    std::size_t ensemble = 0;
    std::size_t excluded = 0;
    double mean = 0.0;  ///< mean of ||x||^p over the successful paths
    stats::Interval ci;
};

struct MomentReport {
    double p_exponent = 1.0;
    double alpha = 0.25;
    std::vector<MomentRow> rows;
    std::vector<double> norms;            ///< ||x||_{alpha,inf} per successful path of the largest ensemble
    std::vector<std::string> failures;
    bool stable = false;                  ///< largest estimate inside the CI of the second largest
};

struct MomentOptions {
    double alpha = 0.3;
    double level = 0.95;
    std::size_t resamples = 1000;
};

/// Empirical E ||x||^p_{alpha,inf(-r,T)} on nested ensembles (the first n paths of
/// one Monte Carlo run) with bootstrap confidence intervals.
MomentReport moment_probe(const Problem& p, const SolverConfig& cfg, double p_exponent,
                          std::span<const std::size_t> ensemble_sizes, const MomentOptions& options = {});

struct HolderReport {
    double alpha = 0.25;
    NormEstimate holder;      ///< ||x||_{1-alpha} on [0, T]
    HolderExponent exponent;  ///< of x on [0, T]
    double w_alpha_inf = 0.0; ///< on [-r, T]
    NormEstimate lambda;      ///< of the driver
    double ratio = 0.0;       ///< holder / ((1 + lambda) (1 + w_alpha_inf))
};

HolderReport holder_regularity_report(const ReflectedSolution& sol, double alpha,
                                      const PairSupOptions& options = {});

nlohmann::json to_json(const AprioriReport& report);
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const HolderReport& report);

}  // namespace rdsde
