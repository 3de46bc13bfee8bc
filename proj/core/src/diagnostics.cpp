#include "rdsde/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "rdsde/error.hpp"

namespace rdsde {

void PhiParams::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw DomainError("phi needs gamma in [0, 1]");
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw DomainError("phi needs alpha in (0, 1/2)");
    }
}

double phi_region_boundary(double alpha) { return (1.0 - 2.0 * alpha) / (1.0 - alpha); }

double phi(const PhiParams& p) {
    p.validate();
    const double a = p.alpha;
    if (p.gamma == 1.0) {
        return 2.0 * a;
    }
    if (p.gamma < phi_region_boundary(a)) {
        return a;
    }
    const double lo = std::max(a, 1.0 + (2.0 * a - 1.0) / p.gamma);
    const double hi = lo < 0.5 ? std::min(2.0 * a, 0.5) : 2.0 * a;
    return std::clamp(0.5 * (lo + hi), a, 2.0 * a);
}

AprioriReport apriori_scaling_probe(std::span<const AprioriRun> runs) {
    if (runs.size() < 5) {
        throw DomainError("a-priori scaling probe needs at least 5 runs");
    }
    AprioriReport rep;
    std::vector<double> log_norm;
    for (const AprioriRun& run : runs) {
        if (run.solution == nullptr) {
            throw PreconditionError("a-priori run without a solution");
        }
        const ReflectedSolution& sol = *run.solution;
        const double exponent = 1.0 / (1.0 - phi({run.gamma, run.alpha}));
        const double lambda = lambda_alpha_bound(sol.driver, run.alpha).value;
        const double norm =
            w_alpha_inf_norm(sol.x, AlphaParams{run.alpha, 1.0, sol.x.grid().t0(), sol.x.grid().t1()});
        rep.lambda.push_back(lambda);
        rep.norm.push_back(norm);
        rep.feature.push_back(std::pow(lambda, exponent));
        log_norm.push_back(std::log(norm));
    }
    rep.fit = stats::fit_line(rep.feature, log_norm);
    const double slack = 3.0 * rep.fit.residual_sd + 1e-12 * (1.0 + std::abs(rep.fit.intercept));
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const double line = rep.fit.intercept + rep.fit.slope * rep.feature[k];
        rep.consistent = rep.consistent && log_norm[k] <= line + slack;
    }
    rep.monotone_increasing = rep.fit.slope > 0.0;
    return rep;
}

MomentReport moment_probe(const Problem& p, const SolverConfig& cfg, double p_exponent,
                          std::span<const std::size_t> ensemble_sizes, const MomentOptions& options) {
    if (!(p_exponent >= 1.0)) {
        throw DomainError("moment exponent must be at least 1");
    }
    if (ensemble_sizes.empty()) {
        throw DomainError("moment probe needs at least one ensemble size");
    }
    for (std::size_t k = 0; k < ensemble_sizes.size(); ++k) {
        if (ensemble_sizes[k] == 0 || (k > 0 && ensemble_sizes[k] <= ensemble_sizes[k - 1])) {
            throw DomainError("ensemble sizes must be positive and strictly ascending");
        }
    }
    MomentReport rep;
    rep.p_exponent = p_exponent;
    rep.alpha = options.alpha;
    const std::vector<PathResult> results = solve_stochastic(p, cfg, ensemble_sizes.back());

    std::vector<double> norms(results.size(), 0.0);
    std::vector<bool> ok(results.size(), false);
    for (std::size_t k = 0; k < results.size(); ++k) {
        if (!results[k].solution) {
            rep.failures.push_back(results[k].error);
            continue;
        }
        const SamplePath& x = results[k].solution->x;
        norms[k] = w_alpha_inf_norm(x, AlphaParams{options.alpha, 1.0, x.grid().t0(), x.grid().t1()});
        ok[k] = true;
    }
    for (std::size_t n : ensemble_sizes) {
        MomentRow row;
        row.ensemble = n;
        std::vector<double> powered;
        for (std::size_t k = 0; k < n; ++k) {
            if (ok[k]) {
                powered.push_back(std::pow(norms[k], p_exponent));
            } else {
                ++row.excluded;
            }
        }
        if (!powered.empty()) {
            row.mean = stats::mean(powered);
            row.ci = stats::bootstrap_mean_ci(powered, options.level, options.resamples, cfg.seed + n);
        }
        rep.rows.push_back(row);
    }
    for (std::size_t k = 0; k < norms.size(); ++k) {
        if (ok[k]) {
            rep.norms.push_back(norms[k]);
        }
    }
    if (rep.rows.size() >= 2) {
        const MomentRow& last = rep.rows.back();
        const MomentRow& prev = rep.rows[rep.rows.size() - 2];
        rep.stable = last.ensemble > last.excluded && prev.ensemble > prev.excluded && prev.ci.contains(last.mean);
    }
    return rep;
}

HolderReport holder_regularity_report(const ReflectedSolution& sol, double alpha, const PairSupOptions& options) {
    HolderReport rep;
    rep.alpha = alpha;
    const TimeGrid& grid = sol.x.grid();
    rep.holder = holder_norm(sol.x, 1.0 - alpha, 0.0, grid.t1(), options);
    const SamplePath forward = sol.x.restrict(0.0, grid.t1());
    if (forward.grid().n_steps() >= 64) {
        rep.exponent = holder_exponent_estimate(forward);
    }
    rep.w_alpha_inf = w_alpha_inf_norm(sol.x, AlphaParams{alpha, 1.0, grid.t0(), grid.t1()});
    rep.lambda = lambda_alpha_bound(sol.driver, alpha, options);
    rep.ratio = rep.holder.value / ((1.0 + rep.lambda.value) * (1.0 + rep.w_alpha_inf));
    return rep;
}

nlohmann::json to_json(const AprioriReport& r) {
    return {{"lambda", r.lambda},
            {"norm", r.norm},
            {"feature", r.feature},
            {"slope", r.fit.slope},
            {"intercept", r.fit.intercept},
            {"residual_sd", r.fit.residual_sd},
            {"consistent", r.consistent},
            {"monotone_increasing", r.monotone_increasing}};
}

nlohmann::json to_json(const MomentReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"ensemble", row.ensemble},
                        {"excluded", row.excluded},
                        {"mean", row.mean},
                        {"ci_lower", row.ci.lower},
                        {"ci_upper", row.ci.upper}});
    }
    return {{"p", r.p_exponent}, {"alpha", r.alpha}, {"rows", rows}, {"failures", r.failures}, {"stable", r.stable}};
}

nlohmann::json to_json(const HolderReport& r) {
    return {{"alpha", r.alpha},
            {"holder_norm", r.holder.value},
            {"holder_norm_approximate", r.holder.approximate},
            {"holder_exponent", r.exponent.exponent},
            {"constant_path", r.exponent.constant_path},
            {"w_alpha_inf", r.w_alpha_inf},
            {"lambda_alpha", r.lambda.value},
            {"ratio", r.ratio}};
}

}  // namespace rdsde
