#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsde/expr.hpp"
#include "rdsde/history.hpp"

namespace rdsde {

/// User-declared regularity constants of the coefficients: Lipschitz/Hoelder
/// constant M0 and exponent beta of sigma, linear-growth constant L0 of b with
/// b0_bound bounding ||b0||_{L^{1/alpha}}, and the growth order (K0, gamma) of sigma.
struct DeclaredMeta {
    double m0 = 1.0;
    double beta = 1.0;
    double l0 = 1.0;
    double k0 = 1.0;
    double gamma = 1.0;
    double b0_bound = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// Type-erased drift and diffusion the solver consumes. Programmatic
/// coefficients (arbitrary hereditary functionals) plug in here directly.
struct Coefficients {
    std::size_t d = 1;
    std::size_t m = 1;
    DriftFunction drift;
    DiffusionFunction diffusion;
    DeclaredMeta meta;
};

/// Drift and diffusion written in the expression language. The drift may use
/// t, x_i, xd_i and s_i; the diffusion only t and xd_i.
class CoefficientSet {
public:
    CoefficientSet(std::vector<Expr> drift, std::vector<Expr> diffusion, std::size_t d, std::size_t m,
                   DeclaredMeta meta = {});

    /// `diffusion` is row-major d x m.
    static CoefficientSet parse(std::span<const std::string> drift, std::span<const std::string> diffusion,
                                const ParamMap& params, std::size_t d, std::size_t m, DeclaredMeta meta = {});

    std::size_t d() const noexcept { return d_; }
    std::size_t m() const noexcept { return m_; }
    const DeclaredMeta& meta() const noexcept { return meta_; }
    const std::vector<Expr>& drift() const noexcept { return drift_; }
    const std::vector<Expr>& diffusion() const noexcept { return diffusion_; }

    /// b(t, x|[-r,t]). Throws EvaluationError naming the non-finite component.
    std::vector<double> eval_drift(double t, const PathHistory& history) const;
    void eval_drift(double t, const PathHistory& history, std::span<double> out) const;

    /// sigma(t, x(t-r)) as a row-major d x m matrix.
    std::vector<double> eval_diffusion(double t, std::span<const double> delayed_state) const;
    void eval_diffusion(double t, std::span<const double> delayed_state, std::span<double> out) const;

    Coefficients bind() const;

private:
    std::vector<Expr> drift_;
    std::vector<Expr> diffusion_;
    std::size_t d_;
    std::size_t m_;
    DeclaredMeta meta_;
    bool drift_uses_sup_ = false;
};

/// State box the audit samples from.
struct AuditBox {
    double t_min = 0.0;
    double t_max = 1.0;
    double x_min = 0.0;
    double x_max = 10.0;
};

struct AuditReport {
    double m0_spatial = 0.0;              ///< max |sigma(t,x)-sigma(t,y)| / |x-y|
    std::optional<double> beta_estimate;  ///< log-log slope in t; empty when sigma ignores t
    double m0_time = 0.0;                 ///< max |sigma(t,x)-sigma(s,x)| / |t-s|^beta (declared beta)
    double l_n = 0.0;                     ///< drift Lipschitz quotient over the box
    double l0 = 0.0;                      ///< (|b| - b0(t)) / sup|x|
    double b0_norm = 0.0;                 ///< ||b0||_{L^{1/alpha}} with b0(t) = |b(t, 0)|
    double k0_fit = 0.0;                  ///< exp(intercept) of the log |sigma| envelope fit
    double gamma_fit = 0.0;               ///< slope of the envelope fit, clamped to [0, 1]
    double k0_bound = 0.0;                ///< max |sigma| / (1 + |x|^gamma) with declared gamma
    std::vector<std::string> flags;       ///< estimates exceeding declared constants by > 5%

    bool flagged() const noexcept { return !flags.empty(); }
};

/// Sampled difference quotients and growth fits of the coefficients against
/// the declared constants. Report-only.
AuditReport hypothesis_audit(const CoefficientSet& c, const AuditBox& box, std::size_t n_samples,
                             std::uint64_t seed, double alpha = 0.25);

nlohmann::json to_json(const AuditReport& report);

}  // namespace rdsde
