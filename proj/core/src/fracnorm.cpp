#include "rdsde/fracnorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rdsde/error.hpp"
#include "rdsde/stats.hpp"

namespace rdsde {

namespace {

double row_norm(const SamplePath& f, std::size_t k) {
    if (f.dim() == 1) {
        return std::abs(f(k, 0));
    }
    double s = 0.0;
    for (double v : f.row(k)) {
        s += v * v;
    }
    return std::sqrt(s);
}

double row_distance(const SamplePath& f, std::size_t k, std::size_t j) {
    if (f.dim() == 1) {
        return std::abs(f(k, 0) - f(j, 0));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const double d = f(k, i) - f(j, i);
        s += d * d;
    }
    return std::sqrt(s);
}

// Exact cell weights for int_{q-1}^{q} h(w) w^{-p} dw with h linear on the cell
// (unit mesh): the integral is h(q-1) * near[q] + h(q) * far[q]. Requires 1 < p < 2;
// on the first cell the value at w = 0 is assumed to vanish.
struct SingularWeights {
    std::vector<double> near;
    std::vector<double> far;

    SingularWeights(double p, std::size_t count) : near(count + 1, 0.0), far(count + 1, 0.0) {
        if (count == 0) {
            return;
        }
        far[1] = 1.0 / (2.0 - p);
        for (std::size_t q = 2; q <= count; ++q) {
            const double b = static_cast<double>(q);
            const double a = b - 1.0;
            const double l = std::log1p(-1.0 / b);
            const double i0 = std::pow(b, 1.0 - p) * std::expm1((1.0 - p) * l) / (p - 1.0);
            const double i1 = -std::pow(b, 2.0 - p) * std::expm1((2.0 - p) * l) / (2.0 - p);
            near[q] = b * i0 - i1;
            far[q] = i1 - a * i0;
        }
    }
};

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw DomainError("alpha " + std::to_string(alpha) + " outside (0, 1/2)");
    }
}

void require_scalar(const SamplePath& g, const char* what) {
    if (g.dim() != 1) {
        throw ShapeError(std::string(what) + " needs a scalar path; apply it per component");
    }
}

// Shared kernel of the unweighted and weighted W^{alpha,inf} norms.
double alpha_norm_impl(const SamplePath& f, const AlphaParams& p, double lambda) {
    const std::size_t ks = f.grid().index_of(p.s);
    const std::size_t kt = f.grid().index_of(p.t);
    const std::size_t span = kt - ks;
    const SingularWeights w(p.alpha + 1.0, span);
    const double scale = std::pow(f.grid().step(), -p.alpha);
    std::vector<double> h(span + 1);
    double best = 0.0;
    for (std::size_t k = ks; k <= kt; ++k) {
        const std::size_t len = k - ks;
        for (std::size_t j = 0; j <= len; ++j) {
            h[j] = row_distance(f, k, ks + j);
        }
        double integral = 0.0;
        for (std::size_t q = 1; q <= len; ++q) {
            integral += h[len - q + 1] * w.near[q] + h[len - q] * w.far[q];
        }
        double term = row_norm(f, k) + scale * integral;
        if (lambda != 0.0) {
            term *= std::exp(-lambda * f.grid().time(k));
        }
        best = std::max(best, term);
    }
    return best;
}

// Subsample so that pair suprema stay O(limit^2).
SamplePath limited(const SamplePath& f, const PairSupOptions& options, bool& approximate) {
    approximate = false;
    const std::size_t n = f.grid().n_steps();
    if (n <= options.exact_limit) {
        return f;
    }
    std::size_t factor = 1;
    while (n / factor > options.exact_limit || n % factor != 0) {
        ++factor;
        if (factor > n) {
            break;
        }
    }
    approximate = true;
    return f.subsample(factor);
}

}  // namespace

void AlphaParams::validate() const {
    check_alpha(alpha);
    if (!(s < t)) {
        throw DomainError("norm interval needs s < t");
    }
    if (lambda_weight < 0.0) {
        throw DomainError("exponential weight must be non-negative");
    }
}

double w_alpha_inf_norm(const SamplePath& f, const AlphaParams& p) {
    p.validate();
    return alpha_norm_impl(f, p, 0.0);
}

double weighted_alpha_norm(const SamplePath& f, const AlphaParams& p) {
    p.validate();
    return alpha_norm_impl(f, p, p.lambda_weight);
}

NormEstimate holder_norm(const SamplePath& f, double exponent, double s, double t,
                         const PairSupOptions& options) {
    if (!(exponent > 0.0 && exponent <= 1.0)) {
        throw DomainError("Hoelder exponent " + std::to_string(exponent) + " outside (0, 1]");
    }
    if (!(s < t)) {
        throw DomainError("norm interval needs s < t");
    }
    const SamplePath piece = f.restrict(s, t);
    NormEstimate out;
    const SamplePath g = limited(piece, options, out.approximate);
    const std::size_t n = g.n_points();
    double sup = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sup = std::max(sup, row_norm(g, k));
    }
    double quotient = 0.0;
    const double step = g.grid().step();
    std::vector<double> gap(n, 0.0);
    for (std::size_t lag = 1; lag < n; ++lag) {
        gap[lag] = std::pow(static_cast<double>(lag) * step, exponent);
    }
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            quotient = std::max(quotient, row_distance(g, v, u) / gap[v - u]);
        }
    }
    out.value = sup + quotient;
    return out;
}

NormEstimate g_norm_one_minus_alpha(const SamplePath& g, double alpha, const PairSupOptions& options) {
    check_alpha(alpha);
    require_scalar(g, "g norm");
    NormEstimate out;
    const SamplePath path = limited(g, options, out.approximate);
    const std::size_t n = path.grid().n_steps();
    const double step = path.grid().step();
    const SingularWeights w(2.0 - alpha, n);
    const double scale = std::pow(step, alpha - 1.0);
    std::vector<double> lag_pow(n + 1, 0.0);
    for (std::size_t q = 1; q <= n; ++q) {
        lag_pow[q] = std::pow(static_cast<double>(q) * step, 1.0 - alpha);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double base = path(i, 0);
        double integral = 0.0;
        double prev_h = 0.0;
        for (std::size_t k = i + 1; k <= n; ++k) {
            const std::size_t q = k - i;
            const double hk = std::abs(path(k, 0) - base);
            integral += prev_h * w.near[q] + hk * w.far[q];
            prev_h = hk;
            best = std::max(best, hk / lag_pow[q] + scale * integral);
        }
    }
    out.value = best;
    return out;
}

NormEstimate lambda_alpha_bound(const SamplePath& g, double alpha, const PairSupOptions& options) {
    check_alpha(alpha);
    const double gamma_factor = std::tgamma(1.0 - alpha) * std::tgamma(alpha);
    NormEstimate out;
    for (std::size_t c = 0; c < g.dim(); ++c) {
        const NormEstimate e = g_norm_one_minus_alpha(g.component(c), alpha, options);
        out.value = std::max(out.value, e.value / gamma_factor);
        out.approximate = out.approximate || e.approximate;
    }
    return out;
}

double f_norm_alpha_1(const SamplePath& f, double alpha) {
    check_alpha(alpha);
    require_scalar(f, "f_norm_alpha_1");
    const std::size_t n = f.grid().n_steps();
    const double step = f.grid().step();

    // int |f(s)| s^{-alpha} ds with exact per-cell weights.
    double first = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = static_cast<double>(j);
        const double b = a + 1.0;
        const double k0 = (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) / (1.0 - alpha);
        const double k1 = (std::pow(b, 2.0 - alpha) - std::pow(a, 2.0 - alpha)) / (2.0 - alpha);
        first += std::abs(f(j, 0)) * (b * k0 - k1) + std::abs(f(j + 1, 0)) * (k1 - a * k0);
    }
    first *= std::pow(step, 1.0 - alpha);

    // Inner singular integral at each grid point, then trapezoid in the outer variable.
    const SingularWeights w(alpha + 1.0, n);
    const double scale = std::pow(step, -alpha);
    std::vector<double> inner(n + 1, 0.0);
    std::vector<double> h(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            h[j] = std::abs(f(k, 0) - f(j, 0));
        }
        double acc = 0.0;
        for (std::size_t q = 1; q <= k; ++q) {
            acc += h[k - q + 1] * w.near[q] + h[k - q] * w.far[q];
        }
        inner[k] = scale * acc;
    }
    double second = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        second += 0.5 * step * (inner[k] + inner[k + 1]);
    }
    return first + second;
}

HolderExponent holder_exponent_estimate(const SamplePath& f) {
    const std::size_t n = f.grid().n_steps();
    if (n < 64) {
        throw DomainError("Hoelder exponent estimate needs at least 64 steps");
    }
    std::vector<double> log_lag;
    std::vector<double> log_inc;
    for (std::size_t lag = 1; lag <= n / 4; lag *= 2) {
        double m = 0.0;
        for (std::size_t k = 0; k + lag <= n; ++k) {
            m = std::max(m, row_distance(f, k + lag, k));
        }
        if (m > 0.0) {
            log_lag.push_back(std::log(static_cast<double>(lag) * f.grid().step()));
            log_inc.push_back(std::log(m));
        }
    }
    HolderExponent out;
    out.scales = log_lag.size();
    if (log_lag.size() < 2) {
        out.constant_path = true;
        out.exponent = 1.0;
        return out;
    }
    const auto fit = stats::fit_line(log_lag, log_inc);
    out.exponent = std::clamp(fit.slope, 1e-6, 1.0);
    return out;
}

NormReport make_norm_report(const SamplePath& f, double alpha, double lambda, double s, double t,
                            const PairSupOptions& options) {
    const AlphaParams p{alpha, lambda, s, t};
    p.validate();
    NormReport r;
    r.alpha = alpha;
    r.lambda = lambda;
    r.s = s;
    r.t = t;
    const SamplePath piece = f.restrict(s, t);
    r.grid_points = piece.n_points();
    r.w_alpha_inf = w_alpha_inf_norm(piece, p);
    r.weighted_alpha = weighted_alpha_norm(piece, p);
    r.holder_one_minus_alpha = holder_norm(piece, 1.0 - alpha, s, t, options);
    for (std::size_t c = 0; c < piece.dim(); ++c) {
        const auto e = g_norm_one_minus_alpha(piece.component(c), alpha, options);
        r.g_norm.value = std::max(r.g_norm.value, e.value);
        r.g_norm.approximate = r.g_norm.approximate || e.approximate;
    }
    r.lambda_alpha = lambda_alpha_bound(piece, alpha, options);
    if (piece.dim() == 1) {
        r.f_alpha_1 = f_norm_alpha_1(piece, alpha);
    }
    if (piece.grid().n_steps() >= 64) {
        r.holder_exponent = holder_exponent_estimate(piece);
    }
    return r;
}

nlohmann::json to_json(const NormReport& r) {
    nlohmann::json j;
    j["alpha"] = r.alpha;
    j["lambda"] = r.lambda;
    j["interval"] = {r.s, r.t};
    j["grid_points"] = r.grid_points;
    j["w_alpha_inf"] = r.w_alpha_inf;
    j["weighted_alpha"] = r.weighted_alpha;
    j["holder_one_minus_alpha"] = r.holder_one_minus_alpha.value;
    j["g_norm_one_minus_alpha"] = r.g_norm.value;
    j["lambda_alpha_bound"] = r.lambda_alpha.value;
    j["f_alpha_1"] = r.f_alpha_1 ? nlohmann::json(*r.f_alpha_1) : nlohmann::json(nullptr);
    j["holder_exponent"] = r.holder_exponent.exponent;
    j["phi"] = r.phi ? nlohmann::json(*r.phi) : nlohmann::json(nullptr);
    j["approximate"] = {
        {"holder_one_minus_alpha", r.holder_one_minus_alpha.approximate},
        {"g_norm_one_minus_alpha", r.g_norm.approximate},
        {"lambda_alpha_bound", r.lambda_alpha.approximate},
        {"constant_path", r.holder_exponent.constant_path},
    };
    return j;
}

}  // namespace rdsde
