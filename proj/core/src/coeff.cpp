#include "rdsde/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "rdsde/stats.hpp"

namespace rdsde {

void DeclaredMeta::validate() const {
    if (!(beta > 0.0)) {
        throw DomainError("declared beta must be positive");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw DomainError("declared gamma must lie in [0, 1]");
    }
    if (m0 < 0.0 || l0 < 0.0 || k0 < 0.0 || b0_bound < 0.0) {
        throw DomainError("declared constants must be non-negative");
    }
}

CoefficientSet::CoefficientSet(std::vector<Expr> drift, std::vector<Expr> diffusion, std::size_t d,
                               std::size_t m, DeclaredMeta meta)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)), d_(d), m_(m), meta_(meta) {
    if (d_ == 0 || m_ == 0) {
        throw ShapeError("coefficients need d >= 1 and m >= 1");
    }
    if (drift_.size() != d_) {
        throw ShapeError("drift needs " + std::to_string(d_) + " expressions, got " +
                         std::to_string(drift_.size()));
    }
    if (diffusion_.size() != d_ * m_) {
        throw ShapeError("diffusion needs " + std::to_string(d_ * m_) + " expressions (d x m), got " +
                         std::to_string(diffusion_.size()));
    }
    for (std::size_t k = 0; k < diffusion_.size(); ++k) {
        if (diffusion_[k].uses(VarKind::current) || diffusion_[k].uses(VarKind::sup)) {
            throw DomainError("diffusion entry (" + std::to_string(k / m_ + 1) + "," + std::to_string(k % m_ + 1) +
                              ") may only depend on t and the delayed state xd");
        }
    }
    meta_.validate();
    drift_uses_sup_ = std::any_of(drift_.begin(), drift_.end(), [](const Expr& e) { return e.uses(VarKind::sup); });
}

CoefficientSet CoefficientSet::parse(std::span<const std::string> drift, std::span<const std::string> diffusion,
                                     const ParamMap& params, std::size_t d, std::size_t m, DeclaredMeta meta) {
    std::vector<Expr> b;
    std::vector<Expr> s;
    for (const auto& src : drift) {
        b.push_back(Expr::parse(src, params, d));
    }
    for (const auto& src : diffusion) {
        s.push_back(Expr::parse(src, params, d));
    }
    return CoefficientSet(std::move(b), std::move(s), d, m, meta);
}

void CoefficientSet::eval_drift(double t, const PathHistory& history, std::span<double> out) const {
    std::vector<double> cur(d_);
    std::vector<double> del(d_);
    std::vector<double> sup(drift_uses_sup_ ? d_ : 0);
    for (std::size_t i = 0; i < d_; ++i) {
        cur[i] = history.current(i);
        del[i] = history.delayed(i);
        if (drift_uses_sup_) {
            sup[i] = history.running_sup(i);
        }
    }
    const EvalContext ctx{t, cur, del, sup};
    for (std::size_t i = 0; i < d_; ++i) {
        out[i] = drift_[i].eval(ctx);
        if (!std::isfinite(out[i])) {
            throw EvaluationError("drift component " + std::to_string(i + 1) + " is not finite at t = " +
                                  std::to_string(t));
        }
    }
}

std::vector<double> CoefficientSet::eval_drift(double t, const PathHistory& history) const {
    std::vector<double> out(d_);
    eval_drift(t, history, out);
    return out;
}

void CoefficientSet::eval_diffusion(double t, std::span<const double> delayed_state, std::span<double> out) const {
    if (delayed_state.size() != d_) {
        throw ShapeError("diffusion needs a delayed state of dimension " + std::to_string(d_));
    }
    const EvalContext ctx{t, {}, delayed_state, {}};
    for (std::size_t k = 0; k < diffusion_.size(); ++k) {
        out[k] = diffusion_[k].eval(ctx);
        if (!std::isfinite(out[k])) {
            throw EvaluationError("diffusion entry (" + std::to_string(k / m_ + 1) + "," +
                                  std::to_string(k % m_ + 1) + ") is not finite at t = " + std::to_string(t));
        }
    }
}

std::vector<double> CoefficientSet::eval_diffusion(double t, std::span<const double> delayed_state) const {
    std::vector<double> out(d_ * m_);
    eval_diffusion(t, delayed_state, out);
    return out;
}

Coefficients CoefficientSet::bind() const {
    auto self = std::make_shared<const CoefficientSet>(*this);
    Coefficients c;
    c.d = d_;
    c.m = m_;
    c.meta = meta_;
    c.drift = [self](double t, const PathHistory& h, std::span<double> out) { self->eval_drift(t, h, out); };
    c.diffusion = [self](double t, std::span<const double> xd, std::span<double> out) {
        self->eval_diffusion(t, xd, out);
    };
    return c;
}

namespace {

double euclid(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

double euclid_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s = std::max(s, std::abs(a[i] - b[i]));
    }
    return s;
}

struct DriftSample {
    double t = 0.0;
    std::vector<double> x, xd, s;
};

}  // namespace

AuditReport hypothesis_audit(const CoefficientSet& c, const AuditBox& box, std::size_t n_samples,
                             std::uint64_t seed, double alpha) {
    if (!(box.t_min < box.t_max) || !(box.x_min < box.x_max) || n_samples == 0) {
        throw DomainError("audit needs a non-degenerate box and at least one sample");
    }
    const std::size_t d = c.d();
    const DeclaredMeta& meta = c.meta();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(box.t_min, box.t_max);
    std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
    std::normal_distribution<double> normal;
    const double width = box.x_max - box.x_min;
    AuditReport rep;

    auto random_state = [&] {
        std::vector<double> x(d);
        for (auto& v : x) {
            v = ux(rng);
        }
        return x;
    };
    auto nearby = [&](const std::vector<double>& x, double scale) {
        std::vector<double> y = x;
        for (auto& v : y) {
            v = std::clamp(v + scale * normal(rng), box.x_min, box.x_max);
        }
        return y;
    };

    // Spatial Lipschitz constant: far pairs and near pairs.
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = ut(rng);
        const auto x = random_state();
        const auto y = (k % 2 == 0) ? random_state() : nearby(x, 1e-3 * width);
        const double dx = euclid_diff(x, y);
        if (dx == 0.0) {
            continue;
        }
        const auto sx = c.eval_diffusion(t, x);
        const auto sy = c.eval_diffusion(t, y);
        rep.m0_spatial = std::max(rep.m0_spatial, euclid_diff(sx, sy) / dx);
    }

    // Time regularity: envelope of |sigma(t+h,x) - sigma(t,x)| over geometric lags.
    {
        const double span = box.t_max - box.t_min;
        std::vector<double> log_h;
        std::vector<double> log_env;
        const std::size_t per_lag = std::max<std::size_t>(1, n_samples / 8);
        for (int j = 0; j < 8; ++j) {
            const double h = span * std::pow(10.0, -4.0 + 3.0 * j / 7.0);
            std::uniform_real_distribution<double> us(box.t_min, box.t_max - h);
            double env = 0.0;
            for (std::size_t k = 0; k < per_lag; ++k) {
                const double t = us(rng);
                const auto x = random_state();
                const double diff = euclid_diff(c.eval_diffusion(t + h, x), c.eval_diffusion(t, x));
                env = std::max(env, diff);
                rep.m0_time = std::max(rep.m0_time, diff / std::pow(h, meta.beta));
            }
            if (env > 0.0) {
                log_h.push_back(std::log(h));
                log_env.push_back(std::log(env));
            }
        }
        if (log_h.size() >= 2) {
            rep.beta_estimate = stats::fit_line(log_h, log_env).slope;
        }
    }

    // Drift quotients over synthetic histories (x, xd, running sups).
    auto random_history = [&] {
        DriftSample s;
        s.t = ut(rng);
        s.x = random_state();
        s.xd = random_state();
        s.s.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            s.s[i] = std::max(std::abs(s.x[i]), std::abs(s.xd[i])) + 0.1 * width * std::abs(normal(rng));
        }
        return s;
    };
    auto drift_at = [&](const DriftSample& s) {
        const EvalContext ctx{s.t, s.x, s.xd, s.s};
        std::vector<double> out(d);
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = c.drift()[i].eval(ctx);
        }
        return out;
    };
    auto drift_zero = [&](double t) {
        const std::vector<double> zero(d, 0.0);
        return euclid(drift_at(DriftSample{t, zero, zero, zero}));
    };
    for (std::size_t k = 0; k < n_samples; ++k) {
        const DriftSample a = random_history();
        DriftSample b = a;
        if (k % 2 == 0) {
            b = random_history();
            b.t = a.t;
        } else {
            b.x = nearby(a.x, 1e-3 * width);
            b.xd = nearby(a.xd, 1e-3 * width);
            for (std::size_t i = 0; i < d; ++i) {
                b.s[i] = std::max({a.s[i], std::abs(b.x[i]), std::abs(b.xd[i])});
            }
        }
        const double dist =
            std::max({euclid_diff(a.x, b.x), euclid_diff(a.xd, b.xd), max_abs_diff(a.s, b.s)});
        const auto ba = drift_at(a);
        if (dist > 0.0) {
            rep.l_n = std::max(rep.l_n, euclid_diff(ba, drift_at(b)) / dist);
        }
        const double sup_x = std::max({euclid(a.x), euclid(a.xd), *std::max_element(a.s.begin(), a.s.end())});
        if (sup_x > 0.0) {
            rep.l0 = std::max(rep.l0, (euclid(ba) - drift_zero(a.t)) / sup_x);
        }
    }
    {
        const std::size_t pts = 256;
        const double h = (box.t_max - box.t_min) / static_cast<double>(pts);
        const double p = 1.0 / alpha;
        double acc = 0.0;
        double prev = std::pow(drift_zero(box.t_min), p);
        for (std::size_t k = 1; k <= pts; ++k) {
            const double cur = std::pow(drift_zero(box.t_min + static_cast<double>(k) * h), p);
            acc += 0.5 * h * (prev + cur);
            prev = cur;
        }
        rep.b0_norm = std::pow(acc, alpha);
    }

    // Growth: envelope of |sigma| over geometric radii.
    {
        const double reach = std::max({10.0, std::abs(box.x_min), std::abs(box.x_max)});
        const int radii = 12;
        const std::size_t per_radius = std::max<std::size_t>(1, n_samples / radii);
        std::vector<double> log_r;
        std::vector<double> log_env;
        for (int j = 0; j < radii; ++j) {
            const double rho = std::pow(reach, static_cast<double>(j) / (radii - 1));
            double env = 0.0;
            for (std::size_t k = 0; k < per_radius; ++k) {
                std::vector<double> dir(d);
                for (auto& v : dir) {
                    v = normal(rng);
                }
                const double len = euclid(dir);
                for (auto& v : dir) {
                    v = rho * v / len;
                }
                const double mag = euclid(c.eval_diffusion(ut(rng), dir));
                env = std::max(env, mag);
                rep.k0_bound = std::max(rep.k0_bound, mag / (1.0 + std::pow(rho, meta.gamma)));
            }
            if (env > 0.0) {
                log_r.push_back(std::log(rho));
                log_env.push_back(std::log(env));
            }
        }
        if (log_r.size() >= 2) {
            const auto fit = stats::fit_line(log_r, log_env);
            rep.gamma_fit = std::clamp(fit.slope, 0.0, 1.0);
            rep.k0_fit = std::exp(fit.intercept);
        }
    }

    const double slack = 1.05;
    if (rep.m0_spatial > slack * meta.m0) {
        rep.flags.push_back("m0_spatial");
    }
    if (rep.m0_time > slack * meta.m0) {
        rep.flags.push_back("m0_time");
    }
    if (rep.beta_estimate && *rep.beta_estimate < meta.beta / slack) {
        rep.flags.push_back("beta");
    }
    if (rep.l0 > slack * meta.l0) {
        rep.flags.push_back("l0");
    }
    if (rep.b0_norm > slack * meta.b0_bound) {
        rep.flags.push_back("b0_bound");
    }
    if (rep.k0_bound > slack * meta.k0) {
        rep.flags.push_back("k0");
    }
    if (rep.gamma_fit > slack * meta.gamma + 0.05) {
        rep.flags.push_back("gamma");
    }
    return rep;
}

nlohmann::json to_json(const AuditReport& r) {
    nlohmann::json j;
    j["m0_spatial"] = r.m0_spatial;
    j["beta_estimate"] = r.beta_estimate ? nlohmann::json(*r.beta_estimate) : nlohmann::json(nullptr);
    j["m0_time"] = r.m0_time;
    j["l_n"] = r.l_n;
    j["l0"] = r.l0;
    j["b0_norm"] = r.b0_norm;
    j["k0_fit"] = r.k0_fit;
    j["gamma_fit"] = r.gamma_fit;
    j["k0_bound"] = r.k0_bound;
    j["flags"] = r.flags;
    return j;
}

}  // namespace rdsde
