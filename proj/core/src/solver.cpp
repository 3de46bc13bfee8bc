#include "rdsde/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "rdsde/error.hpp"
#include "rdsde/fbm.hpp"
#include "rdsde/history.hpp"
#include "rdsde/skorokhod.hpp"
#include "rdsde/stats.hpp"

namespace rdsde {

std::size_t Problem::intervals() const {
    const double ratio = horizon / r;
    const double rounded = std::round(ratio);
    if (!(r > 0.0) || rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw DomainError("horizon T must be a positive integer multiple of the delay r");
    }
    return static_cast<std::size_t>(rounded);
}

void Problem::validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("delay r must be positive");
    }
    intervals();
    if (coeffs.d == 0 || coeffs.m == 0) {
        throw ShapeError("problem needs d >= 1 and m >= 1");
    }
    if (!eta || !coeffs.drift || !coeffs.diffusion) {
        throw PreconditionError("problem needs eta, drift and diffusion");
    }
}

void SolverConfig::validate() const {
    if (steps_per_delay < 4) {
        throw DomainError("steps_per_delay must be at least 4");
    }
    if (!(picard_tol > 0.0)) {
        throw DomainError("picard_tol must be positive");
    }
    if (picard_max_iter == 0) {
        throw DomainError("picard_max_iter must be positive");
    }
}

TimeGrid solution_grid(const Problem& p, std::size_t steps_per_delay) {
    const std::size_t big_m = p.intervals();
    return TimeGrid(-p.r, p.horizon, steps_per_delay * (big_m + 1));
}

TimeGrid driver_grid(const Problem& p, std::size_t steps_per_delay) {
    return TimeGrid(0.0, p.horizon, steps_per_delay * p.intervals());
}

SamplePath discretize_eta(const Problem& p, std::size_t steps_per_delay) {
    const TimeGrid grid(-p.r, 0.0, steps_per_delay);
    SamplePath eta(grid, p.d());
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        const double u = grid.time(k);
        p.eta(u, eta.row(k));
        for (std::size_t i = 0; i < p.d(); ++i) {
            if (!std::isfinite(eta(k, i))) {
                throw EvaluationError("eta component " + std::to_string(i + 1) + " is not finite at u = " +
                                      std::to_string(u));
            }
            if (eta(k, i) < 0.0) {
                throw PreconditionError("eta component " + std::to_string(i + 1) + " is negative at u = " +
                                        std::to_string(u));
            }
        }
    }
    return eta;
}

namespace {

struct Workspace {
    std::size_t n_r;
    std::size_t d;
    std::size_t m;
    double step;
    SamplePath x;
    SamplePath y;
    SamplePath z;
    std::vector<double> sup;
};

Workspace start(const Problem& p, const SamplePath& g, const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    const std::size_t n_r = cfg.steps_per_delay;
    const TimeGrid dgrid = driver_grid(p, n_r);
    if (!g.grid().matches(dgrid)) {
        throw ShapeError("driver grid does not match [0, T] with " + std::to_string(n_r) + " steps per delay");
    }
    if (g.dim() != p.m()) {
        throw ShapeError("driver has " + std::to_string(g.dim()) + " columns, problem needs m = " +
                         std::to_string(p.m()));
    }
    const TimeGrid grid = solution_grid(p, n_r);
    const std::size_t d = p.d();
    Workspace w{n_r, d, p.m(), grid.step(), SamplePath(grid, d), SamplePath(grid, d), SamplePath(grid, d), {}};
    const SamplePath eta = discretize_eta(p, n_r);
    for (std::size_t k = 0; k <= n_r; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            w.x(k, i) = eta(k, i);
            w.z(k, i) = eta(k, i);
        }
    }
    update_running_sup(w.x, 0, n_r, w.sup);
    return w;
}

void check_finite(std::span<const double> v, std::size_t step, double t) {
    for (double a : v) {
        if (!std::isfinite(a)) {
            throw BlowUpError("state is not finite at t = " + std::to_string(t), step);
        }
    }
}

// sigma(t_k, x(t_k - r)) * (g(t_{k+1}) - g(t_k)) for solution index k >= n_r.
void diffusion_increment(const Problem& p, const Workspace& w, const SamplePath& g, std::size_t k,
                         std::vector<double>& sigma, std::vector<double>& out) {
    const double t = w.x.grid().time(k);
    p.coeffs.diffusion(t, w.x.row(k - w.n_r), sigma);
    const std::size_t j = k - w.n_r;
    for (std::size_t i = 0; i < w.d; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < w.m; ++c) {
            const double s = sigma[i * w.m + c];
            if (!std::isfinite(s)) {
                throw EvaluationError("diffusion entry (" + std::to_string(i + 1) + "," + std::to_string(c + 1) +
                                      ") is not finite at t = " + std::to_string(t));
            }
            acc += s * (g(j + 1, c) - g(j, c));
        }
        out[i] = acc;
    }
}

void check_drift(std::span<const double> b, double t) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b[i])) {
            throw EvaluationError("drift component " + std::to_string(i + 1) + " is not finite at t = " +
                                  std::to_string(t));
        }
    }
}

ReflectedSolution finish(Workspace&& w, const SamplePath& g) {
    return ReflectedSolution{std::move(w.x), std::move(w.y), std::move(w.z), {}, {}, g};
}

}  // namespace

ReflectedSolution solve_euler(const Problem& p, const SamplePath& g, const SolverConfig& cfg) {
    Workspace w = start(p, g, cfg);
    const std::size_t last = w.x.grid().n_steps();
    std::vector<double> b(w.d);
    std::vector<double> sigma(w.d * w.m);
    std::vector<double> noise(w.d);
    for (std::size_t k = w.n_r; k < last; ++k) {
        const double t = w.x.grid().time(k);
        const PathHistory history(w.x, k, w.n_r, w.sup);
        p.coeffs.drift(t, history, b);
        check_drift(b, t);
        diffusion_increment(p, w, g, k, sigma, noise);
        for (std::size_t i = 0; i < w.d; ++i) {
            w.z(k + 1, i) = w.z(k, i) + b[i] * w.step + noise[i];
            w.y(k + 1, i) = std::max(w.y(k, i), -w.z(k + 1, i));
            w.x(k + 1, i) = w.z(k + 1, i) + w.y(k + 1, i);
        }
        check_finite(w.z.row(k + 1), k + 1 - w.n_r, w.x.grid().time(k + 1));
        update_running_sup(w.x, k + 1, k + 1, w.sup);
    }
    return finish(std::move(w), g);
}

ReflectedSolution solve_picard(const Problem& p, const SamplePath& g, const SolverConfig& cfg) {
    Workspace w = start(p, g, cfg);
    const std::size_t big_m = p.intervals();
    const std::size_t n_r = w.n_r;
    const std::size_t d = w.d;
    std::vector<double> sigma(d * w.m);
    std::vector<double> noise(d);
    std::vector<double> young((n_r + 1) * d);
    std::vector<double> drift((n_r + 1) * d);
    std::vector<double> next((n_r + 1) * d);
    std::vector<std::size_t> iterations;
    std::vector<double> residuals;

    for (std::size_t n = 0; n < big_m; ++n) {
        const std::size_t ka = n_r * (n + 1);
        const double ta = w.x.grid().time(ka);

        // Young term on the interval: the diffusion argument lies in the fixed past.
        std::fill(young.begin(), young.begin() + static_cast<std::ptrdiff_t>(d), 0.0);
        for (std::size_t j = 0; j < n_r; ++j) {
            diffusion_increment(p, w, g, ka + j, sigma, noise);
            for (std::size_t i = 0; i < d; ++i) {
                young[(j + 1) * d + i] = young[j * d + i] + noise[i];
            }
        }

        // Initial iterate on (ka, ka + n_r].
        for (std::size_t j = 1; j <= n_r; ++j) {
            for (std::size_t i = 0; i < d; ++i) {
                double v = w.x(ka, i);
                if (cfg.initial_iterate == InitialIterate::linear) {
                    const double slope = (w.x(ka, i) - w.x(ka - 1, i)) / w.step;
                    v = std::max(0.0, v + slope * w.step * static_cast<double>(j));
                }
                w.x(ka + j, i) = v;
            }
        }

        std::size_t iter = 0;
        double residual = std::numeric_limits<double>::infinity();
        while (true) {
            ++iter;
            update_running_sup(w.x, ka, ka + n_r, w.sup);
            for (std::size_t j = 0; j <= n_r; ++j) {
                const double t = w.x.grid().time(ka + j);
                const PathHistory history(w.x, ka + j, n_r, w.sup);
                std::span<double> bj(drift.data() + j * d, d);
                p.coeffs.drift(t, history, bj);
                check_drift(bj, t);
            }
            residual = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                double integral = 0.0;
                double y = w.y(ka, i);
                for (std::size_t j = 1; j <= n_r; ++j) {
                    integral += 0.5 * w.step * (drift[(j - 1) * d + i] + drift[j * d + i]);
                    const double z = w.z(ka, i) + integral + young[j * d + i];
                    y = std::max(y, -z);
                    const double x = z + y;
                    if (!std::isfinite(x)) {
                        throw BlowUpError("state is not finite at t = " + std::to_string(w.x.grid().time(ka + j)),
                                          ka + j - n_r);
                    }
                    residual = std::max(residual, std::abs(x - w.x(ka + j, i)));
                    w.z(ka + j, i) = z;
                    w.y(ka + j, i) = y;
                    next[j * d + i] = x;
                }
            }
            for (std::size_t j = 1; j <= n_r; ++j) {
                for (std::size_t i = 0; i < d; ++i) {
                    w.x(ka + j, i) = next[j * d + i];
                }
            }
            if (residual <= cfg.picard_tol) {
                break;
            }
            if (iter >= cfg.picard_max_iter) {
                throw ConvergenceError("Picard iteration on [" + std::to_string(ta) + ", " +
                                           std::to_string(ta + p.r) + "] did not converge in " +
                                           std::to_string(iter) + " iterations (residual " +
                                           std::to_string(residual) + ")",
                                       n, residual);
            }
        }
        update_running_sup(w.x, ka, ka + n_r, w.sup);
        iterations.push_back(iter);
        residuals.push_back(residual);
        spdlog::debug("picard interval {}: {} iterations, residual {:.3e}", n, iter, residual);
    }
    ReflectedSolution sol = finish(std::move(w), g);
    sol.iterations_per_interval = std::move(iterations);
    sol.final_residuals = std::move(residuals);
    return sol;
}

ReflectedSolution solve(const Problem& p, const SamplePath& g, const SolverConfig& cfg) {
    return cfg.scheme == Scheme::picard ? solve_picard(p, g, cfg) : solve_euler(p, g, cfg);
}

SamplePath sample_driver(const Problem& p, const SolverConfig& cfg, std::uint64_t path_index) {
    const CirculantGenerator gen(driver_grid(p, cfg.steps_per_delay), HurstParameter(p.hurst));
    return gen.sample(p.m(), cfg.seed, path_index);
}

std::vector<PathResult> solve_stochastic(const Problem& p, const SolverConfig& cfg, std::size_t n_paths) {
    if (n_paths == 0) {
        throw DomainError("solve_stochastic needs at least one path");
    }
    p.validate();
    cfg.validate();
    const CirculantGenerator gen(driver_grid(p, cfg.steps_per_delay), HurstParameter(p.hurst));
    std::vector<PathResult> results(n_paths);
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (std::size_t k = cursor++; k < n_paths; k = cursor++) {
            results[k].path = k;
            try {
                const SamplePath g = gen.sample(p.m(), cfg.seed, k);
                results[k].solution = solve(p, g, cfg);
            } catch (const std::exception& e) {
                results[k].error = "path " + std::to_string(k) + ": " + e.what();
            }
        }
    };
    unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_paths));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return results;
}

ConvergenceTable convergence_study(const Problem& p, const SamplePath& g_fine, std::span<const std::size_t> levels,
                                   const SolverConfig& cfg) {
    if (levels.size() < 3) {
        throw DomainError("convergence study needs at least 3 levels");
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (levels[k] <= levels[k - 1]) {
            throw DomainError("convergence levels must be strictly ascending");
        }
    }
    const std::size_t finest = levels.back();
    for (std::size_t n : levels) {
        if (finest % n != 0) {
            throw DomainError("level " + std::to_string(n) + " does not divide the finest level " +
                              std::to_string(finest));
        }
    }
    SolverConfig fine_cfg = cfg;
    fine_cfg.steps_per_delay = finest;
    const ReflectedSolution reference = solve(p, g_fine, fine_cfg);

    ConvergenceTable table;
    for (std::size_t n : levels) {
        const std::size_t factor = finest / n;
        SolverConfig level_cfg = cfg;
        level_cfg.steps_per_delay = n;
        ConvergenceRow row;
        row.steps_per_delay = n;
        row.step = p.r / static_cast<double>(n);
        if (factor > 1) {
            const ReflectedSolution sol = solve(p, g_fine.subsample(factor), level_cfg);
            row.error = sup_distance(sol.x, reference.x.subsample(factor));
        }
        if (!table.rows.empty() && n == 2 * table.rows.back().steps_per_delay && row.error > 0.0 &&
            table.rows.back().error > 0.0) {
            row.local_order = std::log2(table.rows.back().error / row.error);
        }
        table.rows.push_back(row);
    }
    std::vector<double> log_step;
    std::vector<double> log_err;
    for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
        if (table.rows[k].error > 0.0) {
            log_step.push_back(std::log(table.rows[k].step));
            log_err.push_back(std::log(table.rows[k].error));
        }
    }
    table.order = log_step.size() >= 2 ? stats::fit_line(log_step, log_err).slope : 0.0;
    return table;
}

InvariantReport check_invariants(const Problem& p, const ReflectedSolution& sol) {
    InvariantReport rep;
    const TimeGrid& grid = sol.x.grid();
    const std::size_t origin = grid.index_of(0.0);
    const std::size_t last = grid.n_steps();
    const std::size_t d = sol.x.dim();

    rep.min_x = std::numeric_limits<double>::infinity();
    for (double v : sol.x.values()) {
        rep.min_x = std::min(rep.min_x, v);
    }
    rep.nonnegative = rep.min_x >= -1e-12;

    const SamplePath eta = discretize_eta(p, origin);
    for (std::size_t k = 0; k <= origin; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            rep.eta_preserved = rep.eta_preserved && sol.x(k, i) == eta(k, i);
        }
    }
    for (std::size_t k = origin; k <= last; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            rep.decomposition_exact = rep.decomposition_exact && sol.x(k, i) == sol.z(k, i) + sol.y(k, i);
            if (k > origin) {
                rep.y_monotone = rep.y_monotone && sol.y(k, i) >= sol.y(k - 1, i);
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        rep.y_zero_at_origin = rep.y_zero_at_origin && sol.y(origin, i) == 0.0;
    }

    const SamplePath z = sol.z.slice(origin, last);
    const SamplePath y = sol.y.slice(origin, last);
    try {
        const SkorokhodSolution ref = reflect(z);
        rep.regulator_consistent = std::equal(ref.y.values().begin(), ref.y.values().end(), y.values().begin());
        rep.complementarity = complementarity_residual(SkorokhodSolution{z, sol.x.slice(origin, last), y});
    } catch (const PreconditionError&) {
        rep.regulator_consistent = false;
    }
    double total_push = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        total_push = std::max(total_push, y(y.n_points() - 1, i) - y(0, i));
    }
    rep.complementarity_bound = 10.0 * grid.step() * sup_norm(sol.x) * total_push;
    return rep;
}

nlohmann::json to_json(const InvariantReport& r) {
    return {{"min_x", r.min_x},
            {"nonnegative", r.nonnegative},
            {"decomposition_exact", r.decomposition_exact},
            {"regulator_consistent", r.regulator_consistent},
            {"y_monotone", r.y_monotone},
            {"y_zero_at_origin", r.y_zero_at_origin},
            {"eta_preserved", r.eta_preserved},
            {"complementarity", r.complementarity},
            {"complementarity_bound", r.complementarity_bound},
            {"complementarity_ok", r.complementarity_ok()},
            {"ok", r.ok()}};
}

nlohmann::json to_json(const ConvergenceTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"steps_per_delay", r.steps_per_delay},
                        {"step", r.step},
                        {"error", r.error},
                        {"local_order", r.local_order ? nlohmann::json(*r.local_order) : nlohmann::json(nullptr)}});
    }
    return {{"rows", rows}, {"order", t.order}};
}

}  // namespace rdsde
