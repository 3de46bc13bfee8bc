#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsde/coeff.hpp"
#include "rdsde/path.hpp"

namespace rdsde {

/// Initial segment eta(u), u in [-r, 0], writing d values.
using InitialSegment = std::function<void(double u, std::span<double> out)>;

/// x(t) = eta(0) + int_0^t b(s, x) ds + int_0^t sigma(s, x(s-r)) dg_s + y(t),
/// x = eta on [-r, 0], reflected on the non-negative orthant.
struct Problem {
    InitialSegment eta;
    Coefficients coeffs;
    double r = 1.0;
    double horizon = 1.0;  ///< T, an integer multiple of r
    double hurst = 0.75;   ///< used only when drivers are sampled internally

    std::size_t d() const noexcept { return coeffs.d; }
    std::size_t m() const noexcept { return coeffs.m; }
    /// M = T / r.
    std::size_t intervals() const;
    void validate() const;
};

enum class Scheme { euler, picard };
enum class InitialIterate { constant, linear };

struct SolverConfig {
    std::size_t steps_per_delay = 64;  ///< n_r, mesh r / n_r
    Scheme scheme = Scheme::euler;
    double picard_tol = 1e-10;
    std::size_t picard_max_iter = 100;
    InitialIterate initial_iterate = InitialIterate::constant;
    std::uint64_t seed = 0;
    unsigned threads = 0;  ///< Monte Carlo workers; 0 picks the hardware count

    void validate() const;
};

struct ReflectedSolution {
    SamplePath x;  ///< on [-r, T]
    SamplePath y;  ///< zero on [-r, 0]
    SamplePath z;  ///< eta on [-r, 0]
    std::vector<std::size_t> iterations_per_interval;  ///< picard only
    std::vector<double> final_residuals;               ///< picard only
    SamplePath driver;                                 ///< g on [0, T]
};

/// Grid of the solution, [-r, T] with n_r steps per delay.
TimeGrid solution_grid(const Problem& p, std::size_t steps_per_delay);
/// Grid of the driver, [0, T].
TimeGrid driver_grid(const Problem& p, std::size_t steps_per_delay);

/// eta on the grid points of [-r, 0]; throws PreconditionError when negative.
SamplePath discretize_eta(const Problem& p, std::size_t steps_per_delay);

/// Explicit scheme: left-point drift and diffusion, regulator applied each step.
ReflectedSolution solve_euler(const Problem& p, const SamplePath& g, const SolverConfig& cfg);

/// Interval-by-interval fixed point. On [nr, (n+1)r] the Young term is built once
/// from the known x(s - r); the drift term (trapezoid) and the regulator are
/// iterated in the sup norm until the change is at most picard_tol.
ReflectedSolution solve_picard(const Problem& p, const SamplePath& g, const SolverConfig& cfg);

/// Dispatches on cfg.scheme.
ReflectedSolution solve(const Problem& p, const SamplePath& g, const SolverConfig& cfg);

/// Driver for path `path_index`: circulant fBm with the problem's Hurst index,
/// streams keyed by (cfg.seed, path_index).
SamplePath sample_driver(const Problem& p, const SolverConfig& cfg, std::uint64_t path_index);

struct PathResult {
    std::size_t path = 0;
    std::optional<ReflectedSolution> solution;
    std::string error;  ///< set when solution is empty
};

/// Independent pathwise solves; results are ordered by path index and do not
/// depend on the number of workers. A failing path does not stop the others.
std::vector<PathResult> solve_stochastic(const Problem& p, const SolverConfig& cfg, std::size_t n_paths);

struct ConvergenceRow {
    std::size_t steps_per_delay = 0;
    double step = 0.0;
    double error = 0.0;        ///< sup |x_level - x_finest| on the level's grid points
    std::optional<double> local_order;  ///< log2(error_prev / error) for dyadic neighbours
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double order = 0.0;  ///< slope of log error vs log step, finest level excluded
};

/// Solves at every level with the finest driver subsampled (one realization for all
/// levels). `levels` ascending, each dividing the finest; `g_fine` on the finest
/// driver grid. Throws DomainError for fewer than 3 levels.
ConvergenceTable convergence_study(const Problem& p, const SamplePath& g_fine, std::span<const std::size_t> levels,
                                   const SolverConfig& cfg);

struct InvariantReport {
    double min_x = 0.0;
    bool nonnegative = true;               ///< min_x >= -1e-12
    bool decomposition_exact = true;       ///< x == z + y bitwise on [0, T]
    bool regulator_consistent = true;      ///< regulator(z) == y bitwise
    bool y_monotone = true;
    bool y_zero_at_origin = true;
    bool eta_preserved = true;             ///< x == eta on [-r, 0]
    double complementarity = 0.0;          ///< sum_k x(t_k) (y(t_{k+1}) - y(t_k)), max over components
    double complementarity_bound = 0.0;    ///< 10 * step * ||x|| * total increase of y

    bool complementarity_ok() const noexcept { return complementarity <= complementarity_bound; }
    bool ok() const noexcept {
        return nonnegative && decomposition_exact && regulator_consistent && y_monotone && y_zero_at_origin &&
               eta_preserved;
    }
};

InvariantReport check_invariants(const Problem& p, const ReflectedSolution& sol);

nlohmann::json to_json(const InvariantReport& report);
nlohmann::json to_json(const ConvergenceTable& table);

}  // namespace rdsde
