#include "rdsde/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <spdlog/spdlog.h>

#include "rdsde/error.hpp"

namespace rdsde {

namespace {

void require_origin(const TimeGrid& grid) {
    if (grid.t0() != 0.0) {
        throw DomainError("fBm sampling grids must start at t = 0");
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1U;
    }
    return p;
}

void cumulate(SamplePath& path, std::size_t column, std::span<const double> increments) {
    double level = 0.0;
    path(0, column) = 0.0;
    for (std::size_t k = 0; k < increments.size(); ++k) {
        level += increments[k];
        path(k + 1, column) = level;
    }
}

}  // namespace

HurstParameter::HurstParameter(double value, bool allow_half) : value_(value) {
    const bool lower_ok = allow_half ? value >= 0.5 : value > 0.5;
    if (!lower_ok || !(value < 1.0)) {
        throw DomainError("Hurst parameter " + std::to_string(value) +
                          (allow_half ? " outside [1/2, 1)" : " outside (1/2, 1)"));
    }
}

double fbm_covariance(double s, double t, double hurst) {
    if (s < 0.0 || t < 0.0) {
        throw DomainError("fBm covariance needs non-negative times");
    }
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("Hurst parameter must lie in (0, 1)");
    }
    const double two_h = 2.0 * hurst;
    return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(std::size_t lag, double hurst, double step) noexcept {
    const double two_h = 2.0 * hurst;
    const double k = static_cast<double>(lag);
    const double below = lag == 0 ? 1.0 : std::pow(k - 1.0, two_h);
    return 0.5 * std::pow(step, two_h) * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + below);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t component) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffU); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32U); };
    std::seed_seq seq{lo(seed), hi(seed), lo(path_index), hi(path_index), lo(component), hi(component)};
    return std::mt19937_64(seq);
}

CholeskyGenerator::CholeskyGenerator(TimeGrid grid, HurstParameter hurst, const FbmOptions& options)
    : grid_(grid), n_(grid.n_steps()) {
    require_origin(grid_);
    if (n_ > options.cholesky_cap) {
        throw SizeError("Cholesky sampling of " + std::to_string(n_) + " steps exceeds the cap of " +
                        std::to_string(options.cholesky_cap));
    }
    const double h = hurst.value();
    Eigen::MatrixXd cov(n_, n_);
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t k = 0; k < n_; ++k) {
            cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                fgn_autocovariance(j > k ? j - k : k - j, h, grid_.step());
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        const double jitter = options.jitter * cov(0, 0);
        spdlog::warn("fBm covariance not positive definite; adding jitter {:.3e} to the diagonal", jitter);
        cov.diagonal().array() += jitter;
        llt.compute(cov);
        jittered_ = true;
        if (llt.info() != Eigen::Success) {
            throw FactorizationError("fBm increment covariance is not positive definite after jitter");
        }
    }
    const Eigen::MatrixXd l = llt.matrixL();
    factor_.assign(n_ * n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            factor_[j * n_ + k] = l(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        }
    }
}

SamplePath CholeskyGenerator::sample(std::size_t m, std::uint64_t seed, std::uint64_t path_index) const {
    SamplePath out(grid_, m);
    std::vector<double> noise(n_);
    std::vector<double> inc(n_);
    for (std::size_t c = 0; c < m; ++c) {
        auto rng = make_stream(seed, path_index, c);
        std::normal_distribution<double> normal;
        for (auto& v : noise) {
            v = normal(rng);
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const double* row = factor_.data() + j * n_;
            double acc = 0.0;
            for (std::size_t k = 0; k <= j; ++k) {
                acc += row[k] * noise[k];
            }
            inc[j] = acc;
        }
        cumulate(out, c, inc);
    }
    return out;
}

CirculantGenerator::CirculantGenerator(TimeGrid grid, HurstParameter hurst, const FbmOptions& options)
    : grid_(grid), n_(grid.n_steps()) {
    require_origin(grid_);
    const std::size_t half = next_pow2(n_);
    const std::size_t size = 2 * half;
    const double h = hurst.value();

    std::vector<std::complex<double>> row(size);
    for (std::size_t j = 0; j <= half; ++j) {
        row[j] = fgn_autocovariance(j, h, grid_.step());
    }
    for (std::size_t j = 1; j < half; ++j) {
        row[size - j] = row[j];
    }
    std::vector<std::complex<double>> eig;
    Eigen::FFT<double> fft;
    fft.fwd(eig, row);

    double negative = 0.0;
    double total = 0.0;
    double largest = 0.0;
    for (const auto& e : eig) {
        total += std::abs(e.real());
        largest = std::max(largest, e.real());
        negative += std::max(0.0, -e.real());
    }
    clipped_mass_ = total > 0.0 ? negative / total : 0.0;
    const bool material = std::any_of(eig.begin(), eig.end(),
                                      [&](const auto& e) { return e.real() < -1e-12 * largest; });
    if (material) {
        if (clipped_mass_ > options.max_clipped_mass) {
            throw FactorizationError("circulant embedding has negative eigenvalue mass " +
                                     std::to_string(clipped_mass_));
        }
        spdlog::warn("circulant embedding: clipping negative eigenvalues (mass {:.3e})", clipped_mass_);
    }
    scale_.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
        scale_[k] = std::sqrt(std::max(0.0, eig[k].real()) / static_cast<double>(size));
    }
}

SamplePath CirculantGenerator::sample(std::size_t m, std::uint64_t seed, std::uint64_t path_index) const {
    SamplePath out(grid_, m);
    const std::size_t size = scale_.size();
    std::vector<std::complex<double>> spectrum(size);
    std::vector<std::complex<double>> field;
    std::vector<double> inc(n_);
    Eigen::FFT<double> fft;
    for (std::size_t c = 0; c < m; ++c) {
        auto rng = make_stream(seed, path_index, c);
        std::normal_distribution<double> normal;
        for (std::size_t k = 0; k < size; ++k) {
            const double re = normal(rng);
            const double im = normal(rng);
            spectrum[k] = scale_[k] * std::complex<double>(re, im);
        }
        fft.fwd(field, spectrum);
        for (std::size_t j = 0; j < n_; ++j) {
            inc[j] = field[j].real();
        }
        cumulate(out, c, inc);
    }
    return out;
}

SamplePath sample_cholesky(const TimeGrid& grid, HurstParameter hurst, std::size_t m, std::uint64_t seed,
                           const FbmOptions& options) {
    return CholeskyGenerator(grid, hurst, options).sample(m, seed);
}

SamplePath sample_circulant(const TimeGrid& grid, HurstParameter hurst, std::size_t m, std::uint64_t seed,
                            const FbmOptions& options) {
    return CirculantGenerator(grid, hurst, options).sample(m, seed);
}

EmpiricalCovariance empirical_covariance(std::span<const SamplePath> ensemble,
                                         std::span<const std::size_t> probe_indices, double hurst) {
    if (ensemble.empty()) {
        throw ShapeError("empirical covariance needs a non-empty ensemble");
    }
    const TimeGrid& grid = ensemble.front().grid();
    const std::size_t dim = ensemble.front().dim();
    for (const auto& p : ensemble) {
        if (!p.grid().matches(grid) || p.dim() != dim) {
            throw ShapeError("ensemble paths live on different grids");
        }
    }
    const std::size_t q = probe_indices.size();
    for (std::size_t idx : probe_indices) {
        if (idx >= grid.n_points()) {
            throw ShapeError("probe index outside the grid");
        }
    }

    EmpiricalCovariance res;
    res.probes.assign(probe_indices.begin(), probe_indices.end());
    res.samples = ensemble.size() * dim;
    const double n = static_cast<double>(res.samples);
    const double denom = res.samples > 1 ? n - 1.0 : 1.0;

    // Gather the probed values: samples x q.
    std::vector<double> data;
    data.reserve(res.samples * q);
    for (const auto& p : ensemble) {
        for (std::size_t c = 0; c < dim; ++c) {
            for (std::size_t idx : probe_indices) {
                data.push_back(p(idx, c));
            }
        }
    }
    std::vector<double> mean(q, 0.0);
    for (std::size_t s = 0; s < res.samples; ++s) {
        for (std::size_t a = 0; a < q; ++a) {
            mean[a] += data[s * q + a];
        }
    }
    for (auto& v : mean) {
        v /= n;
    }

    res.covariance.assign(q * q, 0.0);
    res.analytic.assign(q * q, 0.0);
    res.standard_error.assign(q * q, 0.0);
    for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = a; b < q; ++b) {
            double acc = 0.0;
            for (std::size_t s = 0; s < res.samples; ++s) {
                acc += (data[s * q + a] - mean[a]) * (data[s * q + b] - mean[b]);
            }
            const double cov = acc / denom;
            double spread = 0.0;
            for (std::size_t s = 0; s < res.samples; ++s) {
                const double prod = (data[s * q + a] - mean[a]) * (data[s * q + b] - mean[b]);
                spread += (prod - cov) * (prod - cov);
            }
            const double se = std::sqrt(spread / denom / n);
            const double exact =
                fbm_covariance(grid.time(probe_indices[a]), grid.time(probe_indices[b]), hurst);
            for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
                res.covariance[i * q + j] = cov;
                res.analytic[i * q + j] = exact;
                res.standard_error[i * q + j] = se;
            }
            const double dev = std::abs(cov - exact);
            res.max_abs_deviation = std::max(res.max_abs_deviation, dev);
            if (se > 0.0) {
                res.max_z_score = std::max(res.max_z_score, dev / se);
            } else if (dev > 0.0) {
                res.max_z_score = std::numeric_limits<double>::infinity();
            }
        }
    }
    return res;
}

}  // namespace rdsde
