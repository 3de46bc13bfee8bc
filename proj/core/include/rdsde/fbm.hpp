#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rdsde/path.hpp"

namespace rdsde {

/// Hurst index of the driving fBm. The solver regime is 1/2 < H < 1;
/// `allow_half` admits H = 1/2 (standard Brownian motion) for testing.
class HurstParameter {
public:
    explicit HurstParameter(double value, bool allow_half = false);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Cov(W(s), W(t)) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2. Accepts any H in (0, 1).
double fbm_covariance(double s, double t, double hurst);

/// Autocovariance at `lag` of fractional Gaussian noise with increments of width `step`.
double fgn_autocovariance(std::size_t lag, double hurst, double step) noexcept;

/// Independent random stream for one (seed, path, component) triple.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t component);

struct FbmOptions {
    std::size_t cholesky_cap = 2048;
    double jitter = 1e-12;              ///< relative to the increment variance
    double max_clipped_mass = 1e-6;     ///< share of negative circulant eigenvalue mass tolerated
};

/// Exact sampler: Cholesky factor of the fractional-Gaussian-noise covariance,
/// factorized once and reused for every draw.
class CholeskyGenerator {
public:
    CholeskyGenerator(TimeGrid grid, HurstParameter hurst, const FbmOptions& options = {});

    /// `m` independent fBm columns; the column j stream is keyed by (seed, path_index, j).
    SamplePath sample(std::size_t m, std::uint64_t seed, std::uint64_t path_index = 0) const;

    bool jittered() const noexcept { return jittered_; }
    const TimeGrid& grid() const noexcept { return grid_; }

private:
    TimeGrid grid_;
    std::size_t n_;
    std::vector<double> factor_;  // lower triangle, row-major n x n
    bool jittered_ = false;
};

/// Davies-Harte sampler: the increment covariance is embedded in a circulant of
/// size 2N (N the next power of two >= n) and diagonalized by FFT.
class CirculantGenerator {
public:
    CirculantGenerator(TimeGrid grid, HurstParameter hurst, const FbmOptions& options = {});

    SamplePath sample(std::size_t m, std::uint64_t seed, std::uint64_t path_index = 0) const;

    std::size_t embedding_size() const noexcept { return scale_.size(); }
    double clipped_mass() const noexcept { return clipped_mass_; }
    const TimeGrid& grid() const noexcept { return grid_; }

private:
    TimeGrid grid_;
    std::size_t n_;
    std::vector<double> scale_;  // sqrt(eigenvalue / size)
    double clipped_mass_ = 0.0;
};

/// One exact draw of `m` independent fBm paths on `grid` (grid.t0 must be 0).
SamplePath sample_cholesky(const TimeGrid& grid, HurstParameter hurst, std::size_t m, std::uint64_t seed,
                           const FbmOptions& options = {});

/// Same law as sample_cholesky, computed by circulant embedding.
SamplePath sample_circulant(const TimeGrid& grid, HurstParameter hurst, std::size_t m, std::uint64_t seed,
                            const FbmOptions& options = {});

struct EmpiricalCovariance {
    std::vector<std::size_t> probes;
    std::vector<double> covariance;      ///< probes x probes, row-major, unbiased
    std::vector<double> analytic;        ///< fbm_covariance at the probe times
    std::vector<double> standard_error;  ///< Monte Carlo standard error of each entry
    double max_abs_deviation = 0.0;
    double max_z_score = 0.0;            ///< max |empirical - analytic| / standard error
    std::size_t samples = 0;
};

/// Sample covariance of the ensemble at the probed grid indices. Every column of
/// every path counts as one sample of a scalar fBm.
EmpiricalCovariance empirical_covariance(std::span<const SamplePath> ensemble,
                                         std::span<const std::size_t> probe_indices, double hurst);

}  // namespace rdsde
