#include "rdsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rdsde/error.hpp"

namespace rdsde::stats {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("line fit needs at least two paired points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.n = x.size();
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - fit.intercept - fit.slope * x[i];
            ss += e * e;
        }
        fit.residual_sd = std::sqrt(ss / (n - 2.0));
    }
    return fit;
}

namespace {

// Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
double kolmogorov_tail(double lambda) {
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12 * std::abs(sum)) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw DomainError("KS test needs two non-empty samples");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) {
            ++i;
        }
        while (j < sb.size() && sb[j] <= v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    KsResult res;
    res.statistic = d;
    res.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
    return res;
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("mean of an empty sample");
    }
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return s / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("median of an empty sample");
    }
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Interval bootstrap_mean_ci(std::span<const double> values, double level, std::size_t resamples,
                           std::uint64_t seed) {
    if (values.empty() || resamples == 0 || !(level > 0.0 && level < 1.0)) {
        throw DomainError("bootstrap needs data, resamples and a level in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            s += values[pick(rng)];
        }
        m = s / static_cast<double>(values.size());
    }
    std::sort(means.begin(), means.end());
    const double tail = 0.5 * (1.0 - level);
    auto at = [&](double q) {
        const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1)));
        return means[std::min(idx, resamples - 1)];
    };
    return {at(tail), at(1.0 - tail)};
}

}  // namespace rdsde::stats
