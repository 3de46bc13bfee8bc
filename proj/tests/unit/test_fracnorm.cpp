#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "examples.hpp"
#include "rdsde/error.hpp"
#include "rdsde/fbm.hpp"
#include "rdsde/fracnorm.hpp"
#include "rdsde/stats.hpp"

using namespace rdsde;
using rdsde::testing::make_path;

namespace {

double ident(double t) { return t; }
double root(double t) { return std::sqrt(t); }
double one(double) { return 1.0; }

SamplePath random_walk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    SamplePath p(TimeGrid(0.0, 1.0, n), 1);
    for (std::size_t k = 1; k <= n; ++k) {
        p(k, 0) = p(k - 1, 0) + nd(rng) / std::sqrt(static_cast<double>(n));
    }
    return p;
}

SamplePath scaled(const SamplePath& f, double c) {
    SamplePath out = f;
    for (auto& v : out.values()) {
        v *= c;
    }
    return out;
}

}  // namespace

TEST(AlphaNorm, Constant) {
    SamplePath c(TimeGrid(0.0, 1.0, 64), 1);
    for (auto& v : c.values()) {
        v = -2.5;
    }
    EXPECT_NEAR(w_alpha_inf_norm(c, {0.3, 1.0, 0.0, 1.0}), 2.5, 1e-15);
}

TEST(AlphaNorm, IdentityClosedForm) {
    const SamplePath f = make_path(TimeGrid(0.0, 1.0, 4096), ident);
    EXPECT_NEAR(w_alpha_inf_norm(f, {0.4, 1.0, 0.0, 1.0}), 1.0 + 1.0 / 0.6, 1e-3);
}

TEST(AlphaNorm, HomogeneousAndSubadditive) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const SamplePath f = random_walk(256, s);
        const SamplePath g = random_walk(256, s + 100);
        SamplePath sum = f;
        for (std::size_t k = 0; k < sum.n_points(); ++k) {
            sum(k, 0) += g(k, 0);
        }
        const AlphaParams p{0.35, 1.0, 0.0, 1.0};
        const double nf = w_alpha_inf_norm(f, p);
        EXPECT_NEAR(w_alpha_inf_norm(scaled(f, 2.0), p), 2.0 * nf, 1e-12 * nf);
        EXPECT_LE(w_alpha_inf_norm(sum, p), (nf + w_alpha_inf_norm(g, p)) * (1.0 + 1e-10));
    }
}

TEST(AlphaNorm, MonotoneInUpperEnd) {
    const SamplePath f = random_walk(512, 4);
    double prev = 0.0;
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        const double v = w_alpha_inf_norm(f, {0.25, 1.0, 0.0, t});
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(AlphaNorm, IntervalOutsideGrid) {
    const SamplePath f = make_path(TimeGrid(0.0, 1.0, 16), ident);
    EXPECT_THROW(w_alpha_inf_norm(f, {0.3, 1.0, 0.0, 2.0}), DomainError);
    EXPECT_THROW(w_alpha_inf_norm(f, {0.6, 1.0, 0.0, 1.0}), DomainError);
}

TEST(AlphaNorm, RefinementDifferencesShrink) {
    double prev_value = 0.0;
    double prev_gap = 1e9;
    for (std::size_t n : {128u, 256u, 512u, 1024u, 2048u}) {
        const double v = w_alpha_inf_norm(make_path(TimeGrid(0.0, 1.0, n), root), {0.3, 1.0, 0.0, 1.0});
        if (prev_value != 0.0) {
            const double gap = std::abs(v - prev_value);
            EXPECT_LT(gap, prev_gap);
            prev_gap = gap;
        }
        prev_value = v;
    }
}

TEST(WeightedNorm, ZeroWeightIsUnweighted) {
    const SamplePath f = random_walk(300, 8);
    EXPECT_DOUBLE_EQ(weighted_alpha_norm(f, {0.3, 0.0, 0.0, 1.0}), w_alpha_inf_norm(f, {0.3, 1.0, 0.0, 1.0}));
}

TEST(WeightedNorm, ConstantAttainsAtStart) {
    SamplePath c(TimeGrid(0.0, 1.0, 64), 1);
    for (auto& v : c.values()) {
        v = 1.5;
    }
    EXPECT_NEAR(weighted_alpha_norm(c, {0.3, 2.0, 0.0, 1.0}), 1.5, 1e-15);
}

TEST(WeightedNorm, IdentityAgainstDenseMaximization) {
    double oracle = 0.0;
    const std::size_t dense = 1000000;
    for (std::size_t k = 0; k <= dense; ++k) {
        const double u = static_cast<double>(k) / dense;
        oracle = std::max(oracle, std::exp(-5.0 * u) * (u + std::pow(u, 0.6) / 0.6));
    }
    const SamplePath f = make_path(TimeGrid(0.0, 1.0, 4096), ident);
    EXPECT_NEAR(weighted_alpha_norm(f, {0.4, 5.0, 0.0, 1.0}), oracle, 1e-3);
}

TEST(WeightedNorm, EquivalenceBounds) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const SamplePath f = random_walk(400, s);
        const double a = 0.25;
        const double lam = 3.0;
        const AlphaParams p{a, lam, 0.25, 1.0};
        const double plain = w_alpha_inf_norm(f, p);
        const double weighted = weighted_alpha_norm(f, p);
        EXPECT_LE(weighted, std::exp(-lam * 0.25) * plain * (1.0 + 1e-12));
        EXPECT_GE(weighted, std::exp(-lam * 1.0) * plain * (1.0 - 1e-12));
    }
}

TEST(HolderNorm, ClosedForms) {
    SamplePath c(TimeGrid(0.0, 1.0, 64), 1);
    for (auto& v : c.values()) {
        v = 3.0;
    }
    EXPECT_NEAR(holder_norm(c, 0.5, 0.0, 1.0).value, 3.0, 1e-15);
    EXPECT_NEAR(holder_norm(make_path(TimeGrid(0.0, 1.0, 512), ident), 1.0, 0.0, 1.0).value, 2.0, 1e-12);
    EXPECT_NEAR(holder_norm(make_path(TimeGrid(0.0, 1.0, 4096), root), 0.5, 0.0, 1.0).value, 2.0, 1e-3);
    EXPECT_THROW(holder_norm(c, 1.5, 0.0, 1.0), DomainError);
}

TEST(HolderNorm, ApproximateAboveLimit) {
    const SamplePath f = make_path(TimeGrid(0.0, 1.0, 20000), ident);
    const NormEstimate e = holder_norm(f, 1.0, 0.0, 1.0);
    EXPECT_TRUE(e.approximate);
    EXPECT_NEAR(e.value, 2.0, 1e-9);
    EXPECT_FALSE(holder_norm(f, 1.0, 0.0, 1.0, PairSupOptions{50000}).approximate);
}

TEST(GNorm, ClosedForms) {
    SamplePath c(TimeGrid(0.0, 1.0, 64), 1);
    for (auto& v : c.values()) {
        v = 4.0;
    }
    EXPECT_EQ(g_norm_one_minus_alpha(c, 0.4).value, 0.0);
    const SamplePath t = make_path(TimeGrid(0.0, 1.0, 4096), ident);
    EXPECT_NEAR(g_norm_one_minus_alpha(t, 0.4).value, 3.5, 1e-3);
    const double g = g_norm_one_minus_alpha(t, 0.4).value;
    EXPECT_NEAR(g_norm_one_minus_alpha(scaled(t, -3.0), 0.4).value, 3.0 * g, 1e-12 * g);
    EXPECT_THROW(g_norm_one_minus_alpha(SamplePath(TimeGrid(0.0, 1.0, 8), 2), 0.4), ShapeError);
}

TEST(LambdaBound, ClosedFormsAndScaling) {
    const SamplePath t = make_path(TimeGrid(0.0, 1.0, 4096), ident);
    const double expected = 3.5 / (std::tgamma(0.6) * std::tgamma(0.4));
    const double v = lambda_alpha_bound(t, 0.4).value;
    EXPECT_NEAR(v, expected, 1e-3);
    EXPECT_NEAR(lambda_alpha_bound(scaled(t, 2.0), 0.4).value, 2.0 * v, 1e-12);
    SamplePath c(TimeGrid(0.0, 1.0, 64), 1);
    EXPECT_EQ(lambda_alpha_bound(c, 0.4).value, 0.0);
}

TEST(LambdaBound, VectorTakesMaxComponent) {
    const TimeGrid g(0.0, 1.0, 256);
    SamplePath v(g, 2);
    for (std::size_t k = 0; k < g.n_points(); ++k) {
        v(k, 0) = g.time(k);
        v(k, 1) = 3.0 * g.time(k);
    }
    EXPECT_NEAR(lambda_alpha_bound(v, 0.3).value, lambda_alpha_bound(v.component(1), 0.3).value, 1e-15);
}

TEST(FNormAlpha1, ClosedForms) {
    SamplePath z(TimeGrid(0.0, 1.0, 64), 1);
    EXPECT_EQ(f_norm_alpha_1(z, 0.4), 0.0);
    EXPECT_NEAR(f_norm_alpha_1(make_path(TimeGrid(0.0, 1.0, 4096), one), 0.4), 1.0 / 0.6, 1e-4);
    // int_0^1 s^{0.6} ds + int_0^1 s^{0.6}/0.6 ds
    const double expected = 1.0 / 1.6 + 1.0 / (0.6 * 1.6);
    EXPECT_NEAR(f_norm_alpha_1(make_path(TimeGrid(0.0, 1.0, 4096), ident), 0.4), expected, 1e-3);
}

TEST(HolderExponent, Deterministic) {
    EXPECT_NEAR(holder_exponent_estimate(make_path(TimeGrid(0.0, 1.0, 4096), ident)).exponent, 1.0, 0.01);
    EXPECT_NEAR(holder_exponent_estimate(make_path(TimeGrid(0.0, 1.0, 16384), root)).exponent, 0.5, 0.05);
    SamplePath c(TimeGrid(0.0, 1.0, 128), 1);
    const HolderExponent e = holder_exponent_estimate(c);
    EXPECT_TRUE(e.constant_path);
    EXPECT_EQ(e.exponent, 1.0);
    EXPECT_THROW(holder_exponent_estimate(SamplePath(TimeGrid(0.0, 1.0, 32), 1)), DomainError);
}

TEST(HolderExponent, FbmEnsembleMedian) {
    const CirculantGenerator gen(TimeGrid(0.0, 1.0, 16384), HurstParameter(0.75));
    std::vector<double> est;
    for (std::size_t p = 0; p < 20; ++p) {
        est.push_back(holder_exponent_estimate(gen.sample(1, 12, p)).exponent);
    }
    const double med = stats::median(est);
    EXPECT_GE(med, 0.65);
    EXPECT_LE(med, 0.85);
}

TEST(NormReport, JsonFields) {
    const NormReport r = make_norm_report(make_path(TimeGrid(0.0, 1.0, 256), ident), 0.4, 0.0, 0.0, 1.0);
    const auto j = to_json(r);
    for (const char* key : {"alpha", "w_alpha_inf", "holder_one_minus_alpha", "lambda_alpha_bound", "holder_exponent",
                            "grid_points", "interval", "approximate"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_TRUE(r.f_alpha_1.has_value());
}
