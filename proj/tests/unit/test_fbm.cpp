#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rdsde/error.hpp"
#include "rdsde/fbm.hpp"
#include "rdsde/stats.hpp"

using namespace rdsde;

TEST(Hurst, Range) {
    EXPECT_THROW(HurstParameter(0.5), DomainError);
    EXPECT_THROW(HurstParameter(1.0), DomainError);
    EXPECT_NO_THROW(HurstParameter(0.5, true));
    EXPECT_NO_THROW(HurstParameter(0.75));
}

TEST(FbmCovariance, ClosedForms) {
    EXPECT_DOUBLE_EQ(fbm_covariance(1.0, 2.0, 0.5), 1.0);
    EXPECT_EQ(fbm_covariance(0.0, 3.7, 0.8), 0.0);
    EXPECT_NEAR(fbm_covariance(1.0, 2.0, 0.75), std::sqrt(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(fbm_covariance(1.3, 1.3, 0.7), std::pow(1.3, 1.4));
    EXPECT_DOUBLE_EQ(fbm_covariance(0.4, 2.2, 0.6), fbm_covariance(2.2, 0.4, 0.6));
    EXPECT_THROW(fbm_covariance(-0.1, 1.0, 0.7), DomainError);
}

TEST(Cholesky, DeterministicAndPinned) {
    const TimeGrid g(0.0, 1.0, 64);
    const SamplePath a = sample_cholesky(g, HurstParameter(0.7), 2, 9);
    const SamplePath b = sample_cholesky(g, HurstParameter(0.7), 2, 9);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    EXPECT_EQ(a(0, 0), 0.0);
    EXPECT_EQ(a(0, 1), 0.0);
    EXPECT_NE(a(10, 0), a(10, 1));
}

TEST(Cholesky, SizeCapAndOrigin) {
    EXPECT_THROW(CholeskyGenerator(TimeGrid(0.0, 1.0, 4096), HurstParameter(0.75)), SizeError);
    EXPECT_THROW(CholeskyGenerator(TimeGrid(0.5, 1.0, 16), HurstParameter(0.75)), DomainError);
}

TEST(Cholesky, CovarianceWithinFiveStandardErrors) {
    const TimeGrid g(0.0, 1.0, 32);
    const CholeskyGenerator gen(g, HurstParameter(0.7));
    std::vector<SamplePath> ens;
    for (std::size_t p = 0; p < 20000; ++p) {
        ens.push_back(gen.sample(1, 3, p));
    }
    std::vector<std::size_t> probes;
    for (std::size_t k = 0; k <= 32; ++k) {
        probes.push_back(k);
    }
    const EmpiricalCovariance cov = empirical_covariance(ens, probes, 0.7);
    EXPECT_LE(cov.max_z_score, 5.0);
    EXPECT_EQ(cov.covariance[0], 0.0);
}

TEST(Circulant, DeterministicAndPinned) {
    const TimeGrid g(0.0, 2.0, 1000);
    const CirculantGenerator gen(g, HurstParameter(0.75));
    EXPECT_EQ(gen.embedding_size(), 2048u);
    const SamplePath a = gen.sample(3, 5, 1);
    const SamplePath b = gen.sample(3, 5, 1);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    EXPECT_EQ(a.n_points(), 1001u);
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(a(0, c), 0.0);
    }
}

TEST(Circulant, BrownianIncrementsUncorrelated) {
    const std::size_t n = 100000;
    const SamplePath w = sample_circulant(TimeGrid(0.0, 1.0, n), HurstParameter(0.5, true), 1, 17);
    std::vector<double> inc(n);
    for (std::size_t k = 0; k < n; ++k) {
        inc[k] = w(k + 1, 0) - w(k, 0);
    }
    const double m = stats::mean(inc);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        den += (inc[k] - m) * (inc[k] - m);
        if (k + 1 < n) {
            num += (inc[k] - m) * (inc[k + 1] - m);
        }
    }
    EXPECT_LE(std::abs(num / den), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Circulant, TerminalLawMatchesCholesky) {
    const TimeGrid g(0.0, 1.0, 32);
    const CholeskyGenerator chol(g, HurstParameter(0.75));
    const CirculantGenerator circ(g, HurstParameter(0.75));
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t p = 0; p < 5000; ++p) {
        a.push_back(chol.sample(1, 1, p)(32, 0));
        b.push_back(circ.sample(1, 2, p)(32, 0));
    }
    EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.05);
}

TEST(Circulant, StationaryIncrementVariance) {
    const TimeGrid g(0.0, 1.0, 256);
    const double h = 0.8;
    const CirculantGenerator gen(g, HurstParameter(h));
    const double delta = 8.0 * g.step();
    const std::size_t reps = 4000;
    for (std::size_t start : {0u, 100u, 240u}) {
        double acc = 0.0;
        for (std::size_t p = 0; p < reps; ++p) {
            const SamplePath w = gen.sample(1, 4, p);
            const double d = w(start + 8, 0) - w(start, 0);
            acc += d * d;
        }
        const double expected = std::pow(delta, 2.0 * h);
        // Var of the sample mean of chi-square(1) scaled: 2 sigma^4 / reps.
        EXPECT_NEAR(acc / reps, expected, 5.0 * expected * std::sqrt(2.0 / reps));
    }
}

TEST(Circulant, SelfSimilarity) {
    const double h = 0.7;
    const CirculantGenerator gen(TimeGrid(0.0, 4.0, 64), HurstParameter(h));
    std::vector<double> at1;
    std::vector<double> at4;
    for (std::size_t p = 0; p < 4000; ++p) {
        const SamplePath w = gen.sample(1, 8, p);
        at1.push_back(w(16, 0));
        at4.push_back(w(64, 0) / std::pow(4.0, h));
    }
    EXPECT_GT(stats::ks_two_sample(at1, at4).p_value, 0.01);
}

TEST(EmpiricalCovariance, DegenerateCases) {
    const TimeGrid g(0.0, 1.0, 4);
    std::vector<SamplePath> one{SamplePath(g, 1)};
    const std::vector<std::size_t> probes{0, 2, 4};
    const EmpiricalCovariance cov = empirical_covariance(one, probes, 0.75);
    for (double v : cov.covariance) {
        EXPECT_EQ(v, 0.0);
    }
    std::vector<SamplePath> mixed{SamplePath(g, 1), SamplePath(TimeGrid(0.0, 2.0, 4), 1)};
    EXPECT_THROW(empirical_covariance(mixed, probes, 0.75), ShapeError);
}

TEST(EmpiricalCovariance, CirculantEightProbes) {
    const TimeGrid g(0.0, 1.0, 64);
    const CirculantGenerator gen(g, HurstParameter(0.75));
    std::vector<SamplePath> ens;
    for (std::size_t p = 0; p < 10000; ++p) {
        ens.push_back(gen.sample(1, 21, p));
    }
    const std::vector<std::size_t> probes{0, 8, 16, 24, 32, 40, 48, 64};
    const EmpiricalCovariance cov = empirical_covariance(ens, probes, 0.75);
    EXPECT_LE(cov.max_z_score, 5.0);
    EXPECT_EQ(cov.covariance[3], 0.0);
}
