#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rdsde/error.hpp"
#include "rdsde/skorokhod.hpp"

using namespace rdsde;

namespace {

SamplePath from(const TimeGrid& g, double (*f)(double)) {
    SamplePath p(g, 1);
    for (std::size_t k = 0; k < g.n_points(); ++k) {
        p(k, 0) = f(g.time(k));
    }
    return p;
}

SamplePath walk(std::size_t n, std::size_t d, std::uint64_t seed, double start = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    SamplePath p(TimeGrid(0.0, 1.0, n), d);
    for (std::size_t i = 0; i < d; ++i) {
        p(0, i) = start;
        for (std::size_t k = 1; k <= n; ++k) {
            p(k, i) = p(k - 1, i) + nd(rng) * 0.1;
        }
    }
    return p;
}

// y(k) = max(0, max_{j<=k} -z(j)) by scanning every prefix.
SamplePath brute_regulator(const SamplePath& z) {
    SamplePath y(z.grid(), z.dim());
    for (std::size_t i = 0; i < z.dim(); ++i) {
        for (std::size_t k = 0; k < z.n_points(); ++k) {
            double m = 0.0;
            for (std::size_t j = 0; j <= k; ++j) {
                m = std::max(m, -z(j, i));
            }
            y(k, i) = m;
        }
    }
    return y;
}

}  // namespace

TEST(Regulator, NegativeRamp) {
    const TimeGrid g(0.0, 1.0, 100);
    const SkorokhodSolution s = reflect(from(g, [](double t) { return -t; }));
    for (std::size_t k = 0; k < g.n_points(); ++k) {
        EXPECT_EQ(s.y(k, 0), g.time(k));
        EXPECT_EQ(s.x(k, 0), 0.0);
    }
    EXPECT_EQ(complementarity_residual(s), 0.0);
}

TEST(Regulator, NonNegativeIsIdentity) {
    const TimeGrid g(0.0, 1.0, 100);
    const SamplePath z = from(g, [](double t) { return 1.0 + std::sin(9.0 * t); });
    const SkorokhodSolution s = reflect(z);
    for (std::size_t k = 0; k < g.n_points(); ++k) {
        EXPECT_EQ(s.y(k, 0), 0.0);
        EXPECT_EQ(s.x(k, 0), z(k, 0));
    }
    EXPECT_EQ(complementarity_residual(s), 0.0);
}

TEST(Regulator, SineAgainstPrefixScan) {
    const TimeGrid g(0.0, 1.0, 1000);
    const SamplePath z = from(g, [](double t) { return std::sin(2.0 * std::numbers::pi * t); });
    const SamplePath y = regulator(z);
    const SamplePath oracle = brute_regulator(z);
    for (std::size_t k = 0; k < g.n_points(); ++k) {
        EXPECT_EQ(y(k, 0), oracle(k, 0));
    }
    EXPECT_EQ(y(500, 0), 0.0);
    EXPECT_NEAR(y(1000, 0), 1.0, 1e-12);
    EXPECT_NEAR(y(700, 0), -std::sin(2.0 * std::numbers::pi * 0.7), 1e-12);
}

TEST(Regulator, NegativeStartRejected) {
    SamplePath z(TimeGrid(0.0, 1.0, 4), 2);
    z(0, 1) = -0.1;
    EXPECT_THROW(regulator(z), PreconditionError);
}

TEST(Reflect, OneStepRecursionIn1D) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const SamplePath z = walk(500, 1, s);
        const SkorokhodSolution sol = reflect(z);
        double x = z(0, 0);
        for (std::size_t k = 1; k < z.n_points(); ++k) {
            x = std::max(0.0, x + (z(k, 0) - z(k - 1, 0)));
            EXPECT_NEAR(sol.x(k, 0), x, 1e-12);
        }
    }
}

TEST(Reflect, Invariants) {
    const SkorokhodSolution s = reflect(walk(400, 3, 5));
    for (std::size_t k = 0; k < s.z.n_points(); ++k) {
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_EQ(s.x(k, i), s.z(k, i) + s.y(k, i));
            EXPECT_GE(s.x(k, i), 0.0);
            if (k > 0) {
                EXPECT_GE(s.y(k, i), s.y(k - 1, i));
            }
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(s.y(0, i), 0.0);
    }
}

TEST(Reflect, Idempotent) {
    const SkorokhodSolution s = reflect(walk(300, 2, 6));
    const SkorokhodSolution again = reflect(s.x);
    EXPECT_EQ(sup_norm(again.y), 0.0);
    EXPECT_EQ(sup_distance(again.x, s.x), 0.0);
}

TEST(Reflect, MonotoneInInput) {
    const SamplePath z1 = walk(300, 1, 7);
    SamplePath z2 = z1;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 0.3);
    for (auto& v : z2.values()) {
        v += u(rng);
    }
    const SamplePath y1 = regulator(z1);
    const SamplePath y2 = regulator(z2);
    for (std::size_t k = 0; k < z1.n_points(); ++k) {
        EXPECT_GE(y1(k, 0), y2(k, 0));
    }
}

TEST(Reflect, ShiftCovariance) {
    const SamplePath z = walk(300, 2, 8);
    const double c = 0.2;
    SamplePath shifted = z;
    for (auto& v : shifted.values()) {
        v += c;
    }
    const SamplePath y = regulator(z);
    const SamplePath ys = regulator(shifted);
    for (std::size_t k = 0; k < z.n_points(); ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_NEAR(ys(k, i), std::max(0.0, y(k, i) - c), 1e-14);
        }
    }
}

TEST(Complementarity, ShrinksUnderRefinementForSmoothInput) {
    auto residual = [](std::size_t n) {
        const TimeGrid g(0.0, 1.0, n);
        SamplePath z(g, 1);
        for (std::size_t k = 0; k < g.n_points(); ++k) {
            const double t = g.time(k);
            z(k, 0) = std::cos(7.3 * t) - 0.5 * t + 0.1 * std::sin(31.0 * t);
        }
        return complementarity_residual(reflect(z));
    };
    double prev = residual(250);
    EXPECT_GT(prev, 0.0);
    for (std::size_t n : {1000u, 4000u}) {
        const double cur = residual(n);
        EXPECT_LE(cur, prev / 2.0);
        prev = cur;
    }
}

TEST(Lipschitz, WitnessCases) {
    const TimeGrid g(0.0, 1.0, 100);
    const SamplePath z1 = from(g, [](double t) { return -t; });
    EXPECT_EQ(lipschitz_witness(z1, z1).ratio_x, 0.0);
    EXPECT_EQ(lipschitz_witness(z1, z1).ratio_y, 0.0);
    const SamplePath z2 = from(g, [](double t) { return 0.05 - t; });
    EXPECT_NEAR(lipschitz_witness(z1, z2).ratio_y, 1.0, 1e-12);
    EXPECT_THROW(lipschitz_witness(z1, SamplePath(TimeGrid(0.0, 2.0, 100), 1)), ShapeError);
}

TEST(Lipschitz, RandomPairsRespectSharpConstants) {
    double max_x = 0.0;
    double max_y = 0.0;
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const LipschitzWitness w = lipschitz_witness(walk(100, 2, s), walk(100, 2, s + 7919, 0.05));
        max_x = std::max(max_x, w.ratio_x);
        max_y = std::max(max_y, w.ratio_y);
    }
    EXPECT_LE(max_y, 1.0 + 1e-12);
    EXPECT_LE(max_x, 2.0 + 1e-12);
}
