#include <gtest/gtest.h>

#include "rdsde/error.hpp"
#include "rdsde/path.hpp"

using namespace rdsde;

TEST(TimeGrid, PointsAndEndpoint) {
    const TimeGrid g(-1.0, 2.0, 3000);
    EXPECT_EQ(g.n_points(), 3001u);
    EXPECT_DOUBLE_EQ(g.step(), 1e-3);
    EXPECT_EQ(g.time(0), -1.0);
    EXPECT_EQ(g.time(3000), 2.0);
    EXPECT_EQ(g.index_of(0.0), 1000u);
    EXPECT_THROW(g.index_of(0.0005), DomainError);
}

TEST(TimeGrid, RejectsDegenerate) {
    EXPECT_THROW(TimeGrid(1.0, 1.0, 4), DomainError);
    EXPECT_THROW(TimeGrid(0.0, 1.0, 0), DomainError);
}

TEST(TimeGrid, SliceAndCoarsen) {
    const TimeGrid g(0.0, 1.0, 8);
    const TimeGrid s = g.slice(2, 6);
    EXPECT_EQ(s.n_steps(), 4u);
    EXPECT_DOUBLE_EQ(s.t0(), 0.25);
    EXPECT_DOUBLE_EQ(s.step(), g.step());
    EXPECT_EQ(g.coarsen(4).n_steps(), 2u);
    EXPECT_THROW(g.coarsen(3), ShapeError);
}

TEST(SamplePath, RowMajorAccess) {
    SamplePath p(TimeGrid(0.0, 1.0, 2), 2, {0, 1, 2, 3, 4, 5});
    EXPECT_EQ(p(1, 1), 3.0);
    EXPECT_EQ(p.column(0), (std::vector<double>{0, 2, 4}));
    EXPECT_EQ(p.component(1)(2, 0), 5.0);
    EXPECT_THROW(SamplePath(TimeGrid(0.0, 1.0, 2), 2, {1.0}), ShapeError);
}

TEST(SamplePath, SubsampleAndRestrict) {
    SamplePath p(TimeGrid(0.0, 1.0, 4), 1, {0, 1, 2, 3, 4});
    const SamplePath s = p.subsample(2);
    EXPECT_EQ(s.n_points(), 3u);
    EXPECT_EQ(s(2, 0), 4.0);
    const SamplePath r = p.restrict(0.25, 0.75);
    EXPECT_EQ(r.n_points(), 3u);
    EXPECT_EQ(r(0, 0), 1.0);
}

TEST(SamplePath, SupDistance) {
    SamplePath a(TimeGrid(0.0, 1.0, 2), 1, {0, -3, 1});
    SamplePath b(TimeGrid(0.0, 1.0, 2), 1, {0, 0, 0});
    EXPECT_EQ(sup_distance(a, b), 3.0);
    EXPECT_EQ(sup_norm(a), 3.0);
    SamplePath c(TimeGrid(0.0, 2.0, 2), 1);
    EXPECT_THROW(sup_distance(a, c), ShapeError);
}

TEST(SamplePath, FiniteCheck) {
    SamplePath a(TimeGrid(0.0, 1.0, 2), 1);
    EXPECT_TRUE(a.all_finite());
    a(1, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_FALSE(a.all_finite());
}
