#include <gtest/gtest.h>

#include <random>

#include "dob/return_maps.hpp"
#include "dob/skew_product.hpp"

using namespace dob;

namespace {

void expect_same_map(const ComplexAffine& a, const std::function<Point(Point)>& g) {
    for (Point z : {Point(0.3, 0.1), Point(-2.0, 5.0), Point(10.0, -4.0)}) EXPECT_LT(std::abs(a(z) - g(z)), 1e-12);
}

}  // namespace

TEST(ReducedMap, RequiresRegularTableAndEqualRates) {
    EXPECT_THROW(ReducedMap(Billiard(Polygon::from_vertices({{0, 0}, {2, 0}, {2, 1}, {0, 1}}), RateVector::uniform(4, 0.5))),
                 NotRegular);
    EXPECT_THROW(ReducedMap(Billiard(Polygon::regular(4), RateVector({0.5, 0.5, 0.5, 0.6}))), NotRegular);
    EXPECT_THROW(ReducedMap(Billiard(Polygon::segment(), RateVector::uniform(2, 0.5))), NotRegular);
    EXPECT_NO_THROW(ReducedMap(Billiard(Polygon::unit_square(), RateVector::uniform(4, 0.5))));
}

TEST(ReducedMap, TriangleBranchesAreTheClosedForms) {
    const double l = 0.8;
    const ReducedMap R(Billiard(Polygon::equilateral_triangle(), RateVector::uniform(3, l)));
    EXPECT_EQ(R.active_branches(), (std::vector<int>{1, 2}));
    expect_same_map(R.branch(1).map, [&](Point z) { return triangle::f_C(z, l); });
    expect_same_map(R.branch(2).map, [&](Point z) { return triangle::f_E(z, l); });
}

TEST(ReducedMap, SquareBranchesAreTheClosedForms) {
    const double l = 0.7;
    const ReducedMap R(Billiard(Polygon::unit_square(), RateVector::uniform(4, l)));
    EXPECT_EQ(R.active_branches(), (std::vector<int>{1, 2}));
    EXPECT_EQ(R.expected_branch_count(), 3);
    expect_same_map(R.branch(1).map, [&](Point z) { return square::f_B(z, l); });
    expect_same_map(R.branch(2).map, [&](Point z) { return square::f_C(z, l); });
}

// Odd k realizes [k/2] + 1 cocycle values. For even k only sigma = 1..k/2
// occur, one fewer than [k/2] + 1.
TEST(ReducedMap, BranchCountOfLargerPolygons) {
    for (int k = 3; k <= 12; ++k) {
        const ReducedMap R(Billiard(Polygon::regular(k), RateVector::uniform(k, 0.9)));
        EXPECT_EQ(static_cast<int>(R.active_branches().size()), (k + 1) / 2) << "k = " << k;
    }
}

TEST(ReducedMap, ProjectionConjugatesTToF) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-15, 15);
    for (int k : {3, 4, 5, 6, 9}) {
        const Billiard B(Polygon::regular(k), RateVector::uniform(k, 0.75));
        const ReducedMap R(B);
        int checked = 0;
        for (int i = 0; i < 5000; ++i) {
            const Point z(U(rng), U(rng));
            if (!B.locate(z).in_cone()) continue;
            const Point t = B.step(z);
            if (!B.locate(t).in_cone()) continue;
            const Point pz = R.project(z);
            if (!B.locate(pz).in_cone()) continue;
            EXPECT_LT(std::abs(R.project(t) - R.f(pz)), 1e-10 * std::max(1.0, std::abs(t)));
            ++checked;
        }
        EXPECT_GT(checked, 1000);
    }
}

TEST(Lift, GcdFormula) {
    EXPECT_EQ(lift_periods(1, 1, 3).period, 3);
    EXPECT_EQ(lift_periods(1, 1, 3).orbit_count, 1);
    EXPECT_EQ(lift_periods(2, 2, 4).period, 4);
    EXPECT_EQ(lift_periods(2, 2, 4).orbit_count, 2);
    EXPECT_EQ(lift_periods(3, 0, 6).period, 3);
    EXPECT_THROW(lift_periods(0, 1, 3), InvalidInput);
    EXPECT_THROW(lift_periods(1, 3, 3), InvalidInput);
}

TEST(Lift, BruteForcePeriodsMatchGcdFormula) {
    for (int k : {3, 4}) {
        for (double l : {0.3, 0.6, 0.95}) {
            const Billiard B(k == 3 ? Polygon::equilateral_triangle() : Polygon::unit_square(), RateVector::uniform(k, l));
            const ReducedMap R(B);
            const auto cycles = R.find_cycles(300, 21);
            ASSERT_FALSE(cycles.empty());
            for (const FCycle& c : cycles) {
                const Lift lift = lift_periods(c.period(), c.sigma_sum, k);
                const auto p = brute_force_period(B, c.points[0], 10 * lift.period, 1e-9);
                ASSERT_TRUE(p);
                EXPECT_EQ(*p, lift.period) << "k=" << k << " l=" << l;
            }
        }
    }
}
