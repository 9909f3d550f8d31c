#include <gtest/gtest.h>

#include <random>

#include "dob/billiard.hpp"
#include "dob/catalog.hpp"

using namespace dob;

TEST(RateVector, Validation) {
    EXPECT_THROW(RateVector::uniform(4, 1.2), InvalidInput);
    EXPECT_THROW(RateVector::uniform(4, 0.0), InvalidInput);
    EXPECT_THROW(RateVector::uniform(4, 1.0), InvalidInput);
    EXPECT_THROW(RateVector::uniform(4, NAN), InvalidInput);
    EXPECT_THROW(RateVector(std::vector<double>{}), InvalidInput);
    EXPECT_NO_THROW(RateVector::uniform(4, 1.0, RateVector::Regime::Conservative));
    EXPECT_THROW(RateVector::uniform(4, 1.01, RateVector::Regime::Conservative), InvalidInput);
    const RateVector r({0.3, 0.7, 0.5});
    EXPECT_DOUBLE_EQ(r.norm(), 0.7);
    EXPECT_FALSE(r.is_uniform());
    EXPECT_TRUE(RateVector::uniform(3, 0.4).is_uniform());
    EXPECT_THROW(Billiard(Polygon::unit_square(), RateVector::uniform(3, 0.5)), InvalidInput);
}

TEST(Billiard, StepIsTheContractedReflection) {
    const Polygon P = Polygon::regular(5);
    const Billiard B(P, RateVector({0.2, 0.4, 0.6, 0.8, 0.5}));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        const Point z(U(rng), U(rng));
        const Location loc = B.locate(z);
        if (!loc.in_cone()) continue;
        const double l = B.rates()[loc.cone];
        const Point w = P.vertex(loc.cone);
        // T(z) - w = -l (z - w)
        EXPECT_LT(std::abs((B.step(z) - w) + l * (z - w)), 1e-12);
    }
}

TEST(Billiard, ConservativeStepIsPointReflection) {
    const Polygon P = Polygon::unit_square();
    const Billiard B(P, RateVector::uniform(4, 1.0, RateVector::Regime::Conservative));
    const Point z(2.3, 0.7);
    const int j = B.locate(z).cone;
    EXPECT_LT(std::abs(0.5 * (z + B.step(z)) - P.vertex(j)), 1e-15);
}

TEST(Billiard, StepErrors) {
    const Billiard B(Polygon::unit_square(), RateVector::uniform(4, 0.5));
    EXPECT_THROW(B.step({0.5, -0.5}), InsidePolygon);
    EXPECT_THROW(B.step({0.0, 3.0}), SingularHit);
    EXPECT_THROW(B.iterate({0.5, -0.5}), InsidePolygon);
    const OrbitRecord r = B.iterate({0.0, 3.0});
    EXPECT_EQ(r.terminal, OrbitRecord::Terminal::HitSingular);
    EXPECT_EQ(r.terminal_step, 0);
    const Billiard S(Polygon::segment(), RateVector::uniform(2, 0.5));
    EXPECT_THROW(S.iterate({3.0, 1.0}), InvalidInput);
}

TEST(Words, PrimitiveRootAndRotation) {
    EXPECT_EQ(primitive_root({0, 1, 0, 1}), (SymbolWord{0, 1}));
    EXPECT_EQ(primitive_root({0, 1, 2}), (SymbolWord{0, 1, 2}));
    EXPECT_EQ(primitive_root({2, 2, 2}), (SymbolWord{2}));
    EXPECT_EQ(least_rotation({2, 0, 1}), 1u);
    EXPECT_EQ(rotate_word({2, 0, 1}, 1), (SymbolWord{0, 1, 2}));
    EXPECT_EQ(word_string({0, 3, 1}), "0.3.1");
}

TEST(Segment, TwoCycleFromAlgebra) {
    // With p > 1 mapped through w_0 = -1 to -p and back through w_1 = 1:
    // -p = -l p - (1 + l)  =>  p = (1 + l) / (1 - l).
    for (double l : {0.1, 0.5, 0.9}) {
        const Billiard B(Polygon::segment(), RateVector::uniform(2, l));
        const OrbitRecord r = B.iterate({50.0, 0.0});
        ASSERT_EQ(r.terminal, OrbitRecord::Terminal::Converged);
        ASSERT_EQ(r.cycle->period(), 2);
        const double p = (1 + l) / (1 - l);
        for (const Point& q : r.cycle->points) EXPECT_NEAR(std::abs(q.real()), p, 1e-12);
        EXPECT_NEAR(r.cycle->points[0].real() + r.cycle->points[1].real(), 0.0, 1e-12);
    }
}

TEST(IterateFormula, MatchesRepeatedApplication) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    std::uniform_int_distribution<int> len(1, 60);
    for (const Polygon& P : {Polygon::unit_square(), Polygon::regular(7), Polygon::equilateral_triangle()}) {
        std::vector<double> rates;
        for (int i = 0; i < P.size(); ++i) rates.push_back(U(rng));
        const Billiard B(P, RateVector(rates));
        std::uniform_int_distribution<int> sym(0, P.size() - 1);
        for (int t = 0; t < 300; ++t) {
            SymbolWord w(static_cast<std::size_t>(len(rng)));
            for (int& s : w) s = sym(rng);
            const Point z(U(rng) * 10, -U(rng) * 3);
            Point x = z;
            for (int s : w) x = B.apply(s, x);
            EXPECT_LT(std::abs(iterate_formula(z, w, B) - x), 1e-12 * std::max(1.0, std::abs(x)));
            EXPECT_LT(std::abs(word_map(w, B)(z) - x), 1e-12 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST(Cycles, FromWordValidatesRealizability) {
    const Billiard B(Polygon::unit_square(), RateVector::uniform(4, 0.5));
    const auto c = cycle_from_word({2, 3, 0, 1}, B);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->word, (SymbolWord{0, 1, 2, 3}));
    Point x = c->points[0];
    for (int s : c->word) x = B.apply(s, x);
    EXPECT_LT(std::abs(x - c->points[0]), 1e-12);
    // Visiting a single cone forever is impossible: the fixed point is w_0.
    EXPECT_FALSE(cycle_from_word({0}, B));
    EXPECT_THROW(periodic_point_from_word({7}, B), InvalidInput);
}

TEST(Cycles, FagnanoOrbitVisitsVerticesInOrder) {
    for (int k : {3, 4, 5, 8}) {
        const Billiard B(Polygon::regular(k), RateVector::uniform(k, 0.6));
        const Attractor a = fagnano_solve(B);
        ASSERT_EQ(a.period(), k);
        EXPECT_FALSE(a.degenerate);
        for (int i = 0; i < k; ++i)
            EXPECT_LT(std::abs(B.apply(i, a.cycle.points[i]) - a.cycle.points[(i + 1) % k]), 1e-12);
        ASSERT_TRUE(a.rotation);
        EXPECT_EQ(*a.rotation, (Rational{1, k}));
    }
}

TEST(Iterate, ConvergesAndIsDeterministic) {
    const Billiard B(Polygon::unit_square(), RateVector::uniform(4, 0.5));
    const OrbitRecord a = B.iterate({7.3, 2.1});
    const OrbitRecord b = B.iterate({7.3, 2.1});
    ASSERT_EQ(a.terminal, OrbitRecord::Terminal::Converged);
    EXPECT_EQ(a.cycle->word, b.cycle->word);
    EXPECT_EQ(a.steps, b.steps);
    EXPECT_EQ(a.points.size(), static_cast<std::size_t>(a.steps + 1));
    EXPECT_EQ(a.cycle->period(), 4);
    // Brute force: the last point returns to itself after one period.
    Point x = a.last;
    for (int i = 0; i < 4; ++i) x = B.step(x);
    EXPECT_LT(std::abs(x - a.last), 1e-8);
}

TEST(InvariantBall, ForwardInvariantOnSamples) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.05, 0.97);
    int escapes = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 3 + trial % 6;
        std::vector<double> rates;
        for (int i = 0; i < k; ++i) rates.push_back(U(rng));
        const Billiard B(Polygon::regular(k, 0.5 + U(rng)), RateVector(rates));
        const InvariantBall K = B.invariant_ball();
        for (const Point& z : random_seeds(B, 500, 100 + trial)) {
            const Point t = B.step(z);
            if (!K.contains(t, 1e-12)) ++escapes;
        }
    }
    EXPECT_EQ(escapes, 0);
}

TEST(Rotation, UndefinedThroughCentroid) {
    const Polygon P = Polygon::unit_square();
    const std::vector<Point> pts{{-1, 0.5}, {2, -1.5}};
    EXPECT_THROW(rotation_number(pts, P), UndefinedWinding);
}
