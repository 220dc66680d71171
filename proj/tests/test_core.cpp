#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <teichpent/core.hpp>
#include <teichpent/error.hpp>
#include <teichpent/oracles.hpp>

using namespace teichpent;
using std::numbers::pi;

namespace {

// T(z) = ((z-q1)(q3-q5)) / ((z-q5)(q3-q1)) for finite q1, q3, q5.
double cross_ratio_map(const std::array<double, 5>& q, double z) {
    if (std::isinf(z)) return (q[2] - q[4]) / (q[2] - q[0]);
    if (z == q[4]) return kInfinity;
    return ((z - q[0]) * (q[2] - q[4])) / ((z - q[4]) * (q[2] - q[0]));
}

}  // namespace

TEST(Pentagon, GuardRange) {
    EXPECT_NO_THROW(Pentagon(1e-8, 1e8));
    EXPECT_NO_THROW(Pentagon(1 - 1e-8, 1 + 1e-8));
    EXPECT_THROW(Pentagon(2, 3), RangeError);
    EXPECT_THROW(Pentagon(0.5, 1.0), RangeError);
    EXPECT_THROW(Pentagon(0.5, 2e8), RangeError);
    EXPECT_THROW(Pentagon(std::nan(""), 2), RangeError);
    Pentagon p(0.5, 2);
    EXPECT_EQ(p.marks()[0], 0.0);
    EXPECT_EQ(p.mark(Mark::P4), 2.0);
    EXPECT_TRUE(std::isinf(p.mark(Mark::Inf)));
}

TEST(Marks, NamesRoundTrip) {
    for (Mark m : kMarks) EXPECT_EQ(mark_from_name(mark_name(m)), m);
    EXPECT_FALSE(mark_from_name("p3").has_value());
}

TEST(Normalize, AlreadyNormalized) {
    auto n = normalize_pentagon(BoundaryQuintuple({0, 0.5, 1, 2, kInfinity}));
    EXPECT_DOUBLE_EQ(n.pentagon.p2(), 0.5);
    EXPECT_DOUBLE_EQ(n.pentagon.p4(), 2.0);
    for (double x : {-3.0, 0.25, 7.0}) EXPECT_NEAR(n.map(x), x, 1e-15);
    EXPECT_TRUE(std::isinf(n.map(kInfinity)));
}

TEST(Normalize, AffineShift) {
    auto n = normalize_pentagon(BoundaryQuintuple({-1, 0, 1, 3, kInfinity}));
    EXPECT_NEAR(n.pentagon.p2(), 0.5, 1e-15);
    EXPECT_NEAR(n.pentagon.p4(), 2.0, 1e-15);
    EXPECT_NEAR(n.map(5.0), 3.0, 1e-15);
}

TEST(Normalize, CyclicRelabelMatchesDirectEvaluation) {
    const std::array<double, 5> q{0.5, 1, 2, kInfinity, 0};
    auto n = normalize_pentagon(BoundaryQuintuple(q));
    EXPECT_NEAR(n.pentagon.p2(), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(n.pentagon.p4(), 4.0 / 3.0, 1e-15);
    std::array<double, 5> image{};
    for (int i = 0; i < 5; ++i) {
        image[i] = n.map(q[i]);
        const double direct = cross_ratio_map(q, q[i]);
        if (std::isinf(direct)) {
            EXPECT_TRUE(std::isinf(image[i]));
        } else {
            EXPECT_NEAR(image[i], direct, 1e-14);
        }
    }
    EXPECT_EQ(image[0], 0.0);
    EXPECT_LT(image[0], image[1]);
    EXPECT_LT(image[1], image[2]);
    EXPECT_LT(image[2], image[3]);
}

TEST(Normalize, Idempotent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.95), v(1.05, 30);
    for (int k = 0; k < 20; ++k) {
        const double p2 = u(rng), p4 = v(rng);
        auto n = normalize_pentagon(BoundaryQuintuple({0, p2, 1, p4, kInfinity}));
        EXPECT_NEAR(n.pentagon.p2(), p2, 1e-14);
        EXPECT_NEAR(n.pentagon.p4(), p4, 1e-13 * p4);
        for (double x : {-2.0, 0.3, 4.0}) EXPECT_NEAR(n.map(x), x, 1e-13 * (1 + std::abs(x)));
    }
}

TEST(Normalize, Errors) {
    EXPECT_THROW(BoundaryQuintuple({0, 1, 0.5, 2, kInfinity}), OrderingError);
    EXPECT_THROW(BoundaryQuintuple({0, 2, 1, 3, 4}), OrderingError);
    EXPECT_THROW(BoundaryQuintuple({0, 0.5, 0.5, 2, kInfinity}), DegeneracyError);
    EXPECT_THROW(BoundaryQuintuple({kInfinity, 0, 1, 2, -kInfinity}), DegeneracyError);
    EXPECT_NO_THROW(BoundaryQuintuple({3, kInfinity, -2, 0, 1}));
}

TEST(Direction, ReducedToPeriod) {
    EXPECT_NEAR(Direction(-0.25).phi(), 2 * pi - 0.25, 1e-15);
    EXPECT_NEAR(Direction(7.0).phi(), 7.0 - 2 * pi, 1e-15);
    EXPECT_GE(Direction(-1e-300).phi(), 0.0);
    EXPECT_LT(Direction(-1e-300).phi(), 2 * pi);
    EXPECT_NEAR(angle_difference(Direction(0.1), Direction(2 * pi - 0.1)), 0.2, 1e-15);
}

TEST(QdZero, Examples) {
    EXPECT_NEAR(qd_zero(Direction(pi / 4)), -1.0, 1e-15);
    EXPECT_NEAR(qd_zero(Direction(pi / 2)), 0.0, 1e-15);
    EXPECT_TRUE(std::isinf(qd_zero(Direction(0))));
}

TEST(QuadraticDifferential, MergeClassification) {
    Pentagon p(0.5, 2);
    EXPECT_EQ(QuadraticDifferential(p, Direction(0)).merged_mark(), Mark::Inf);
    EXPECT_EQ(QuadraticDifferential(p, Direction(pi / 2)).merged_mark(), Mark::Zero);
    EXPECT_EQ(QuadraticDifferential(p, Direction(pi / 4)).merged_mark(), std::nullopt);
    EXPECT_EQ(QuadraticDifferential(p, Direction(std::atan2(1.0, -1.0))).merged_mark(), Mark::One);
    EXPECT_EQ(QuadraticDifferential(p, Direction(1e-12)).merged_mark(), Mark::Inf);
    EXPECT_FALSE(QuadraticDifferential(p, Direction(1e-6)).degenerate());
}

TEST(QdEval, SignPattern) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(0));
    for (double x : {0.1, 0.25, 0.45}) {
        const cplx v = qd_eval(qd, cplx(x, 0));
        EXPECT_LT(v.real(), 0.0);
        EXPECT_EQ(v.imag(), 0.0);
    }
    for (double x : {2.5, 10.0, 1e4}) EXPECT_GT(qd_eval(qd, cplx(x, 0)).real(), 0.0);
}

TEST(QdEval, MatchesDirectSubstitution) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(pi / 4));
    const cplx got = qd_eval(qd, cplx(0, 1));
    const cplx ref = direct_qd_value(0.5, 2, pi / 4, cplx(0, 1));
    EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-15 * std::abs(ref));
}

TEST(QdEval, PolesThrow) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(pi / 4));
    for (double x : {0.0, 0.5, 1.0, 2.0}) EXPECT_THROW(qd_eval(qd, cplx(x, 0)), PoleError);
}

TEST(BoundaryArcs, GenericPartition) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(pi / 4));
    auto arcs = boundary_arcs(qd);
    ASSERT_EQ(arcs.size(), 6u);
    const std::array<double, 6> starts{0, 0.5, 1, 2, kInfinity, -1};
    for (std::size_t i = 0; i < 6; ++i) {
        if (std::isinf(starts[i])) {
            EXPECT_TRUE(std::isinf(arcs[i].from.x));
        } else {
            EXPECT_NEAR(arcs[i].from.x, starts[i], 1e-15);
        }
        EXPECT_NE(arcs[i].axis, arcs[(i + 1) % 6].axis);
    }
    EXPECT_TRUE(arcs[5].from.is_zero);
}

TEST(BoundaryArcs, DegeneratePartition) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(0));
    auto arcs = boundary_arcs(qd);
    ASSERT_EQ(arcs.size(), 5u);
    EXPECT_TRUE(arcs[3].to.merged());
    EXPECT_EQ(arcs[3].axis, arcs[4].axis);
    for (int i = 0; i < 3; ++i) EXPECT_NE(arcs[i].axis, arcs[i + 1].axis);
}

TEST(BoundaryArcs, FlagsMatchMidpointSign) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.02, 0.98), v(0.01, 4.0), a(0, 2 * pi);
    for (int k = 0; k < 50; ++k) {
        QuadraticDifferential qd(Pentagon(u(rng), 1.02 + std::expm1(v(rng))),
                                 Direction(a(rng)));
        auto arcs = boundary_arcs(qd);
        EXPECT_EQ(arcs.size(), qd.degenerate() ? 5u : 6u);
        for (const Arc& arc : arcs) {
            double lo = arc.from.x, hi = arc.to.x, mid;
            if (std::isinf(lo)) mid = hi - 1 - std::abs(hi);
            else if (std::isinf(hi)) mid = lo + 1 + std::abs(lo);
            else if (hi < lo) mid = lo + 1 + std::abs(lo);  // through infinity
            else mid = 0.5 * (lo + hi);
            const double sign = qd(mid);
            EXPECT_EQ(arc.axis, sign > 0 ? Axis::H : Axis::V);
        }
    }
}

TEST(HexagonClass, LShapeRoundTrip) {
    LShape l{1, 1, 2, 1};
    HexagonClass h = hexagon_from_l_shape(l);
    EXPECT_FALSE(h.degenerate());
    LShape back = l_shape(h);
    EXPECT_NEAR(back.a / back.A, 0.5, 1e-15);
    EXPECT_NEAR(back.b / back.A, 0.5, 1e-15);
    EXPECT_NEAR(back.B / back.A, 0.5, 1e-15);
    auto v = h.vertices();
    ASSERT_EQ(v.size(), 6u);
    EXPECT_EQ(v[0], cplx(0, 0));
    EXPECT_THROW(hexagon_from_l_shape({2, 1, 1, 1}), ShapeError);
}

TEST(HexagonClass, EqualUpToScaleNotAxisFlip) {
    HexagonClass h = hexagon_from_l_shape({1, 1, 2, 1});
    HexagonClass scaled = h;
    for (double& s : scaled.segments) s *= 3;
    EXPECT_TRUE(hexagon_equal(h, scaled, 1e-12));
    HexagonClass flipped = h;
    flipped.first_axis = other(h.first_axis);
    EXPECT_FALSE(hexagon_equal(h, flipped, 1e-12));
    HexagonClass bent = h;
    bent.segments[0] *= 1.01;
    EXPECT_FALSE(hexagon_equal(h, bent, 1e-6));
}

TEST(Chordal, DistanceBasics) {
    EXPECT_EQ(chordal_distance(kInfinity, -kInfinity), 0.0);
    EXPECT_NEAR(chordal_distance(0, kInfinity), 1.0, 1e-15);
    EXPECT_NEAR(chordal_distance(1, -1), 1.0, 1e-15);
}
