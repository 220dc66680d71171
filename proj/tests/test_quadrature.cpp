#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include <teichpent/core.hpp>
#include <teichpent/error.hpp>
#include <teichpent/oracles.hpp>
#include <teichpent/quadrature.hpp>

using namespace teichpent;
using std::numbers::pi;

namespace {

QuadratureSpec tight() {
    QuadratureSpec s;
    s.rel_tol = 1e-14;
    s.abs_tol = 1e-16;
    s.max_panels = 4096;
    return s;
}

// 1/sqrt(x(1-x)) on [0,1].
RealDifferential pole_pole_model() { return RealDifferential(1.0, {{0.0, -1}, {1.0, -1}}); }

// 1/sqrt((1-x^2)(1-k^2 x^2)) on [0,1], written as k^-2 ((x+1)(x-1)(x+1/k)(x-1/k))^-1.
RealDifferential elliptic_model(double k) {
    if (k == 0.0) return RealDifferential(1.0, {{-1.0, -1}, {1.0, -1}});
    return RealDifferential(1.0 / (k * k), {{-1.0 / k, -1}, {-1.0, -1}, {1.0, -1}, {1.0 / k, -1}});
}

}  // namespace

TEST(QuadratureSpec, Validation) {
    QuadratureSpec s;
    EXPECT_NO_THROW(s.validate());
    s.rel_tol = 0;
    EXPECT_THROW(s.validate(), RangeError);
    s = {};
    s.max_panels = 0;
    EXPECT_THROW(s.validate(), RangeError);
    s = {};
    s.nodes_per_panel = 1;
    EXPECT_THROW(s.validate(), RangeError);
}

TEST(GaussJacobi, SingleNode) {
    auto r = gauss_jacobi_rule(1);
    ASSERT_EQ(r.nodes.size(), 1u);
    EXPECT_EQ(r.nodes[0], 0.0);
    EXPECT_NEAR(r.weights[0], pi, 1e-15);
}

TEST(GaussJacobi, WeightsSumToPi) {
    for (int n : {1, 2, 3, 7, 32, 1000}) {
        auto r = gauss_jacobi_rule(n);
        double sum = 0;
        for (double w : r.weights) sum += w;
        EXPECT_NEAR(sum, pi, 1e-13) << n;
    }
    EXPECT_THROW(gauss_jacobi_rule(0), RangeError);
}

TEST(GaussJacobi, EvenMomentsFromRecursion) {
    // Moments of the Chebyshev weight: m0 = pi, m_{2k} = m_{2k-2} (2k-1)/(2k).
    auto r = gauss_jacobi_rule(8);
    double moment = pi;
    for (int k = 1; k <= 7; ++k) {
        moment *= (2.0 * k - 1.0) / (2.0 * k);
        double sum = 0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::pow(r.nodes[i], 2 * k);
        EXPECT_NEAR(sum, moment, 1e-14) << "x^" << 2 * k;
    }
    // x^6 explicitly: 5 pi / 16.
    double x6 = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) x6 += r.weights[i] * std::pow(r.nodes[i], 6);
    EXPECT_NEAR(x6, 5 * pi / 16, 1e-14);
}

TEST(GaussLegendre, PolynomialExactness) {
    for (int n : {2, 5, 16, 32}) {
        const auto& r = gauss_legendre_rule(n);
        const int deg = 2 * n - 2;
        double sum = 0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::pow(r.nodes[i], deg);
        EXPECT_NEAR(sum, 2.0 / (deg + 1), 1e-14) << n;
    }
}

TEST(Integrate, PolePoleModelIsPi) {
    auto r = integrate_abs_sqrt(pole_pole_model(), 0, 1, {});
    EXPECT_NEAR(r.value, pi, 1e-12);
    EXPECT_GE(r.error, 0.0);
}

TEST(Integrate, EllipticModel) {
    EXPECT_NEAR(integrate_abs_sqrt(elliptic_model(0), 0, 1, {}).value, pi / 2, 1e-13);
    const double k6 = integrate_abs_sqrt(elliptic_model(0.6), 0, 1, tight()).value;
    EXPECT_NEAR(k6, elliptic_K(0.6), 1e-12);
    for (int j = 1; j <= 9; ++j) {
        const double k = 0.1 * j;
        EXPECT_NEAR(integrate_abs_sqrt(elliptic_model(k), 0, 1, tight()).value, elliptic_K(k),
                    1e-11 * elliptic_K(k)) << k;
    }
}

TEST(Integrate, DoublingNodesNeverRaisesErrorEstimate) {
    for (const RealDifferential& q : {pole_pole_model(), elliptic_model(0.6), elliptic_model(0.95)}) {
        double previous = kInfinity;
        for (int n : {4, 8, 16, 32, 64}) {
            QuadratureSpec s;
            s.nodes_per_panel = n;
            const QuadratureResult r = integrate_abs_sqrt(q, 0, 1, s);
            // Once the estimate reaches rounding level it only reflects summation noise.
            const double floor = 64 * std::numeric_limits<double>::epsilon() * r.value;
            EXPECT_LE(r.error, std::max(previous, floor)) << n;
            previous = std::max(r.error, floor);
        }
    }
}

TEST(Integrate, SplitInvariance) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(pi / 4));
    RealDifferential q = RealDifferential::from(qd);
    const struct { double lo, hi, cut; } cases[] = {
        {0, 0.5, 0.2}, {0.5, 1, 0.9}, {1, 2, 1.001}, {-1, 0, -0.5}, {2, -1, 40.0}, {2, -1, -7.0},
    };
    for (auto c : cases) {
        const double whole = integrate_abs_sqrt(q, c.lo, c.hi, tight()).value;
        const double parts = integrate_abs_sqrt(q, c.lo, c.cut, tight()).value +
                             integrate_abs_sqrt(q, c.cut, c.hi, tight()).value;
        EXPECT_NEAR(parts, whole, 1e-12 * whole) << c.lo << " " << c.hi << " @ " << c.cut;
    }
}

TEST(Integrate, InteriorZeroIsSplitOff) {
    // (x + 1) / (x (x - 2)) on [-3, -0.2] has a zero at -1 inside the interval.
    RealDifferential q(1.0, {{-1.0, 1}, {0.0, -1}, {2.0, -1}});
    const double whole = integrate_abs_sqrt(q, -3, -0.2, tight()).value;
    const double parts = integrate_abs_sqrt(q, -3, -1, tight()).value +
                         integrate_abs_sqrt(q, -1, -0.2, tight()).value;
    EXPECT_NEAR(whole, parts, 1e-12 * whole);
}

TEST(Integrate, MoebiusTransportMatchesTruncationOracle) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(0));
    QuadratureSpec s;
    for (const Arc& arc : boundary_arcs(qd)) {
        const double main = integrate_side(qd, arc, s).value;
        const OracleReport ref = brute_side_length(qd, arc);
        EXPECT_NEAR(main, ref.value, s.rel_tol * ref.value + ref.est_error)
            << arc.from.x << " -> " << arc.to.x;
    }
}

TEST(Integrate, NearCollisionAgreesWithOracle) {
    Pentagon p(0.5, 2);
    // Zero at 1 + 1e-7: well outside the merge tolerance but close to the pole.
    const double zero = 1 + 1e-7;
    QuadraticDifferential qd(p, Direction(std::atan2(1.0, -zero)));
    ASSERT_FALSE(qd.degenerate());
    for (const Arc& arc : boundary_arcs(qd)) {
        const double main = integrate_side(qd, arc, {}).value;
        const double ref = brute_side_length(qd, arc).value;
        EXPECT_NEAR(main, ref, 1e-8 * ref) << arc.from.x << " -> " << arc.to.x;
    }
}

TEST(Integrate, PanelBudgetExhaustionReportsEstimate) {
    QuadratureSpec s;
    s.max_panels = 1;
    s.nodes_per_panel = 2;
    s.rel_tol = 1e-15;
    s.abs_tol = 1e-300;
    try {
        integrate_abs_sqrt(elliptic_model(0.999), 0, 1, s);
        FAIL() << "expected AccuracyError";
    } catch (const AccuracyError& e) {
        EXPECT_GT(e.estimate(), 0.0);
    }
}

TEST(RealDifferential, OrderAtInfinity) {
    QuadraticDifferential qd(Pentagon(0.5, 2), Direction(pi / 4));
    EXPECT_EQ(RealDifferential::from(qd).order_at_infinity(), -1);
    QuadraticDifferential rect(Pentagon(0.5, 2), Direction(0));
    EXPECT_EQ(RealDifferential::from(rect).order_at_infinity(), 0);
    QuadraticDifferential top(Pentagon(0.5, 2), Direction(pi / 2));
    auto q = RealDifferential::from(top);
    EXPECT_EQ(q.points().size(), 3u);
    EXPECT_EQ(q.order_at_infinity(), -1);
}
