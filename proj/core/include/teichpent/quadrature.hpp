#pragma once

// Integration of |Q(x)|^(1/2) dx along boundary arcs whose endpoints carry
// inverse-square-root (pole) or square-root (zero) behaviour.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "teichpent/core.hpp"
#include "teichpent/error.hpp"

namespace teichpent {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 1024;
    int nodes_per_panel = 32;

    /// Throws RangeError when a field violates its bounds.
    void validate() const;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], 1 <= n <= 1024. Rules are built once and
/// shared.
const QuadratureRule& gauss_legendre_rule(int n);

/// Gauss rule for the weight (1-x)^(-1/2) (1+x)^(-1/2) on [-1, 1]; exact for
/// polynomials of degree <= 2n-1. Supports 1 <= n <= 1<<20.
QuadratureRule gauss_jacobi_rule(int n);

/// A simple singular point of a real differential: order -1 (pole) or +1
/// (zero).
struct Singularity {
    double x = 0.0;
    int order = -1;
};

/// Real quadratic differential C * prod (x - s_k)^(m_k) dx^2 with finite
/// singular points; its order at infinity is -4 - sum m_k.
class RealDifferential {
public:
    RealDifferential(double scale, std::vector<Singularity> points);

    /// The differential of a pentagon/direction pair with a merged zero
    /// cancelled against its pole.
    static RealDifferential from(const QuadraticDifferential& qd);

    double scale() const noexcept { return scale_; }
    std::span<const Singularity> points() const noexcept { return points_; }
    int order_at_infinity() const noexcept;

    double operator()(double x) const noexcept;

    /// |Q(x)|^(1/2). Factors for a singular point located exactly at `lo`
    /// (resp. `hi`) use the supplied offsets x - lo (resp. hi - x), which the
    /// caller knows without cancellation.
    double abs_sqrt(double x, double lo, double dlo, double hi, double dhi) const noexcept;
    double abs_sqrt(double x) const noexcept;

    /// sqrt(|C|) * prod sqrt(z - s_k)^(m_k) with every square root cut along
    /// the downward vertical ray, so the product is holomorphic on the closed
    /// upper half-plane minus the singular points. Differs from a branch of
    /// sqrt(Q) by a constant unimodular factor.
    cplx sqrt_branch(cplx z) const noexcept;

private:
    double scale_;
    std::vector<Singularity> points_;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

/// Integral of |Q|^(1/2) over the counterclockwise arc from `from` to `to`
/// on the extended real line. `from == kInfinity` starts the arc at -inf;
/// `to == kInfinity` ends it at +inf; `to < from` (both finite) runs through
/// infinity. Endpoints should be singular points of Q or regular points; a
/// zero of Q interior to the arc is split off.
QuadratureResult integrate_abs_sqrt(const RealDifferential& q, double from, double to,
                                    const QuadratureSpec& spec);

/// Length of the image of a boundary arc, integral of sqrt|qd| over it.
QuadratureResult integrate_side(const QuadraticDifferential& qd, const Arc& arc,
                                const QuadratureSpec& spec);

namespace detail {

template <class T>
struct AdaptiveOutcome {
    T value{};
    double error = 0.0;
    int panels = 0;
};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }

/// Adaptive bisection with Gauss-Legendre panels. A panel is accepted when
/// its two halves agree with the whole to a width-proportional share of the
/// tolerance.
template <class T, class F>
AdaptiveOutcome<T> adaptive_gauss_legendre(F&& f, double a, double b, const QuadratureSpec& spec) {
    AdaptiveOutcome<T> out;
    if (a == b) return out;
    const QuadratureRule& rule = gauss_legendre_rule(spec.nodes_per_panel);
    auto panel = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        T sum{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        return sum * half;
    };

    struct Pending {
        double lo, hi;
        T whole;
        double est;
    };
    std::vector<Pending> stack;
    {
        const T whole = panel(a, b);
        stack.push_back({a, b, whole, magnitude(whole)});
    }
    const double tol = std::max(spec.abs_tol, spec.rel_tol * magnitude(stack.back().whole));
    const double width = std::abs(b - a);
    int leaves = 1;
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const T left = panel(p.lo, mid);
        const T right = panel(mid, p.hi);
        const double diff = magnitude(left + right - p.whole);
        const double share = tol * std::abs(p.hi - p.lo) / width;
        const bool tiny = std::abs(p.hi - p.lo) <= 1e-14 * width;
        if (diff <= share || tiny) {
            out.value += left + right;
            out.error += diff;
            continue;
        }
        ++leaves;
        if (leaves > spec.max_panels) {
            double remaining = diff;
            for (const auto& q : stack) remaining += q.est;
            throw AccuracyError("adaptive quadrature exceeded max_panels", out.error + remaining);
        }
        stack.push_back({p.lo, mid, left, 0.5 * diff});
        stack.push_back({mid, p.hi, right, 0.5 * diff});
    }
    out.panels = leaves;
    return out;
}

}  // namespace detail

}  // namespace teichpent
