#include "teichpent/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace teichpent {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw RangeError("quadrature tolerances must be positive");
    if (max_panels < 1) throw RangeError("max_panels must be >= 1");
    if (nodes_per_panel < 2 || nodes_per_panel > 1024) throw RangeError("nodes_per_panel must lie in [2, 1024]");
}

namespace {

QuadratureRule build_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (x * p0 - p1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre_rule(int n) {
    if (n < 1 || n > 1024) throw RangeError("Gauss-Legendre order out of range");
    static std::array<std::unique_ptr<const QuadratureRule>, 1025> table;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto& slot = table[static_cast<std::size_t>(n)];
    if (!slot) slot = std::make_unique<const QuadratureRule>(build_legendre(n));
    return *slot;
}

QuadratureRule gauss_jacobi_rule(int n) {
    if (n < 1 || n > (1 << 20)) throw RangeError("Gauss-Jacobi order out of range");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.assign(static_cast<std::size_t>(n), std::numbers::pi / n);
    for (int k = 0; k < n; ++k) {
        // Ascending order; the middle node of an odd rule is exactly 0.
        const int j = n - k;
        rule.nodes[static_cast<std::size_t>(k)] =
            (2 * j - 1 == n) ? 0.0 : std::cos((2.0 * j - 1.0) * std::numbers::pi / (2.0 * n));
    }
    return rule;
}

RealDifferential::RealDifferential(double scale, std::vector<Singularity> points)
    : scale_(scale), points_(std::move(points)) {
    if (!(scale != 0.0) || !std::isfinite(scale)) throw RangeError("differential scale must be finite and nonzero");
    for (const auto& s : points_) {
        if (!std::isfinite(s.x)) throw RangeError("singular points must be finite");
        if (s.order != 1 && s.order != -1) throw RangeError("singular points must be simple");
    }
}

RealDifferential RealDifferential::from(const QuadraticDifferential& qd) {
    const Pentagon& p = qd.pentagon();
    const double phi = qd.direction().phi();
    const auto merged = qd.merged_mark();
    std::vector<Singularity> pts;
    for (Mark m : {Mark::Zero, Mark::P2, Mark::One, Mark::P4}) {
        if (merged == m) continue;
        pts.push_back({p.mark(m), -1});
    }
    if (merged == Mark::Inf) return RealDifferential(std::cos(phi), std::move(pts));
    if (!merged) pts.push_back({qd.zero(), 1});
    return RealDifferential(std::sin(phi), std::move(pts));
}

int RealDifferential::order_at_infinity() const noexcept {
    int sum = 0;
    for (const auto& s : points_) sum += s.order;
    return -4 - sum;
}

double RealDifferential::operator()(double x) const noexcept {
    double v = scale_;
    for (const auto& s : points_) v *= s.order > 0 ? (x - s.x) : 1.0 / (x - s.x);
    return v;
}

double RealDifferential::abs_sqrt(double x, double lo, double dlo, double hi, double dhi) const noexcept {
    double v = std::abs(scale_);
    for (const auto& s : points_) {
        const double f = s.x == lo ? dlo : (s.x == hi ? dhi : std::abs(x - s.x));
        v *= s.order > 0 ? f : 1.0 / f;
    }
    return std::sqrt(v);
}

double RealDifferential::abs_sqrt(double x) const noexcept {
    return std::sqrt(std::abs((*this)(x)));
}

namespace {

// Square root with its cut on the downward vertical ray: arg in (-pi/2, 3pi/2].
cplx sqrt_up(cplx w) {
    static const cplx rot = std::polar(1.0, std::numbers::pi / 4.0);
    return rot * std::sqrt(cplx(0.0, -1.0) * w);
}

}  // namespace

cplx RealDifferential::sqrt_branch(cplx z) const noexcept {
    cplx v(std::sqrt(std::abs(scale_)), 0.0);
    for (const auto& s : points_) {
        const cplx r = sqrt_up(z - s.x);
        v = s.order > 0 ? v * r : v / r;
    }
    return v;
}

namespace {

using detail::adaptive_gauss_legendre;

void accumulate(QuadratureResult& total, const detail::AdaptiveOutcome<double>& part) {
    total.value += part.value;
    total.error += part.error;
    total.panels += part.panels;
}

// Finite arc [lo, hi], each half substituted x = endpoint +- t^2.
QuadratureResult finite_arc(const RealDifferential& q, double lo, double hi, const QuadratureSpec& spec) {
    QuadratureResult total;
    const double len = hi - lo;
    const double half = 0.5 * len;
    const double t_max = std::sqrt(half);
    accumulate(total, adaptive_gauss_legendre<double>(
                          [&](double t) {
                              const double d = t * t;
                              return 2.0 * t * q.abs_sqrt(lo + d, lo, d, hi, len - d);
                          },
                          0.0, t_max, spec));
    accumulate(total, adaptive_gauss_legendre<double>(
                          [&](double t) {
                              const double d = t * t;
                              return 2.0 * t * q.abs_sqrt(hi - d, lo, len - d, hi, d);
                          },
                          0.0, t_max, spec));
    return total;
}

// Arc (lo, +inf) transported by x = lo + L s / (1 - s), s in [0, 1].
QuadratureResult arc_to_infinity(const RealDifferential& q, double lo, const QuadratureSpec& spec) {
    QuadratureResult total;
    const double scale = std::max(1.0, std::abs(lo));
    const double t_max = std::sqrt(0.5);
    // s = t^2 near lo.
    accumulate(total, adaptive_gauss_legendre<double>(
                          [&](double t) {
                              const double s = t * t;
                              const double off = scale * s / (1.0 - s);
                              const double jac = scale / ((1.0 - s) * (1.0 - s));
                              return 2.0 * t * jac * q.abs_sqrt(lo + off, lo, off, kInfinity, 0.0);
                          },
                          0.0, t_max, spec));
    // 1 - s = t^2 near infinity.
    accumulate(total, adaptive_gauss_legendre<double>(
                          [&](double t) {
                              if (t == 0.0) return 0.0;
                              const double u = t * t;
                              const double off = scale * (1.0 - u) / u;
                              const double jac = scale / (u * u);
                              return 2.0 * t * jac * q.abs_sqrt(lo + off, lo, off, kInfinity, 0.0);
                          },
                          0.0, t_max, spec));
    return total;
}

// Arc (-inf, hi) transported by x = hi - L (1 - s) / s, s in [0, 1].
QuadratureResult arc_from_infinity(const RealDifferential& q, double hi, const QuadratureSpec& spec) {
    QuadratureResult total;
    const double scale = std::max(1.0, std::abs(hi));
    const double t_max = std::sqrt(0.5);
    accumulate(total, adaptive_gauss_legendre<double>(
                          [&](double t) {
                              if (t == 0.0) return 0.0;
                              const double s = t * t;
                              const double off = scale * (1.0 - s) / s;
                              const double jac = scale / (s * s);
                              return 2.0 * t * jac * q.abs_sqrt(hi - off, -kInfinity, 0.0, hi, off);
                          },
                          0.0, t_max, spec));
    accumulate(total, adaptive_gauss_legendre<double>(
                          [&](double t) {
                              const double u = t * t;
                              const double off = scale * u / (1.0 - u);
                              const double jac = scale / ((1.0 - u) * (1.0 - u));
                              return 2.0 * t * jac * q.abs_sqrt(hi - off, -kInfinity, 0.0, hi, off);
                          },
                          0.0, t_max, spec));
    return total;
}

void add(QuadratureResult& a, const QuadratureResult& b) {
    a.value += b.value;
    a.error += b.error;
    a.panels += b.panels;
}

// Zeros strictly inside (lo, hi), in increasing order.
std::vector<double> interior_zeros(const RealDifferential& q, double lo, double hi) {
    std::vector<double> z;
    for (const auto& s : q.points()) {
        if (s.order > 0 && s.x > lo && s.x < hi) z.push_back(s.x);
    }
    std::sort(z.begin(), z.end());
    return z;
}

QuadratureResult split_finite(const RealDifferential& q, double lo, double hi, const QuadratureSpec& spec) {
    QuadratureResult total;
    double a = lo;
    for (double z : interior_zeros(q, lo, hi)) {
        add(total, finite_arc(q, a, z, spec));
        a = z;
    }
    add(total, finite_arc(q, a, hi, spec));
    return total;
}

QuadratureResult split_to_infinity(const RealDifferential& q, double lo, const QuadratureSpec& spec) {
    QuadratureResult total;
    double a = lo;
    for (double z : interior_zeros(q, lo, kInfinity)) {
        add(total, finite_arc(q, a, z, spec));
        a = z;
    }
    add(total, arc_to_infinity(q, a, spec));
    return total;
}

QuadratureResult split_from_infinity(const RealDifferential& q, double hi, const QuadratureSpec& spec) {
    QuadratureResult total;
    const auto zeros = interior_zeros(q, -kInfinity, hi);
    double b = hi;
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
        add(total, finite_arc(q, *it, b, spec));
        b = *it;
    }
    add(total, arc_from_infinity(q, b, spec));
    return total;
}

}  // namespace

QuadratureResult integrate_abs_sqrt(const RealDifferential& q, double from, double to,
                                    const QuadratureSpec& spec) {
    spec.validate();
    const bool from_inf = std::isinf(from);
    const bool to_inf = std::isinf(to);
    if (from_inf && to_inf) return {};
    if (from_inf) return split_from_infinity(q, to, spec);
    if (to_inf) return split_to_infinity(q, from, spec);
    if (from == to) return {};
    if (from < to) return split_finite(q, from, to, spec);
    QuadratureResult total = split_to_infinity(q, from, spec);
    add(total, split_from_infinity(q, to, spec));
    return total;
}

QuadratureResult integrate_side(const QuadraticDifferential& qd, const Arc& arc, const QuadratureSpec& spec) {
    return integrate_abs_sqrt(RealDifferential::from(qd), arc.from.x, arc.to.x, spec);
}

}  // namespace teichpent
