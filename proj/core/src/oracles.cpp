#include "teichpent/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "teichpent/error.hpp"
#include "teichpent/quadrature.hpp"

namespace teichpent {

double agm(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw RangeError("agm needs positive finite arguments");
    }
    for (int i = 0; i < 100 && std::abs(a - b) >= 1e-15 * std::max(1.0, a); ++i) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return 0.5 * (a + b);
}

double elliptic_K(double k) {
    if (!(k >= 0.0) || !(k < 1.0)) throw RangeError("elliptic_K needs 0 <= k < 1");
    return std::numbers::pi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

OracleReport quad_modulus_report(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw RangeError("quadrilateral mark must satisfy 0 < p < 1");
    const RealDifferential q(1.0, {{0.0, -1}, {p, -1}, {1.0, -1}});
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-15;
    const auto near = integrate_abs_sqrt(q, 0.0, p, spec);
    const auto far = integrate_abs_sqrt(q, p, 1.0, spec);
    const double m = near.value / far.value;
    return {m, "sc-4pole", m * (near.error / near.value + far.error / far.value)};
}

double quad_modulus_oracle(double p) { return quad_modulus_report(p).value; }

double quad_modulus_closed_form(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw RangeError("quadrilateral mark must satisfy 0 < p < 1");
    return elliptic_K(std::sqrt(p)) / elliptic_K(std::sqrt(1.0 - p));
}

double quad_relabel(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw RangeError("quadrilateral mark must satisfy 0 < p < 1");
    // (p, 1, inf, 0) -> (0, 1 - p, 1, inf) under x -> (x - p) / x.
    return 1.0 - p;
}

namespace {

constexpr double kAgreement = 1e-11;
constexpr int kMaxLevels = 60;

struct Simpson {
    double value;
    double error;
};

template <class F>
Simpson simpson(F&& f, double lo, double hi) {
    double h = hi - lo;
    double trap = 0.5 * h * (f(lo) + f(hi));
    double prev_simpson = trap;
    double prev_diff = kInfinity;
    long long n = 1;
    for (int level = 1; level <= kMaxLevels; ++level) {
        double mids = 0.0;
        for (long long i = 0; i < n; ++i) mids += f(lo + (static_cast<double>(i) + 0.5) * h);
        const double next = 0.5 * trap + 0.5 * h * mids;
        const double s = (4.0 * next - trap) / 3.0;
        trap = next;
        h *= 0.5;
        n *= 2;
        const double diff = std::abs(s - prev_simpson);
        if (level >= 4 && diff <= kAgreement * std::abs(s)) return {s, diff};
        if (level >= 4 && diff == 0.0 && prev_diff == 0.0) return {s, 0.0};
        prev_diff = diff;
        prev_simpson = s;
    }
    std::ostringstream os;
    os << "brute quadrature did not settle within " << kMaxLevels << " levels";
    throw AccuracyError(os.str(), prev_diff);
}

int order_at(const std::vector<Factor>& factors, double x) {
    int m = 0;
    for (const auto& f : factors) {
        if (f.location == x) m += f.order;
    }
    return m;
}

// Half arc next to `end`, running a distance `len` into the arc in the
// direction `dir` (+1 or -1), in the variable t = sqrt|x - end|.
Simpson endpoint_piece(double root_c, const std::vector<Factor>& factors, double end, int dir, double len) {
    const int m_end = order_at(factors, end);
    auto f = [&](double t) {
        const double x = end + dir * t * t;
        double v = 2.0 * root_c * std::pow(t, 1 + m_end);
        for (const auto& fac : factors) {
            if (fac.location == end) continue;
            v *= std::pow(std::abs(x - fac.location), 0.5 * fac.order);
        }
        return v;
    };
    return simpson(f, 0.0, std::sqrt(len));
}

// Tail x = dir * R / u^2, u in [0, 1].
Simpson tail_piece(double root_c, const std::vector<Factor>& factors, double big_r, int dir) {
    int total = 0;
    for (const auto& fac : factors) total += fac.order;
    const int power = -3 - total;
    if (power < 0) throw RangeError("integrand is not integrable at infinity");
    auto f = [&](double u) {
        double v = 2.0 * big_r * root_c * std::pow(u, power);
        for (const auto& fac : factors) {
            v *= std::pow(std::abs(big_r - dir * fac.location * u * u), 0.5 * fac.order);
        }
        return v;
    };
    return simpson(f, 0.0, 1.0);
}

Simpson finite_piece(double root_c, const std::vector<Factor>& factors, double a, double b) {
    const double half = 0.5 * (b - a);
    const Simpson left = endpoint_piece(root_c, factors, a, +1, half);
    const Simpson right = endpoint_piece(root_c, factors, b, -1, half);
    return {left.value + right.value, left.error + right.error};
}

}  // namespace

OracleReport brute_factored_integral(double scale, const std::vector<Factor>& factors, double a, double b) {
    const double root_c = std::sqrt(std::abs(scale));
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (lo_inf && hi_inf) throw RangeError("brute integral needs at least one finite endpoint");
    if (!lo_inf && !hi_inf && !(a < b)) throw RangeError("brute integral needs a < b");
    Simpson total{0.0, 0.0};
    auto add = [&](const Simpson& s) {
        total.value += s.value;
        total.error += s.error;
    };
    if (hi_inf) {
        const double big_r = 2.0 * std::max(1.0, std::abs(a));
        add(finite_piece(root_c, factors, a, big_r));
        add(tail_piece(root_c, factors, big_r, +1));
    } else if (lo_inf) {
        const double big_r = 2.0 * std::max(1.0, std::abs(b));
        add(finite_piece(root_c, factors, -big_r, b));
        add(tail_piece(root_c, factors, big_r, -1));
    } else {
        add(finite_piece(root_c, factors, a, b));
    }
    return {total.value, "simpson-sqrt-substitution", total.error};
}

OracleReport brute_side_length(const QuadraticDifferential& qd, const Arc& arc) {
    const Pentagon& p = qd.pentagon();
    const double phi = qd.direction().phi();
    std::vector<Factor> factors{{0.0, -1}, {p.p2(), -1}, {1.0, -1}, {p.p4(), -1}};
    double scale = std::sin(phi);
    const auto merged = qd.merged_mark();
    if (merged == Mark::Inf || (!merged && std::isinf(qd.zero()))) {
        scale = std::cos(phi);
    } else if (merged) {
        factors.push_back({p.mark(*merged), +1});
    } else {
        factors.push_back({qd.zero(), +1});
    }

    const double from = arc.from.x;
    const double to = arc.to.x;
    if (std::isinf(from)) return brute_factored_integral(scale, factors, -kInfinity, to);
    if (std::isinf(to)) return brute_factored_integral(scale, factors, from, kInfinity);
    if (to > from) return brute_factored_integral(scale, factors, from, to);
    // Through infinity.
    const auto up = brute_factored_integral(scale, factors, from, kInfinity);
    const auto down = brute_factored_integral(scale, factors, -kInfinity, to);
    return {up.value + down.value, up.method, up.est_error + down.est_error};
}

cplx direct_qd_value(double p2, double p4, double phi, cplx z) {
    const cplx num = std::cos(phi) + z * std::sin(phi);
    const cplx den = z * (z - p2) * (z - 1.0) * (z - p4);
    return num / den;
}

}  // namespace teichpent
