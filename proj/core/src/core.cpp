#include "teichpent/core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "teichpent/error.hpp"

namespace teichpent {

double chordal_distance(double x, double y) noexcept {
    const bool xi = std::isinf(x);
    const bool yi = std::isinf(y);
    if (xi && yi) return 0.0;
    if (xi) return 1.0 / std::hypot(1.0, y);
    if (yi) return 1.0 / std::hypot(1.0, x);
    return std::abs(x - y) / (std::hypot(1.0, x) * std::hypot(1.0, y));
}

std::string_view mark_name(Mark m) noexcept {
    switch (m) {
        case Mark::Zero: return "0";
        case Mark::P2: return "p2";
        case Mark::One: return "1";
        case Mark::P4: return "p4";
        case Mark::Inf: return "inf";
    }
    return "?";
}

std::optional<Mark> mark_from_name(std::string_view name) noexcept {
    for (Mark m : kMarks) {
        if (mark_name(m) == name) return m;
    }
    return std::nullopt;
}

Pentagon::Pentagon(double p2, double p4) : p2_(p2), p4_(p4) {
    using namespace guard;
    if (!(p2 >= kP2Margin && p2 <= 1.0 - kP2Margin)) {
        std::ostringstream os;
        os << std::setprecision(17) << "p2 = " << p2 << " outside [1e-8, 1 - 1e-8]";
        throw RangeError(os.str());
    }
    if (!(p4 >= 1.0 + kP2Margin && p4 <= kP4Max)) {
        std::ostringstream os;
        os << std::setprecision(17) << "p4 = " << p4 << " outside [1 + 1e-8, 1e8]";
        throw RangeError(os.str());
    }
}

double Pentagon::mark(Mark m) const noexcept {
    switch (m) {
        case Mark::Zero: return 0.0;
        case Mark::P2: return p2_;
        case Mark::One: return 1.0;
        case Mark::P4: return p4_;
        case Mark::Inf: return kInfinity;
    }
    return kInfinity;
}

std::array<double, 5> Pentagon::marks() const noexcept {
    return {0.0, p2_, 1.0, p4_, kInfinity};
}

double MoebiusMap::operator()(double x) const noexcept {
    if (std::isinf(x)) return c == 0.0 ? kInfinity : a / c;
    const double den = c * x + d;
    if (den == 0.0) return kInfinity;
    return (a * x + b) / den;
}

cplx MoebiusMap::operator()(cplx z) const noexcept {
    return (a * z + b) / (c * z + d);
}

BoundaryQuintuple::BoundaryQuintuple(const std::array<double, 5>& points) : points_(points) {
    for (double x : points_) {
        if (std::isnan(x)) throw RangeError("boundary point is NaN");
    }
    // Both infinities name one point.
    for (double& x : points_) {
        if (std::isinf(x)) x = kInfinity;
    }
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) {
            if (points_[i] == points_[j]) throw DegeneracyError("coincident boundary points");
        }
    }
    int descents = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        if (points_[(i + 1) % 5] < points_[i]) ++descents;
    }
    if (descents != 1) throw OrderingError("boundary points are not in cyclic order");
}

NormalizedPentagon normalize_pentagon(const BoundaryQuintuple& quintuple) {
    const auto& q = quintuple.points();
    const double q1 = q[0];
    const double q3 = q[2];
    const double q5 = q[4];
    // T(z) = (z - q1)(q3 - q5) / ((z - q5)(q3 - q1)), with the factors that
    // contain an infinite point dropped.
    MoebiusMap t;
    if (std::isinf(q5)) {
        t = {1.0, -q1, 0.0, q3 - q1};
    } else if (std::isinf(q1)) {
        t = {0.0, q3 - q5, 1.0, -q5};
    } else if (std::isinf(q3)) {
        t = {1.0, -q1, 1.0, -q5};
    } else {
        t = {q3 - q5, -q1 * (q3 - q5), q3 - q1, -q5 * (q3 - q1)};
    }
    return {Pentagon(t(q[1]), t(q[3])), t};
}

Direction::Direction(double phi) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    phi_ = r;
}

double angle_difference(Direction a, Direction b) noexcept {
    constexpr double pi = std::numbers::pi;
    double d = a.phi() - b.phi();
    if (d > pi) d -= 2.0 * pi;
    if (d <= -pi) d += 2.0 * pi;
    return d;
}

double qd_zero(Direction d) noexcept {
    const double s = std::sin(d.phi());
    if (s == 0.0) return kInfinity;
    return -std::cos(d.phi()) / s;
}

QuadraticDifferential::QuadraticDifferential(const Pentagon& p, Direction d)
    : pentagon_(p), direction_(d), zero_(qd_zero(d)) {
    for (Mark m : kMarks) {
        if (chordal_distance(zero_, p.mark(m)) < guard::kMergeTol) {
            merged_ = m;
            break;
        }
    }
}

cplx QuadraticDifferential::operator()(cplx z) const {
    const double p2 = pentagon_.p2();
    const double p4 = pentagon_.p4();
    if (z == 0.0 || z == p2 || z == 1.0 || z == p4) throw PoleError("quadratic differential evaluated at a pole");
    const double c = std::cos(direction_.phi());
    const double s = std::sin(direction_.phi());
    return (c + z * s) / (z * (z - p2) * (z - 1.0) * (z - p4));
}

double QuadraticDifferential::operator()(double x) const {
    return (*this)(cplx(x, 0.0)).real();
}

cplx qd_eval(const QuadraticDifferential& qd, cplx z) { return qd(z); }

std::vector<Arc> boundary_arcs(const QuadraticDifferential& qd) {
    const Pentagon& p = qd.pentagon();
    std::vector<BoundaryPoint> pts;
    pts.reserve(6);
    const auto merged = qd.merged_mark();
    const double z0 = qd.zero();
    for (Mark m : kMarks) {
        BoundaryPoint bp{p.mark(m), m, merged == m};
        pts.push_back(bp);
        if (merged) continue;
        // The zero lies in the gap after m.
        const double lo = p.mark(m);
        const double hi = m == Mark::Inf ? 0.0 : p.mark(kMarks[static_cast<std::size_t>(index_of(m) + 1)]);
        const bool inside = m == Mark::Inf ? (z0 < hi) : (z0 > lo && z0 < hi);
        if (inside) pts.push_back(BoundaryPoint{z0, std::nullopt, true});
    }

    std::vector<Arc> arcs;
    arcs.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        arcs.push_back(Arc{pts[i], pts[(i + 1) % pts.size()], Axis::H});
    }

    // Arc 0 starts at 0 and ends at a finite point; its midpoint fixes the
    // axis, every odd-order point flips it.
    const double mid = 0.5 * (arcs[0].from.x + arcs[0].to.x);
    Axis axis = qd(mid) > 0.0 ? Axis::H : Axis::V;
    for (auto& arc : arcs) {
        arc.axis = axis;
        if (arc.to.order() != 0) axis = other(axis);
    }
    return arcs;
}

bool HexagonClass::degenerate() const noexcept {
    return std::none_of(turns.begin(), turns.end(), [](Turn t) { return t == Turn::Right; });
}

int HexagonClass::notch_corner() const noexcept {
    std::array<bool, 6> used{};
    for (int c : labels) {
        if (c >= 0 && c < 6) used[static_cast<std::size_t>(c)] = true;
    }
    for (int i = 0; i < 6; ++i) {
        if (!used[static_cast<std::size_t>(i)]) return i;
    }
    return -1;
}

Axis HexagonClass::segment_axis(int i) const noexcept {
    Axis a = first_axis;
    for (int k = 0; k < i; ++k) {
        if (turns[static_cast<std::size_t>(k)] != Turn::Straight) a = other(a);
    }
    return a;
}

HexagonClass HexagonClass::normalized() const {
    HexagonClass h = *this;
    const double m = *std::max_element(segments.begin(), segments.end());
    if (!(m > 0.0) || !std::isfinite(m)) throw ConsistencyError("hexagon has no positive segment", m);
    for (double& s : h.segments) s /= m;
    return h;
}

std::vector<cplx> HexagonClass::vertices() const {
    std::vector<cplx> v;
    v.reserve(6);
    cplx pos{0.0, 0.0};
    cplx dir = first_axis == Axis::H ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    for (std::size_t i = 0; i < 6; ++i) {
        v.push_back(pos);
        pos += segments[i] * dir;
        if (turns[i] != Turn::Straight) dir *= cplx(0.0, static_cast<double>(turns[i]));
    }
    return v;
}

bool hexagon_equal(const HexagonClass& h1, const HexagonClass& h2, double tol) {
    if (h1.turns != h2.turns || h1.labels != h2.labels || h1.first_axis != h2.first_axis) return false;
    const HexagonClass n1 = h1.normalized();
    const HexagonClass n2 = h2.normalized();
    for (std::size_t i = 0; i < 6; ++i) {
        if (std::abs(n1.segments[i] - n2.segments[i]) > tol) return false;
    }
    return true;
}

LShape l_shape(const HexagonClass& h) {
    const int k = h.notch_corner();
    auto s = [&](int i) { return h.segments[static_cast<std::size_t>((k + 1 + i) % 6)]; };
    return LShape{s(1), s(0), s(3), s(4)};
}

HexagonClass hexagon_from_l_shape(const LShape& l, Mark gap, Axis long_axis) {
    if (!(l.a > 0.0 && l.a < l.A && l.b > 0.0 && l.B > 0.0)) {
        throw ShapeError("L dimensions must satisfy 0 < a < A and b, B > 0");
    }
    // Partition points in cyclic order from the mark 0; -1 is the notch.
    std::vector<int> pts;
    for (Mark m : kMarks) {
        pts.push_back(index_of(m));
        if (m == gap) pts.push_back(-1);
    }
    HexagonClass h;
    int notch = -1;
    for (int n = 0; n < 6; ++n) {
        const int corner = (n + 5) % 6;
        if (pts[static_cast<std::size_t>(n)] < 0) {
            notch = corner;
        } else {
            h.labels[static_cast<std::size_t>(pts[static_cast<std::size_t>(n)])] = corner;
        }
    }
    const std::array<double, 6> s{l.b, l.a, l.B + l.b, l.A, l.B, l.A - l.a};
    for (int j = 0; j < 6; ++j) {
        h.segments[static_cast<std::size_t>((notch + 1 + j) % 6)] = s[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < 6; ++i) h.turns[static_cast<std::size_t>(i)] = i == notch ? Turn::Right : Turn::Left;
    // s0 (= b) is perpendicular to A; axes alternate from there.
    const int j0 = ((0 - notch - 1) % 6 + 6) % 6;
    h.first_axis = (j0 % 2 == 0) ? other(long_axis) : long_axis;
    return h;
}

}  // namespace teichpent
