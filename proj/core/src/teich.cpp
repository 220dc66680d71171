#include "teichpent/teich.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "teichpent/error.hpp"

namespace teichpent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<double, 2> coords(const Pentagon& p) {
    return {std::log(p.p2() / (1.0 - p.p2())), std::log(p.p4() - 1.0)};
}

double norm_inf(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }
double norm2(const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); }

double horizontal_scale(const HexagonClass& h, double K) {
    double m = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double s = h.segments[static_cast<std::size_t>(i)];
        m = std::max(m, h.segment_axis(i) == Axis::H ? K * s : s);
    }
    return m;
}

// Image coordinates of P(K, phi) at the Cartesian point (X, Y) =
// log K (cos phi, sin phi).
class ExtremalProblem {
public:
    ExtremalProblem(const Pentagon& p, const QuadratureSpec& spec) : p_(p), spec_(spec) {}

    struct Eval {
        double x = 0.0;
        double y = 0.0;
        std::array<double, 2> c{};
        PentagonDirection image;
    };

    std::optional<Eval> operator()(double x, double y, const std::optional<PentagonDirection>& hint) const {
        const double r = std::hypot(x, y);
        const Direction phi(std::atan2(y, x));
        try {
            if (r == 0.0) return Eval{x, y, coords(p_), {p_, phi}};
            const TeichImage img = teich_image(p_, TeichParam(std::exp(r), phi), spec_, hint);
            return Eval{x, y, coords(img.pentagon), {img.pentagon, img.direction}};
        } catch (const Error&) {
            return std::nullopt;
        }
    }

private:
    Pentagon p_;
    QuadratureSpec spec_;
};

constexpr double kExtremalAccept = 1e-8;

std::array<double, 2> minus(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return {a[0] - b[0], a[1] - b[1]};
}

// Damped Newton toward `target` from `cur`; finite-difference Jacobian.
bool newton_to(const ExtremalProblem& prob, const std::array<double, 2>& target, double tol,
               ExtremalProblem::Eval& cur) {
    for (int it = 0; it < 40; ++it) {
        const auto f = minus(cur.c, target);
        if (norm_inf(f) < tol) return true;
        const double h = 1e-6 * std::max(1.0, std::hypot(cur.x, cur.y));
        double jac[2][2];
        for (int j = 0; j < 2; ++j) {
            const double dx = j == 0 ? h : 0.0;
            const double dy = j == 1 ? h : 0.0;
            double sign = 1.0;
            auto e = prob(cur.x + dx, cur.y + dy, cur.image);
            if (!e) {
                e = prob(cur.x - dx, cur.y - dy, cur.image);
                sign = -1.0;
            }
            if (!e) return false;
            for (std::size_t i = 0; i < 2; ++i) jac[i][j] = sign * (e->c[i] - cur.c[i]) / h;
        }
        const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if (det == 0.0 || !std::isfinite(det)) return false;
        double sx = -(jac[1][1] * f[0] - jac[0][1] * f[1]) / det;
        double sy = -(-jac[1][0] * f[0] + jac[0][0] * f[1]) / det;
        const double len = std::hypot(sx, sy);
        if (len > 0.5) {
            sx *= 0.5 / len;
            sy *= 0.5 / len;
        }
        const double f2 = norm2(f);
        double lambda = 1.0;
        bool accepted = false;
        while (lambda > 1e-6) {
            auto e = prob(cur.x + lambda * sx, cur.y + lambda * sy, cur.image);
            if (e && norm2(minus(e->c, target)) < (1.0 - 1e-4 * lambda) * f2) {
                cur = *e;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted || lambda * std::hypot(sx, sy) < 1e-14) return norm_inf(minus(cur.c, target)) < kExtremalAccept;
    }
    return norm_inf(minus(cur.c, target)) < tol;
}

constexpr double kExtremalTol = 1e-10;
constexpr double kStageTol = 1e-7;
constexpr double kScanRadius = 0.1;
constexpr double kMinPathStep = 1.0 / 1024.0;

}  // namespace

TeichParam::TeichParam(double K, Direction phi) : K_(K), phi_(phi) {
    if (!std::isfinite(K) || !(K >= 1.0)) throw RangeError("dilatation K must be finite and at least 1");
}

HexagonClass stretch(const HexagonClass& h, double K) {
    if (!std::isfinite(K) || !(K > 0.0)) throw RangeError("stretch factor must be positive and finite");
    HexagonClass out = h;
    for (int i = 0; i < 6; ++i) {
        if (h.segment_axis(i) == Axis::H) out.segments[static_cast<std::size_t>(i)] *= K;
    }
    return out.normalized();
}

TeichImage teich_image(const Pentagon& p, const TeichParam& t, const QuadratureSpec& spec,
                       const std::optional<PentagonDirection>& hint) {
    const HexagonClass h = hexagon_rep(p, t.phi(), spec);
    const HexagonClass target = stretch(h, t.K());
    const PentagonDirection init = hint ? *hint : PentagonDirection{p, t.phi()};
    const InverseResult r = pentagon_from_hexagon(target, init, spec);
    return {r.pentagon, r.direction, r.residual};
}

Pentagon teich_point(const Pentagon& p, const TeichParam& t, const QuadratureSpec& spec) {
    return teich_image(p, t, spec).pentagon;
}

ExtremalResult extremal_map(const Pentagon& p, const Pentagon& q, const QuadratureSpec& spec) {
    {
        const auto cp = coords(p);
        const auto cq = coords(q);
        if (std::max(std::abs(cp[0] - cq[0]), std::abs(cp[1] - cq[1])) < 1e-13) {
            ExtremalResult r;
            r.non_unique = true;
            return r;
        }
    }
    const ExtremalProblem prob(p, spec);
    const auto start = coords(p);
    const auto goal = coords(q);
    const auto delta = minus(goal, start);
    const double dd = delta[0] * delta[0] + delta[1] * delta[1];
    auto along = [&](double t) { return std::array<double, 2>{start[0] + t * delta[0], start[1] + t * delta[1]}; };

    // Pick the scan direction whose small displacement best follows the
    // straight path to q, then track the path target in t.
    std::optional<ExtremalProblem::Eval> cur;
    double t = 0.0;
    double best_score = -kInfinity;
    for (int k = 0; k < 12; ++k) {
        const double a = kTwoPi * k / 12.0;
        auto e = prob(kScanRadius * std::cos(a), kScanRadius * std::sin(a), std::nullopt);
        if (!e) continue;
        const auto d = minus(e->c, start);
        const double proj = (d[0] * delta[0] + d[1] * delta[1]) / std::sqrt(dd);
        const double score = proj / std::max(norm2(d), 1e-300);
        if (score > best_score) {
            best_score = score;
            cur = e;
            t = std::clamp(proj / std::sqrt(dd), 0.0, 1.0);
        }
    }
    if (!cur) throw ConvergenceError("extremal solve found no admissible starting point", kInfinity);
    if (!newton_to(prob, along(t), t < 1.0 ? kStageTol : kExtremalTol, *cur)) {
        t = 0.0;
    }

    ExtremalProblem::Eval prev = *cur;
    double prev_t = t;
    double dt = std::max(t, 1.0 / 16.0);
    while (t < 1.0) {
        if (dt < kMinPathStep) {
            const double residual = norm_inf(minus(cur->c, goal));
            std::ostringstream os;
            os << "extremal solve stalled at path parameter " << t << " (residual " << residual << ")";
            throw ConvergenceError(os.str(), residual);
        }
        const double next_t = std::min(1.0, t + dt);
        ExtremalProblem::Eval trial = *cur;
        if (t > prev_t) {
            // Secant predictor.
            const double w = (next_t - t) / (t - prev_t);
            if (auto e = prob(cur->x + w * (cur->x - prev.x), cur->y + w * (cur->y - prev.y), cur->image)) trial = *e;
        }
        if (newton_to(prob, along(next_t), next_t < 1.0 ? kStageTol : kExtremalTol, trial)) {
            prev = *cur;
            prev_t = t;
            cur = trial;
            t = next_t;
            dt *= 1.5;
        } else {
            dt *= 0.5;
        }
    }

    const double residual = norm_inf(minus(cur->c, goal));
    if (!(residual < kExtremalAccept)) {
        std::ostringstream os;
        os << "extremal solve did not converge (residual " << residual << ")";
        throw ConvergenceError(os.str(), residual);
    }
    const double x = cur->x;
    const double y = cur->y;
    ExtremalResult out;
    const double r = std::hypot(x, y);
    out.K = std::exp(r);
    out.phi = Direction(std::atan2(y, x));
    out.distance = 0.5 * r;
    out.residual = residual;
    out.image_direction = cur->image.direction;
    return out;
}

double teich_distance(const Pentagon& p, const Pentagon& q, const QuadratureSpec& spec) {
    return extremal_map(p, q, spec).distance;
}

std::vector<GeodesicSample> geodesic_ray(const Pentagon& p, Direction d, double K_max, int steps,
                                         const QuadratureSpec& spec) {
    if (!std::isfinite(K_max) || !(K_max >= 1.0)) throw RangeError("K_max must be finite and at least 1");
    if (steps < 1) throw RangeError("steps must be at least 1");
    std::vector<GeodesicSample> out;
    out.push_back({1.0, p, d});
    if (K_max == 1.0) return out;
    const double log_k = std::log(K_max);
    PentagonDirection hint{p, d};
    for (int j = 1; j <= steps; ++j) {
        const double K = j == steps ? K_max : std::exp(log_k * j / steps);
        const TeichImage img = teich_image(p, TeichParam(K, d), spec, hint);
        hint = {img.pentagon, img.direction};
        out.push_back({K, img.pentagon, img.direction});
    }
    return out;
}

ExtremalMap::ExtremalMap(const Pentagon& p, const Pentagon& q, const QuadratureSpec& spec)
    : ExtremalMap(p, q, extremal_map(p, q, spec), spec) {}

ExtremalMap::ExtremalMap(const Pentagon& p, const Pentagon& q, const ExtremalResult& result,
                         const QuadratureSpec& spec)
    : result_(result),
      source_(p, result.phi, spec),
      target_(q, result.non_unique ? result.phi : result.image_direction, spec) {
    stretch_scale_ = horizontal_scale(source_.hexagon(), result_.K);
}

cplx ExtremalMap::stretch(cplx zeta) const {
    return cplx(result_.K * zeta.real(), zeta.imag()) / stretch_scale_;
}

ExtremalMap::Point ExtremalMap::map(cplx z) const {
    if (z.imag() < 0.0) throw RangeError("extremal map is defined on the closed upper half-plane");
    if (z.imag() == 0.0 || std::isinf(z.real())) {
        const double x = std::isinf(z.real()) ? kInfinity : z.real();
        const cplx zeta = source_.boundary(x);
        return {z, zeta, cplx(target_.boundary_preimage(stretch(zeta)), 0.0)};
    }
    const cplx zeta = source_.interior(z);
    return {z, zeta, target_.inverse(stretch(zeta))};
}

ExtremalMap::Point ExtremalMap::map_near(const Point& ref, cplx z) const {
    if (!(z.imag() > 0.0) || !(ref.z.imag() > 0.0)) return map(z);
    const cplx zeta = source_.advance(ref.z, ref.zeta, z);
    return {z, zeta, target_.inverse(stretch(zeta), ref.w, stretch(ref.zeta))};
}

cplx apply_extremal_map(const Pentagon& p, const Pentagon& q, cplx z, const QuadratureSpec& spec) {
    return ExtremalMap(p, q, spec)(z);
}

std::vector<DilatationSample> dilatation_estimate(const SampleGrid& grid) {
    if (grid.rows < 3 || grid.cols < 3) throw RangeError("dilatation grid needs at least 3x3 nodes");
    const auto n = static_cast<std::size_t>(grid.rows) * static_cast<std::size_t>(grid.cols);
    if (grid.z.size() != n || grid.w.size() != n) throw RangeError("dilatation grid size mismatch");
    std::vector<DilatationSample> out;
    for (int r = 1; r + 1 < grid.rows; ++r) {
        for (int c = 1; c + 1 < grid.cols; ++c) {
            const double dx = (grid.z_at(r, c + 1) - grid.z_at(r, c - 1)).real();
            const double dy = (grid.z_at(r + 1, c) - grid.z_at(r - 1, c)).imag();
            const cplx w_x = (grid.w_at(r, c + 1) - grid.w_at(r, c - 1)) / dx;
            const cplx w_y = (grid.w_at(r + 1, c) - grid.w_at(r - 1, c)) / dy;
            const double wz = std::abs(0.5 * (w_x - cplx(0.0, 1.0) * w_y));
            const double wzbar = std::abs(0.5 * (w_x + cplx(0.0, 1.0) * w_y));
            DilatationSample s;
            s.row = r;
            s.col = c;
            s.z = grid.z_at(r, c);
            if (wz <= wzbar) {
                s.value = kInfinity;
                s.flagged = true;
            } else {
                s.value = (wz + wzbar) / (wz - wzbar);
            }
            out.push_back(s);
        }
    }
    return out;
}

std::array<double, 5> sector_widths(const Pentagon& p) {
    std::array<double, 5> theta{};
    const auto marks = p.marks();
    for (std::size_t i = 0; i < 5; ++i) {
        if (std::isinf(marks[i])) {
            theta[i] = 0.0;
            continue;
        }
        const cplx w = (cplx(marks[i], -1.0)) / cplx(marks[i], 1.0);
        double a = std::arg(w);
        if (a < 0.0) a += kTwoPi;
        theta[i] = a;
    }
    std::array<double, 5> widths{};
    for (std::size_t i = 0; i < 5; ++i) {
        double d = theta[(i + 1) % 5] - theta[i];
        if (d <= 0.0) d += kTwoPi;
        widths[i] = d;
    }
    return widths;
}

double sector_dilatation_from_widths(std::span<const double, 5> p_widths, std::span<const double, 5> q_widths) {
    double k = 1.0;
    for (std::size_t i = 0; i < 5; ++i) {
        if (!(p_widths[i] > 0.0) || !(q_widths[i] > 0.0)) throw RangeError("sector widths must be positive");
        const double a = q_widths[i] / p_widths[i];
        k = std::max(k, std::max(a, 1.0 / a));
    }
    return k;
}

double sector_map_dilatation(const Pentagon& p, const Pentagon& q) {
    const auto a = sector_widths(p);
    const auto b = sector_widths(q);
    return sector_dilatation_from_widths(std::span<const double, 5>(a), std::span<const double, 5>(b));
}

}  // namespace teichpent
