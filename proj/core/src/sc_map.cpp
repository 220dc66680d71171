#include "teichpent/sc_map.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace teichpent {

namespace {

// One polygon side: an arc image, or the zero-length placeholder inserted
// after a merged mark.
struct Entry {
    double length = 0.0;
    int arc = -1;
    BoundaryPoint end;
};

struct Forward {
    std::vector<Arc> arcs;
    std::vector<Entry> entries;
    HexagonClass raw;
};

Forward compute_forward(const QuadraticDifferential& qd, const QuadratureSpec& spec) {
    Forward f;
    f.arcs = boundary_arcs(qd);
    const RealDifferential diff = RealDifferential::from(qd);
    int merged_at = -1;
    for (std::size_t k = 0; k < f.arcs.size(); ++k) {
        if (f.arcs[k].from.merged()) merged_at = static_cast<int>(k);
    }
    for (std::size_t k = 0; k < f.arcs.size(); ++k) {
        if (static_cast<int>(k) == merged_at) f.entries.push_back(Entry{0.0, -1, BoundaryPoint{}});
        const Arc& arc = f.arcs[k];
        const double len = integrate_abs_sqrt(diff, arc.from.x, arc.to.x, spec).value;
        f.entries.push_back(Entry{len, static_cast<int>(k), arc.to});
    }

    HexagonClass& h = f.raw;
    for (std::size_t i = 0; i < 6; ++i) {
        const Entry& e = f.entries[i];
        h.segments[i] = e.length;
        if (e.arc < 0 || e.end.merged()) {
            h.turns[i] = Turn::Straight;
        } else {
            h.turns[i] = e.end.is_zero ? Turn::Right : Turn::Left;
        }
        if (e.arc >= 0 && e.end.mark) h.labels[static_cast<std::size_t>(index_of(*e.end.mark))] = static_cast<int>(i);
    }
    h.first_axis = f.arcs.front().axis;

    const double res = closure_residual(h);
    if (!(res <= kClosureTolerance)) {
        std::ostringstream os;
        os << "hexagon fails to close: residual " << res;
        throw ConsistencyError(os.str(), res);
    }
    return f;
}

// Chart parameter t in [0, 1] to a point of the arc.
double arc_point(const Arc& arc, double t) {
    const double lo = arc.from.x;
    const double hi = arc.to.x;
    if (std::isinf(hi)) {
        const double scale = std::max(1.0, std::abs(lo));
        return lo + scale * t / (1.0 - t);
    }
    if (std::isinf(lo)) {
        const double scale = std::max(1.0, std::abs(hi));
        return hi - scale * (1.0 - t) / t;
    }
    return lo + t * (hi - lo);
}

}  // namespace

double closure_residual(const HexagonClass& h) {
    cplx pos{0.0, 0.0};
    cplx dir = h.first_axis == Axis::H ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    double longest = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        pos += h.segments[i] * dir;
        longest = std::max(longest, h.segments[i]);
        if (h.turns[i] != Turn::Straight) dir *= cplx(0.0, static_cast<double>(h.turns[i]));
    }
    if (!(longest > 0.0)) return kInfinity;
    return std::max(std::abs(pos.real()), std::abs(pos.imag())) / longest;
}

HexagonClass hexagon_rep(const Pentagon& p, Direction d, const QuadratureSpec& spec) {
    return compute_forward(QuadraticDifferential(p, d), spec).raw.normalized();
}

struct ConformalChart::SeedTable {
    std::once_flag once;
    std::vector<cplx> z;
    std::vector<cplx> zeta;
};

ConformalChart::ConformalChart(const Pentagon& p, Direction d, const QuadratureSpec& spec)
    : spec_(spec),
      qd_(p, d),
      diff_(RealDifferential::from(qd_)),
      seeds_(std::make_shared<SeedTable>()) {
    const Forward f = compute_forward(qd_, spec_);
    arcs_ = f.arcs;
    scale_ = *std::max_element(f.raw.segments.begin(), f.raw.segments.end());
    hexagon_ = f.raw.normalized();

    arc_length_.assign(arcs_.size(), 0.0);
    arc_start_.assign(arcs_.size(), cplx{});
    arc_dir_.assign(arcs_.size(), cplx{});
    cplx pos{0.0, 0.0};
    cplx dir = hexagon_.first_axis == Axis::H ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    for (std::size_t i = 0; i < 6; ++i) {
        const Entry& e = f.entries[i];
        const double len = e.length / scale_;
        if (e.arc >= 0) {
            const auto k = static_cast<std::size_t>(e.arc);
            arc_start_[k] = pos;
            arc_dir_[k] = dir;
            arc_length_[k] = len;
        }
        pos += len * dir;
        if (hexagon_.turns[i] != Turn::Straight) dir *= cplx(0.0, static_cast<double>(hexagon_.turns[i]));
    }

    // Fix the constant phase so zeta' points along segment 0 on arc 0.
    const double xm = 0.5 * (arcs_[0].from.x + arcs_[0].to.x);
    const cplx sb = diff_.sqrt_branch(cplx(xm, 0.0));
    branch_ = arc_dir_[0] * std::abs(sb) / (sb * scale_);
}

std::vector<cplx> ConformalChart::corners() const {
    const auto v = hexagon_.vertices();
    std::vector<cplx> c(6);
    for (std::size_t i = 0; i < 6; ++i) c[i] = v[(i + 1) % 6];
    return c;
}

cplx ConformalChart::derivative(cplx z) const { return branch_ * diff_.sqrt_branch(z); }

int ConformalChart::arc_of(double x) const {
    if (std::isinf(x)) x = kInfinity;
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
        const double lo = arcs_[k].from.x;
        const double hi = arcs_[k].to.x;
        if (x == lo) return static_cast<int>(k);
        if (std::isinf(hi)) {
            if (x > lo) return static_cast<int>(k);
        } else if (std::isinf(lo)) {
            if (x < hi) return static_cast<int>(k);
        } else if (x > lo && x < hi) {
            return static_cast<int>(k);
        }
    }
    return 0;
}

cplx ConformalChart::boundary(double x) const {
    if (std::isnan(x)) throw RangeError("boundary point is NaN");
    if (std::isinf(x)) x = kInfinity;
    const int k = arc_of(x);
    const auto ku = static_cast<std::size_t>(k);
    if (x == arcs_[ku].from.x) return arc_start_[ku];
    const double partial = integrate_abs_sqrt(diff_, arcs_[ku].from.x, x, spec_).value / scale_;
    return arc_start_[ku] + partial * arc_dir_[ku];
}

double ConformalChart::min_gap() const {
    std::vector<double> xs;
    for (const auto& s : diff_.points()) xs.push_back(s.x);
    for (const auto& a : arcs_) {
        if (std::isfinite(a.from.x)) xs.push_back(a.from.x);
    }
    std::sort(xs.begin(), xs.end());
    double gap = kInfinity;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] > xs[i - 1]) gap = std::min(gap, xs[i] - xs[i - 1]);
    }
    return std::isfinite(gap) ? gap : 1.0;
}

cplx ConformalChart::segment_integral(cplx from, cplx to, bool singular_start) const {
    const cplx delta = to - from;
    if (delta == cplx{}) return {};
    QuadratureSpec spec = spec_;
    spec.max_panels = std::max(spec.max_panels, 4096);
    if (singular_start) {
        return detail::adaptive_gauss_legendre<cplx>(
                   [&](double s) { return derivative(from + (s * s) * delta) * (2.0 * s) * delta; }, 0.0, 1.0,
                   spec)
            .value;
    }
    return detail::adaptive_gauss_legendre<cplx>([&](double t) { return derivative(from + t * delta) * delta; },
                                                 0.0, 1.0, spec)
        .value;
}

cplx ConformalChart::interior(cplx z) const {
    return interior(z, std::max(z.imag(), 0.5 * min_gap()));
}

cplx ConformalChart::interior(cplx z, double height) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw RangeError("interior point is not finite");
    if (z.imag() < 0.0) throw RangeError("interior point lies in the lower half-plane");
    for (const auto& s : diff_.points()) {
        if (std::abs(z - s.x) < 1e-12) throw PoleError("path ends within 1e-12 of a singular point");
    }
    if (z.imag() == 0.0) return boundary(z.real());
    if (!(height >= z.imag())) throw RangeError("path height below the target point");
    const cplx top0(0.0, height);
    const cplx top1(z.real(), height);
    cplx zeta = segment_integral(cplx{}, top0, true);
    zeta += segment_integral(top0, top1, false);
    zeta += segment_integral(top1, z, false);
    return zeta;
}

cplx ConformalChart::advance(cplx from, cplx zeta_from, cplx to) const {
    return zeta_from + segment_integral(from, to, false);
}

bool ConformalChart::try_newton(cplx target, cplx& z, cplx& zeta) const {
    constexpr double kTight = 1e-13;
    constexpr double kLoose = 1e-11;
    for (int it = 0; it < 200; ++it) {
        const cplx r = target - zeta;
        const double rn = std::abs(r);
        if (rn <= kTight) return true;
        const cplx d = derivative(z);
        if (!std::isfinite(std::abs(d)) || d == cplx{}) return false;
        const cplx step = r / d;
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1e-12) {
            const cplx zn = z + lambda * step;
            if (zn.imag() > 0.0 && std::isfinite(zn.real()) && std::isfinite(zn.imag())) {
                try {
                    const cplx zetan = advance(z, zeta, zn);
                    if (std::abs(target - zetan) < (1.0 - 0.25 * lambda) * rn) {
                        z = zn;
                        zeta = zetan;
                        accepted = true;
                        break;
                    }
                } catch (const AccuracyError&) {
                    // shorten the step
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) return rn <= kLoose;
    }
    return std::abs(target - zeta) <= kLoose;
}

const ConformalChart::SeedTable& ConformalChart::seeds() const {
    std::call_once(seeds_->once, [this] {
        std::vector<cplx> pts;
        std::vector<double> xs;
        for (const auto& s : diff_.points()) xs.push_back(s.x);
        for (const auto& arc : arcs_) {
            for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const double x = arc_point(arc, t);
                double w = 0.5 * std::max(1.0, std::abs(x));
                for (double s : xs) w = std::min(w, std::abs(x - s));
                for (double h : {0.25, 1.0}) pts.emplace_back(x, h * w);
            }
        }
        // Cayley image of a polar grid on the disc.
        for (double r : {0.0, 0.4, 0.7, 0.9}) {
            const int n = r == 0.0 ? 1 : 16;
            for (int j = 0; j < n; ++j) {
                const cplx w = std::polar(r, 2.0 * std::numbers::pi * j / n);
                pts.push_back(cplx(0.0, 1.0) * (1.0 + w) / (1.0 - w));
            }
        }
        for (const cplx& z : pts) {
            try {
                const cplx zeta = interior(z);
                if (std::isfinite(zeta.real()) && std::isfinite(zeta.imag())) {
                    seeds_->z.push_back(z);
                    seeds_->zeta.push_back(zeta);
                }
            } catch (const Error&) {
                // skip seeds too close to a singular point
            }
        }
    });
    return *seeds_;
}

cplx ConformalChart::inverse(cplx zeta) const {
    const SeedTable& table = seeds();
    std::vector<std::size_t> order(table.z.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(table.zeta[a] - zeta) < std::abs(table.zeta[b] - zeta);
    });
    const std::size_t tries = std::min<std::size_t>(order.size(), 8);
    for (std::size_t i = 0; i < tries; ++i) {
        cplx z = table.z[order[i]];
        cplx zz = table.zeta[order[i]];
        if (try_newton(zeta, z, zz)) return z;
    }
    std::ostringstream os;
    os << "inverse chart iteration diverged for zeta = " << zeta;
    throw CornerProximityError(os.str());
}

cplx ConformalChart::inverse(cplx zeta, cplx seed_z, cplx seed_zeta) const {
    cplx z = seed_z;
    cplx zz = seed_zeta;
    if (try_newton(zeta, z, zz)) return z;
    return inverse(zeta);
}

double ConformalChart::boundary_preimage(cplx zeta) const {
    std::size_t best = 0;
    double best_dist = kInfinity;
    double best_s = 0.0;
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
        const double s = std::clamp(((zeta - arc_start_[k]) * std::conj(arc_dir_[k])).real(), 0.0, arc_length_[k]);
        const double dist = std::abs(zeta - (arc_start_[k] + s * arc_dir_[k]));
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
            best_s = s;
        }
    }
    const Arc& arc = arcs_[best];
    const double len = arc_length_[best];
    const double eps = 1e-13;
    if (best_s <= eps) return arc.from.x;
    if (best_s >= len - eps) return arc.to.x;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double x = arc_point(arc, mid);
        const double partial = integrate_abs_sqrt(diff_, arc.from.x, x, spec_).value / scale_;
        (partial < best_s ? lo : hi) = mid;
    }
    return arc_point(arc, 0.5 * (lo + hi));
}

cplx evaluate_boundary(const Pentagon& p, Direction d, double x, const QuadratureSpec& spec) {
    return ConformalChart(p, d, spec).boundary(x);
}

cplx evaluate_interior(const Pentagon& p, Direction d, cplx z, const QuadratureSpec& spec) {
    return ConformalChart(p, d, spec).interior(z);
}

bool point_in_polygon(const std::vector<cplx>& polygon, cplx z) {
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const cplx a = polygon[i];
        const cplx b = polygon[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (z.real() < x) inside = !inside;
        }
    }
    return inside;
}

double distance_to_corners(const std::vector<cplx>& polygon, cplx z) {
    double d = kInfinity;
    for (const cplx& c : polygon) d = std::min(d, std::abs(z - c));
    return d;
}

}  // namespace teichpent
