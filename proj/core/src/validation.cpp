#include "teichpent/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "teichpent/error.hpp"
#include "teichpent/inverse.hpp"
#include "teichpent/oracles.hpp"
#include "teichpent/sc_map.hpp"
#include "teichpent/teich.hpp"

namespace teichpent::validation {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string sci(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << x;
    return os.str();
}

// Runs body, timing it and turning stray library errors into a failure.
CheckResult timed(int id, std::string name, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("unexpected error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double p_error(const Pentagon& a, const Pentagon& b) {
    return std::max(std::abs(a.p2() - b.p2()), std::abs(a.p4() - b.p4()));
}

}  // namespace

Configuration random_configuration(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (;;) {
        const double p2 = 0.01 + 0.98 * u01(rng);
        const double p4 = std::exp(std::log(1.01) + (std::log(100.0) - std::log(1.01)) * u01(rng));
        const double phi = kTwoPi * u01(rng);
        const Pentagon p(p2, p4);
        const double z0 = qd_zero(Direction(phi));
        bool clear = true;
        for (double m : p.marks()) clear = clear && chordal_distance(z0, m) >= 1e-2;
        if (clear) return {p, Direction(phi)};
    }
}

Pentagon random_pentagon(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double p2 = 0.05 + 0.9 * u01(rng);
    const double p4 = std::exp(std::log(1.05) + (std::log(20.0) - std::log(1.05)) * u01(rng));
    return Pentagon(p2, p4);
}

CheckResult check_closure(const CheckOptions& o) {
    return timed(1, "closure", [&](CheckResult& r) {
        const int n2 = o.fast ? 3 : 10;
        const int n4 = o.fast ? 3 : 10;
        const int nphi = o.fast ? 4 : 12;
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        int count = 0;
        for (int i = 0; i < n2; ++i) {
            for (int j = 0; j < n4; ++j) {
                for (int k = 0; k < nphi; ++k) {
                    const Pentagon p((i + 0.5) / n2, 1.0 / ((j + 0.5) / n4));
                    const Direction d(kTwoPi * (k + 0.5) / nphi);
                    worst = std::max(worst, closure_residual(hexagon_rep(p, d, o.spec)));
                    ++count;
                }
            }
        }
        const double secs = elapsed(t0);
        r.passed = worst < 1e-8 && secs < 300.0;
        r.detail = "max closure residual " + sci(worst) + " over " + std::to_string(count) +
                   " configurations (limit 1e-8, runtime limit 300 s)";
    });
}

CheckResult check_quadrature_oracle(const CheckOptions& o) {
    return timed(2, "quadrature-oracle", [&](CheckResult& r) {
        std::mt19937_64 rng(o.seed + 2);
        const int n = o.fast ? 5 : 50;
        double worst = 0.0;
        int arcs = 0;
        for (int i = 0; i < n; ++i) {
            const auto c = random_configuration(rng);
            const QuadraticDifferential qd(c.pentagon, c.direction);
            for (const Arc& arc : boundary_arcs(qd)) {
                const double main = integrate_side(qd, arc, o.spec).value;
                const double brute = brute_side_length(qd, arc).value;
                worst = std::max(worst, std::abs(main - brute) / brute);
                ++arcs;
            }
        }
        QuadratureSpec tight = o.spec;
        tight.rel_tol = 1e-13;
        tight.abs_tol = 1e-15;
        double worst_k = 0.0;
        for (int j = 1; j <= 9; ++j) {
            const double k = 0.1 * j;
            const RealDifferential model(1.0 / (k * k), {{-1.0 / k, -1}, {-1.0, -1}, {1.0, -1}, {1.0 / k, -1}});
            const double value = integrate_abs_sqrt(model, 0.0, 1.0, tight).value;
            const double ref = elliptic_K(k);
            worst_k = std::max(worst_k, std::abs(value - ref) / ref);
        }
        r.passed = worst <= 1e-8 && worst_k <= 1e-11;
        r.detail = "side lengths vs brute oracle: max rel diff " + sci(worst) + " on " + std::to_string(arcs) +
                   " arcs (limit 1e-8); elliptic model vs AGM: max rel diff " + sci(worst_k) + " (limit 1e-11)";
    });
}

CheckResult check_quadrilateral(const CheckOptions&) {
    return timed(3, "quadrilateral-oracle", [&](CheckResult& r) {
        const double half = std::abs(quad_modulus_oracle(0.5) - 1.0);
        double worst = 0.0;
        double closed = 0.0;
        for (double p : {0.2, 0.35, 0.7}) {
            const double m = quad_modulus_oracle(p);
            worst = std::max(worst, std::abs(m * quad_modulus_oracle(quad_relabel(p)) - 1.0));
            closed = std::max(closed, std::abs(m - quad_modulus_closed_form(p)) / m);
        }
        r.passed = half <= 1e-9 && worst <= 1e-8;
        r.detail = "|modulus(1/2) - 1| = " + sci(half) + " (limit 1e-9); max |m(p) m(relabel) - 1| = " + sci(worst) +
                   " (limit 1e-8); elliptic closed form agrees to " + sci(closed);
    });
}

CheckResult check_round_trip(const CheckOptions& o) {
    return timed(4, "round-trip", [&](CheckResult& r) {
        std::mt19937_64 rng(o.seed + 4);
        const int n = o.fast ? 10 : 100;
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        int failures = 0;
        std::string first_failure;
        for (int i = 0; i < n; ++i) {
            const auto c = random_configuration(rng);
            try {
                const HexagonClass h = hexagon_rep(c.pentagon, c.direction, o.spec);
                const InverseResult inv = pentagon_from_hexagon(h, std::nullopt, o.spec);
                const double err = std::max(p_error(inv.pentagon, c.pentagon),
                                            std::abs(angle_difference(inv.direction, c.direction)));
                worst = std::max(worst, err);
            } catch (const Error& e) {
                if (failures++ == 0) first_failure = e.what();
            }
        }
        const double secs = elapsed(t0);
        r.passed = failures == 0 && worst <= 1e-6 && secs < 600.0;
        r.detail = std::to_string(n) + " configurations, max coordinate error " + sci(worst) + " (limit 1e-6), " +
                   std::to_string(failures) + " convergence failures";
        if (failures) r.detail += " (first: " + first_failure + ")";
    });
}

CheckResult check_bijectivity(const CheckOptions& o) {
    return timed(5, "bijectivity", [&](CheckResult& r) {
        std::vector<Pentagon> bases{{0.5, 2.0}, {0.3, 1.5}, {0.7, 3.0}, {0.2, 5.0}, {0.6, 1.8}};
        if (o.fast) bases.erase(bases.begin() + 1, bases.end());
        const int nphi = o.fast ? 4 : 12;
        double worst = 0.0;
        int cases = 0;
        int failures = 0;
        for (const Pentagon& p : bases) {
            for (double K : {1.2, 2.0, 4.0}) {
                for (int k = 0; k < nphi; ++k) {
                    const Direction phi(kTwoPi * (k + 0.25) / nphi);
                    ++cases;
                    try {
                        const Pentagon q = teich_point(p, TeichParam(K, phi), o.spec);
                        const ExtremalResult e = extremal_map(p, q, o.spec);
                        worst = std::max({worst, std::abs(e.K - K), std::abs(angle_difference(e.phi, phi))});
                    } catch (const Error&) {
                        ++failures;
                    }
                }
            }
        }
        r.passed = failures == 0 && worst <= 1e-5;
        r.detail = std::to_string(cases) + " (K, phi) cases, max error in K or phi " + sci(worst) +
                   " (limit 1e-5), " + std::to_string(failures) + " failures";
    });
}

CheckResult check_identity(const CheckOptions& o) {
    return timed(6, "identity", [&](CheckResult& r) {
        std::mt19937_64 rng(o.seed + 6);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto c = random_configuration(rng);
            worst = std::max(worst, p_error(teich_point(c.pentagon, TeichParam(1.0, c.direction), o.spec), c.pentagon));
        }
        r.passed = worst <= 1e-8;
        r.detail = "20 configurations, max |P(1, phi) - P| " + sci(worst) + " (limit 1e-8)";
    });
}

CheckResult check_extremality_bound(const CheckOptions& o) {
    return timed(7, "extremality-bound", [&](CheckResult& r) {
        std::mt19937_64 rng(o.seed + 7);
        const int n = o.fast ? 5 : 20;
        double worst = -kInfinity;
        double ratio = 0.0;
        int failures = 0;
        for (int i = 0; i < n; ++i) {
            const Pentagon p = random_pentagon(rng);
            const Pentagon q = random_pentagon(rng);
            try {
                const double K = extremal_map(p, q, o.spec).K;
                const double bound = sector_map_dilatation(p, q);
                worst = std::max(worst, K - bound);
                ratio = std::max(ratio, K / bound);
            } catch (const Error&) {
                ++failures;
            }
        }
        r.passed = failures == 0 && worst <= 1e-9;
        r.detail = std::to_string(n) + " pairs, max (K - sector bound) " + sci(worst) + " (limit 1e-9), max K/bound " +
                   sci(ratio) + ", " + std::to_string(failures) + " failures";
    });
}

CheckResult check_constant_dilatation(const CheckOptions& o) {
    return timed(8, "constant-dilatation", [&](CheckResult& r) {
        const std::vector<std::pair<Pentagon, Pentagon>> pairs{
            {{0.5, 2.0}, {0.3, 1.5}}, {{0.4, 3.0}, {0.6, 1.5}}, {{0.2, 5.0}, {0.7, 2.5}}};
        const int n = 15;
        double worst = 0.0;
        int nodes = 0;
        int failures = 0;
        for (std::size_t pi = 0; pi < (o.fast ? 1 : pairs.size()); ++pi) {
            const ExtremalMap em(pairs[pi].first, pairs[pi].second, o.spec);
            const double K = em.result().K;
            const ConformalChart& src = em.source_chart();
            const std::vector<cplx> poly = src.hexagon().vertices();
            double x0 = kInfinity, x1 = -kInfinity, y0 = kInfinity, y1 = -kInfinity;
            for (const cplx& v : poly) {
                x0 = std::min(x0, v.real());
                x1 = std::max(x1, v.real());
                y0 = std::min(y0, v.imag());
                y1 = std::max(y1, v.imag());
            }
            const auto marks = src.pentagon().marks();
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const cplx zeta(x0 + (x1 - x0) * (i + 1) / (n + 1), y0 + (y1 - y0) * (j + 1) / (n + 1));
                    if (!point_in_polygon(poly, zeta) || distance_to_corners(poly, zeta) < 0.05) continue;
                    ++nodes;
                    try {
                        const cplx z = src.inverse(zeta);
                        double gap = z.imag();
                        for (double m : marks) {
                            if (std::isfinite(m)) gap = std::min(gap, std::abs(z - m));
                        }
                        const double h = 1e-3 * gap;
                        const ExtremalMap::Point ref{z, zeta, em.target_chart().inverse(em.stretch(zeta))};
                        SampleGrid g;
                        g.rows = 3;
                        g.cols = 3;
                        for (int a = -1; a <= 1; ++a) {
                            for (int b = -1; b <= 1; ++b) {
                                const cplx zz = z + cplx(b * h, a * h);
                                g.z.push_back(zz);
                                g.w.push_back(em.map_near(ref, zz).w);
                            }
                        }
                        const auto est = dilatation_estimate(g);
                        worst = std::max(worst, std::abs(est.front().value - K));
                    } catch (const Error&) {
                        ++failures;
                    }
                }
            }
        }
        r.passed = failures == 0 && nodes > 0 && worst <= 1e-3;
        r.detail = std::to_string(nodes) + " grid nodes, max |dilatation - K| " + sci(worst) + " (limit 1e-3), " +
                   std::to_string(failures) + " failures";
    });
}

CheckResult check_metric(const CheckOptions& o) {
    return timed(9, "metric", [&](CheckResult& r) {
        std::mt19937_64 rng(o.seed + 9);
        const int npairs = o.fast ? 3 : 10;
        const int nrays = o.fast ? 2 : 5;
        double sym = 0.0;
        for (int i = 0; i < npairs; ++i) {
            const Pentagon p = random_pentagon(rng);
            const Pentagon q = random_pentagon(rng);
            sym = std::max(sym, std::abs(teich_distance(p, q, o.spec) - teich_distance(q, p, o.spec)));
        }
        double slack = kInfinity;
        for (int i = 0; i < npairs; ++i) {
            const Pentagon a = random_pentagon(rng);
            const Pentagon b = random_pentagon(rng);
            const Pentagon c = random_pentagon(rng);
            const double ab = teich_distance(a, b, o.spec);
            const double bc = teich_distance(b, c, o.spec);
            const double ac = teich_distance(a, c, o.spec);
            slack = std::min(slack, ab + bc - ac);
        }
        double additivity = 0.0;
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int i = 0; i < nrays; ++i) {
            const Pentagon p = random_pentagon(rng);
            const Direction d(kTwoPi * u01(rng));
            const double kmax = 3.0;
            const int steps = 4;
            const auto ray = geodesic_ray(p, d, kmax, steps, o.spec);
            for (int j = 1; j <= steps; ++j) {
                const double expect = static_cast<double>(j) / steps * 0.5 * std::log(kmax);
                additivity = std::max(additivity,
                                      std::abs(teich_distance(p, ray[static_cast<std::size_t>(j)].pentagon, o.spec) - expect));
            }
        }
        r.passed = sym <= 1e-6 && slack >= -1e-6 && additivity <= 1e-5;
        r.detail = "symmetry " + sci(sym) + " (limit 1e-6), min triangle slack " + sci(slack) +
                   " (limit -1e-6), geodesic additivity " + sci(additivity) + " (limit 1e-5)";
    });
}

CheckResult check_degeneration(const CheckOptions& o) {
    return timed(10, "degeneration", [&](CheckResult& r) {
        const Pentagon p(0.5, 2.0);
        const HexagonClass rect = hexagon_rep(p, Direction(0.0), o.spec);
        std::vector<double> gaps;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const HexagonClass h = hexagon_rep(p, Direction(eps), o.spec);
            double gap = 0.0;
            for (std::size_t i = 0; i < 6; ++i) gap = std::max(gap, std::abs(h.segments[i] - rect.segments[i]));
            gaps.push_back(gap);
        }
        const bool monotone = gaps[1] < gaps[0] && gaps[2] < gaps[1];
        r.passed = monotone && gaps.back() < 1e-5;
        r.detail = "segment distance to the rectangular class at phi = 1e-2, 1e-3, 1e-4: " + sci(gaps[0]) + ", " +
                   sci(gaps[1]) + ", " + sci(gaps[2]) + (monotone ? " (monotone)" : " (not monotone)") +
                   "; gap shrinks by " + sci(gaps[2] / gaps[1]) + " per decade of phi; final gap limit 1e-5";
    });
}

std::vector<CheckResult> run_all(const CheckOptions& o) {
    return {check_closure(o),      check_quadrature_oracle(o), check_quadrilateral(o),     check_round_trip(o),
            check_bijectivity(o),  check_identity(o),          check_extremality_bound(o), check_constant_dilatation(o),
            check_metric(o),       check_degeneration(o)};
}

std::string format_line(const CheckResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << ' ' << std::left << std::setw(22) << r.name
       << r.detail << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)";
    return os.str();
}

}  // namespace teichpent::validation
