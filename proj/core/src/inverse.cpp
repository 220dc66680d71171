#include "teichpent/inverse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "teichpent/sc_map.hpp"

namespace teichpent {

namespace {

double sigmoid(double t) { return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

double side(const HexagonClass& h, int i) {
    return h.segments[static_cast<std::size_t>((h.notch_corner() + 1 + i) % 6)];
}

Axis first_arc_axis(const Pentagon& p, Direction d) {
    return boundary_arcs(QuadraticDifferential(p, d)).front().axis;
}

double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x * x;
    return std::sqrt(m);
}

}  // namespace

Chamber classify(const HexagonClass& h) {
    std::array<int, 6> owner{-1, -1, -1, -1, -1, -1};
    for (Mark m : kMarks) {
        const int c = h.label(m);
        if (c < 0 || c > 5) throw ShapeError("label corner index out of range");
        if (owner[static_cast<std::size_t>(c)] >= 0) throw ShapeError("two marks share a corner");
        owner[static_cast<std::size_t>(c)] = index_of(m);
    }
    if (h.label(Mark::Zero) != 5) throw ShapeError("segment 0 must start at the image of the mark 0");
    // Labeled corners read in increasing index must be p2, 1, p4, inf, 0.
    int expect = 1;
    for (int c = 0; c < 6; ++c) {
        const int m = owner[static_cast<std::size_t>(c)];
        if (m < 0) continue;
        if (m != expect % 5) throw ShapeError("marks are not in cyclic order around the hexagon");
        ++expect;
    }
    const int k = h.notch_corner();
    const auto ku = static_cast<std::size_t>(k);
    const auto before = static_cast<std::size_t>((k + 5) % 6);
    Chamber c;
    c.gap = static_cast<Mark>(owner[before]);
    c.first_axis = h.first_axis;
    for (std::size_t i = 0; i < 6; ++i) {
        if (i == ku || i == before) continue;
        if (h.turns[i] != Turn::Left) throw ShapeError("salient corners must turn left");
    }
    if (h.turns[ku] == Turn::Right && h.turns[before] == Turn::Left) {
        c.degenerate = false;
    } else if (h.turns[ku] == Turn::Straight && h.turns[before] == Turn::Straight) {
        if (h.segments[ku] != 0.0) throw ShapeError("flat placeholder corner must end a zero-length segment");
        c.degenerate = true;
    } else {
        throw ShapeError("turn pattern is neither hexagonal nor rectangular");
    }
    for (double s : h.segments) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ShapeError("segment lengths must be finite and nonnegative");
    }
    return c;
}

std::vector<double> shape_ratios(const HexagonClass& h) {
    const double b = side(h, 0);
    const double a = side(h, 1);
    const double big_a = side(h, 3);
    const double big_b = side(h, 4);
    const double notch = side(h, 5);
    if (h.degenerate()) return {std::log(b / big_b), std::log(big_b / big_a)};
    return {std::log(a / notch), std::log(b / big_b), std::log(big_b / big_a)};
}

PentagonDirection decode(const Chamber& c, const SolverPoint& x) {
    const double p2 = sigmoid(x.u);
    const double p4 = 1.0 + std::exp(x.v);
    const Pentagon p(p2, p4);
    double z0 = 0.0;
    if (c.degenerate) {
        z0 = p.mark(c.gap);
    } else {
        switch (c.gap) {
            case Mark::Zero: z0 = p2 * sigmoid(x.s); break;
            case Mark::P2: z0 = p2 + (1.0 - p2) * sigmoid(x.s); break;
            case Mark::One: z0 = 1.0 + (p4 - 1.0) * sigmoid(x.s); break;
            case Mark::P4: z0 = p4 * (1.0 + std::exp(x.s)); break;
            case Mark::Inf: z0 = -std::exp(x.s); break;
        }
    }
    double phi = std::isinf(z0) ? 0.0 : std::atan2(1.0, -z0);
    if (first_arc_axis(p, Direction(phi)) != c.first_axis) phi += std::numbers::pi;
    return {p, Direction(phi)};
}

SolverPoint encode(const Chamber& c, const Pentagon& p, Direction d) {
    SolverPoint x;
    x.u = logit(p.p2());
    x.v = std::log(p.p4() - 1.0);
    if (c.degenerate) return x;
    const double z0 = qd_zero(d);
    const double p2 = p.p2();
    const double p4 = p.p4();
    double s = 0.0;
    bool inside = false;
    switch (c.gap) {
        case Mark::Zero:
            inside = z0 > 0.0 && z0 < p2;
            if (inside) s = logit(z0 / p2);
            break;
        case Mark::P2:
            inside = z0 > p2 && z0 < 1.0;
            if (inside) s = logit((z0 - p2) / (1.0 - p2));
            break;
        case Mark::One:
            inside = z0 > 1.0 && z0 < p4;
            if (inside) s = logit((z0 - 1.0) / (p4 - 1.0));
            break;
        case Mark::P4:
            inside = z0 > p4 && std::isfinite(z0);
            if (inside) s = std::log(z0 / p4 - 1.0);
            break;
        case Mark::Inf:
            inside = z0 < 0.0 && std::isfinite(z0);
            if (inside) s = std::log(-z0);
            break;
    }
    x.s = inside && std::isfinite(s) ? s : 0.0;
    return x;
}

namespace {

class Problem {
public:
    Problem(const Chamber& chamber, const QuadratureSpec& spec) : chamber_(chamber), spec_(spec) {}

    int dim() const { return chamber_.degenerate ? 2 : 3; }

    // Ratios of hexagon_rep at x; empty when x is not admissible.
    std::vector<double> ratios(const SolverPoint& x) const {
        try {
            const PentagonDirection pd = decode(chamber_, x);
            const HexagonClass h = hexagon_rep(pd.pentagon, pd.direction, spec_);
            if (classify(h) != chamber_) return {};
            auto r = shape_ratios(h);
            for (double v : r) {
                if (!std::isfinite(v)) return {};
            }
            return r;
        } catch (const RangeError&) {
            hit_guard_ = true;
            return {};
        } catch (const Error&) {
            return {};
        }
    }

    bool hit_guard() const { return hit_guard_; }

    const Chamber& chamber() const { return chamber_; }

private:
    Chamber chamber_;
    QuadratureSpec spec_;
    mutable bool hit_guard_ = false;
};

SolverPoint shifted(const SolverPoint& x, int i, double delta) {
    SolverPoint y = x;
    (i == 0 ? y.u : i == 1 ? y.v : y.s) += delta;
    return y;
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

struct StageResult {
    SolverPoint x;
    double residual = kInfinity;
    int iterations = 0;
    bool converged = false;
};

constexpr double kResidualTol = 1e-10;
constexpr double kStepTol = 1e-12;
constexpr double kStagnationTol = 1e-8;
constexpr int kMaxIterations = 60;
constexpr double kFdStep = 1e-6;
constexpr double kMaxStep = 2.0;
constexpr double kMinHomotopyStep = 1.0 / 4096.0;

StageResult newton(const Problem& prob, const std::vector<double>& target, SolverPoint x) {
    StageResult out;
    const int n = prob.dim();
    auto r0 = prob.ratios(x);
    if (r0.empty()) {
        out.x = x;
        return out;
    }
    std::vector<double> f = minus(r0, target);
    for (int it = 0; it < kMaxIterations; ++it) {
        out.iterations = it;
        const double fn = norm_inf(f);
        out.x = x;
        out.residual = fn;
        if (fn < kResidualTol) {
            out.converged = true;
            return out;
        }
        Eigen::MatrixXd jac(n, n);
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            const auto rj = prob.ratios(shifted(x, j, kFdStep));
            if (rj.empty()) {
                const auto rm = prob.ratios(shifted(x, j, -kFdStep));
                if (rm.empty()) {
                    ok = false;
                    break;
                }
                for (int i = 0; i < n; ++i) jac(i, j) = (r0[static_cast<std::size_t>(i)] - rm[static_cast<std::size_t>(i)]) / kFdStep;
            } else {
                for (int i = 0; i < n; ++i) jac(i, j) = (rj[static_cast<std::size_t>(i)] - r0[static_cast<std::size_t>(i)]) / kFdStep;
            }
        }
        if (!ok) return out;
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) rhs(i) = -f[static_cast<std::size_t>(i)];
        Eigen::VectorXd delta = jac.fullPivLu().solve(rhs);
        if (!delta.allFinite()) return out;
        const double dmax = delta.cwiseAbs().maxCoeff();
        if (dmax > kMaxStep) delta *= kMaxStep / dmax;

        const double f2 = norm2(f);
        double lambda = 1.0;
        bool accepted = false;
        while (lambda > 1e-10) {
            SolverPoint trial = x;
            trial.u += lambda * delta(0);
            trial.v += lambda * delta(1);
            if (n == 3) trial.s += lambda * delta(2);
            const auto rt = prob.ratios(trial);
            if (!rt.empty()) {
                auto ft = minus(rt, target);
                if (norm2(ft) < (1.0 - 1e-4 * lambda) * f2) {
                    x = trial;
                    r0 = rt;
                    f = std::move(ft);
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        const double step = lambda * delta.cwiseAbs().maxCoeff();
        if (!accepted || step < kStepTol) {
            out.x = x;
            out.residual = norm_inf(f);
            out.converged = out.residual < kStagnationTol;
            return out;
        }
    }
    out.x = x;
    out.residual = norm_inf(f);
    out.converged = out.residual < kResidualTol;
    return out;
}

// (p2, p4) = (0.5, 2) with the zero in the middle of its gap.
SolverPoint default_init() { return SolverPoint{logit(0.5), std::log(2.0 - 1.0), 0.0}; }

}  // namespace

std::vector<double> residual_function(const SolverPoint& x, const HexagonClass& h, const QuadratureSpec& spec) {
    const Chamber c = classify(h);
    const PentagonDirection pd = decode(c, x);
    const HexagonClass g = hexagon_rep(pd.pentagon, pd.direction, spec);
    if (classify(g) != c) throw ShapeError("solver point left the chamber of the target class");
    return minus(shape_ratios(g), shape_ratios(h));
}

InverseResult pentagon_from_hexagon(const HexagonClass& h, const std::optional<PentagonDirection>& init,
                                    const QuadratureSpec& spec) {
    const Chamber chamber = classify(h);
    const double closure = closure_residual(h);
    if (!(closure < kClosureTolerance)) {
        std::ostringstream os;
        os << "target hexagon does not close (residual " << closure << ")";
        throw ShapeError(os.str());
    }
    const auto target = shape_ratios(h);
    for (double v : target) {
        if (!std::isfinite(v)) throw ShapeError("target hexagon has a degenerate side");
    }
    const Problem prob(chamber, spec);
    SolverPoint x0 = init ? encode(chamber, init->pentagon, init->direction) : default_init();
    auto start = prob.ratios(x0);
    if (start.empty() && init) {
        x0 = default_init();
        start = prob.ratios(x0);
    }

    auto finish = [&](const StageResult& r, bool continuation, int iterations) {
        const PentagonDirection pd = decode(chamber, r.x);
        return InverseResult{pd.pentagon, pd.direction, r.residual, iterations, continuation};
    };

    StageResult direct = newton(prob, target, x0);
    if (direct.converged) return finish(direct, false, direct.iterations);

    // Homotopy from the ratios at the initial guess to the target.
    double best = direct.residual;
    if (!start.empty()) {
        // Adaptive steps along the straight line from the start ratios.
        SolverPoint x = x0;
        int iterations = direct.iterations;
        double w = 0.0;
        double dw = 1.0 / 8.0;
        while (dw >= kMinHomotopyStep) {
            const double wk = std::min(1.0, w + dw);
            std::vector<double> tk(target.size());
            for (std::size_t i = 0; i < tk.size(); ++i) tk[i] = (1.0 - wk) * start[i] + wk * target[i];
            const StageResult r = newton(prob, tk, x);
            iterations += r.iterations;
            if (!r.converged) {
                dw *= 0.5;
                continue;
            }
            if (wk == 1.0) return finish(r, true, iterations);
            x = r.x;
            w = wk;
            dw = std::min(2.0 * dw, 0.25);
        }
        const auto reached = prob.ratios(x);
        if (!reached.empty()) best = std::min(best, norm_inf(minus(reached, target)));
    }
    std::ostringstream os;
    os << "inverse parameter solve did not converge (best residual " << best << ")";
    if (prob.hit_guard()) os << "; iterates reached the guard boundary, the solution may lie outside the guard domain";
    throw ConvergenceError(os.str(), best);
}

}  // namespace teichpent
