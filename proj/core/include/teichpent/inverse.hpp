#pragma once

// The parameter problem: recover (p2, p4, phi) from prescribed hexagon
// side data.

#include <optional>
#include <vector>

#include "teichpent/core.hpp"
#include "teichpent/quadrature.hpp"

namespace teichpent {

/// Combinatorial type of a hexagon class: which boundary gap holds the zero
/// of the differential, whether it merged with the mark opening that gap, and
/// the axis of segment 0.
struct Chamber {
    Mark gap = Mark::Inf;
    bool degenerate = false;
    Axis first_axis = Axis::H;

    friend bool operator==(const Chamber&, const Chamber&) = default;
};

/// Throws ShapeError when the turn/label pattern of h is not one the
/// forward map produces.
Chamber classify(const HexagonClass& h);

/// Log shape ratios of the canonical L: (log a/(A-a), log b/B, log B/A) for
/// generic classes, (log b/B, log B/A) for rectangular ones. Scale invariant.
std::vector<double> shape_ratios(const HexagonClass& h);

/// Unconstrained solver coordinates: u = logit p2, v = log(p4 - 1), and s
/// locating the zero inside its gap (unused for rectangular classes).
struct SolverPoint {
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
};

struct PentagonDirection {
    Pentagon pentagon;
    Direction direction;
};

/// Maps solver coordinates to (pentagon, direction) inside the given
/// chamber. Throws RangeError when p2 or p4 leaves the guard domain.
PentagonDirection decode(const Chamber& c, const SolverPoint& x);
/// Inverse of decode; s = 0 when the direction's zero lies outside the
/// chamber's gap.
SolverPoint encode(const Chamber& c, const Pentagon& p, Direction d);

/// Shape-ratio mismatch between hexagon_rep at x and h.
std::vector<double> residual_function(const SolverPoint& x, const HexagonClass& h,
                                      const QuadratureSpec& spec = {});

struct InverseResult {
    Pentagon pentagon;
    Direction direction;
    double residual = 0.0;
    int iterations = 0;
    bool used_continuation = false;
};

/// Solves hexagon_rep(p, phi) ~ h. Damped Newton with a finite-difference
/// Jacobian, then an adaptive-step homotopy in ratio space when the direct solve
/// stalls. Throws ShapeError for unrealizable patterns and ConvergenceError
/// with the best residual on failure.
InverseResult pentagon_from_hexagon(const HexagonClass& h,
                                    const std::optional<PentagonDirection>& init = std::nullopt,
                                    const QuadratureSpec& spec = {});

}  // namespace teichpent
