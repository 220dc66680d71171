#pragma once

// Forward Schwarz-Christoffel map from a normalized pentagon and direction
// to its axis-parallel hexagon class, with boundary and interior evaluation
// of zeta(z) = integral of sqrt(Q(z)) dz.

#include <memory>
#include <vector>

#include "teichpent/core.hpp"
#include "teichpent/quadrature.hpp"

namespace teichpent {

/// Closure defects above this trigger a ConsistencyError in hexagon_rep.
inline constexpr double kClosureTolerance = 1e-6;

/// Max of the horizontal and vertical closure defects, relative to the
/// largest segment.
double closure_residual(const HexagonClass& h);

/// Normalized hexagon class of (p, d). Throws AccuracyError from the
/// quadrature and ConsistencyError when the polygon fails to close.
HexagonClass hexagon_rep(const Pentagon& p, Direction d, const QuadratureSpec& spec = {});

/// The map zeta for one (pentagon, direction) pair, in the units of the
/// normalized class: zeta(0) = 0 and segment 0 leaves the origin along +1
/// (H) or +i (V).
class ConformalChart {
public:
    ConformalChart(const Pentagon& p, Direction d, const QuadratureSpec& spec = {});

    const QuadraticDifferential& differential() const noexcept { return qd_; }
    const Pentagon& pentagon() const noexcept { return qd_.pentagon(); }
    Direction direction() const noexcept { return qd_.direction(); }
    const HexagonClass& hexagon() const noexcept { return hexagon_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    /// Raw length of the longest segment (the normalization divisor).
    double scale() const noexcept { return scale_; }
    /// Polygon corners; corner i is the end of segment i.
    std::vector<cplx> corners() const;

    /// d zeta / dz, holomorphic in the upper half-plane.
    cplx derivative(cplx z) const;

    /// Image of a point of the extended real line.
    cplx boundary(double x) const;

    /// Path integral from the base point 0: up to height
    /// max(Im z, half the smallest gap between singular points), across, then
    /// down to z. Throws PoleError within 1e-12 of a singular point.
    cplx interior(cplx z) const;
    /// Same with an explicit path height.
    cplx interior(cplx z, double height) const;

    /// zeta(to) from a known value zeta(from) by integrating along the
    /// straight segment; both points in the closed upper half-plane.
    cplx advance(cplx from, cplx zeta_from, cplx to) const;

    /// Preimage of an interior point of the hexagon by damped Newton
    /// iteration from the nearest tabulated seed. Throws
    /// CornerProximityError when every seed diverges.
    cplx inverse(cplx zeta) const;
    /// Newton iteration from an explicit seed pair (z, zeta(z)).
    cplx inverse(cplx zeta, cplx seed_z, cplx seed_zeta) const;

    /// Preimage on the extended real line of a point on the hexagon boundary.
    double boundary_preimage(cplx zeta) const;

private:
    struct SeedTable;

    cplx segment_integral(cplx from, cplx to, bool singular_start) const;
    double min_gap() const;
    int arc_of(double x) const;
    bool try_newton(cplx target, cplx& z, cplx& zeta) const;
    const SeedTable& seeds() const;

    QuadratureSpec spec_;
    QuadraticDifferential qd_;
    RealDifferential diff_;
    std::vector<Arc> arcs_;
    std::vector<double> arc_length_;  // normalized units
    std::vector<cplx> arc_start_;
    std::vector<cplx> arc_dir_;
    HexagonClass hexagon_;
    double scale_ = 1.0;
    cplx branch_{1.0, 0.0};
    std::shared_ptr<SeedTable> seeds_;
};

cplx evaluate_boundary(const Pentagon& p, Direction d, double x, const QuadratureSpec& spec = {});
cplx evaluate_interior(const Pentagon& p, Direction d, cplx z, const QuadratureSpec& spec = {});

/// Even-odd point-in-polygon test.
bool point_in_polygon(const std::vector<cplx>& polygon, cplx z);

/// Distance from z to the nearest corner of the polygon.
double distance_to_corners(const std::vector<cplx>& polygon, cplx z);

}  // namespace teichpent
