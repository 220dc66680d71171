#pragma once

// Teichmueller maps between pentagons: the horizontal stretch of the hexagon
// picture, the family P(K, phi), the extremal problem between two pentagons,
// and numerical checks of dilatation.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "teichpent/core.hpp"
#include "teichpent/inverse.hpp"
#include "teichpent/quadrature.hpp"
#include "teichpent/sc_map.hpp"

namespace teichpent {

/// (K, phi) with K >= 1.
class TeichParam {
public:
    /// Throws RangeError when K < 1 or K is not finite.
    TeichParam(double K, Direction phi);

    double K() const noexcept { return K_; }
    Direction phi() const noexcept { return phi_; }

private:
    double K_;
    Direction phi_;
};

/// Multiplies every horizontal segment by K and renormalizes. Throws
/// RangeError for K <= 0.
HexagonClass stretch(const HexagonClass& h, double K);

/// P(K, phi) together with the direction the inverse solve lands on.
struct TeichImage {
    Pentagon pentagon;
    Direction direction;
    double residual = 0.0;
};

/// `hint` seeds the inverse solve (defaults to (p, phi)).
TeichImage teich_image(const Pentagon& p, const TeichParam& t, const QuadratureSpec& spec = {},
                       const std::optional<PentagonDirection>& hint = std::nullopt);

Pentagon teich_point(const Pentagon& p, const TeichParam& t, const QuadratureSpec& spec = {});

struct ExtremalResult {
    double K = 1.0;
    Direction phi;
    /// Teichmueller distance, (1/2) log K.
    double distance = 0.0;
    /// Max mismatch of (logit p2, log(p4 - 1)) between P(K, phi) and the target.
    double residual = 0.0;
    /// Direction of the image pentagon's hexagon picture.
    Direction image_direction;
    /// Set when p == q: every phi is extremal.
    bool non_unique = false;
};

/// Finds (K, phi) with P(K, phi) = q. The solve runs in Cartesian
/// coordinates (log K cos phi, log K sin phi): a 12-direction scan at small
/// radius picks the start, then path continuation walks the target in from p.
ExtremalResult extremal_map(const Pentagon& p, const Pentagon& q, const QuadratureSpec& spec = {});

double teich_distance(const Pentagon& p, const Pentagon& q, const QuadratureSpec& spec = {});

struct GeodesicSample {
    double K = 1.0;
    Pentagon pentagon;
    Direction direction;
};

/// Samples P(K_j, phi) at K_j = exp(j log K_max / steps), j = 0..steps. A
/// ray with K_max == 1 collapses to the single sample (1, p).
std::vector<GeodesicSample> geodesic_ray(const Pentagon& p, Direction d, double K_max, int steps,
                                         const QuadratureSpec& spec = {});

/// The extremal map z -> w between two pentagons, realized as
/// zeta_q^-1(K Re zeta_p(z) + i Im zeta_p(z)).
class ExtremalMap {
public:
    ExtremalMap(const Pentagon& p, const Pentagon& q, const QuadratureSpec& spec = {});
    ExtremalMap(const Pentagon& p, const Pentagon& q, const ExtremalResult& result,
                const QuadratureSpec& spec = {});

    const ExtremalResult& result() const noexcept { return result_; }
    const ConformalChart& source_chart() const noexcept { return source_; }
    const ConformalChart& target_chart() const noexcept { return target_; }

    struct Point {
        cplx z;
        cplx zeta;  // zeta_p(z)
        cplx w;
    };

    /// Interior points go through the seeded Newton inverse; points on the
    /// real axis use the boundary preimage (w is real, possibly infinite).
    Point map(cplx z) const;
    /// Maps z by continuing from a nearby, already mapped point.
    Point map_near(const Point& ref, cplx z) const;

    cplx operator()(cplx z) const { return map(z).w; }

    /// The affine stretch in the units of the two normalized charts.
    cplx stretch(cplx zeta) const;

private:
    ExtremalResult result_;
    ConformalChart source_;
    ConformalChart target_;
    double stretch_scale_ = 1.0;
};

cplx apply_extremal_map(const Pentagon& p, const Pentagon& q, cplx z, const QuadratureSpec& spec = {});

/// Axis-aligned sample grid, row-major; rows vary Im z, columns Re z.
struct SampleGrid {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> z;
    std::vector<cplx> w;

    cplx z_at(int r, int c) const { return z[static_cast<std::size_t>(r * cols + c)]; }
    cplx w_at(int r, int c) const { return w[static_cast<std::size_t>(r * cols + c)]; }
};

struct DilatationSample {
    int row = 0;
    int col = 0;
    cplx z;
    double value = 1.0;
    /// |w_z| <= |w_zbar|: the map lost orientation here; value is infinite.
    bool flagged = false;
};

/// Central-difference dilatation quotient (|w_z| + |w_zbar|) / (|w_z| -
/// |w_zbar|) at every interior node.
std::vector<DilatationSample> dilatation_estimate(const SampleGrid& grid);

/// Angular widths of the five boundary arcs after sending the upper
/// half-plane to the disc by z -> (z - i) / (z + i).
std::array<double, 5> sector_widths(const Pentagon& p);

/// max_i max(a_i, 1/a_i) with a_i = q_widths[i] / p_widths[i].
double sector_dilatation_from_widths(std::span<const double, 5> p_widths, std::span<const double, 5> q_widths);

/// Dilatation of the sector competitor map rho' = rho, theta' = a theta + b;
/// an upper bound for the extremal K.
double sector_map_dilatation(const Pentagon& p, const Pentagon& q);

}  // namespace teichpent
