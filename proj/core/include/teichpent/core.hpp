#pragma once

// Domain types for normalized pentagons, the quadratic differential that
// straightens them, and the axis-parallel hexagon classes it produces.

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace teichpent {

using cplx = std::complex<double>;

/// The point at infinity of the extended real line. Both signed IEEE
/// infinities denote the same point.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace guard {
inline constexpr double kP2Margin = 1e-8;
inline constexpr double kP4Max = 1e8;
/// Chordal distance below which the zero of the differential counts as
/// having merged with a pole.
inline constexpr double kMergeTol = 1e-9;
}  // namespace guard

/// Chordal (spherical) distance on the extended real line.
double chordal_distance(double x, double y) noexcept;

/// The five distinguished boundary points of a normalized pentagon, in
/// counterclockwise order 0, p2, 1, p4, inf.
enum class Mark : int { Zero = 0, P2 = 1, One = 2, P4 = 3, Inf = 4 };

inline constexpr std::array<Mark, 5> kMarks{Mark::Zero, Mark::P2, Mark::One, Mark::P4,
                                            Mark::Inf};

constexpr int index_of(Mark m) noexcept { return static_cast<int>(m); }
std::string_view mark_name(Mark m) noexcept;
std::optional<Mark> mark_from_name(std::string_view name) noexcept;

/// Conformal class of a disc with five boundary marks, coded by the
/// positions of the second and fourth mark once the others sit at 0, 1, inf.
class Pentagon {
public:
    /// Throws RangeError outside 1e-8 <= p2 <= 1-1e-8, 1+1e-8 <= p4 <= 1e8.
    Pentagon(double p2, double p4);

    double p2() const noexcept { return p2_; }
    double p4() const noexcept { return p4_; }
    double mark(Mark m) const noexcept;
    std::array<double, 5> marks() const noexcept;

    friend bool operator==(const Pentagon&, const Pentagon&) = default;

private:
    double p2_;
    double p4_;
};

/// Real Moebius transformation x -> (a x + b) / (c x + d).
struct MoebiusMap {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    /// Acts on the extended real line; returns kInfinity at the pole.
    double operator()(double x) const noexcept;
    cplx operator()(cplx z) const noexcept;
};

/// Five points on the extended real line in counterclockwise cyclic order.
class BoundaryQuintuple {
public:
    /// Throws DegeneracyError on coincident points, OrderingError when the
    /// sequence is not a cyclic rotation of an increasing one.
    explicit BoundaryQuintuple(const std::array<double, 5>& points);

    const std::array<double, 5>& points() const noexcept { return points_; }

private:
    std::array<double, 5> points_;
};

struct NormalizedPentagon {
    Pentagon pentagon;
    MoebiusMap map;
};

/// Sends q1 -> 0, q3 -> 1, q5 -> inf and reads off p2 = T(q2), p4 = T(q4).
NormalizedPentagon normalize_pentagon(const BoundaryQuintuple& q);

/// Angle parameter of the differential, reduced to [0, 2pi).
class Direction {
public:
    explicit Direction(double phi = 0.0) noexcept;

    double phi() const noexcept { return phi_; }

    friend bool operator==(const Direction&, const Direction&) = default;

private:
    double phi_;
};

/// Signed angular difference a - b folded into (-pi, pi].
double angle_difference(Direction a, Direction b) noexcept;

/// -cot(phi), or the point at infinity when sin(phi) == 0.
double qd_zero(Direction d) noexcept;

/// The differential (cos phi + z sin phi) / (z (z-p2) (z-1) (z-p4)) dz^2.
class QuadraticDifferential {
public:
    QuadraticDifferential(const Pentagon& p, Direction d);

    const Pentagon& pentagon() const noexcept { return pentagon_; }
    Direction direction() const noexcept { return direction_; }

    /// Position of the simple zero; kInfinity when it sits at infinity.
    double zero() const noexcept { return zero_; }
    /// The mark the zero collided with, if any.
    std::optional<Mark> merged_mark() const noexcept { return merged_; }
    bool degenerate() const noexcept { return merged_.has_value(); }

    /// Throws PoleError at 0, p2, 1, p4.
    cplx operator()(cplx z) const;
    double operator()(double x) const;

private:
    Pentagon pentagon_;
    Direction direction_;
    double zero_;
    std::optional<Mark> merged_;
};

cplx qd_eval(const QuadraticDifferential& qd, cplx z);

enum class Axis { H, V };

constexpr Axis other(Axis a) noexcept { return a == Axis::H ? Axis::V : Axis::H; }

/// A partition point of the boundary: a mark, the zero, or both when merged.
struct BoundaryPoint {
    double x = 0.0;
    std::optional<Mark> mark;
    bool is_zero = false;

    bool merged() const noexcept { return mark.has_value() && is_zero; }
    /// Order of the differential at this point: -1 pole, +1 zero, 0 merged.
    int order() const noexcept { return merged() ? 0 : (is_zero ? 1 : -1); }
};

/// Boundary arc between consecutive partition points, traversed with the
/// upper half-plane on the left. An arc whose `from` point is infinity runs
/// up from -inf.
struct Arc {
    BoundaryPoint from;
    BoundaryPoint to;
    Axis axis = Axis::H;
};

/// Cyclic partition of the boundary starting at the mark 0. Six arcs in the
/// generic case, five when the zero has merged with a mark.
std::vector<Arc> boundary_arcs(const QuadraticDifferential& qd);

/// Turning angle at a polygon corner, in units of pi/2.
enum class Turn : int { Right = -1, Straight = 0, Left = 1 };

/// Dimensions of the canonical L: vertices (0,0), (A,0), (A,B), (a,B),
/// (a,B+b), (0,B+b), re-entrant corner at (a,B).
struct LShape {
    double a = 0.0;
    double b = 0.0;
    double A = 0.0;
    double B = 0.0;
};

/// Axis-parallel hexagon up to zeta -> a zeta + b (a real, nonzero).
///
/// Segment 0 starts at the image of the mark 0; turn[i] sits at the corner
/// between segment i and segment i+1, and labels[m] is the corner index of
/// mark m. The one unlabeled corner is the notch: the re-entrant corner in
/// the generic case, or a flat placeholder that ends a zero-length segment
/// in the rectangular case.
struct HexagonClass {
    std::array<double, 6> segments{};
    std::array<Turn, 6> turns{};
    Axis first_axis = Axis::H;
    std::array<int, 5> labels{};

    /// True for rectangular classes (no re-entrant corner).
    bool degenerate() const noexcept;
    /// Index of the unlabeled corner.
    int notch_corner() const noexcept;
    int label(Mark m) const noexcept { return labels[static_cast<std::size_t>(index_of(m))]; }
    Axis segment_axis(int i) const noexcept;
    /// Copy rescaled so the largest segment is 1.
    HexagonClass normalized() const;
    /// Vertex k is the start of segment k; vertex 0 sits at the origin and
    /// segment 0 points along +1 (H) or +i (V).
    std::vector<cplx> vertices() const;
};

bool hexagon_equal(const HexagonClass& h1, const HexagonClass& h2, double tol);

/// Reads the canonical L dimensions relative to the notch corner. In the
/// rectangular case this yields a == A.
LShape l_shape(const HexagonClass& h);

/// Builds a generic class from L dimensions with the notch placed in the
/// boundary gap that follows `gap`; `long_axis` is the axis of side A.
HexagonClass hexagon_from_l_shape(const LShape& l, Mark gap = Mark::Inf,
                                  Axis long_axis = Axis::H);

}  // namespace teichpent
