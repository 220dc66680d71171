#pragma once

// Slow reference computations for cross-checking the main pipeline. Nothing
// here calls into the quadrature module except quad_modulus_oracle, which is
// defined as the main machinery run at oracle tolerance.

#include <string>
#include <utility>
#include <vector>

#include "teichpent/core.hpp"

namespace teichpent {

struct OracleReport {
    double value = 0.0;
    std::string method;
    double est_error = 0.0;
};

/// Arithmetic-geometric mean; throws RangeError unless a, b > 0.
double agm(double a, double b);

/// Complete elliptic integral of the first kind, modulus k in [0, 1).
double elliptic_K(double k);

/// Modulus L(0,p) / L(p,1) of the quadrilateral (0, p, 1, inf) from the
/// 4-pole specialization of the side-length integral at rel_tol 1e-12.
OracleReport quad_modulus_report(double p);
double quad_modulus_oracle(double p);

/// K(sqrt p) / K(sqrt(1-p)), the closed form the oracle above validates.
double quad_modulus_closed_form(double p);

/// Marks of the adjacent-side relabel of (0, p, 1, inf), renormalized.
double quad_relabel(double p);

/// One factor (x - location)^order of a real differential.
struct Factor {
    double location = 0.0;
    int order = -1;
};

/// Integral of sqrt|scale * prod (x - s)^m| over [a, b] (either end may be
/// infinite) by Simpson halving in the variable t = sqrt|x - endpoint|,
/// with tails sent to a finite interval by x = +-R / u^2. Stops once two
/// successive refinements agree to 1e-11 relative; throws AccuracyError
/// after 60 levels.
OracleReport brute_factored_integral(double scale, const std::vector<Factor>& factors, double a, double b);

/// Independent evaluation of the side length of one boundary arc.
OracleReport brute_side_length(const QuadraticDifferential& qd, const Arc& arc);

/// Direct substitution into (cos phi + z sin phi) / (z (z-p2) (z-1) (z-p4)).
cplx direct_qd_value(double p2, double p4, double phi, cplx z);

}  // namespace teichpent
