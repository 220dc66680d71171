#pragma once

// End-to-end property checks shared by the acceptance suite and the CLI
// selftest. Each check runs at fixed, pinned tolerances and reports what it
// measured.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "teichpent/core.hpp"
#include "teichpent/quadrature.hpp"

namespace teichpent::validation {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct CheckOptions {
    /// Reduced sample sizes for quick runs.
    bool fast = false;
    std::uint64_t seed = 20240615;
    QuadratureSpec spec;
};

/// Random (p2, p4, phi) with p2 in [0.01, 0.99], p4 log-uniform in
/// [1.01, 100], and the zero at chordal distance >= 1e-2 from every mark.
struct Configuration {
    Pentagon pentagon;
    Direction direction;
};
Configuration random_configuration(std::mt19937_64& rng);
Pentagon random_pentagon(std::mt19937_64& rng);

CheckResult check_closure(const CheckOptions& o);
CheckResult check_quadrature_oracle(const CheckOptions& o);
CheckResult check_quadrilateral(const CheckOptions& o);
CheckResult check_round_trip(const CheckOptions& o);
CheckResult check_bijectivity(const CheckOptions& o);
CheckResult check_identity(const CheckOptions& o);
CheckResult check_extremality_bound(const CheckOptions& o);
CheckResult check_constant_dilatation(const CheckOptions& o);
CheckResult check_metric(const CheckOptions& o);
CheckResult check_degeneration(const CheckOptions& o);

/// All ten checks in order.
std::vector<CheckResult> run_all(const CheckOptions& o);

/// "[PASS] 3 quadrilateral-oracle  detail (0.01 s)".
std::string format_line(const CheckResult& r);

}  // namespace teichpent::validation
