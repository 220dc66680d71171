#pragma once

// JSON, number formatting and SVG output for pentagons and hexagon classes.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "teichpent/core.hpp"

namespace teichpent {

/// Shortest decimal that round-trips, at most 17 significant digits.
std::string format_number(double x);

nlohmann::json to_json(const Pentagon& p);
nlohmann::json to_json(const HexagonClass& h);

/// Throws ShapeError (hexagons) or RangeError (pentagons) on malformed input.
Pentagon pentagon_from_json(const nlohmann::json& j);
HexagonClass hexagon_from_json(const nlohmann::json& j);

/// Returns an empty string when j matches the schema, else a description
/// of the first violation.
std::string check_pentagon_schema(const nlohmann::json& j);
std::string check_hexagon_schema(const nlohmann::json& j);

/// Axis-parallel drawing of h at unit height: stroke-only polygon, the five
/// labeled marks, and "z0" at the re-entrant corner.
void write_svg(std::ostream& os, const HexagonClass& h);

}  // namespace teichpent
