#include "teichpent/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "teichpent/error.hpp"

namespace teichpent {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

nlohmann::json to_json(const Pentagon& p) { return {{"p2", p.p2()}, {"p4", p.p4()}}; }

namespace {

const char* turn_code(Turn t) {
    switch (t) {
        case Turn::Left: return "+";
        case Turn::Right: return "-";
        case Turn::Straight: return "0";
    }
    return "0";
}

}  // namespace

nlohmann::json to_json(const HexagonClass& h) {
    nlohmann::json j;
    j["segments"] = nlohmann::json::array();
    j["turns"] = nlohmann::json::array();
    for (std::size_t i = 0; i < 6; ++i) {
        j["segments"].push_back(h.segments[i]);
        j["turns"].push_back(turn_code(h.turns[i]));
    }
    j["first_axis"] = h.first_axis == Axis::H ? "H" : "V";
    nlohmann::json labels = nlohmann::json::object();
    for (Mark m : kMarks) labels[std::string(mark_name(m))] = h.label(m);
    j["labels"] = labels;
    return j;
}

std::string check_pentagon_schema(const nlohmann::json& j) {
    if (!j.is_object()) return "pentagon must be an object";
    for (const char* key : {"p2", "p4"}) {
        if (!j.contains(key)) return std::string("missing field ") + key;
        if (!j[key].is_number()) return std::string("field ") + key + " must be a number";
    }
    return {};
}

std::string check_hexagon_schema(const nlohmann::json& j) {
    if (!j.is_object()) return "hexagon must be an object";
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].size() != 6) {
        return "segments must be an array of 6 numbers";
    }
    for (const auto& s : j["segments"]) {
        if (!s.is_number()) return "segments must be numbers";
    }
    if (!j.contains("turns") || !j["turns"].is_array() || j["turns"].size() != 6) {
        return "turns must be an array of 6 strings";
    }
    for (const auto& t : j["turns"]) {
        if (!t.is_string()) return "turns must be strings";
        const auto v = t.get<std::string>();
        if (v != "+" && v != "-" && v != "0") return "turn codes are \"+\", \"-\" or \"0\"";
    }
    if (!j.contains("first_axis") || !j["first_axis"].is_string()) return "first_axis must be a string";
    const auto axis = j["first_axis"].get<std::string>();
    if (axis != "H" && axis != "V") return "first_axis must be \"H\" or \"V\"";
    if (!j.contains("labels") || !j["labels"].is_object()) return "labels must be an object";
    for (Mark m : kMarks) {
        const std::string key(mark_name(m));
        if (!j["labels"].contains(key)) return "labels is missing " + key;
        if (!j["labels"][key].is_number_integer()) return "label " + key + " must be an integer";
    }
    if (j["labels"].size() != 5) return "labels has unexpected keys";
    return {};
}

Pentagon pentagon_from_json(const nlohmann::json& j) {
    const auto err = check_pentagon_schema(j);
    if (!err.empty()) throw RangeError(err);
    return Pentagon(j["p2"].get<double>(), j["p4"].get<double>());
}

HexagonClass hexagon_from_json(const nlohmann::json& j) {
    const auto err = check_hexagon_schema(j);
    if (!err.empty()) throw ShapeError(err);
    HexagonClass h;
    for (std::size_t i = 0; i < 6; ++i) {
        h.segments[i] = j["segments"][i].get<double>();
        const auto t = j["turns"][i].get<std::string>();
        h.turns[i] = t == "+" ? Turn::Left : t == "-" ? Turn::Right : Turn::Straight;
    }
    h.first_axis = j["first_axis"].get<std::string>() == "H" ? Axis::H : Axis::V;
    for (Mark m : kMarks) {
        const int c = j["labels"][std::string(mark_name(m))].get<int>();
        if (c < 0 || c > 5) throw ShapeError("label corner index out of range");
        h.labels[static_cast<std::size_t>(index_of(m))] = c;
    }
    return h;
}

void write_svg(std::ostream& os, const HexagonClass& h) {
    const auto v = h.vertices();
    double xmin = kInfinity, xmax = -kInfinity, ymin = kInfinity, ymax = -kInfinity;
    for (const auto& z : v) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    const double height = ymax - ymin;
    const double s = height > 0.0 ? 1.0 / height : 1.0;
    const double pad = 0.08;
    const double width = (xmax - xmin) * s;
    // SVG y grows downward.
    auto px = [&](cplx z) { return (z.real() - xmin) * s; };
    auto py = [&](cplx z) { return (ymax - z.imag()) * s; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_number(-pad) << ' '
       << format_number(-pad) << ' ' << format_number(width + 2 * pad) << ' ' << format_number(1.0 + 2 * pad)
       << "\" width=\"" << format_number(400.0 * (width + 2 * pad)) << "\" height=\""
       << format_number(400.0 * (1.0 + 2 * pad)) << "\">\n";
    os << "  <polygon fill=\"none\" stroke=\"black\" stroke-width=\"0.005\" points=\"";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << format_number(px(v[i])) << ',' << format_number(py(v[i]));
    }
    os << "\"/>\n";
    auto label = [&](int corner, std::string_view text) {
        // Corner i is the end of segment i, i.e. vertex i + 1.
        const cplx z = v[static_cast<std::size_t>((corner + 1) % 6)];
        os << "  <circle cx=\"" << format_number(px(z)) << "\" cy=\"" << format_number(py(z))
           << "\" r=\"0.01\" fill=\"black\"/>\n";
        os << "  <text x=\"" << format_number(px(z) + 0.015) << "\" y=\"" << format_number(py(z) - 0.015)
           << "\" font-size=\"0.05\">" << text << "</text>\n";
    };
    for (Mark m : kMarks) label(h.label(m), mark_name(m));
    if (!h.degenerate()) label(h.notch_corner(), "z0");
    os << "</svg>\n";
}

}  // namespace teichpent
