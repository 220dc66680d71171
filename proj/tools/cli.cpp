#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "teichpent/error.hpp"
#include "teichpent/inverse.hpp"
#include "teichpent/io.hpp"
#include "teichpent/sc_map.hpp"
#include "teichpent/teich.hpp"
#include "teichpent/validation.hpp"

namespace teichpent::cli {

namespace {

// Bad command-line input that CLI11 itself cannot detect.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text, const std::string& what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        throw UsageError("malformed number for " + what + ": '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(parse_number(std::string_view(text).substr(start, comma - start), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != n) {
        throw UsageError(what + " expects " + std::to_string(n) + " comma-separated numbers, got '" + text + "'");
    }
    return out;
}

Pentagon parse_pentagon(const std::string& text, const std::string& what) {
    const auto v = parse_list(text, 2, what);
    return Pentagon(v[0], v[1]);
}

QuadratureSpec make_spec(const std::optional<double>& tol) {
    QuadratureSpec spec;
    if (const char* env = std::getenv("TEICHPENT_TOL"); env && *env) {
        spec.rel_tol = parse_number(env, "TEICHPENT_TOL");
    }
    if (tol) spec.rel_tol = *tol;
    if (!(spec.rel_tol > 0.0) || !(spec.rel_tol < 1.0)) throw RangeError("tolerance must lie in (0, 1)");
    spec.validate();
    return spec;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw UsageError("failed writing '" + path + "'");
}

// Streams rows to `path` (or `out` when empty); a failure part-way removes
// the partial file.
void with_table(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        std::ostringstream buffer;
        body(buffer);
        out << buffer.str();
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "' for writing");
    try {
        body(f);
        f.close();
        if (!f) throw UsageError("failed writing '" + path + "'");
    } catch (...) {
        f.close();
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw;
    }
}

std::string join(std::initializer_list<double> values) {
    std::string s;
    for (double v : values) {
        if (!s.empty()) s += ',';
        s += format_number(v);
    }
    return s;
}

int cmd_hexagon(double p2, double p4, double phi, const std::string& svg, const std::string& json_path,
                const std::optional<double>& tol, std::ostream& out) {
    const QuadratureSpec spec = make_spec(tol);
    const Pentagon p(p2, p4);
    const HexagonClass h = hexagon_rep(p, Direction(phi), spec);
    nlohmann::json j = to_json(h);
    j["degenerate"] = h.degenerate();
    j["closure_residual"] = closure_residual(h);
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!json_path.empty()) write_file(json_path, text);
    if (!svg.empty()) {
        std::ostringstream os;
        write_svg(os, h);
        write_file(svg, os.str());
    }
    return kExitOk;
}

int cmd_extremal(const std::string& p_text, const std::string& q_text, const std::string& json_path,
                 const std::optional<double>& tol, std::ostream& out) {
    const QuadratureSpec spec = make_spec(tol);
    const Pentagon p = parse_pentagon(p_text, "--p");
    const Pentagon q = parse_pentagon(q_text, "--q");
    const ExtremalResult r = extremal_map(p, q, spec);
    out << "K " << format_number(r.K) << "\n"
        << "phi " << format_number(r.phi.phi()) << "\n"
        << "distance " << format_number(r.distance) << "\n"
        << "residual " << format_number(r.residual) << "\n";
    if (r.non_unique) out << "note: p equals q, every direction is extremal\n";
    if (!json_path.empty()) {
        nlohmann::json j{{"p", to_json(p)},
                         {"q", to_json(q)},
                         {"K", r.K},
                         {"phi", r.phi.phi()},
                         {"distance", r.distance},
                         {"residual", r.residual},
                         {"image_direction", r.image_direction.phi()},
                         {"non_unique", r.non_unique}};
        write_file(json_path, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_geodesic(const std::string& p_text, double phi, double kmax, int steps, const std::string& csv,
                 const std::optional<double>& tol, std::ostream& out) {
    const QuadratureSpec spec = make_spec(tol);
    const Pentagon p = parse_pentagon(p_text, "--p");
    if (!(kmax >= 1.0) || !std::isfinite(kmax)) throw RangeError("--kmax must be finite and at least 1");
    if (steps < 1) throw RangeError("--steps must be at least 1");
    with_table(csv, out, [&](std::ostream& os) {
        os << "K,p2,p4,distance\n";
        for (const GeodesicSample& s : geodesic_ray(p, Direction(phi), kmax, steps, spec)) {
            os << join({s.K, s.pentagon.p2(), s.pentagon.p4(), 0.5 * std::log(s.K)}) << "\n";
        }
    });
    return kExitOk;
}

int cmd_atlas(const std::string& grid, const std::string& csv, const std::optional<double>& tol, std::ostream& out) {
    const QuadratureSpec spec = make_spec(tol);
    const auto n = parse_list(grid, 3, "--grid");
    for (double v : n) {
        if (!(v >= 1.0) || v != std::floor(v) || v > 10000.0) throw RangeError("--grid entries must be integers in 1..10000");
    }
    const int n2 = static_cast<int>(n[0]);
    const int n4 = static_cast<int>(n[1]);
    const int nphi = static_cast<int>(n[2]);
    with_table(csv, out, [&](std::ostream& os) {
        os << "i,j,k,p2,p4,phi,first_axis,notch,degenerate,s0,s1,s2,s3,s4,s5,closure_residual\n";
        for (int i = 0; i < n2; ++i) {
            for (int j = 0; j < n4; ++j) {
                for (int k = 0; k < nphi; ++k) {
                    const Pentagon p((i + 0.5) / n2, 1.0 / ((j + 0.5) / n4));
                    const Direction d(2.0 * std::numbers::pi * (k + 0.5) / nphi);
                    const HexagonClass h = hexagon_rep(p, d, spec);
                    os << i << ',' << j << ',' << k << ',' << join({p.p2(), p.p4(), d.phi()}) << ','
                       << (h.first_axis == Axis::H ? "H" : "V") << ',' << h.notch_corner() << ','
                       << (h.degenerate() ? 1 : 0);
                    for (double s : h.segments) os << ',' << format_number(s);
                    os << ',' << format_number(closure_residual(h)) << "\n";
                }
            }
        }
    });
    return kExitOk;
}

int cmd_map(const std::string& p_text, const std::string& q_text, const std::string& points,
            const std::string& out_path, const std::optional<double>& tol, std::ostream& out) {
    const QuadratureSpec spec = make_spec(tol);
    const Pentagon p = parse_pentagon(p_text, "--p");
    const Pentagon q = parse_pentagon(q_text, "--q");
    std::ifstream in(points);
    if (!in) throw UsageError("cannot read points file '" + points + "'");
    std::vector<cplx> zs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string re, im, extra;
        if (!(ls >> re)) continue;
        if (re.front() == '#') continue;
        if (!(ls >> im) || (ls >> extra)) {
            throw UsageError("points line " + std::to_string(line_no) + " must hold two numbers \"re im\"");
        }
        const cplx z(parse_number(re, "point"), parse_number(im, "point"));
        if (z.imag() < 0.0) throw RangeError("points line " + std::to_string(line_no) + " lies below the real axis");
        zs.push_back(z);
    }
    const ExtremalMap em(p, q, spec);
    with_table(out_path, out, [&](std::ostream& os) {
        for (const cplx& z : zs) {
            const cplx w = em(z);
            os << format_number(w.real()) << ' ' << format_number(w.imag()) << "\n";
        }
    });
    return kExitOk;
}

int cmd_selftest(bool fast, std::ostream& out) {
    validation::CheckOptions o;
    o.fast = fast;
    std::vector<validation::CheckResult> results;
    if (fast) {
        results = {validation::check_closure(o), validation::check_quadrature_oracle(o),
                   validation::check_quadrilateral(o), validation::check_round_trip(o)};
    } else {
        results = validation::run_all(o);
    }
    int failed = 0;
    for (const auto& r : results) {
        out << validation::format_line(r) << "\n";
        if (!r.passed) ++failed;
    }
    out << (failed ? std::to_string(failed) + " of " + std::to_string(results.size()) + " checks failed\n"
                   : "all " + std::to_string(results.size()) + " checks passed\n");
    return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extremal quasiconformal maps between normalized pentagons (0, p2, 1, p4, inf).", "teichpent"};
    app.require_subcommand(1);

    std::optional<double> tol;
    auto add_tol = [&](CLI::App* sub) {
        sub->add_option("--tol", tol, "relative quadrature tolerance (overrides TEICHPENT_TOL)");
    };

    double p2 = 0.0, p4 = 0.0, phi = 0.0;
    std::string svg, json_path;
    auto* hexagon = app.add_subcommand("hexagon", "hexagon class of a pentagon and direction, as JSON");
    hexagon->add_option("--p2", p2, "second mark, 0 < p2 < 1")->required();
    hexagon->add_option("--p4", p4, "fourth mark, p4 > 1")->required();
    hexagon->add_option("--phi", phi, "direction angle in radians")->required();
    hexagon->add_option("--svg", svg, "write a drawing of the hexagon");
    hexagon->add_option("--json", json_path, "also write the JSON to a file");
    add_tol(hexagon);

    std::string p_text, q_text;
    auto* extremal = app.add_subcommand("extremal", "extremal map between two pentagons");
    extremal->add_option("--p", p_text, "source pentagon \"p2,p4\"")->required();
    extremal->add_option("--q", q_text, "target pentagon \"p2,p4\"")->required();
    extremal->add_option("--json", json_path, "write a JSON report");
    add_tol(extremal);

    double kmax = 1.0;
    int steps = 1;
    std::string csv;
    auto* geodesic = app.add_subcommand("geodesic", "samples along a Teichmueller ray, as CSV");
    geodesic->add_option("--p", p_text, "base pentagon \"p2,p4\"")->required();
    geodesic->add_option("--phi", phi, "direction angle in radians")->required();
    geodesic->add_option("--kmax", kmax, "largest dilatation")->required();
    geodesic->add_option("--steps", steps, "number of steps")->required();
    geodesic->add_option("--csv", csv, "output file (default: standard output)");
    add_tol(geodesic);

    std::string grid;
    auto* atlas = app.add_subcommand("atlas", "hexagon classes over a (p2, p4, phi) grid, as CSV");
    atlas->add_option("--grid", grid, "grid sizes \"n2,n4,nphi\"")->required();
    atlas->add_option("--csv", csv, "output file (default: standard output)");
    add_tol(atlas);

    std::string points, out_path;
    auto* map = app.add_subcommand("map", "apply the extremal map to points of the upper half-plane");
    map->add_option("--p", p_text, "source pentagon \"p2,p4\"")->required();
    map->add_option("--q", q_text, "target pentagon \"p2,p4\"")->required();
    map->add_option("--points", points, "file with one point \"re im\" per line")->required();
    map->add_option("--out", out_path, "output file (default: standard output)");
    add_tol(map);

    bool fast = false;
    auto* selftest = app.add_subcommand("selftest", "run the oracle and invariant checks");
    selftest->add_flag("--fast", fast, "closure, quadrature, quadrilateral and round-trip checks only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*hexagon) return cmd_hexagon(p2, p4, phi, svg, json_path, tol, out);
        if (*extremal) return cmd_extremal(p_text, q_text, json_path, tol, out);
        if (*geodesic) return cmd_geodesic(p_text, phi, kmax, steps, csv, tol, out);
        if (*atlas) return cmd_atlas(grid, csv, tol, out);
        if (*map) return cmd_map(p_text, q_text, points, out_path, tol, out);
        if (*selftest) return cmd_selftest(fast, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RangeError& e) {
        err << "range error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const OrderingError& e) {
        err << "ordering error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegeneracyError& e) {
        err << "degenerate input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PoleError& e) {
        err << "pole: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ShapeError& e) {
        err << "shape error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << " [best residual " << format_number(e.best_residual()) << "]\n";
        return kExitNumerical;
    } catch (const AccuracyError& e) {
        err << "numerical failure: " << e.what() << " [error estimate " << format_number(e.estimate()) << "]\n";
        return kExitNumerical;
    } catch (const ConsistencyError& e) {
        err << "numerical failure: " << e.what() << " [residual " << format_number(e.residual()) << "]\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace teichpent::cli
