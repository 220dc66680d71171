#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <teichpent/io.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace teichpent;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation run(std::vector<std::string> args) {
    args.insert(args.begin(), "teichpent");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) v.push_back(line);
    return v;
}

std::vector<double> split_numbers(const std::string& line) {
    std::vector<double> v;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) v.push_back(std::stod(cell));
    return v;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("teichpent_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("TEICHPENT_TOL");
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HexagonJson) {
    const Invocation r = run({"hexagon", "--p2", "0.5", "--p4", "2", "--phi", "0.7853981633974483", "--svg",
                       path("h.svg"), "--json", path("h.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(check_hexagon_schema(j), "");
    EXPECT_EQ(j["segments"].size(), 6u);
    EXPECT_LT(j["closure_residual"].get<double>(), 1e-8);
    EXPECT_FALSE(j["degenerate"].get<bool>());
    std::ifstream f(path("h.json"));
    std::stringstream saved;
    saved << f.rdbuf();
    EXPECT_EQ(saved.str(), r.out);
    EXPECT_TRUE(fs::exists(path("h.svg")));
}

TEST_F(CliTest, HexagonRectangular) {
    const Invocation r = run({"hexagon", "--p2", "0.5", "--p4", "2", "--phi", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["degenerate"].get<bool>());
}

TEST_F(CliTest, RangeAndUsageErrors) {
    Invocation r = run({"hexagon", "--p2", "2", "--p4", "3", "--phi", "0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("p2"), std::string::npos);
    EXPECT_EQ(run({"hexagon", "--p4", "3", "--phi", "0"}).code, 2);
    EXPECT_EQ(run({"extremal", "--p", "0.5,2", "--q", "0.5;2"}).code, 2);
    EXPECT_EQ(run({"extremal", "--p", "0.5,2", "--q", "0.5,2,3"}).code, 2);
    EXPECT_EQ(run({"nonsense"}).code, 2);
    EXPECT_EQ(run({"hexagon", "--p2", "0.5", "--p4", "2", "--phi", "1", "--tol", "0"}).code, 2);
}

TEST_F(CliTest, ToleranceFromEnvironment) {
    setenv("TEICHPENT_TOL", "abc", 1);
    EXPECT_EQ(run({"hexagon", "--p2", "0.5", "--p4", "2", "--phi", "1"}).code, 2);
    setenv("TEICHPENT_TOL", "1e-8", 1);
    EXPECT_EQ(run({"hexagon", "--p2", "0.5", "--p4", "2", "--phi", "1"}).code, 0);
    // The flag wins over the environment.
    setenv("TEICHPENT_TOL", "abc", 1);
    EXPECT_EQ(run({"hexagon", "--p2", "0.5", "--p4", "2", "--phi", "1", "--tol", "1e-9"}).code, 2);
    unsetenv("TEICHPENT_TOL");
}

TEST_F(CliTest, ExtremalIdentity) {
    const Invocation r = run({"extremal", "--p", "0.5,2", "--q", "0.5,2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto v = lines(r.out);
    ASSERT_GE(v.size(), 4u);
    EXPECT_EQ(v[0], "K 1");
    EXPECT_NE(r.out.find("distance 0\n"), std::string::npos);
}

TEST_F(CliTest, GeodesicFeedsExtremal) {
    const Invocation g = run({"geodesic", "--p", "0.5,2", "--phi", "1.0", "--kmax", "2", "--steps", "1"});
    ASSERT_EQ(g.code, 0) << g.err;
    const auto rows = lines(g.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "K,p2,p4,distance");
    const auto last = split_numbers(rows[2]);
    const std::string q = format_number(last[1]) + "," + format_number(last[2]);
    const Invocation e = run({"extremal", "--p", "0.5,2", "--q", q, "--json", path("e.json")});
    ASSERT_EQ(e.code, 0) << e.err;
    const double K = std::stod(lines(e.out)[0].substr(2));
    EXPECT_NEAR(K, 2.0, 1e-5);
    std::ifstream f(path("e.json"));
    EXPECT_NEAR(nlohmann::json::parse(f)["K"].get<double>(), K, 0.0);
}

TEST_F(CliTest, GeodesicTrivialRay) {
    const Invocation r = run({"geodesic", "--p", "0.5,2", "--phi", "0.3", "--kmax", "1", "--steps", "1", "--csv",
                       path("g.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(path("g.csv"));
    std::stringstream s;
    s << f.rdbuf();
    const auto rows = lines(s.str());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], "1,0.5,2,0");
}

TEST_F(CliTest, PartialCsvRemovedOnFailure) {
    const Invocation r = run({"geodesic", "--p", "0.5,2", "--phi", "1.0", "--kmax", "1e6", "--steps", "3", "--csv",
                       path("fail.csv")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("residual"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("fail.csv")));
}

TEST_F(CliTest, AtlasIsDeterministic) {
    const std::vector<std::string> args{"atlas", "--grid", "2,2,3"};
    const Invocation a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 1u + 2 * 2 * 3);
    EXPECT_EQ(rows[0].substr(0, 6), "i,j,k,");
    const Invocation c = run({"atlas", "--grid", "2,2,3", "--csv", path("a.csv")});
    ASSERT_EQ(c.code, 0);
    std::ifstream f(path("a.csv"));
    std::stringstream s;
    s << f.rdbuf();
    EXPECT_EQ(s.str(), a.out);
    EXPECT_EQ(run({"atlas", "--grid", "2,0,3"}).code, 2);
}

TEST_F(CliTest, MapIdentity) {
    {
        std::ofstream f(path("pts.txt"));
        f << "0 1\n0.25 0.1\n-3 2\n";
    }
    const Invocation r = run({"map", "--p", "0.5,2", "--q", "0.5,2", "--points", path("pts.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto v = lines(r.out);
    ASSERT_EQ(v.size(), 3u);
    const double expect[3][2] = {{0, 1}, {0.25, 0.1}, {-3, 2}};
    for (int i = 0; i < 3; ++i) {
        std::istringstream is(v[i]);
        double re, im;
        is >> re >> im;
        EXPECT_NEAR(re, expect[i][0], 1e-8);
        EXPECT_NEAR(im, expect[i][1], 1e-8);
    }
    EXPECT_EQ(run({"map", "--p", "0.5,2", "--q", "0.5,2", "--points", path("missing.txt")}).code, 2);
}

TEST_F(CliTest, SelftestFast) {
    const Invocation r = run({"selftest", "--fast"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    int passed = 0;
    for (const auto& line : lines(r.out)) passed += line.rfind("[PASS]", 0) == 0;
    EXPECT_EQ(passed, 4);
}
