#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sov/cli.hpp"

using namespace sov;
using namespace sov::cli;
using nlohmann::json;

namespace {

const json& check_entry(const json& report, const std::string& name) {
    for (const auto& c : report.at("checks"))
        if (c.at("name") == name) return c;
    throw std::runtime_error("no check " + name);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmall = R"([model]
N = 1
eta = 0.8
xi = 0.5

[boundary]
zeta_plus = 0.7
zeta_minus = -0.55
)";

}  // namespace

TEST_CASE("complex parsing") {
    CHECK(parse_complex("1.5") == cplx(1.5, 0));
    CHECK(parse_complex("-2i") == cplx(0, -2));
    CHECK(parse_complex("i") == cplx(0, 1));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex(" 0.5+0.173i ") == cplx(0.5, 0.173));
    CHECK(parse_complex("1e-3-2.5e-1i") == cplx(1e-3, -0.25));
    CHECK(parse_complex("0.3-i") == cplx(0.3, -1));
    for (const char* bad : {"", "abc", "1+", "1+2", "2ii"}) CHECK_THROWS_AS(parse_complex(bad), ConfigError);
    const cplx z(0.123456789012345, -9.87654321e-5);
    CHECK(parse_complex(format_complex(z)) == z);
}

TEST_CASE("config grammar") {
    const std::string small = std::string(kSmall) + "[checks]\nlist = algebra, basis\n";
    const ScenarioConfig c = parse_config(small, "small");
    CHECK(c.model.rank_n == 2);
    CHECK(c.model.kind == Kind::rational);
    CHECK(c.model.N == 1);
    CHECK(c.model.is_rank1());
    CHECK(c.tolerances.at("algebra") == 1e-10);
    CHECK(c.checks.size() == 2);
    CHECK(parse_complex("2-3j") == cplx(2, -3));

    const std::string with_tol = std::string(kSmall) + "\n[tolerances]\nalgebra = 1e-9\n# comment\n[checks]\nlist = basis\n";
    const ScenarioConfig d = parse_config(with_tol, "t");
    CHECK(d.tolerances.at("algebra") == 1e-9);
    REQUIRE(d.checks.size() == 1);
    CHECK(d.checks[0] == "basis");

    CHECK_THROWS_AS(parse_config(kSmall, "x"), ConfigError);  // no checks
    CHECK_THROWS_AS(parse_config(small + "colour = blue\n", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config(small + "[boundary]\nzeta_plus = 0.1\n", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config("N = 1\n", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\nN = 1\nxi = 0.5\n[boundary]\nzeta_plus = 1\nzeta_minus = 1\n", "x"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kSmall) + "[checks]\nlist = nonsense\n", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config(small + "[tolerances]\nalgebra = -1\n", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config(small + "[tolerances]\nwobble = 1\n", "x"), ConfigError);
    // xi count must match N
    CHECK_THROWS_AS(parse_config("[model]\nN = 2\neta = 0.8\nxi = 0.5\n[boundary]\nzeta_plus = 1\nzeta_minus = 1\n", "x"),
                    ConfigError);
}

TEST_CASE("presets") {
    for (const char* n : {"gl2-rational-generic", "gl2-rational-diagonal", "gl2-rational-noncommuting", "gl2-trig-generic",
                          "gl2-trig-constrained", "gl3-generic-N1", "gl3-generic-N2", "gln4-basis-N1",
                          "rational-limit-sweep"}) {
        INFO(n);
        REQUIRE(find_preset(n) != nullptr);
        CHECK(find_preset(std::string("preset:") + n) == find_preset(n));
        CHECK_NOTHROW(load_config(n));
    }
    CHECK(find_preset("nope") == nullptr);
    CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("diagonal rational scenario") {
    const ScenarioResult r = run_scenario(load_config("gl2-rational-diagonal"));
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("status") == "pass");
    CHECK(r.report.at("schema_version") == kSchemaVersion);
    CHECK(r.report.at("dimension") == 8);
    CHECK(check_entry(r.report, "basis").at("status") == "pass");
    CHECK(check_entry(r.report, "sklyanin-compare").at("status") == "not-applicable");
    CHECK(check_entry(r.report, "qcurve").at("status") == "pass");
    for (const auto& c : r.report.at("checks"))
        for (const auto& res : c.at("residuals")) CHECK(res.at("pass") == true);
    // header plus 64 points per eigenvalue and side
    REQUIRE_FALSE(r.csv.empty());
    CHECK(r.csv.rfind("check,eigen,side,re_lambda,im_lambda,rel_residual\n", 0) == 0);
}

TEST_CASE("gl3 scenario and determinism") {
    const ScenarioConfig cfg = load_config("gl3-generic-N1");
    const ScenarioResult a = run_scenario(cfg), b = run_scenario(cfg);
    CHECK(a.exit_code == 0);
    CHECK(check_entry(a.report, "spectrum").at("status") == "pass");
    CHECK(check_entry(a.report, "qcurve").at("status") == "pass");
    json ja = a.report, jb = b.report;
    ja.erase("timings");
    jb.erase("timings");
    CHECK(ja.dump() == jb.dump());
    CHECK(a.csv == b.csv);
}

TEST_CASE("failing tolerance gives exit code 2") {
    ScenarioConfig cfg = parse_config(std::string(kSmall) + "[checks]\nlist = algebra\n[tolerances]\nalgebra = 1e-30\n", "strict");
    const ScenarioResult r = run_scenario(cfg);
    CHECK(r.exit_code == 2);
    CHECK(r.report.at("status") == "fail");
}

TEST_CASE("written report files") {
    const auto dir = std::filesystem::temp_directory_path() / "sovkit_unit_out";
    std::filesystem::remove_all(dir);
    ScenarioConfig cfg = load_config("gl3-generic-N1");
    cfg.out_dir = dir.string();
    CHECK(run_and_write(cfg) == 0);
    const json j = json::parse(read_file(dir / "gl3-generic-N1.json"));
    CHECK(j.at("scenario") == "gl3-generic-N1");
    CHECK(std::filesystem::exists(dir / "gl3-generic-N1_tq.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("command-line exit codes") {
    const char* exe = std::getenv("SOVKIT");
    if (!exe) return;
    const auto q = [](const std::string& s) { return "\"" + s + "\""; };
    const auto code = [](const std::string& cmd) {
        const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    CHECK(code(q(exe) + " presets") == 0);
    CHECK(code(q(exe) + " run /nonexistent/x.ini") == 3);
    CHECK(code(q(exe) + " frobnicate") == 3);
    const auto dir = std::filesystem::temp_directory_path() / "sovkit_unit_cli";
    CHECK(code(q(exe) + " run gl3-generic-N1 --out " + q(dir.string())) == 0);
    std::filesystem::remove_all(dir);
}
