#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "polarframes/errors.hpp"
#include "polarframes/report.hpp"
#include "polarframes/run.hpp"

using namespace polarframes;
using nlohmann::json;

namespace {

RunConfig quick(const std::string& surface, std::vector<std::string> suites) {
  RunConfig c;
  c.surface = surface;
  c.suites = std::move(suites);
  c.timing = false;
  return c;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InvalidConfig& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("report model") {
  TEST_CASE("verdict names") {
    CHECK(std::string(to_string(Verdict::pass)) == "PASS");
    CHECK(std::string(to_string(Verdict::fail)) == "FAIL");
    CHECK(std::string(to_string(Verdict::not_applicable)) == "NOT-APPLICABLE");
  }

  TEST_CASE("combining suite verdicts") {
    CHECK(combine({}) == Verdict::not_applicable);
    CHECK(combine({Verdict::pass, Verdict::not_applicable}) == Verdict::pass);
    CHECK(combine({Verdict::pass, Verdict::fail}) == Verdict::fail);
    CHECK(combine({Verdict::not_applicable, Verdict::fail}) == Verdict::fail);
    CHECK(combine({Verdict::not_applicable, Verdict::not_applicable}) == Verdict::not_applicable);
  }

  TEST_CASE("check statistics") {
    CheckStat upper{.tol = 1.0};
    upper.add(0.5);
    upper.add(1.0);
    CHECK(upper.passed());
    CHECK(upper.mean() == doctest::Approx(0.75));
    upper.add(std::numeric_limits<double>::quiet_NaN());
    CHECK_FALSE(upper.passed());

    CheckStat lower{.tol = 1e-10, .bound = CheckStat::Bound::lower};
    lower.add(1e-3);
    CHECK(lower.passed());
    lower.add(1e-12);
    CHECK_FALSE(lower.passed());
  }

  TEST_CASE("suite verdict follows its checks and failures") {
    SuiteReport r;
    r.check("x", 1.0).add(0.1);
    r.counts.evaluated = 3;
    r.finalize();
    CHECK(r.verdict == Verdict::pass);
    r.check("x", 1.0).add(2.0);
    r.finalize();
    CHECK(r.verdict == Verdict::fail);

    SuiteReport failed;
    failed.counts.evaluated = 1;
    failed.counts.failed = 1;
    failed.finalize();
    CHECK(failed.verdict == Verdict::fail);

    SuiteReport empty;
    empty.counts.excluded = 10;
    empty.finalize();
    CHECK(empty.verdict == Verdict::not_applicable);
  }

  TEST_CASE("CSV rows leave missing values empty") {
    PointRecord a{.u = 0.5, .v = -1.0, .theta = 1.0, .phi = 2.0, .detC = 0.25, .minEig = 0.1,
                  .H1 = 0, .H2 = -0.1, .H3 = 0, .H4 = 0, .rankII = 2, .status = "ok"};
    PointRecord b{.u = 0.5, .v = -1.0, .theta = 1.5, .phi = 2.0, .detC = 0.0, .status = "excluded"};
    std::ostringstream out;
    write_csv(out, {a, b});
    std::istringstream in(out.str());
    std::string header, row_a, row_b;
    std::getline(in, header);
    std::getline(in, row_a);
    std::getline(in, row_b);
    CHECK(header == kCsvHeader);
    CHECK(row_a.substr(row_a.size() - 2) == ",2");
    CHECK(row_b == "0.5,-1,1.5,2,0,,,,,,");
  }
}

TEST_SUITE("config") {
  TEST_CASE("a full config round-trips") {
    const json j = json::parse(R"({
      "surface": "veronese",
      "grid": {"nu": 4, "nv": 5, "ntheta": 6, "nphi": 3, "margin": 0.1,
               "theta_bands": [{"center": 1.5, "width": 0.2}]},
      "tolerances": {"H3": 1e-6},
      "derivative_mode": "fd",
      "output": {"format": "csv", "path": "out.csv", "points": true},
      "suites": ["theorem1"],
      "seed": 9, "random_samples": 50, "structure_samples": 5, "threads": 1, "timing": false
    })");
    const RunConfig c = parse_config(j);
    CHECK(c.surface == "veronese");
    CHECK(c.grid.nv == 5);
    CHECK(c.grid.theta_bands.size() == 1);
    CHECK(c.tolerances.at("H3") == 1e-6);
    CHECK(c.derivative_mode == DerivativeMode::finite_difference);
    CHECK(c.format == "csv");
    CHECK(*c.out == "out.csv");
    CHECK(c.include_points);
    CHECK(c.suites == std::vector<std::string>{"theorem1"});
    CHECK(c.seed == 9);
    CHECK_FALSE(c.timing);
    const json echoed = to_json(c);
    CHECK(echoed["tolerances"]["H3"] == 1e-6);
    CHECK(echoed["tolerances"]["catalog"] == 1e-4);  // loosened in fd mode
  }

  TEST_CASE("rejections name the offending field") {
    CHECK(field_of([] { parse_config(json{{"surfce", "veronese"}}); }).find("surfce") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"suites", {"theorem3"}}}); }).find("suites") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"grid", {{"nu", 1}}}}); }).find("grid") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"tolerances", {{"H3", 0.0}}}}); }).find("H3") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"tolerances", {{"H9", 1.0}}}}); }).find("H9") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"output", {{"format", "xml"}}}}); }).find("format") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"derivative_mode", "symbolic"}}); }).find("derivative_mode") != std::string::npos);
    CHECK(field_of([] { parse_config(json{{"grid", {{"margin", 0.5}}}}); }).find("margin") != std::string::npos);
    CHECK_THROWS_AS(parse_config(json::array()), InvalidConfig);
  }

  TEST_CASE("unknown surfaces are reported as such") {
    RunConfig c;
    c.surface = "catenoid";
    CHECK_THROWS_AS(validate(c), UnknownSurface);
  }

  TEST_CASE("command line style overrides") {
    RunConfig c;
    set_grid(c, "3x4x5x6");
    CHECK(c.grid.nu == 3);
    CHECK(c.grid.nphi == 6);
    CHECK_THROWS_AS(set_grid(c, "3x4x5"), InvalidConfig);
    CHECK_THROWS_AS(set_grid(c, "3x4x5xq"), InvalidConfig);
    set_tolerance(c, "H1=2e-5");
    CHECK(c.tolerances.at("H1") == 2e-5);
    CHECK_THROWS_AS(set_tolerance(c, "H1"), InvalidConfig);
    // values and names are checked by validate()
    RunConfig negative = c, unknown = c;
    set_tolerance(negative, "H1=-1");
    set_tolerance(unknown, "bogus=1");
    CHECK_NOTHROW(validate(c));
    CHECK_THROWS_AS(validate(negative), InvalidConfig);
    CHECK_THROWS_AS(validate(unknown), InvalidConfig);
  }

  TEST_CASE("syntax errors in config files carry line and column") {
    const auto path = std::filesystem::temp_directory_path() / "polarframes_bad_config.json";
    std::ofstream(path) << "{\n  \"surface\": \"veronese\",\n  \"grid\": {nu: 3}\n}\n";
    std::string what;
    try {
      load_config(path.string());
    } catch (const InvalidConfig& e) {
      what = e.what();
    }
    std::filesystem::remove(path);
    CHECK(what.find(":3:") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidConfig);
  }
}

TEST_SUITE("runs") {
  TEST_CASE("geodesic sphere polar certification is not applicable") {
    const VerificationReport r = run(quick("geodesic-sphere", {"theorem1"}));
    CHECK(r.verdict == Verdict::not_applicable);
    CHECK(r.suites.at(0).counts.evaluated == 0);
  }

  TEST_CASE("equilateral torus polar certification passes") {
    const VerificationReport r = run(quick("equilateral-torus", {"theorem1"}));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.suites.at(0).checks.at("H3").max <= 1e-5);
  }

  TEST_CASE("Clifford torus invariants") {
    const VerificationReport r = run(quick("clifford-torus", {"invariants"}));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.suites.at(0).checks.at("K").max <= 1e-5);
  }

  TEST_CASE("an impossible tolerance fails the run") {
    RunConfig c = quick("veronese", {"theorem1"});
    set_grid(c, "3x3x4x2");
    set_tolerance(c, "H3=1e-30");
    CHECK(run(c).verdict == Verdict::fail);
  }

  TEST_CASE("PASS exactly when every check passes") {
    const VerificationReport r = run(quick("veronese", kSuiteNames));
    for (const SuiteReport& s : r.suites) {
      bool all = s.counts.failed == 0;
      for (const auto& [name, c] : s.checks) all = all && c.passed();
      INFO(s.name);
      CHECK((s.verdict == Verdict::pass) == (all && s.counts.evaluated > 0));
    }
  }

  TEST_CASE("reports are byte-identical without timing, for any thread count") {
    RunConfig c = quick("equilateral-torus", kSuiteNames);
    set_grid(c, "4x4x6x3");
    c.structure_samples = 6;
    c.random_samples = 500;
    c.threads = 1;
    const std::string a = to_json(run(c), true).dump();
    c.threads = 3;
    const std::string b = to_json(run(c), true).dump();
    CHECK(a == b);
    CHECK(json::parse(a)["wall_time_seconds"].is_null());
  }

  TEST_CASE("CSV has one row per evaluated or excluded point") {
    RunConfig c = quick("clifford-torus", {"theorem1"});
    set_grid(c, "5x5x8x4");
    const VerificationReport r = run(c);
    std::ostringstream out;
    write_csv(out, r.suites.at(0).points);
    const SuiteCounts& n = r.suites.at(0).counts;
    CHECK(n.excluded > 0);
    CHECK(count_lines(out.str()) == 1 + n.evaluated + n.excluded);
    CHECK(n.evaluated + n.excluded == 5 * 5 * 8 * 4);
  }

  TEST_CASE("report JSON layout") {
    RunConfig c = quick("veronese", {"invariants"});
    set_grid(c, "3x3x2x2");
    c.random_samples = 10;
    const json j = to_json(run(c), false);
    CHECK(j["schema"] == "polarframes.report/1");
    CHECK(j["verdict"] == "PASS");
    CHECK(j["config"]["surface"] == "veronese");
    const json& s = j["suites"][0];
    CHECK(s["name"] == "invariants");
    CHECK(s["counts"]["evaluated"] == 9);
    for (const auto& [name, check] : s["checks"].items()) {
      INFO(name);
      CHECK(check.contains("max"));
      CHECK(check.contains("tol"));
      CHECK(check["passed"].is_boolean());
    }
    CHECK_FALSE(s.contains("points"));
  }
}
