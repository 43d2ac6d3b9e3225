#include "polarframes/run.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "polarframes/errors.hpp"

namespace polarframes {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw InvalidConfig(field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
      bad(where.empty() ? k : where + "." + k, "unknown key");
    }
  }
}

template <class T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(field, "wrong type (" + std::string(j.type_name()) + ")");
  }
}

int grid_count(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "expected an integer");
  return j.get<int>();
}

DerivativeMode parse_mode(const std::string& s, const std::string& field) {
  if (s == "analytic") return DerivativeMode::analytic;
  if (s == "fd" || s == "finite_difference") return DerivativeMode::finite_difference;
  bad(field, "expected analytic or fd, got '" + s + "'");
}

double tolerance(const RunConfig& c, const std::map<std::string, double>& defaults, const char* name) {
  const auto it = c.tolerances.find(name);
  return it != c.tolerances.end() ? it->second : defaults.at(name);
}

}  // namespace

std::map<std::string, double> default_tolerances(DerivativeMode mode) {
  const InvariantTolerances inv;
  const Theorem1Tolerances t1;
  const Theorem2Tolerances t2;
  return {
      {"catalog", mode == DerivativeMode::analytic ? inv.catalog : 1e-4},
      {"minimality", inv.minimality},
      {"gauge", inv.gauge},
      {"identity", inv.identity},
      {"H1", t1.H1},
      {"H3", t1.H3},
      {"H4", t1.H4},
      {"fiber_block", t1.fiber_block},
      {"tangential", t1.tangential},
      {"metric_factor", t1.metric_factor},
      {"spectrum", t2.spectrum},
      {"involutivity", t2.involutivity},
      {"lambda_derivative", t2.lambda_derivative},
      {"difI", t2.difI},
      {"difII", t2.difII},
      {"dif_lambda", t2.dif_lambda},
      {"dif_KN", t2.dif_KN},
      {"leaf_derivative", t2.leaf_derivative},
      {"leaf_drift", t2.leaf_drift},
      {"gauss_map", t2.gauss_map},
      {"leaf_geodesic", t2.leaf_geodesic},
      {"codazzi", t2.codazzi},
      {"bracket", t2.bracket},
      {"connection_table", t2.connection_table},
      {"skew", t2.skew},
      {"loop", t2.loop},
      {"rotation", t2.rotation},
  };
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) bad("<root>", "expected a JSON object");
  reject_unknown(j, "",
                 {"surface", "grid", "tolerances", "derivative_mode", "output", "suites", "seed", "random_samples",
                  "structure_samples", "threads", "timing"});
  RunConfig c;
  if (j.contains("surface")) c.surface = get_as<std::string>(j["surface"], "surface");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) bad("grid", "expected an object");
    reject_unknown(g, "grid", {"nu", "nv", "ntheta", "nphi", "margin", "theta_bands"});
    if (g.contains("nu")) c.grid.nu = grid_count(g["nu"], "grid.nu");
    if (g.contains("nv")) c.grid.nv = grid_count(g["nv"], "grid.nv");
    if (g.contains("ntheta")) c.grid.ntheta = grid_count(g["ntheta"], "grid.ntheta");
    if (g.contains("nphi")) c.grid.nphi = grid_count(g["nphi"], "grid.nphi");
    if (g.contains("margin")) c.grid.margin = get_as<double>(g["margin"], "grid.margin");
    if (g.contains("theta_bands")) {
      const json& bands = g["theta_bands"];
      if (!bands.is_array()) bad("grid.theta_bands", "expected an array");
      for (std::size_t i = 0; i < bands.size(); ++i) {
        const std::string where = "grid.theta_bands[" + std::to_string(i) + "]";
        if (!bands[i].is_object()) bad(where, "expected {center, width}");
        reject_unknown(bands[i], where, {"center", "width"});
        if (!bands[i].contains("center") || !bands[i].contains("width")) bad(where, "needs center and width");
        c.grid.theta_bands.push_back(
            {get_as<double>(bands[i]["center"], where + ".center"), get_as<double>(bands[i]["width"], where + ".width")});
      }
    }
  }
  if (j.contains("derivative_mode")) {
    c.derivative_mode = parse_mode(get_as<std::string>(j["derivative_mode"], "derivative_mode"), "derivative_mode");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) bad("tolerances", "expected an object");
    for (const auto& [name, value] : t.items()) {
      c.tolerances[name] = get_as<double>(value, "tolerances." + name);
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) bad("output", "expected an object");
    reject_unknown(o, "output", {"format", "path", "points"});
    if (o.contains("format")) c.format = get_as<std::string>(o["format"], "output.format");
    if (o.contains("path")) c.out = get_as<std::string>(o["path"], "output.path");
    if (o.contains("points")) c.include_points = get_as<bool>(o["points"], "output.points");
  }
  if (j.contains("suites")) {
    const json& s = j["suites"];
    if (!s.is_array()) bad("suites", "expected an array");
    c.suites.clear();
    for (std::size_t i = 0; i < s.size(); ++i) c.suites.push_back(get_as<std::string>(s[i], "suites[" + std::to_string(i) + "]"));
  }
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("random_samples")) c.random_samples = get_as<int>(j["random_samples"], "random_samples");
  if (j.contains("structure_samples")) c.structure_samples = get_as<int>(j["structure_samples"], "structure_samples");
  if (j.contains("threads")) c.threads = get_as<unsigned>(j["threads"], "threads");
  if (j.contains("timing")) c.timing = get_as<bool>(j["timing"], "timing");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << path << ":" << line << ":" << col << ": invalid JSON";
    throw InvalidConfig(msg.str());
  }
  try {
    return parse_config(j);
  } catch (const InvalidConfig& e) {
    throw InvalidConfig(path + ": " + std::string(e.what()).substr(std::string("InvalidConfig: ").size()));
  }
}

void set_tolerance(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) bad("--tol", "expected name=value, got '" + assignment + "'");
  const std::string name = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) bad("--tol " + name, "not a number: '" + value + "'");
  c.tolerances[name] = x;
}

void set_grid(RunConfig& c, const std::string& spec) {
  std::vector<int> n;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) bad("--grid", "expected NUxNVxNTHETAxNPHI, got '" + spec + "'");
    n.push_back(k);
  }
  if (n.size() != 4) bad("--grid", "expected four counts NUxNVxNTHETAxNPHI, got '" + spec + "'");
  c.grid.nu = n[0];
  c.grid.nv = n[1];
  c.grid.ntheta = n[2];
  c.grid.nphi = n[3];
}

void validate(const RunConfig& c) {
  const std::vector<std::string> names = catalog_names();
  if (std::find(names.begin(), names.end(), c.surface) == names.end()) {
    throw UnknownSurface("surface: unknown catalog surface '" + c.surface + "'");
  }
  const std::pair<const char*, int> counts[] = {
      {"grid.nu", c.grid.nu}, {"grid.nv", c.grid.nv}, {"grid.ntheta", c.grid.ntheta}, {"grid.nphi", c.grid.nphi}};
  for (const auto& [field, n] : counts) {
    if (n < 2) bad(field, "grid counts must be >= 2, got " + std::to_string(n));
  }
  if (!(c.grid.margin >= 0.0 && c.grid.margin < 0.5)) bad("grid.margin", "must lie in [0, 0.5)");
  for (const ThetaBand& b : c.grid.theta_bands) {
    if (!(b.width > 0.0)) bad("grid.theta_bands", "band width must be positive");
  }
  const auto defaults = default_tolerances(c.derivative_mode);
  for (const auto& [name, value] : c.tolerances) {
    if (!defaults.count(name)) bad("tolerances." + name, "unknown tolerance name");
    if (!(value > 0.0)) bad("tolerances." + name, "tolerances must be positive");
  }
  if (c.format != "json" && c.format != "csv") bad("output.format", "expected json or csv, got '" + c.format + "'");
  if (c.suites.empty()) bad("suites", "at least one suite is required");
  for (const std::string& s : c.suites) {
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), s) == kSuiteNames.end()) {
      bad("suites", "unknown suite '" + s + "'");
    }
  }
  if (c.format == "csv" && c.suites.size() > 1 && !c.out) {
    bad("output.path", "csv output of several suites needs a path (--out); one file is written per suite");
  }
  if (c.random_samples < 0) bad("random_samples", "must be >= 0");
  if (c.structure_samples < 1) bad("structure_samples", "must be >= 1");
}

nlohmann::json to_json(const RunConfig& c) {
  json bands = json::array();
  for (const ThetaBand& b : c.grid.theta_bands) bands.push_back({{"center", b.center}, {"width", b.width}});
  json tol = json::object();
  for (const auto& [name, value] : default_tolerances(c.derivative_mode)) {
    const auto it = c.tolerances.find(name);
    tol[name] = it != c.tolerances.end() ? it->second : value;
  }
  return {{"surface", c.surface},
          {"grid",
           {{"nu", c.grid.nu},
            {"nv", c.grid.nv},
            {"ntheta", c.grid.ntheta},
            {"nphi", c.grid.nphi},
            {"margin", c.grid.margin},
            {"theta_bands", bands}}},
          {"tolerances", tol},
          {"derivative_mode", c.derivative_mode == DerivativeMode::analytic ? "analytic" : "fd"},
          {"output", {{"format", c.format}, {"path", c.out ? json(*c.out) : json(nullptr)}, {"points", c.include_points}}},
          {"suites", c.suites},
          {"seed", c.seed},
          {"random_samples", c.random_samples},
          {"structure_samples", c.structure_samples},
          {"timing", c.timing}};
}

VerificationReport run(const RunConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  const auto defaults = default_tolerances(c.derivative_mode);
  const auto tol = [&](const char* name) { return tolerance(c, defaults, name); };

  CatalogEntry entry = get(c.surface);
  entry.surface = entry.surface.with_mode(c.derivative_mode);

  VerificationReport report;
  report.config = to_json(c);
  for (const std::string& suite : kSuiteNames) {
    if (std::find(c.suites.begin(), c.suites.end(), suite) == c.suites.end()) continue;
    if (suite == "invariants") {
      const InvariantTolerances t{tol("catalog"), tol("minimality"), tol("gauge"), tol("identity")};
      report.suites.push_back(analyze_surface(entry, c.grid, t, c.seed, c.random_samples));
    } else if (suite == "theorem1") {
      const Theorem1Tolerances t{tol("H1"), tol("H3"), tol("H4"), tol("fiber_block"),
                                 tol("tangential"), tol("metric_factor"), tol("minimality")};
      report.suites.push_back(certify_theorem1(entry.surface, c.grid, t, c.threads));
    } else {
      Theorem2Tolerances t;
      t.spectrum = tol("spectrum");
      t.involutivity = tol("involutivity");
      t.lambda_derivative = tol("lambda_derivative");
      t.difI = tol("difI");
      t.difII = tol("difII");
      t.dif_lambda = tol("dif_lambda");
      t.dif_KN = tol("dif_KN");
      t.leaf_derivative = tol("leaf_derivative");
      t.leaf_drift = tol("leaf_drift");
      t.gauss_map = tol("gauss_map");
      t.leaf_geodesic = tol("leaf_geodesic");
      t.codazzi = tol("codazzi");
      t.bracket = tol("bracket");
      t.connection_table = tol("connection_table");
      t.skew = tol("skew");
      t.loop = tol("loop");
      t.rotation = tol("rotation");
      report.suites.push_back(verify_theorem2(entry.surface, c.grid, t, c.structure_samples, c.threads));
    }
  }
  std::vector<Verdict> verdicts;
  for (const SuiteReport& s : report.suites) verdicts.push_back(s.verdict);
  report.verdict = combine(verdicts);
  if (c.timing) {
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

}  // namespace polarframes
