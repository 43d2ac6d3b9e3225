#include "polarframes/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace polarframes {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::not_applicable:
      return "NOT-APPLICABLE";
  }
  return "?";
}

Verdict combine(const std::vector<Verdict>& verdicts) {
  bool any_pass = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::fail) return Verdict::fail;
    any_pass = any_pass || v == Verdict::pass;
  }
  return any_pass ? Verdict::pass : Verdict::not_applicable;
}

void CheckStat::add(double value) {
  // NaN never passes.
  if (std::isnan(value)) value = bound == Bound::upper ? std::numeric_limits<double>::infinity()
                                                         : -std::numeric_limits<double>::infinity();
  max = std::max(max, value);
  min = std::min(min, value);
  sum += value;
  ++n;
}

bool CheckStat::passed() const {
  if (n == 0) return true;
  return bound == Bound::upper ? max <= tol : min > tol;
}

CheckStat& SuiteReport::check(const std::string& name, double tol, CheckStat::Bound bound) {
  auto [it, inserted] = checks.try_emplace(name);
  if (inserted) {
    it->second.tol = tol;
    it->second.bound = bound;
  }
  return it->second;
}

void SuiteReport::finalize() {
  if (counts.evaluated == 0 && counts.failed == 0) {
    verdict = Verdict::not_applicable;
    return;
  }
  bool ok = counts.failed == 0;
  for (const auto& [name, c] : checks) ok = ok && c.passed();
  verdict = ok ? Verdict::pass : Verdict::fail;
}

namespace {

nlohmann::json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& x) {
  if (!x) return nullptr;
  if constexpr (std::is_floating_point_v<T>) return number_or_null(*x);
  return *x;
}

}  // namespace

nlohmann::json to_json(const CheckStat& c) {
  return {{"max", number_or_null(c.n ? c.max : 0.0)},
          {"mean", number_or_null(c.mean())},
          {"min", number_or_null(c.n ? c.min : 0.0)},
          {"tol", c.tol},
          {"bound", c.bound == CheckStat::Bound::upper ? "max<=tol" : "min>tol"},
          {"samples", c.n},
          {"passed", c.passed()}};
}

nlohmann::json to_json(const PointRecord& p) {
  nlohmann::json j = {{"u", p.u},
                      {"v", p.v},
                      {"theta", optional_json(p.theta)},
                      {"phi", optional_json(p.phi)},
                      {"detC", optional_json(p.detC)},
                      {"minEig", optional_json(p.minEig)},
                      {"H", {optional_json(p.H1), optional_json(p.H2), optional_json(p.H3), optional_json(p.H4)}},
                      {"rankII", optional_json(p.rankII)},
                      {"status", p.status}};
  if (!p.message.empty()) j["message"] = p.message;
  return j;
}

nlohmann::json to_json(const SuiteReport& s, bool include_points) {
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& [name, c] : s.checks) checks[name] = to_json(c);
  nlohmann::json j = {{"name", s.name},
                      {"verdict", to_string(s.verdict)},
                      {"counts", {{"evaluated", s.counts.evaluated}, {"excluded", s.counts.excluded}, {"failed", s.counts.failed}}},
                      {"checks", checks},
                      {"notes", s.notes},
                      {"details", s.details}};
  if (include_points) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.points) pts.push_back(to_json(p));
    j["points"] = std::move(pts);
  }
  return j;
}

nlohmann::json to_json(const VerificationReport& r, bool include_points) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s, include_points));
  return {{"schema", "polarframes.report/1"},
          {"config", r.config},
          {"suites", suites},
          {"verdict", to_string(r.verdict)},
          {"wall_time_seconds", r.wall_time_seconds ? nlohmann::json(*r.wall_time_seconds) : nlohmann::json(nullptr)}};
}

void write_csv(std::ostream& out, const std::vector<PointRecord>& points) {
  const auto cell = [&](const auto& x) {
    if (x) out << *x;
  };
  out << kCsvHeader << '\n' << std::setprecision(17);
  for (const auto& p : points) {
    out << p.u << ',' << p.v << ',';
    cell(p.theta);
    out << ',';
    cell(p.phi);
    out << ',';
    cell(p.detC);
    out << ',';
    cell(p.minEig);
    out << ',';
    cell(p.H1);
    out << ',';
    cell(p.H2);
    out << ',';
    cell(p.H3);
    out << ',';
    cell(p.H4);
    out << ',';
    cell(p.rankII);
    out << '\n';
  }
}

}  // namespace polarframes
