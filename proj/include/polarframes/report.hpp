#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace polarframes {

enum class Verdict { pass, fail, not_applicable };

const char* to_string(Verdict v);

/// PASS if nothing failed and something passed, NOT-APPLICABLE if every
/// verdict is, FAIL otherwise.
Verdict combine(const std::vector<Verdict>& verdicts);

/// Running max/mean/min of one named residual against its tolerance. Upper
/// checks pass when max <= tol, lower checks when min >= tol.
struct CheckStat {
  enum class Bound { upper, lower };

  double tol = 0.0;
  Bound bound = Bound::upper;
  double max = -std::numeric_limits<double>::infinity();
  double min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t n = 0;

  void add(double value);
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  bool passed() const;
};

struct SuiteCounts {
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  std::size_t failed = 0;
};

/// One CSV row. Fields a suite does not compute are left empty.
struct PointRecord {
  double u = 0.0;
  double v = 0.0;
  std::optional<double> theta, phi, detC, minEig, H1, H2, H3, H4;
  std::optional<int> rankII;
  std::string status;  // ok | excluded | failed
  std::string message;
};

struct SuiteReport {
  std::string name;
  std::map<std::string, CheckStat> checks;
  SuiteCounts counts;
  Verdict verdict = Verdict::not_applicable;
  std::vector<std::string> notes;
  std::vector<PointRecord> points;
  /// Suite-specific values (expected invariants, fixed seeds, ...).
  nlohmann::json details = nlohmann::json::object();

  CheckStat& check(const std::string& name, double tol, CheckStat::Bound bound = CheckStat::Bound::upper);
  /// PASS iff every check passes and nothing failed; NOT-APPLICABLE when no
  /// point was evaluated.
  void finalize();
};

struct VerificationReport {
  nlohmann::json config = nlohmann::json::object();
  std::vector<SuiteReport> suites;
  Verdict verdict = Verdict::not_applicable;
  std::optional<double> wall_time_seconds;
};

nlohmann::json to_json(const CheckStat& c);
nlohmann::json to_json(const PointRecord& p);
nlohmann::json to_json(const SuiteReport& s, bool include_points);
nlohmann::json to_json(const VerificationReport& r, bool include_points);

inline constexpr const char* kCsvHeader = "u,v,theta,phi,detC,minEig,H1,H2,H3,H4,rankII";

void write_csv(std::ostream& out, const std::vector<PointRecord>& points);

}  // namespace polarframes
