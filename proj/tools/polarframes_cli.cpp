// Command line driver: runs the verification suites over a catalog surface
// and writes a JSON or CSV report.
//
// Exit codes: 0 PASS, 1 FAIL, 2 NOT-APPLICABLE, 3 usage or config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarframes/errors.hpp"
#include "polarframes/run.hpp"

namespace pf = polarframes;

namespace {

constexpr int kExitUsage = 3;

struct Options {
  std::string config_path;
  std::string surface;
  std::string grid;
  std::vector<std::string> tolerances;
  std::vector<std::string> theta_bands;
  std::string out;
  std::string format;
  std::string mode;
  bool points = false;
  bool no_timing = false;
  std::int64_t seed = -1;
  int samples = 0;
  int threads = -1;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("-s,--surface", o.surface, "catalog surface name");
  cmd->add_option("-g,--grid", o.grid, "grid counts NUxNVxNTHETAxNPHI");
  cmd->add_option("--tol", o.tolerances, "tolerance override name=value (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->add_option("--theta-band", o.theta_bands, "skip theta in center:width (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->add_option("-o,--out", o.out, "output path (default: stdout)");
  cmd->add_option("-f,--format", o.format, "json or csv");
  cmd->add_option("--mode", o.mode, "derivatives: analytic or fd");
  cmd->add_flag("--points", o.points, "include per-point records in JSON output");
  cmd->add_flag("--no-timing", o.no_timing, "omit wall time so reports are byte-identical across runs");
  cmd->add_option("--seed", o.seed, "seed of the random identity checks");
  cmd->add_option("--samples", o.samples, "number of structure sample points");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

pf::RunConfig make_config(const Options& o, const std::vector<std::string>& suites) {
  pf::RunConfig c = o.config_path.empty() ? pf::RunConfig{} : pf::load_config(o.config_path);
  // `all` keeps the suites of a config file
  if (!suites.empty()) c.suites = suites;
  if (!o.surface.empty()) c.surface = o.surface;
  if (!o.grid.empty()) pf::set_grid(c, o.grid);
  for (const auto& t : o.tolerances) pf::set_tolerance(c, t);
  for (const auto& b : o.theta_bands) {
    const auto colon = b.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(b);
      c.grid.theta_bands.push_back({std::stod(b.substr(0, colon)), std::stod(b.substr(colon + 1))});
    } catch (const std::exception&) {
      throw pf::InvalidConfig("--theta-band: expected center:width, got '" + b + "'");
    }
  }
  if (!o.out.empty()) c.out = o.out;
  if (!o.format.empty()) c.format = o.format;
  if (!o.mode.empty()) {
    if (o.mode == "analytic") {
      c.derivative_mode = pf::DerivativeMode::analytic;
    } else if (o.mode == "fd") {
      c.derivative_mode = pf::DerivativeMode::finite_difference;
    } else {
      throw pf::InvalidConfig("--mode: expected analytic or fd, got '" + o.mode + "'");
    }
  }
  if (o.points) c.include_points = true;
  if (o.no_timing) c.timing = false;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (o.samples > 0) c.structure_samples = o.samples;
  if (o.threads >= 0) c.threads = static_cast<unsigned>(o.threads);
  pf::validate(c);
  return c;
}

void write_report(const pf::RunConfig& c, const pf::VerificationReport& r) {
  if (c.format == "json") {
    const std::string text = pf::to_json(r, c.include_points).dump(2) + "\n";
    if (c.out) {
      std::ofstream(*c.out) << text;
    } else {
      std::cout << text;
    }
    return;
  }
  if (r.suites.size() == 1 || !c.out) {
    if (c.out) {
      std::ofstream f(*c.out);
      pf::write_csv(f, r.suites.front().points);
    } else {
      pf::write_csv(std::cout, r.suites.front().points);
    }
    return;
  }
  // one file per suite: report.csv -> report.theorem1.csv
  const std::filesystem::path base(*c.out);
  for (const auto& s : r.suites) {
    std::filesystem::path p = base;
    p.replace_extension();
    p += "." + s.name + ".csv";
    std::ofstream f(p);
    pf::write_csv(f, s.points);
  }
}

int exit_code(pf::Verdict v) {
  switch (v) {
    case pf::Verdict::pass:
      return 0;
    case pf::Verdict::fail:
      return 1;
    case pf::Verdict::not_applicable:
      return 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-frame verification of minimal surfaces in S^5 and their polar hypersurfaces"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-surfaces", list, "print the catalog names and exit");

  Options opts;
  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::string> suites;
  };
  const std::vector<Sub> subs = {
      {"analyze", "catalog invariants over the chart grid", {"invariants"}},
      {"polar", "certify the polar hypersurface (zero H1, H3, H4) over the grid", {"theorem1"}},
      {"structure", "structure identities of the polar hypersurface at sample points", {"theorem2"}},
      {"all", "every suite (or the suites listed in the config file)", {}},
  };
  std::vector<CLI::App*> cmds;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, opts);
    cmds.push_back(cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (list) {
    for (const auto& n : pf::catalog_names()) std::cout << n << "\n";
    return 0;
  }
  std::vector<std::string> suites;
  bool chosen = false;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (cmds[i]->parsed()) {
      suites = subs[i].suites;
      chosen = true;
    }
  }

  if (!chosen) {
    std::cerr << app.help();
    return kExitUsage;
  }

  pf::RunConfig config;
  try {
    config = make_config(opts, suites);
  } catch (const pf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const pf::VerificationReport report = pf::run(config);
    write_report(config, report);
    for (const auto& s : report.suites) {
      std::cerr << s.name << ": " << pf::to_string(s.verdict) << " (evaluated " << s.counts.evaluated << ", excluded "
                << s.counts.excluded << ", failed " << s.counts.failed << ")\n";
      for (const auto& [name, c] : s.checks) {
        if (c.passed()) continue;
        if (c.bound == pf::CheckStat::Bound::upper) {
          std::cerr << "  " << name << ": max " << c.max << " > tol " << c.tol << "\n";
        } else {
          std::cerr << "  " << name << ": min " << c.min << " < tol " << c.tol << "\n";
        }
      }
    }
    std::cerr << "verdict: " << pf::to_string(report.verdict) << "\n";
    return exit_code(report.verdict);
  } catch (const pf::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
