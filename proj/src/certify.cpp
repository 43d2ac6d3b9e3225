#include "polarframes/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "polarframes/errors.hpp"
#include "polarframes/parallel.hpp"

namespace polarframes {

namespace {

constexpr double kPi = std::numbers::pi;

int rank_number(RankCase r) { return r == RankCase::a ? 2 : r == RankCase::b ? 1 : 0; }

double wrap_angle(double t) {
  t = std::fmod(t, 2 * kPi);
  if (t > kPi) t -= 2 * kPi;
  if (t < -kPi) t += 2 * kPi;
  return t;
}

// Uniform on [-1, 1) from the top 53 bits; stable across standard libraries.
double uniform(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

SecondFundamentalTensor random_traceless(std::mt19937_64& rng) {
  std::array<Mat2, 3> h;
  for (auto& m : h) {
    const double a = 2.0 * uniform(rng), b = 2.0 * uniform(rng);
    m << a, b, b, -a;
  }
  return SecondFundamentalTensor::from_components(h[0], h[1], h[2]);
}

PointRecord failed_record(double u, double v, const std::string& message) {
  PointRecord r;
  r.u = u;
  r.v = v;
  r.status = "failed";
  r.message = message;
  return r;
}

}  // namespace

bool GridSpec::in_band(double theta) const {
  return std::any_of(theta_bands.begin(), theta_bands.end(), [&](const ThetaBand& b) {
    return std::abs(wrap_angle(theta - b.center)) <= 0.5 * b.width;
  });
}

std::vector<ChartPoint> chart_grid(const ChartDomain& d, const GridSpec& grid) {
  const double mu = grid.margin * (d.u_max - d.u_min);
  const double mv = grid.margin * (d.v_max - d.v_min);
  const auto node = [](double lo, double hi, int i, int n) { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1); };
  std::vector<ChartPoint> out;
  out.reserve(static_cast<std::size_t>(grid.nu) * grid.nv);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      out.push_back({node(d.u_min + mu, d.u_max - mu, i, grid.nu), node(d.v_min + mv, d.v_max - mv, j, grid.nv)});
    }
  }
  return out;
}

std::vector<double> theta_grid(int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = 2 * kPi * k / n;
  return out;
}

std::vector<double> phi_grid(int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = kPi * (k + 1) / (n + 1);
  return out;
}

SuiteReport analyze_surface(const CatalogEntry& entry, const GridSpec& grid, const InvariantTolerances& tol,
                            std::uint64_t seed, int random_samples) {
  SuiteReport rep;
  rep.name = "invariants";
  const SurfaceImmersion& surface = entry.surface;
  const ExpectedInvariants& ex = entry.expected;

  struct Eval {
    PointRecord rec;
    CurvatureInvariants inv;
    double gauge = -1.0;
    bool superminimal = false;
  };
  const std::vector<ChartPoint> pts = chart_grid(surface.domain(), grid);
  std::vector<Eval> evals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const ChartPoint p = pts[i];
    Eval& e = evals[i];
    try {
      const AdaptedFrame f = build_frame(surface, p, Gauge::generic);
      const SecondFundamentalTensor h = second_fundamental_form(surface, p, f);
      e.inv = curvature_invariants(h, ex.minimal, tol.minimality);
      if (ex.minimal) e.superminimal = superminimality_check(h, tol.minimality).is_superminimal;
      try {
        const AdaptedFrame fb = build_frame(surface, p, Gauge::b_aligned);
        const CurvatureInvariants ib =
            curvature_invariants(second_fundamental_form(surface, p, fb), ex.minimal, tol.minimality);
        e.gauge = std::max(std::abs(ib.K - e.inv.K), std::abs(ib.KN - e.inv.KN));
      } catch (const ZeroSecondFundamentalForm&) {
        // the aligned gauge does not exist at totally geodesic points
      }
      e.rec.u = p.u;
      e.rec.v = p.v;
      e.rec.rankII = rank_number(e.inv.rank_case);
      e.rec.status = "ok";
    } catch (const Error& err) {
      e.rec = failed_record(p.u, p.v, err.what());
    }
  });

  std::size_t borderline = 0;
  for (const Eval& e : evals) {
    rep.points.push_back(e.rec);
    ++rep.counts.evaluated;
    if (e.rec.status == "failed") {
      ++rep.counts.failed;
      continue;
    }
    if (ex.K) rep.check("K", tol.catalog).add(std::abs(e.inv.K - *ex.K));
    if (ex.KN) rep.check("KN", tol.catalog).add(std::abs(e.inv.KN - *ex.KN));
    if (ex.S) rep.check("S", tol.catalog).add(std::abs(e.inv.S - *ex.S));
    if (ex.minimal) {
      rep.check("minimality", tol.minimality).add(e.inv.H_vec.norm());
      rep.check("superminimal_flag", 0.0).add(e.superminimal == ex.superminimal ? 0.0 : 1.0);
    }
    if (e.inv.rank_borderline) {
      ++borderline;
    } else {
      rep.check("rank_case", 0.0).add(e.inv.rank_case == ex.rank_case ? 0.0 : 1.0);
    }
    if (e.gauge >= 0) rep.check("gauge", tol.gauge).add(e.gauge);
  }
  if (borderline) rep.notes.push_back(std::to_string(borderline) + " points with borderline rank left unclassified");

  std::mt19937_64 rng(seed);
  for (int k = 0; k < random_samples; ++k) {
    const SecondFundamentalTensor h = random_traceless(rng);
    const SuperminimalityResult sm = superminimality_check(h);
    const double scale1 = std::max({1.0, std::abs(sm.lhs), std::abs(sm.rhs)});
    rep.check("superminimal_identity", tol.identity).add(std::abs(sm.lhs - sm.rhs) / scale1);
    const double K = gauss_curvature(h);
    const double S = h.squared_norm();
    const double full = normal_curvature_full_sum(h);
    const double r1 = normal_curvature_component(h, 0, 1), r2 = normal_curvature_component(h, 0, 2),
                 r3 = normal_curvature_component(h, 1, 2);
    const double components = 4.0 * (r1 * r1 + r2 * r2 + r3 * r3);
    rep.check("cross_formula", tol.identity)
        .add(std::max(std::abs(K - (1.0 - 0.5 * S)) / std::max(1.0, std::abs(K)),
                      std::abs(full - components) / std::max(1.0, full)));
  }

  nlohmann::json expected = {{"minimal", ex.minimal},
                             {"rank_case", to_string(ex.rank_case)},
                             {"superminimal", ex.superminimal}};
  expected["K"] = ex.K ? nlohmann::json(*ex.K) : nlohmann::json("varies");
  expected["KN"] = ex.KN ? nlohmann::json(*ex.KN) : nlohmann::json("varies");
  expected["S"] = ex.S ? nlohmann::json(*ex.S) : nlohmann::json("varies");
  rep.details = {{"surface", surface.name()},
                 {"derivative_mode", surface.derivative_mode() == DerivativeMode::analytic ? "analytic" : "fd"},
                 {"expected", expected},
                 {"random_tensors", random_samples},
                 {"seed", seed}};
  rep.finalize();
  return rep;
}

SuiteReport certify_theorem1(const SurfaceImmersion& surface, const GridSpec& grid, const Theorem1Tolerances& tol,
                             unsigned threads) {
  SuiteReport rep;
  rep.name = "theorem1";
  const FrameField field(surface, Gauge::b_aligned);
  const std::vector<ChartPoint> bases = chart_grid(surface.domain(), grid);
  const std::vector<double> thetas = theta_grid(grid.ntheta);
  const std::vector<double> phis = phi_grid(grid.nphi);

  enum Value { kH1, kH3, kH4, kFiber, kTangential, kMetric, kMinEig, kRankDefect, kCount };
  struct Eval {
    PointRecord rec;
    std::array<double, kCount> values{};
  };
  struct BaseEval {
    std::vector<Eval> points;
    double trace_defect = -1.0;
    RankCase rank = RankCase::c;
  };
  std::vector<BaseEval> results(bases.size());

  parallel_for(
      bases.size(),
      [&](std::size_t b) {
        const ChartPoint p = bases[b];
        BaseEval& out = results[b];
        std::optional<BaseStencil> stencil;
        std::string base_error;
        try {
          stencil = make_base_stencil(field, p);
          out.trace_defect = stencil->h.trace_defect();
          out.rank = classify_rank(stencil->h);
        } catch (const Error& err) {
          base_error = err.what();
        }
        const double thr = stencil ? default_regularity_threshold(stencil->h) : 0.0;
        for (double theta : thetas) {
          for (double phi : phis) {
            Eval e;
            e.rec.u = p.u;
            e.rec.v = p.v;
            e.rec.theta = theta;
            e.rec.phi = phi;
            if (!stencil) {
              e.rec.status = "failed";
              e.rec.message = base_error;
              out.points.push_back(std::move(e));
              continue;
            }
            const PencilMatrix pen = pencil(stencil->h, theta, phi);
            e.rec.detC = pen.detC;
            if (grid.in_band(theta) || !(pen.detC > thr)) {
              e.rec.status = "excluded";
              e.rec.message = grid.in_band(theta) ? "theta band" : "outside N_*";
              out.points.push_back(std::move(e));
              continue;
            }
            try {
              const PolarDifferential d = polar_differential(*stencil, theta, phi);
              const Mat4 g = induced_metric(d);
              const PolarSecondForm ii = polar_second_form(*stencil, d, theta, phi);
              const HypersurfaceData data = shape_and_H(g, ii.II);
              const int rank = shape_rank(data.lambdas);
              e.rec.minEig = min_eigenvalue(g);
              e.rec.H1 = data.H[0];
              e.rec.H2 = data.H[1];
              e.rec.H3 = data.H[2];
              e.rec.H4 = data.H[3];
              e.rec.rankII = rank;
              e.rec.status = "ok";
              e.values = {std::abs(data.H[0]), std::abs(data.H[2]), std::abs(data.H[3]), ii.fiber_block,
                          ii.tangential_mismatch, ii.metric_factor_mismatch, *e.rec.minEig,
                          static_cast<double>(std::abs(rank - 2))};
            } catch (const Error& err) {
              e.rec.status = "failed";
              e.rec.message = err.what();
            }
            out.points.push_back(std::move(e));
          }
        }
      },
      threads);

  std::size_t rank_a_points = 0, rank_a_excluded = 0;
  for (const BaseEval& be : results) {
    if (be.trace_defect >= 0) rep.check("minimality", tol.minimality).add(be.trace_defect);
    for (const Eval& e : be.points) {
      rep.points.push_back(e.rec);
      if (be.rank == RankCase::a) {
        ++rank_a_points;
        rank_a_excluded += e.rec.status == "excluded" ? 1 : 0;
      }
      if (e.rec.status == "excluded") {
        ++rep.counts.excluded;
        continue;
      }
      ++rep.counts.evaluated;
      if (e.rec.status == "failed") {
        ++rep.counts.failed;
        continue;
      }
      rep.check("H1", tol.H1).add(e.values[kH1]);
      rep.check("H3", tol.H3).add(e.values[kH3]);
      rep.check("H4", tol.H4).add(e.values[kH4]);
      rep.check("fiber_block", tol.fiber_block).add(e.values[kFiber]);
      rep.check("tangential", tol.tangential).add(e.values[kTangential]);
      rep.check("metric_factor", tol.metric_factor).add(e.values[kMetric]);
      rep.check("min_metric_eigenvalue", kSingularMetricTolerance, CheckStat::Bound::lower).add(e.values[kMinEig]);
      rep.check("rank_defect", 0.0).add(e.values[kRankDefect]);
    }
  }
  rep.finalize();
  const std::size_t total = rep.counts.evaluated + rep.counts.excluded;
  if (rep.verdict == Verdict::not_applicable && total > 0) {
    rep.notes.push_back("every fiber point is excluded (empty N_*)");
  }
  if (rank_a_points > 0 && 2 * rank_a_excluded > rank_a_points) {
    rep.notes.push_back("more than half of the fiber points over rank-2 base points are excluded");
    rep.verdict = Verdict::fail;
  }
  nlohmann::json bands = nlohmann::json::array();
  for (const ThetaBand& b : grid.theta_bands) bands.push_back({{"center", b.center}, {"width", b.width}});
  rep.details = {{"surface", surface.name()},
                 {"grid", {grid.nu, grid.nv, grid.ntheta, grid.nphi}},
                 {"theta_bands", bands},
                 {"excluded_fraction", total ? static_cast<double>(rep.counts.excluded) / total : 0.0}};
  return rep;
}

SuiteReport verify_theorem2(const SurfaceImmersion& surface, const GridSpec& grid, const Theorem2Tolerances& tol,
                            int samples, unsigned threads) {
  SuiteReport rep;
  rep.name = "theorem2";
  const FrameField field(surface, Gauge::b_aligned);
  const std::vector<ChartPoint> bases = chart_grid(surface.domain(), grid);
  const std::vector<double> thetas = theta_grid(grid.ntheta);
  const std::vector<double> phis = phi_grid(grid.nphi);
  const std::size_t nb = bases.size();
  const std::size_t nf = thetas.size() * phis.size();
  constexpr double kOffset = 0.05;
  const std::vector<Vec2> offsets{{kOffset, 0.0}, {-kOffset, 0.0}, {0.0, kOffset}, {0.0, -kOffset}};

  struct Sample {
    std::optional<FiberPoint> fp;
    PointRecord rec;
  };
  std::vector<Sample> chosen(static_cast<std::size_t>(std::max(samples, 0)));
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const std::size_t b = chosen.size() <= nb ? k * nb / chosen.size() : k % nb;
    const ChartPoint p = bases[b];
    Sample& s = chosen[k];
    s.rec.u = p.u;
    s.rec.v = p.v;
    s.rec.status = "excluded";
    s.rec.message = "no well-conditioned fiber point";
    SecondFundamentalTensor h;
    try {
      h = second_fundamental_form(surface, p, field.at(p));
    } catch (const Error& err) {
      s.rec = failed_record(p.u, p.v, err.what());
      continue;
    }
    const double m = h.max_abs();
    const double thr = 1e-2 * m * m * m * m;
    for (std::size_t j = 0; j < nf; ++j) {
      const std::size_t f = (5 * k + b + j) % nf;
      const double theta = thetas[f / phis.size()];
      const double phi = phis[f % phis.size()];
      bool ok = thr > 0 && !grid.in_band(theta) && pencil(h, theta, phi).detC >= thr;
      for (const Vec2& o : offsets) {
        if (!ok) break;
        ok = !grid.in_band(theta + o[0]) && pencil(h, theta + o[0], phi + o[1]).detC >= thr;
        try {
          require_structure_stencil(surface, StructureSteps{}, {p.u, p.v, theta + o[0], phi + o[1]});
        } catch (const StencilOutOfDomain&) {
          ok = false;
        }
      }
      if (ok) {
        FiberPoint fp{p, theta, phi};
        fp.in_N_star = true;
        fp.detC = pencil(h, theta, phi).detC;
        s.fp = fp;
        s.rec.theta = theta;
        s.rec.phi = phi;
        s.rec.detC = fp.detC;
        s.rec.status = "ok";
        s.rec.message.clear();
        break;
      }
    }
  }

  enum Value {
    kSpectrum, kInvolutivity, kLambdaDerivative, kDifI, kDifII, kDifIII, kDifLambda, kDifKN, kLeafDerivative, kLeafDrift,
    kGaussMap, kLeafGeodesic, kCodazzi, kBracket, kTable, kSkew, kLoopK, kLoopKN, kRotation, kCount
  };
  std::vector<std::array<double, kCount>> values(chosen.size());
  parallel_for(
      chosen.size(),
      [&](std::size_t k) {
        Sample& s = chosen[k];
        if (!s.fp) return;
        const FiberPoint& fp = *s.fp;
        try {
          const PolarHypersurface ctx(surface, fp);
          const StructureResiduals r = derivative_identity_residuals(ctx, fp);
          const Vec2 drift = leaf_constancy_drift(ctx, fp, offsets);
          const ConnectionScalars turned = connection_scalars(ctx.rotated(kPi / 3), fp);
          const ConnectionScalars expected = rotate_frame_scalars(r.scalars, kPi / 3);
          const double rotation =
              std::max({std::abs(turned.f3 - expected.f3), std::abs(turned.f4 - expected.f4),
                        std::abs(turned.g3 - expected.g3), std::abs(turned.g4 - expected.g4),
                        (turned.w34 - expected.w34).cwiseAbs().maxCoeff()});
          const PrincipalFrame frame = ctx.frame(coordinates(fp));
          s.rec.minEig = min_eigenvalue(frame.data.metric);
          s.rec.H1 = frame.data.H[0];
          s.rec.H2 = frame.data.H[1];
          s.rec.H3 = frame.data.H[2];
          s.rec.H4 = frame.data.H[3];
          s.rec.rankII = shape_rank(frame.data.lambdas);
          values[k] = {r.spectrum,
                       r.involutivity,
                       r.lambda_derivative.maxCoeff(),
                       r.difI.maxCoeff(),
                       r.difII.maxCoeff(),
                       r.difIII.maxCoeff(),
                       std::max({r.dif_lambda12.maxCoeff(), r.dif_lambda34.maxCoeff(), r.dif_lambda34_b.maxCoeff()}),
                       r.dif_KN.maxCoeff(),
                       r.leaf_derivative.maxCoeff(),
                       drift.maxCoeff(),
                       r.gauss_map.maxCoeff(),
                       std::max(r.leaf_totally_geodesic, r.leaf_ambient),
                       r.codazzi.maxCoeff(),
                       r.bracket,
                       r.connection_table,
                       r.skew,
                       r.loop_K,
                       r.loop_KN,
                       rotation};
        } catch (const Error& err) {
          s.rec.status = "failed";
          s.rec.message = err.what();
        }
      },
      threads);

  static constexpr const char* kNames[kCount] = {
      "spectrum", "involutivity", "lambda_derivative", "difI", "difII", "difIII", "dif_lambda", "dif_KN", "leaf_derivative",
      "leaf_drift", "gauss_map", "leaf_geodesic", "codazzi", "bracket", "connection_table", "skew", "loop_K", "loop_KN",
      "rotation"};
  const std::array<double, kCount> tols = {
      tol.spectrum, tol.involutivity, tol.lambda_derivative, tol.difI, tol.difII, tol.difII, tol.dif_lambda,
      tol.dif_KN, tol.leaf_derivative, tol.leaf_drift, tol.gauss_map, tol.leaf_geodesic, tol.codazzi,
      tol.bracket, tol.connection_table, tol.skew, tol.loop, tol.loop, tol.rotation};
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const Sample& s = chosen[k];
    rep.points.push_back(s.rec);
    if (s.rec.status == "excluded") {
      ++rep.counts.excluded;
      continue;
    }
    ++rep.counts.evaluated;
    if (s.rec.status == "failed") {
      ++rep.counts.failed;
      continue;
    }
    for (int c = 0; c < kCount; ++c) rep.check(kNames[c], tols[c]).add(values[k][c]);
  }
  rep.finalize();
  if (rep.counts.evaluated < chosen.size()) {
    std::ostringstream msg;
    msg << rep.counts.evaluated << " of " << chosen.size() << " requested samples evaluated";
    rep.notes.push_back(msg.str());
  }
  rep.details = {{"surface", surface.name()},
                 {"samples", samples},
                 {"leaf_offset", kOffset},
                 {"rotation_angle", kPi / 3},
                 {"steps", {{"tangent", StructureSteps{}.tangent}, {"frame", StructureSteps{}.frame},
                            {"scalar", StructureSteps{}.scalar}}}};
  return rep;
}

}  // namespace polarframes
