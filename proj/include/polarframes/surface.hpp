#pragma once

#include <array>
#include <functional>
#include <string>

#include "polarframes/hyperdual.hpp"
#include "polarframes/types.hpp"

namespace polarframes {

enum class DerivativeMode { analytic, finite_difference };

/// Value plus first and second chart partials of a surface at one point.
struct SurfaceJet {
  Vec6 g = Vec6::Zero();
  Vec6 gu = Vec6::Zero();
  Vec6 gv = Vec6::Zero();
  Vec6 guu = Vec6::Zero();
  Vec6 guv = Vec6::Zero();
  Vec6 gvv = Vec6::Zero();

  Mat62 jacobian() const {
    Mat62 j;
    j << gu, gv;
    return j;
  }
  const Vec6& second(int a, int b) const {
    if (a == 0 && b == 0) return guu;
    if (a == 1 && b == 1) return gvv;
    return guv;
  }
};

/// Parametric map from a chart rectangle into the unit sphere S^5 of R^6.
///
/// Analytic partials come from a jet callback; when it is absent (or the mode
/// is switched to finite differences) partials are formed with central
/// differences: first derivatives with step max(1e-5, |p| 1e-5), second
/// derivatives with step 1e-4.
class SurfaceImmersion {
 public:
  using PointFn = std::function<Vec6(double, double)>;
  using JetFn = std::function<SurfaceJet(double, double)>;

  static constexpr double kSecondDerivativeStep = 1e-4;

  SurfaceImmersion(std::string name, ChartDomain domain, PointFn eval, JetFn analytic = {});

  const std::string& name() const { return name_; }
  const ChartDomain& domain() const { return domain_; }
  DerivativeMode derivative_mode() const { return mode_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(analytic_); }

  /// Copy of this surface evaluated with the given derivative mode.
  SurfaceImmersion with_mode(DerivativeMode mode) const;

  Vec6 point(const ChartPoint& p) const { return eval_(p.u, p.v); }

  /// Partials at p in the surface's derivative mode. Throws ChartBoundary when
  /// p or a finite-difference stencil point leaves the chart.
  SurfaceJet jet(const ChartPoint& p) const;

  /// First-derivative step used at p in finite-difference mode.
  static double first_derivative_step(const ChartPoint& p);

 private:
  SurfaceJet finite_difference_jet(const ChartPoint& p) const;

  std::string name_;
  ChartDomain domain_;
  PointFn eval_;
  JetFn analytic_;
  DerivativeMode mode_ = DerivativeMode::analytic;
};

/// Builds an exact jet from a parametrisation templated on its scalar type by
/// evaluating it three times on hyper-dual seeds.
template <class Param>
SurfaceJet hyperdual_jet(const Param& param, double u, double v) {
  SurfaceJet jet;
  const auto uu = param(HyperDual(u, 1, 1, 0), HyperDual(v));
  const auto uv = param(HyperDual(u, 1, 0, 0), HyperDual(v, 0, 1, 0));
  const auto vv = param(HyperDual(u), HyperDual(v, 1, 1, 0));
  for (int k = 0; k < 6; ++k) {
    jet.g[k] = uv[k].re;
    jet.gu[k] = uv[k].d1;
    jet.gv[k] = uv[k].d2;
    jet.guv[k] = uv[k].d12;
    jet.guu[k] = uu[k].d12;
    jet.gvv[k] = vv[k].d12;
  }
  return jet;
}

template <class Param>
SurfaceImmersion make_surface(std::string name, ChartDomain domain, Param param) {
  auto eval = [param](double u, double v) {
    const auto p = param(u, v);
    Vec6 out;
    for (int k = 0; k < 6; ++k) out[k] = p[k];
    return out;
  };
  auto jet = [param](double u, double v) { return hyperdual_jet(param, u, v); };
  return SurfaceImmersion(std::move(name), domain, eval, jet);
}

}  // namespace polarframes
