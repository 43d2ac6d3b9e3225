#include "polarframes/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polarframes/errors.hpp"

namespace polarframes {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorCode::ZeroSecondFundamentalForm: return "ZeroSecondFundamentalForm";
    case ErrorCode::ChartBoundary: return "ChartBoundary";
    case ErrorCode::InconsistentMinimality: return "InconsistentMinimality";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::PoleExcluded: return "PoleExcluded";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::WrongSpectrum: return "WrongSpectrum";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::NonpositiveLambda: return "NonpositiveLambda";
    case ErrorCode::UnknownSurface: return "UnknownSurface";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

SurfaceImmersion::SurfaceImmersion(std::string name, ChartDomain domain, PointFn eval, JetFn analytic)
    : name_(std::move(name)),
      domain_(domain),
      eval_(std::move(eval)),
      analytic_(std::move(analytic)),
      mode_(analytic_ ? DerivativeMode::analytic : DerivativeMode::finite_difference) {}

SurfaceImmersion SurfaceImmersion::with_mode(DerivativeMode mode) const {
  SurfaceImmersion copy = *this;
  copy.mode_ = (mode == DerivativeMode::analytic && !analytic_) ? DerivativeMode::finite_difference : mode;
  return copy;
}

double SurfaceImmersion::first_derivative_step(const ChartPoint& p) {
  return std::max(1e-5, std::hypot(p.u, p.v) * 1e-5);
}

SurfaceJet SurfaceImmersion::jet(const ChartPoint& p) const {
  if (!domain_.contains(p)) {
    std::ostringstream msg;
    msg << name_ << ": (" << p.u << ", " << p.v << ") outside chart";
    throw ChartBoundary(msg.str());
  }
  if (mode_ == DerivativeMode::analytic) return analytic_(p.u, p.v);
  return finite_difference_jet(p);
}

SurfaceJet SurfaceImmersion::finite_difference_jet(const ChartPoint& p) const {
  const double h = first_derivative_step(p);
  const double H = kSecondDerivativeStep;
  const double reach = std::max(h, H);
  if (!domain_.contains({p.u - reach, p.v - reach}) || !domain_.contains({p.u + reach, p.v + reach})) {
    std::ostringstream msg;
    msg << name_ << ": finite-difference stencil at (" << p.u << ", " << p.v << ") leaves chart";
    throw ChartBoundary(msg.str());
  }
  auto g = [this](double u, double v) { return eval_(u, v); };
  SurfaceJet jet;
  jet.g = g(p.u, p.v);
  jet.gu = (g(p.u + h, p.v) - g(p.u - h, p.v)) / (2 * h);
  jet.gv = (g(p.u, p.v + h) - g(p.u, p.v - h)) / (2 * h);
  jet.guu = (g(p.u + H, p.v) - 2 * jet.g + g(p.u - H, p.v)) / (H * H);
  jet.gvv = (g(p.u, p.v + H) - 2 * jet.g + g(p.u, p.v - H)) / (H * H);
  jet.guv = (g(p.u + H, p.v + H) - g(p.u + H, p.v - H) - g(p.u - H, p.v + H) + g(p.u - H, p.v - H)) /
            (4 * H * H);
  return jet;
}

}  // namespace polarframes
