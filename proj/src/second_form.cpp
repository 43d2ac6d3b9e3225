#include "polarframes/second_form.hpp"

#include <cmath>

namespace polarframes {

SecondFundamentalTensor SecondFundamentalTensor::from_components(const Mat2& h3, const Mat2& h4, const Mat2& h5) {
  SecondFundamentalTensor t;
  const std::array<Mat2, 3> raw{h3, h4, h5};
  for (int a = 0; a < 3; ++a) {
    t.h[a] = 0.5 * (raw[a] + raw[a].transpose());
    t.asymmetry = std::max(t.asymmetry, std::abs(raw[a](0, 1) - raw[a](1, 0)));
  }
  return t;
}

Mat32 SecondFundamentalTensor::first_row_matrix() const {
  Mat32 m;
  m.col(0) = b11();
  m.col(1) = b12();
  return m;
}

double SecondFundamentalTensor::trace_defect() const {
  double worst = 0.0;
  for (const auto& m : h) worst = std::max(worst, std::abs(m.trace()));
  return worst;
}

double SecondFundamentalTensor::squared_norm() const {
  double s = 0.0;
  for (const auto& m : h) s += m.squaredNorm();
  return s;
}

double SecondFundamentalTensor::max_abs() const {
  double worst = 0.0;
  for (const auto& m : h) worst = std::max(worst, m.cwiseAbs().maxCoeff());
  return worst;
}

namespace {

SecondFundamentalTensor symmetrized(const std::array<Mat2, 3>& raw, const AdaptedFrame& frame) {
  SecondFundamentalTensor t = SecondFundamentalTensor::from_components(raw[0], raw[1], raw[2]);
  t.frame = frame;
  return t;
}

}  // namespace

SecondFundamentalTensor second_fundamental_form(const SurfaceJet& jet, const AdaptedFrame& frame) {
  const Mat2& c = frame.chart_coefficients;
  std::array<Mat2, 3> raw{};
  for (int a = 0; a < 3; ++a) {
    Mat2 hess;  // <g_xy, e_a> in chart coordinates
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) hess(x, y) = jet.second(x, y).dot(frame.normal[a]);
    }
    raw[a] = c * hess * c.transpose();
  }
  return symmetrized(raw, frame);
}

SecondFundamentalTensor second_fundamental_form(const SurfaceImmersion& surface, const ChartPoint& p,
                                                const AdaptedFrame& frame) {
  if (surface.derivative_mode() == DerivativeMode::analytic) {
    return second_fundamental_form(surface.jet(p), frame);
  }
  // Central differences of the tangent frame field along the chart
  // preimages of e1 and e2.
  const double t = SurfaceImmersion::kSecondDerivativeStep;
  std::array<Mat2, 3> raw{};
  for (int i = 0; i < 2; ++i) {
    const Vec2 dir = frame.chart_coefficients.row(i).transpose();
    const ChartPoint fwd{p.u + t * dir[0], p.v + t * dir[1]};
    const ChartPoint bwd{p.u - t * dir[0], p.v - t * dir[1]};
    const AdaptedFrame ff = build_tangent_frame(surface, fwd);
    const AdaptedFrame fb = build_tangent_frame(surface, bwd);
    for (int j = 0; j < 2; ++j) {
      const Vec6 deriv = (ff.tangent[j] - fb.tangent[j]) / (2 * t);
      for (int a = 0; a < 3; ++a) raw[a](i, j) = deriv.dot(frame.normal[a]);
    }
  }
  return symmetrized(raw, frame);
}

}  // namespace polarframes
