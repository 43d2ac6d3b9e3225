#include "polarframes/polar.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "polarframes/errors.hpp"

namespace polarframes {

namespace {

constexpr double kFiberStep = 1e-5;

Vec6 x_unchecked(const AdaptedFrame& frame, double theta, double phi, FiberChart chart) {
  return frame.normal_block() * fiber_direction(theta, phi, chart);
}

}  // namespace

Vec3 fiber_direction(double theta, double phi, FiberChart chart) {
  const double s = std::sin(phi);
  if (chart == FiberChart::primary) return {s * std::cos(theta), s * std::sin(theta), std::cos(phi)};
  return {std::cos(phi), s * std::cos(theta), s * std::sin(theta)};
}

PencilMatrix pencil(const SecondFundamentalTensor& h, const Vec3& direction) {
  PencilMatrix p;
  for (int a = 0; a < 3; ++a) p.a += direction[a] * h.h[a];
  p.detA = p.a.determinant();
  p.detC = p.detA * p.detA;
  p.system_residual = (h.first_row_matrix().transpose() * direction).norm();
  return p;
}

PencilMatrix pencil(const SecondFundamentalTensor& h, double theta, double phi, FiberChart chart) {
  return pencil(h, fiber_direction(theta, phi, chart));
}

double default_regularity_threshold(const SecondFundamentalTensor& h) {
  const double m = h.max_abs();
  return 1e-8 * m * m * m * m;
}

bool classify_fiber(const SecondFundamentalTensor& h, double theta, double phi, double reg_threshold,
                    FiberChart chart) {
  return pencil(h, theta, phi, chart).detC > reg_threshold;
}

ExcludedSet excluded_set(const SecondFundamentalTensor& h) {
  ExcludedSet out;
  out.rank = classify_rank(h);
  const Vec3 b11 = h.b11();
  const Vec3 b12 = h.b12();
  if (out.rank == RankCase::a) out.axis = b11.cross(b12).normalized();
  if (out.rank == RankCase::b) out.axis = (b11.norm() >= b12.norm() ? b11 : b12).normalized();
  return out;
}

FrameField::FrameField(SurfaceImmersion surface, Gauge gauge, std::optional<Mat63> anchor)
    : surface_(std::move(surface)), gauge_(gauge), anchor_(std::move(anchor)) {}

AdaptedFrame FrameField::at(const ChartPoint& p) const {
  const AdaptedFrame tangent = build_tangent_frame(surface_, p);
  AdaptedFrame frame;
  try {
    frame = build_normal_frame(surface_, p, tangent, gauge_);
  } catch (const ZeroSecondFundamentalForm&) {
    frame = build_normal_frame(surface_, p, tangent, Gauge::generic);
  }
  return anchor_ ? align_to(frame, *anchor_) : frame;
}

FrameField FrameField::anchored_at(const ChartPoint& p) const {
  const FrameField free(surface_, gauge_);
  return FrameField(surface_, gauge_, free.at(p).normal_block());
}

Vec6 x_map(const AdaptedFrame& frame, double theta, double phi, FiberChart chart) {
  if (!(phi >= kPoleBand && phi <= std::numbers::pi - kPoleBand)) {
    std::ostringstream msg;
    msg << "phi = " << phi << " outside [" << kPoleBand << ", pi - " << kPoleBand << "]";
    throw PoleExcluded(msg.str());
  }
  return x_unchecked(frame, theta, phi, chart);
}

Vec6 x_map(const FrameField& field, const FiberPoint& fp) {
  return x_map(field.at(fp.base), fp.theta, fp.phi, fp.chart);
}

BaseStencil make_base_stencil(const FrameField& field, const ChartPoint& p) {
  BaseStencil s;
  s.base = p;
  s.step = SurfaceImmersion::first_derivative_step(p);
  s.center = field.at(p);
  const Mat63 ref = s.center.normal_block();
  const std::array<ChartPoint, 4> pts{ChartPoint{p.u + s.step, p.v}, ChartPoint{p.u - s.step, p.v},
                                      ChartPoint{p.u, p.v + s.step}, ChartPoint{p.u, p.v - s.step}};
  for (int k = 0; k < 4; ++k) s.neighbours[k] = align_to(field.at(pts[k]), ref);
  s.h = second_fundamental_form(field.surface(), p, s.center);
  return s;
}

PolarDifferential polar_differential(const BaseStencil& s, double theta, double phi, FiberChart chart) {
  PolarDifferential d;
  d.x = x_map(s.center, theta, phi, chart);
  d.normal = s.center.point;
  const double h = s.step;
  for (int a = 0; a < 2; ++a) {
    const AdaptedFrame& fwd = s.neighbours[2 * a];
    const AdaptedFrame& bwd = s.neighbours[2 * a + 1];
    d.dx.col(a) = (x_unchecked(fwd, theta, phi, chart) - x_unchecked(bwd, theta, phi, chart)) / (2 * h);
    d.dn.col(a) = (fwd.point - bwd.point) / (2 * h);
  }
  const double k = kFiberStep;
  d.dx.col(2) = (x_unchecked(s.center, theta + k, phi, chart) - x_unchecked(s.center, theta - k, phi, chart)) / (2 * k);
  d.dx.col(3) = (x_unchecked(s.center, theta, phi + k, chart) - x_unchecked(s.center, theta, phi - k, chart)) / (2 * k);
  // the normal g(p) does not depend on the fiber coordinates
  return d;
}

double min_eigenvalue(const Mat4& m) {
  const Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

Mat4 induced_metric(const PolarDifferential& d) {
  Mat4 g = d.dx.transpose() * d.dx;
  g = 0.5 * (g + g.transpose()).eval();
  const double lo = min_eigenvalue(g);
  if (lo <= kSingularMetricTolerance) {
    std::ostringstream msg;
    msg << "smallest metric eigenvalue " << lo;
    throw SingularMetric(msg.str());
  }
  return g;
}

Mat4 induced_metric(const FrameField& field, const FiberPoint& fp) {
  return induced_metric(polar_differential(make_base_stencil(field, fp.base), fp.theta, fp.phi, fp.chart));
}

PolarSecondForm polar_second_form(const BaseStencil& s, const PolarDifferential& d, double theta, double phi,
                                  FiberChart chart) {
  PolarSecondForm out;
  const Mat4 raw = -d.dx.transpose() * d.dn;
  out.II = 0.5 * (raw + raw.transpose());
  out.asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  out.fiber_block = out.II.bottomRows<2>().cwiseAbs().maxCoeff();

  const PencilMatrix p = pencil(s.h, theta, phi, chart);
  Mat2 coframe;  // omega^i(d_a) = <g_a, e_i>
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 2; ++a) coframe(i, a) = s.center.tangent[i].dot(s.center.jacobian.col(a));
  }
  const Mat2 expected = coframe.transpose() * p.a * coframe;
  out.tangential_mismatch = (out.II.topLeftCorner<2, 2>() - expected).cwiseAbs().maxCoeff();

  const Mat4 g = d.dx.transpose() * d.dx;
  const Mat2 schur = g.topLeftCorner<2, 2>() -
                     g.topRightCorner<2, 2>() * g.bottomRightCorner<2, 2>().inverse() * g.bottomLeftCorner<2, 2>();
  const Mat2 scaled_base = -p.detA * (s.center.jacobian.transpose() * s.center.jacobian);
  const double scale = std::max(scaled_base.cwiseAbs().maxCoeff(), 1e-300);
  out.metric_factor_mismatch = (schur - scaled_base).cwiseAbs().maxCoeff() / scale;
  return out;
}

Mat4 second_fundamental_form_x(const FrameField& field, const FiberPoint& fp) {
  const BaseStencil s = make_base_stencil(field, fp.base);
  const PolarDifferential d = polar_differential(s, fp.theta, fp.phi, fp.chart);
  induced_metric(d);  // SingularMetric off N_*
  return polar_second_form(s, d, fp.theta, fp.phi, fp.chart).II;
}

Vec4 mean_curvatures(const Vec4& l) {
  const double e1 = l.sum();
  double e2 = 0.0;
  double e3 = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      e2 += l[i] * l[j];
      for (int k = j + 1; k < 4; ++k) e3 += l[i] * l[j] * l[k];
    }
  }
  const double e4 = l.prod();
  return {e1 / 4.0, e2 / 6.0, e3 / 4.0, e4};
}

HypersurfaceData shape_and_H(const Mat4& metric, const Mat4& II) {
  const Mat4 g = 0.5 * (metric + metric.transpose());
  const double lo = min_eigenvalue(g);
  if (lo <= kSingularMetricTolerance) {
    std::ostringstream msg;
    msg << "smallest metric eigenvalue " << lo;
    throw SingularMetric(msg.str());
  }
  const Mat4 b = 0.5 * (II + II.transpose());
  HypersurfaceData out;
  out.metric = g;
  const Mat4 ginv = g.inverse();
  const Mat4 shape = ginv * b;
  out.shape = 0.5 * (shape + ginv * shape.transpose() * g);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Mat4> es(b, g);
  for (int k = 0; k < 4; ++k) {
    out.lambdas[k] = es.eigenvalues()[3 - k];
    out.directions.col(k) = es.eigenvectors().col(3 - k);
  }
  out.H = mean_curvatures(out.lambdas);
  return out;
}

int shape_rank(const Vec4& lambdas, double relative) {
  const double top = lambdas.cwiseAbs().maxCoeff();
  int rank = 0;
  for (int k = 0; k < 4; ++k) rank += std::abs(lambdas[k]) > relative * top ? 1 : 0;
  return top == 0.0 ? 0 : rank;
}

}  // namespace polarframes
