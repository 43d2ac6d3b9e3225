#include "polarframes/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "polarframes/errors.hpp"

namespace polarframes {

namespace {

// Fourth-order central difference of f along `dir` with step h.
template <class F>
auto central5(const F& f, const Vec4& q, int dir, double h) {
  using T = decltype(f(q));
  Vec4 d = Vec4::Zero();
  d[dir] = h;
  const T a = f(q + d), b = f(q - d), c = f(q + 2 * d), e = f(q - 2 * d);
  const T out = ((e - c) + 8.0 * (a - b)) / (12.0 * h);
  return out;
}

Mat2 rotation(double t) {
  Mat2 r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

Mat2 polar_factor(const Mat2& m) {
  const Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void fiber_partials(double theta, double phi, FiberChart chart, Vec3& d_theta, Vec3& d_phi) {
  const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);
  if (chart == FiberChart::primary) {
    d_theta = {-sp * st, sp * ct, 0.0};
    d_phi = {cp * ct, cp * st, -sp};
  } else {
    d_theta = {0.0, -sp * st, sp * ct};
    d_phi = {-sp, cp * ct, cp * st};
  }
}

// lambda, ln lambda, f3, f4, g3, g4, w34 (4), K, KN, R3412, R3512, R4512,
// f.f + g.g
using Bundle = Eigen::Matrix<double, 16, 1>;
enum : int { kLam, kLnLam, kF3, kF4, kG3, kG4, kW, kK = kW + 4, kKN, kR3412, kR3512, kR4512, kSum };

Bundle bundle_of(const ConnectionScalars& s) {
  const EtaCurvatures c = eta_curvatures(s);
  Bundle b;
  b << s.lambda, std::log(s.lambda), s.f3, s.f4, s.g3, s.g4, s.w34, c.K, c.KN, c.R3412, c.R3512, c.R4512,
      s.f3 * s.f3 + s.f4 * s.f4 + s.g3 * s.g3 + s.g4 * s.g4;
  return b;
}

}  // namespace

ConnectionScalars rotate_frame_scalars(const ConnectionScalars& s, double theta) {
  const Mat2 r = rotation(theta);
  ConnectionScalars out = s;
  const Vec2 f = r * Vec2(s.f3, s.f4);
  const Vec2 g = r * Vec2(s.g3, s.g4);
  const Vec2 w = r * Vec2(s.w34[2], s.w34[3]);
  out.f3 = f[0];
  out.f4 = f[1];
  out.g3 = g[0];
  out.g4 = g[1];
  out.w34[2] = w[0];
  out.w34[3] = w[1];
  return out;
}

Vec4 rotation_invariants(const ConnectionScalars& s) {
  return {s.f3 * s.f3 + s.f4 * s.f4, s.g3 * s.g3 + s.g4 * s.g4, s.f3 * s.g3 + s.f4 * s.g4,
          s.f3 * s.g4 - s.f4 * s.g3};
}

EtaCurvatures eta_curvatures(const ConnectionScalars& s) {
  if (!(s.lambda > 0.0)) {
    std::ostringstream msg;
    msg << "lambda = " << s.lambda;
    throw NonpositiveLambda(msg.str());
  }
  const double l2 = s.lambda * s.lambda;
  const double cross = s.f3 * s.g4 - s.f4 * s.g3;
  EtaCurvatures c;
  c.K = 1.0 - (1.0 + s.f3 * s.f3 + s.f4 * s.f4 + s.g3 * s.g3 + s.g4 * s.g4) / l2;
  c.R3412 = 2.0 * cross / l2;
  c.R3512 = -2.0 * s.f3 / l2;
  c.R4512 = -2.0 * s.f4 / l2;
  c.KN = 16.0 / (l2 * l2) * (s.f3 * s.f3 + s.f4 * s.f4 + cross * cross);
  const double shortcut = 4.0 * (c.R3412 * c.R3412 + c.R3512 * c.R3512 + c.R4512 * c.R4512);
  if (std::abs(c.KN - shortcut) > 1e-12 * std::max(1.0, c.KN)) {
    throw InconsistentMinimality("normal curvature of the Gauss map does not match its components");
  }
  return c;
}

NullityBasis nullity_distribution(const HypersurfaceData& data, double tol) {
  const Vec4& l = data.lambdas;
  NullityBasis b;
  b.spectrum_residual = std::max({std::abs(l[0] + l[3]), std::abs(l[1]), std::abs(l[2])});
  if (b.spectrum_residual > tol || !(l[0] > tol)) {
    std::ostringstream msg;
    msg << "principal curvatures (" << l[0] << ", " << l[1] << ", " << l[2] << ", " << l[3]
        << ") are not of the form (lambda, 0, 0, -lambda)";
    throw WrongSpectrum(msg.str());
  }
  b.lambda = 0.5 * (l[0] - l[3]);
  b.e1 = data.directions.col(0);
  b.e2 = data.directions.col(3);
  b.e3 = data.directions.col(1);
  b.e4 = data.directions.col(2);
  const auto gnorm = [&](const Vec4& v) { return std::sqrt(std::max(0.0, v.dot(data.metric * v))); };
  b.kernel_residual = std::max(gnorm(data.shape * b.e3), gnorm(data.shape * b.e4));
  return b;
}

double involutivity_residual(const FieldPair& fields, const MetricField& metric, const Vec4& q, double step) {
  const auto [x, y] = fields(q);
  Vec4 bracket = Vec4::Zero();
  for (int b = 0; b < 4; ++b) {
    const Vec4 dx = central5([&](const Vec4& p) -> Vec4 { return fields(p).first; }, q, b, step);
    const Vec4 dy = central5([&](const Vec4& p) -> Vec4 { return fields(p).second; }, q, b, step);
    bracket += x[b] * dy - y[b] * dx;
  }
  const Mat4 g = metric(q);
  Mat42 span;
  span << x, y;
  const Mat2 gram = span.transpose() * g * span;
  const Vec4 normal = bracket - span * gram.ldlt().solve(span.transpose() * g * bracket);
  return std::sqrt(std::max(0.0, normal.dot(g * normal)));
}

PolarHypersurface::PolarHypersurface(SurfaceImmersion surface, const FiberPoint& anchor, StructureSteps steps,
                                     double fiber_rotation)
    : field_(FrameField(std::move(surface), Gauge::b_aligned).anchored_at(anchor.base)),
      anchor_(anchor),
      steps_(steps),
      rotation_(fiber_rotation) {
  // Reference frame: e1, e2 pointing along d_u (or d_v), e3 along d_phi, e4
  // completing along d_theta.
  PrincipalFrame f = raw_frame(coordinates(anchor));
  for (int k = 0; k < 2; ++k) {
    const double su = f.ambient.col(k).dot(f.dx.col(0));
    const double sv = f.ambient.col(k).dot(f.dx.col(1));
    const double s = std::abs(su) > 1e-8 ? su : sv;
    if (s < 0) {
      f.ambient.col(k) *= -1.0;
      f.coords.col(k) *= -1.0;
    }
  }
  const Mat62 kernel = f.ambient.rightCols<2>();
  const Vec6 e3 = (kernel * (kernel.transpose() * f.dx.col(3))).normalized();
  Vec6 e4 = kernel * (kernel.transpose() * f.dx.col(2));
  e4 = (e4 - e3.dot(e4) * e3).normalized();
  reference_ << f.ambient.leftCols<2>(), e3, e4;
}

PolarHypersurface PolarHypersurface::rotated(double theta) const {
  PolarHypersurface out = *this;
  out.rotation_ = rotation_ + theta;
  return out;
}

PolarHypersurface PolarHypersurface::twisted(const Vec4& twist) const {
  PolarHypersurface out = *this;
  out.twist_ = twist;
  return out;
}

Vec6 PolarHypersurface::x(const Vec4& q) const {
  return field_.at({q[0], q[1]}).normal_block() * fiber_direction(q[2], q[3], anchor_.chart);
}

PrincipalFrame PolarHypersurface::raw_frame(const Vec4& q) const {
  PrincipalFrame f;
  f.q = q;
  const ChartPoint p{q[0], q[1]};
  const AdaptedFrame center = field_.at(p);
  const Vec3 s = fiber_direction(q[2], q[3], anchor_.chart);
  Vec3 s_theta, s_phi;
  fiber_partials(q[2], q[3], anchor_.chart, s_theta, s_phi);
  f.x = center.normal_block() * s;
  f.eta = center.point;
  for (int a = 0; a < 2; ++a) {
    f.dx.col(a) = central5(
        [&](const Vec4& r) -> Vec6 { return field_.at({r[0], r[1]}).normal_block() * s; }, q, a,
        steps_.tangent);
  }
  f.dx.col(2) = center.normal_block() * s_theta;
  f.dx.col(3) = center.normal_block() * s_phi;
  const SurfaceJet jet = surface().jet(p);
  f.deta.col(0) = jet.gu;
  f.deta.col(1) = jet.gv;

  const Mat4 raw = -f.dx.transpose() * f.deta;
  f.data = shape_and_H(f.dx.transpose() * f.dx, 0.5 * (raw + raw.transpose()));
  f.data.point = f.x;
  f.data.normal = f.eta;
  // Loose internal tolerance: the caller reports the spectrum residual.
  f.basis = nullity_distribution(f.data, 1e-3 * std::max(1.0, f.data.lambdas.cwiseAbs().maxCoeff()));
  f.coords << f.basis.e1, f.basis.e2, f.basis.e3, f.basis.e4;
  f.ambient = f.dx * f.coords;
  return f;
}

void PolarHypersurface::fix_gauge(PrincipalFrame& f) const {
  for (int k = 0; k < 2; ++k) {
    if (f.ambient.col(k).dot(reference_.col(k)) < 0) {
      f.ambient.col(k) *= -1.0;
      f.coords.col(k) *= -1.0;
    }
  }
  const Mat2 r = polar_factor(f.ambient.rightCols<2>().transpose() * reference_.rightCols<2>()) *
                 rotation(rotation_ + twist_.dot(f.q - coordinates(anchor_))).transpose();
  const Mat62 a = f.ambient.rightCols<2>() * r;
  const Mat42 c = f.coords.rightCols<2>() * r;
  f.ambient.rightCols<2>() = a;
  f.coords.rightCols<2>() = c;
  f.basis.e1 = f.coords.col(0);
  f.basis.e2 = f.coords.col(1);
  f.basis.e3 = f.coords.col(2);
  f.basis.e4 = f.coords.col(3);
}

PrincipalFrame PolarHypersurface::frame(const Vec4& q) const {
  PrincipalFrame f = raw_frame(q);
  fix_gauge(f);
  return f;
}

FrameConnection PolarHypersurface::connection(const Vec4& q) const {
  FrameConnection c;
  c.frame = frame(q);
  std::array<Mat64, 4> partial;
  for (int a = 0; a < 4; ++a) {
    partial[a] = central5([&](const Vec4& r) -> Mat64 { return frame(r).ambient; }, q, a, steps_.frame);
  }
  for (int k = 0; k < 4; ++k) {
    c.covariant[k].setZero();
    for (int a = 0; a < 4; ++a) c.covariant[k] += c.frame.coords(a, k) * partial[a];
    c.omega[k] = c.frame.ambient.transpose() * c.covariant[k];
  }
  ConnectionScalars& s = c.scalars;
  s.lambda = c.frame.basis.lambda;
  s.f3 = c.omega[0](2, 1);
  s.f4 = c.omega[0](3, 1);
  s.g3 = c.omega[1](2, 1);
  s.g4 = c.omega[1](3, 1);
  for (int k = 0; k < 4; ++k) s.w34[k] = c.omega[k](2, 3);
  return c;
}

void require_structure_stencil(const SurfaceImmersion& surface, const StructureSteps& steps, const Vec4& q) {
  const double reach = 2.0 * (steps.scalar + steps.frame + steps.tangent);
  const ChartPoint p{q[0], q[1]};
  const double jet_reach = surface.has_analytic_derivatives() &&
                                   surface.derivative_mode() == DerivativeMode::analytic
                               ? 0.0
                               : SurfaceImmersion::first_derivative_step(p) + 2.0 * SurfaceImmersion::kSecondDerivativeStep;
  const double r = reach + jet_reach;
  const ChartDomain& d = surface.domain();
  const bool base_ok = q[0] - r > d.u_min && q[0] + r < d.u_max && q[1] - r > d.v_min && q[1] + r < d.v_max;
  const bool fiber_ok = q[3] - reach >= kPoleBand && q[3] + reach <= std::numbers::pi - kPoleBand;
  if (!base_ok || !fiber_ok) {
    std::ostringstream msg;
    msg << "stencil of radius " << r << " around (" << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3]
        << ") leaves the chart";
    throw StencilOutOfDomain(msg.str());
  }
}

double involutivity_residual(const PolarHypersurface& ctx, const FiberPoint& fp) {
  const Vec4 q = coordinates(fp);
  ctx.require_stencil(q);
  const FieldPair fields = [&](const Vec4& r) {
    const PrincipalFrame f = ctx.frame(r);
    return std::pair<Vec4, Vec4>(f.coords.col(2), f.coords.col(3));
  };
  const MetricField metric = [&](const Vec4& r) { return ctx.frame(r).data.metric; };
  return involutivity_residual(fields, metric, q, ctx.steps().frame);
}

ConnectionScalars connection_scalars(const PolarHypersurface& ctx, const FiberPoint& fp) {
  const Vec4 q = coordinates(fp);
  ctx.require_stencil(q);
  return ctx.connection(q).scalars;
}

StructureResiduals derivative_identity_residuals(const PolarHypersurface& ctx, const FiberPoint& fp) {
  const Vec4 q = coordinates(fp);
  ctx.require_stencil(q);
  StructureResiduals r;
  const FrameConnection c = ctx.connection(q);
  const ConnectionScalars& s = c.scalars;
  r.scalars = s;
  r.spectrum = c.frame.basis.spectrum_residual;
  r.involutivity = involutivity_residual(ctx, fp);

  // d[k] = e_{k+1}[bundle]
  std::array<Bundle, 4> partial;
  for (int a = 0; a < 4; ++a) {
    partial[a] = central5([&](const Vec4& p) -> Bundle { return bundle_of(ctx.connection(p).scalars); }, q, a,
                          ctx.steps().scalar);
  }
  std::array<Bundle, 4> d;
  for (int k = 0; k < 4; ++k) {
    d[k].setZero();
    for (int a = 0; a < 4; ++a) d[k] += c.frame.coords(a, k) * partial[a];
  }
  const double lam = s.lambda, f3 = s.f3, f4 = s.f4, g3 = s.g3, g4 = s.g4;
  const Vec4& w = s.w34;
  const auto& W = c.omega;

  r.lambda_derivative = {std::abs(d[2][kLam] - lam * g3), std::abs(d[3][kLam] - lam * g4)};

  r.difI = Vec4(d[0][kF3] + d[1][kG3] + w[0] * f4 + w[1] * g4, d[1][kF3] - d[0][kG3] - w[0] * g4 + w[1] * f4,
                d[0][kF4] + d[1][kG4] - w[0] * f3 - w[1] * g3, d[1][kF4] - d[0][kG4] + w[0] * g3 - w[1] * f3)
               .cwiseAbs();
  r.difII = Vec4(d[2][kF3] - (2 * f3 * g3 - w[2] * f4), d[2][kF4] - (f3 * g4 + f4 * g3 + w[2] * f3),
                 d[2][kG3] - (g3 * g3 - f3 * f3 + 1 - w[2] * g4), d[2][kG4] - (g3 * g4 - f3 * f4 + w[2] * g3))
                .cwiseAbs();
  r.difIII = Vec4(d[3][kF3] - (f3 * g4 + f4 * g3 - w[3] * f4), d[3][kF4] - (2 * f4 * g4 + w[3] * f3),
                  d[3][kG3] - (g3 * g4 - f3 * f4 - w[3] * g4), d[3][kG4] - (g4 * g4 - f4 * f4 + 1 + w[3] * g3))
                 .cwiseAbs();

  r.dif_lambda12 = Vec2(d[0][kLam] - 2 * lam * W[1](0, 1), d[1][kLam] + 2 * lam * W[0](0, 1)).cwiseAbs();
  r.dif_lambda34 = Vec4(d[2][kLam] + lam * W[0](0, 2), d[2][kLam] + lam * W[1](1, 2), d[3][kLam] + lam * W[0](0, 3),
                        d[3][kLam] + lam * W[1](1, 3))
                       .cwiseAbs();
  r.dif_lambda34_b = Vec2(2 * W[2](0, 1) + W[0](1, 2), 2 * W[3](0, 1) + W[0](1, 3)).cwiseAbs();

  const EtaCurvatures eta = eta_curvatures(s);
  const double sum = f3 * f3 + f4 * f4 + g3 * g3 + g4 * g4;
  r.dif_KN << d[2][kSum] - 2 * g3 * (sum + 1), d[3][kSum] - 2 * g4 * (sum + 1), d[2][kR3412] - eta.R4512,
      d[3][kR3412] + eta.R3512, d[2][kR3512] + w[2] * eta.R4512, d[3][kR3512] - (eta.R3412 - w[3] * eta.R4512),
      d[2][kR4512] - (-eta.R3412 + w[2] * eta.R3512), d[3][kR4512] - w[3] * eta.R3512;
  r.dif_KN = r.dif_KN.cwiseAbs().eval();
  r.leaf_derivative = Vec4(d[2][kK], d[3][kK], d[2][kKN], d[3][kKN]).cwiseAbs();

  r.gauss_map = {(c.frame.deta * c.frame.coords.col(2)).norm(), (c.frame.deta * c.frame.coords.col(3)).norm()};
  r.codazzi = Vec2(W[0](2, 1) + W[1](2, 0), W[0](3, 1) + W[1](3, 0)).cwiseAbs();

  for (int k = 0; k < 2; ++k) {
    for (int i = 2; i < 4; ++i) {
      for (int j = 2; j < 4; ++j) r.leaf_totally_geodesic = std::max(r.leaf_totally_geodesic, std::abs(W[j](k, i)));
    }
  }
  const Mat64& E = c.frame.ambient;
  const Vec6& xq = c.frame.x;
  const auto& D = c.covariant;  // D[k].col(j) = D_{e_k} e_j
  r.leaf_ambient = std::max({(D[2].col(2) + xq - W[2](3, 2) * E.col(3)).norm(),
                             (D[3].col(2) - W[3](3, 2) * E.col(3)).norm(),
                             (D[2].col(3) - W[2](2, 3) * E.col(2)).norm(),
                             (D[3].col(3) + xq - W[3](2, 3) * E.col(2)).norm()});

  const auto bracket = [&](int i, int j) -> Vec6 { return D[i].col(j) - D[j].col(i); };
  const Vec6 b12 = -0.5 * d[1][kLnLam] * E.col(0) + 0.5 * d[0][kLnLam] * E.col(1) + 2 * f3 * E.col(2) +
                   2 * f4 * E.col(3);
  const Vec6 b31 = g3 * E.col(0) + 0.5 * f3 * E.col(1) + w[0] * E.col(3);
  const Vec6 b32 = -0.5 * f3 * E.col(0) + g3 * E.col(1) + w[1] * E.col(3);
  const Vec6 b41 = g4 * E.col(0) + 0.5 * f4 * E.col(1) - w[0] * E.col(2);
  const Vec6 b42 = -0.5 * f4 * E.col(0) + g4 * E.col(1) - w[1] * E.col(2);
  const Vec6 b34 = w[2] * E.col(2) + w[3] * E.col(3);
  r.bracket34 = (bracket(2, 3) - b34).norm();
  r.bracket = std::max({(bracket(0, 1) - b12).norm(), (bracket(2, 0) - b31).norm(), (bracket(2, 1) - b32).norm(),
                        (bracket(3, 0) - b41).norm(), (bracket(3, 1) - b42).norm(), r.bracket34});

  std::array<Mat4, 4> table;
  for (auto& t : table) t.setZero();
  table[0](0, 1) = -0.5 * d[1][kLnLam];
  table[0](0, 2) = -g3;
  table[0](0, 3) = -g4;
  table[0](1, 2) = -f3;
  table[0](1, 3) = -f4;
  table[1](0, 1) = 0.5 * d[0][kLnLam];
  table[1](0, 2) = f3;
  table[1](0, 3) = f4;
  table[1](1, 2) = -g3;
  table[1](1, 3) = -g4;
  table[2](0, 1) = 0.5 * f3;
  table[3](0, 1) = 0.5 * f4;
  for (int k = 0; k < 4; ++k) {
    table[k](2, 3) = w[k];
    table[k] -= table[k].transpose().eval();
    r.skew = std::max(r.skew, (W[k] + W[k].transpose()).cwiseAbs().maxCoeff());
    r.connection_table = std::max(r.connection_table, (W[k] - table[k]).cwiseAbs().maxCoeff());
  }

  const SurfaceImmersion& surf = ctx.surface();
  const AdaptedFrame base = build_frame(surf, fp.base, Gauge::generic);
  const CurvatureInvariants inv = curvature_invariants(second_fundamental_form(surf, fp.base, base), true);
  r.base_K = inv.K;
  r.base_KN = inv.KN;
  r.loop_K = std::abs(eta.K - inv.K);
  r.loop_KN = std::abs(eta.KN - inv.KN);
  return r;
}

Vec2 leaf_constancy_drift(const PolarHypersurface& ctx, const FiberPoint& fp, const std::vector<Vec2>& offsets) {
  const Vec4 q = coordinates(fp);
  ctx.require_stencil(q);
  const EtaCurvatures ref = eta_curvatures(ctx.connection(q).scalars);
  Vec2 drift = Vec2::Zero();
  for (const Vec2& o : offsets) {
    const Vec4 p(q[0], q[1], q[2] + o[0], q[3] + o[1]);
    ctx.require_stencil(p);
    const EtaCurvatures e = eta_curvatures(ctx.connection(p).scalars);
    drift[0] = std::max(drift[0], std::abs(e.K - ref.K));
    drift[1] = std::max(drift[1], std::abs(e.KN - ref.KN));
  }
  return drift;
}

}  // namespace polarframes
