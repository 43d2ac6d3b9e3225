#include "polarframes/frame.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "polarframes/errors.hpp"
#include "polarframes/second_form.hpp"

namespace polarframes {

namespace {

constexpr double kImmersionTolerance = 1e-8;
constexpr double kZeroFormTolerance = 1e-12;
constexpr double kRankCutoff = 1e-7;
constexpr double kSignThreshold = 1e-12;

Vec6 fix_sign(Vec6 v) {
  for (int i = 0; i < 6; ++i) {
    if (std::abs(v[i]) > kSignThreshold) return v[i] < 0 ? Vec6(-v) : v;
  }
  return v;
}

Vec6 orthogonalize(Vec6 v, const std::vector<Vec6>& against) {
  // two passes of classical Gram-Schmidt
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : against) v -= v.dot(b) * b;
  }
  return v;
}

double orientation(const Vec6& g, const AdaptedFrame& f, const Vec6& e5) {
  Eigen::Matrix<double, 6, 6> m;
  m << g, f.tangent[0], f.tangent[1], f.normal[0], f.normal[1], e5;
  return m.determinant();
}

}  // namespace

const char* to_string(Gauge gauge) { return gauge == Gauge::generic ? "generic" : "B-aligned"; }

Mat63 AdaptedFrame::normal_block() const {
  Mat63 n;
  n << normal[0], normal[1], normal[2];
  return n;
}

void AdaptedFrame::set_normal_block(const Mat63& n) {
  for (int k = 0; k < 3; ++k) normal[k] = n.col(k);
  has_normals = true;
}

double AdaptedFrame::orthonormality_defect() const {
  std::vector<Vec6> vs{point, tangent[0], tangent[1]};
  if (has_normals) vs.insert(vs.end(), normal.begin(), normal.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i; j < vs.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(vs[i].dot(vs[j]) - target));
    }
  }
  return worst;
}

double AdaptedFrame::tangent_span_residual() const {
  Mat62 e;
  e << tangent[0], tangent[1];
  const Mat62 projected = e * (e.transpose() * jacobian);
  return (jacobian - projected).norm() / jacobian.norm();
}

std::vector<Vec6> complete_orthonormal(const std::vector<Vec6>& basis, int count) {
  std::vector<Vec6> span = basis;
  std::vector<Vec6> added;
  for (int n = 0; n < count; ++n) {
    Vec6 best = Vec6::Zero();
    double best_norm = -1.0;
    for (int k = 0; k < 6; ++k) {
      const Vec6 r = orthogonalize(Vec6::Unit(k), span);
      if (r.norm() > best_norm + kSignThreshold) {
        best_norm = r.norm();
        best = r;
      }
    }
    const Vec6 unit = fix_sign(orthogonalize(best / best_norm, span).normalized());
    span.push_back(unit);
    added.push_back(unit);
  }
  return added;
}

AdaptedFrame build_tangent_frame(const SurfaceJet& jet, const ChartPoint& p) {
  AdaptedFrame f;
  f.chart = p;
  f.point = jet.g;
  f.jacobian = jet.jacobian();
  const Eigen::JacobiSVD<Mat62> svd(f.jacobian);
  if (svd.singularValues()[1] < kImmersionTolerance) {
    std::ostringstream msg;
    msg << "smallest singular value " << svd.singularValues()[1] << " at (" << p.u << ", " << p.v << ")";
    throw DegenerateImmersion(msg.str());
  }
  const double nu = jet.gu.norm();
  f.tangent[0] = jet.gu / nu;
  const double proj = jet.gv.dot(f.tangent[0]);
  const Vec6 w = jet.gv - proj * f.tangent[0];
  const double nw = w.norm();
  f.tangent[1] = w / nw;
  // e1 = gu/nu ; e2 = (gv - proj e1)/nw = -proj/(nu nw) gu + gv/nw
  f.chart_coefficients << 1.0 / nu, 0.0, -proj / (nu * nw), 1.0 / nw;
  return f;
}

AdaptedFrame build_tangent_frame(const SurfaceImmersion& surface, const ChartPoint& p) {
  return build_tangent_frame(surface.jet(p), p);
}

AdaptedFrame build_normal_frame(const SurfaceImmersion& surface, const ChartPoint& p,
                                const AdaptedFrame& tangent_frame, Gauge gauge) {
  AdaptedFrame f = tangent_frame;
  f.gauge = Gauge::generic;
  f.theta_reference = 0.0;
  f.aligned = false;
  const auto generic = complete_orthonormal({f.point, f.tangent[0], f.tangent[1]}, 3);
  for (int k = 0; k < 3; ++k) f.normal[k] = generic[k];
  f.has_normals = true;
  if (gauge == Gauge::generic) return f;

  const SecondFundamentalTensor h = second_fundamental_form(surface, p, f);
  if (h.squared_norm() < kZeroFormTolerance) {
    std::ostringstream msg;
    msg << "S = " << h.squared_norm() << " at (" << p.u << ", " << p.v << "): totally geodesic point";
    throw ZeroSecondFundamentalForm(msg.str());
  }
  const Mat63 n = f.normal_block();
  const Vec6 b11 = n * h.b11();
  const Vec6 b12 = n * h.b12();
  Mat62 cols;
  cols << b11, b12;
  const Eigen::JacobiSVD<Mat62> svd(cols);
  const auto sigma = svd.singularValues();
  const bool rank_two = sigma[1] > kRankCutoff * sigma[0];

  std::vector<Vec6> span{f.point, f.tangent[0], f.tangent[1]};
  const Vec6 seed = (rank_two || b11.norm() >= b12.norm()) ? b11 : b12;
  f.normal[0] = seed.normalized();
  span.push_back(f.normal[0]);
  if (rank_two) {
    f.normal[1] = orthogonalize(b12, span).normalized();
  } else {
    f.normal[1] = complete_orthonormal(span, 1)[0];
  }
  span.push_back(f.normal[1]);
  Vec6 e5 = complete_orthonormal(span, 1)[0];
  if (orientation(f.point, f, e5) < 0) e5 = -e5;
  f.normal[2] = e5;
  f.gauge = Gauge::b_aligned;
  return f;
}

AdaptedFrame build_frame(const SurfaceImmersion& surface, const ChartPoint& p, Gauge gauge) {
  return build_normal_frame(surface, p, build_tangent_frame(surface, p), gauge);
}

AdaptedFrame align_to(const AdaptedFrame& frame, const Mat63& reference) {
  const Mat63 n = frame.normal_block();
  const Eigen::JacobiSVD<Mat3> svd(n.transpose() * reference, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 rotation = svd.matrixU() * svd.matrixV().transpose();
  AdaptedFrame out = frame;
  out.set_normal_block(n * rotation);
  out.aligned = true;
  return out;
}

void align_row(std::span<AdaptedFrame> row) {
  for (std::size_t k = 1; k < row.size(); ++k) row[k] = align_to(row[k], row[k - 1].normal_block());
}

}  // namespace polarframes
