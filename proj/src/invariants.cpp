#include "polarframes/invariants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "polarframes/errors.hpp"

namespace polarframes {

namespace {

constexpr double kZeroFormTolerance = 1e-12;
constexpr double kRankCutoff = 1e-7;
constexpr double kIdentityTolerance = 1e-12;

// Same tensor with each block made traceless. Used only to size the slack a
// non-zero trace defect introduces into the minimal-case identities.
SecondFundamentalTensor traceless_part(const SecondFundamentalTensor& h) {
  SecondFundamentalTensor t = h;
  for (auto& m : t.h) m -= 0.5 * m.trace() * Mat2::Identity();
  return t;
}

double squared_norm_half_identity_gap(const SecondFundamentalTensor& h) {
  return std::abs(gauss_curvature(h) - (1.0 - 0.5 * h.squared_norm()));
}

double kn_identity_gap(const SecondFundamentalTensor& h) {
  return std::abs(normal_curvature_full_sum(h) - normal_curvature_minimal_shortcut(h));
}

double superminimal_rhs(const SecondFundamentalTensor& h) {
  const Vec3 b11 = h.b11();
  const Vec3 b12 = h.b12();
  const double diff = b11.squaredNorm() - b12.squaredNorm();
  const double cross = b11.dot(b12);
  return diff * diff + 4.0 * cross * cross;
}

double superminimal_lhs(const SecondFundamentalTensor& h) {
  const double km1 = gauss_curvature(h) - 1.0;
  return km1 * km1 - 0.25 * normal_curvature_full_sum(h);
}

void require_minimal(const SecondFundamentalTensor& h, double tolerance, bool inconsistent) {
  const double defect = h.trace_defect();
  if (defect <= tolerance) return;
  std::ostringstream msg;
  msg << "trace defect " << defect << " exceeds " << tolerance;
  if (inconsistent) throw InconsistentMinimality(msg.str());
  throw NotMinimal(msg.str());
}

}  // namespace

const char* to_string(RankCase rank) {
  switch (rank) {
    case RankCase::a: return "a";
    case RankCase::b: return "b";
    case RankCase::c: return "c";
  }
  return "?";
}

Vec3 mean_curvature_vector(const SecondFundamentalTensor& h) {
  return {0.5 * h.h[0].trace(), 0.5 * h.h[1].trace(), 0.5 * h.h[2].trace()};
}

double gauss_curvature(const SecondFundamentalTensor& h) {
  double k = 1.0;
  for (const auto& m : h.h) k += m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return k;
}

double normal_curvature_component(const SecondFundamentalTensor& h, int alpha, int beta) {
  // R^a_{b ij} with i = 1, j = 2
  const Mat2& ha = h.h[alpha];
  const Mat2& hb = h.h[beta];
  double r = 0.0;
  for (int k = 0; k < 2; ++k) r += ha(k, 0) * hb(k, 1) - ha(k, 1) * hb(k, 0);
  return r;
}

double normal_curvature_full_sum(const SecondFundamentalTensor& h) {
  double kn = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          double r = 0.0;
          for (int k = 0; k < 2; ++k) r += h.h[a](k, i) * h.h[b](k, j) - h.h[a](k, j) * h.h[b](k, i);
          kn += r * r;
        }
      }
    }
  }
  return kn;
}

double normal_curvature_minimal_shortcut(const SecondFundamentalTensor& h) {
  double kn = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double d = h.h[a](0, 0) * h.h[b](0, 1) - h.h[a](0, 1) * h.h[b](0, 0);
      kn += d * d;
    }
  }
  return 8.0 * kn;
}

RankCase classify_rank(const SecondFundamentalTensor& h, bool* borderline, Vec2* singular_values) {
  const Eigen::JacobiSVD<Mat32> svd(h.first_row_matrix());
  const Vec2 sigma = svd.singularValues();
  if (singular_values) *singular_values = sigma;
  if (borderline) *borderline = false;
  if (h.squared_norm() < kZeroFormTolerance || sigma[0] == 0.0) return RankCase::c;
  const double ratio = sigma[1] / sigma[0];
  if (borderline) *borderline = ratio > kRankCutoff * 1e-2 && ratio < kRankCutoff * 1e2;
  return ratio > kRankCutoff ? RankCase::a : RankCase::b;
}

CurvatureInvariants curvature_invariants(const SecondFundamentalTensor& h, bool minimal_hint,
                                         double minimality_tolerance) {
  CurvatureInvariants inv;
  inv.K = gauss_curvature(h);
  inv.KN = normal_curvature_full_sum(h);
  inv.S = h.squared_norm();
  inv.H_vec = mean_curvature_vector(h);
  inv.R3412 = normal_curvature_component(h, 0, 1);
  inv.R3512 = normal_curvature_component(h, 0, 2);
  inv.R4512 = normal_curvature_component(h, 1, 2);
  inv.superminimal_residual = superminimal_rhs(h);
  inv.rank_case = classify_rank(h, &inv.rank_borderline, &inv.singular_values);
  inv.trace_defect = h.trace_defect();

  if (minimal_hint) {
    require_minimal(h, minimality_tolerance, true);
    const SecondFundamentalTensor t = traceless_part(h);
    const double k_gap = squared_norm_half_identity_gap(h);
    const double k_slack = kIdentityTolerance * std::max(1.0, inv.S) + std::abs(inv.K - gauss_curvature(t)) +
                           0.5 * std::abs(inv.S - t.squared_norm());
    const double shortcut = 4.0 * (inv.R3412 * inv.R3412 + inv.R3512 * inv.R3512 + inv.R4512 * inv.R4512);
    const double kn_gap = kn_identity_gap(h);
    const double kn_slack = kIdentityTolerance * std::max(1.0, inv.KN) +
                            std::abs(inv.KN - normal_curvature_full_sum(t)) +
                            std::abs(normal_curvature_minimal_shortcut(h) - normal_curvature_minimal_shortcut(t));
    if (k_gap > k_slack || kn_gap > kn_slack || std::abs(inv.KN - shortcut) > kIdentityTolerance * std::max(1.0, inv.KN)) {
      std::ostringstream msg;
      msg << "cross-formula disagreement: |K-(1-S/2)| = " << k_gap << ", |KN_full - KN_short| = " << kn_gap;
      throw InconsistentMinimality(msg.str());
    }
  }
  return inv;
}

std::vector<Vec3> curvature_ellipse(const SecondFundamentalTensor& h, int theta_samples) {
  const Vec3 mean = mean_curvature_vector(h);
  Mat32 m;
  for (int a = 0; a < 3; ++a) {
    m(a, 0) = 0.5 * (h.h[a](0, 0) - h.h[a](1, 1));
    m(a, 1) = h.h[a](0, 1);
  }
  std::vector<Vec3> out;
  out.reserve(theta_samples);
  for (int k = 0; k < theta_samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / theta_samples;
    out.push_back(mean + m * Vec2(std::cos(2 * t), std::sin(2 * t)));
  }
  return out;
}

SuperminimalityResult superminimality_check(const SecondFundamentalTensor& h, double minimality_tolerance) {
  require_minimal(h, minimality_tolerance, false);
  SuperminimalityResult r;
  r.lhs = superminimal_lhs(h);
  r.rhs = superminimal_rhs(h);
  const SecondFundamentalTensor t = traceless_part(h);
  const double slack = kIdentityTolerance * std::max(1.0, std::abs(r.lhs)) +
                       std::abs(r.lhs - superminimal_lhs(t)) + std::abs(r.rhs - superminimal_rhs(t));
  if (std::abs(r.lhs - r.rhs) > slack) {
    std::ostringstream msg;
    msg << "superminimality sides disagree: lhs " << r.lhs << ", rhs " << r.rhs;
    throw InconsistentMinimality(msg.str());
  }
  r.is_superminimal = r.rhs <= 1e-10;
  return r;
}

}  // namespace polarframes
