#pragma once

#include <vector>

#include "polarframes/second_form.hpp"
#include "polarframes/types.hpp"

namespace polarframes {

/// Rank of the 3x2 matrix (h^a_1j): a = 2, b = 1, c = 0 (totally geodesic).
enum class RankCase { a, b, c };

const char* to_string(RankCase rank);

/// Default bound on max_a |tr h^a| for data flagged minimal.
inline constexpr double kMinimalityTolerance = 1e-6;

struct CurvatureInvariants {
  double K = 1.0;
  double KN = 0.0;
  double S = 0.0;
  Vec3 H_vec = Vec3::Zero();
  double R3412 = 0.0;
  double R3512 = 0.0;
  double R4512 = 0.0;
  double superminimal_residual = 0.0;
  RankCase rank_case = RankCase::c;
  // A singular value ratio sits within two decades of the rank cutoff.
  bool rank_borderline = false;
  Vec2 singular_values = Vec2::Zero();
  double trace_defect = 0.0;
};

/// (tr h^a) / 2 for each normal direction.
Vec3 mean_curvature_vector(const SecondFundamentalTensor& h);

/// K = 1 + sum_a det h^a.
double gauss_curvature(const SecondFundamentalTensor& h);
/// R^a_{b12} from the full contraction over k.
double normal_curvature_component(const SecondFundamentalTensor& h, int alpha, int beta);
/// K_N as the full sum of (R^a_{bij})^2 over all index combinations.
double normal_curvature_full_sum(const SecondFundamentalTensor& h);
/// K_N = 8 sum_{a,b} (h^a_11 h^b_12 - h^a_12 h^b_11)^2, valid for minimal data.
double normal_curvature_minimal_shortcut(const SecondFundamentalTensor& h);

/// Rank case from the singular values of (h^a_1j) with relative cutoff 1e-7;
/// S < 1e-12 is case c.
RankCase classify_rank(const SecondFundamentalTensor& h, bool* borderline = nullptr,
                       Vec2* singular_values = nullptr);

/// All scalar invariants. With `minimal_hint` the trace is checked against
/// `minimality_tolerance` (InconsistentMinimality otherwise) and the
/// shortcut formulas K = 1 - S/2 and K_N = 4 sum R^2 are cross-checked
/// against the general ones.
CurvatureInvariants curvature_invariants(const SecondFundamentalTensor& h, bool minimal_hint,
                                         double minimality_tolerance = kMinimalityTolerance);

/// Samples B(X,X) for X = cos t e1 + sin t e2, t = 2 pi k / n, in normal
/// coordinates.
std::vector<Vec3> curvature_ellipse(const SecondFundamentalTensor& h, int theta_samples);

struct SuperminimalityResult {
  bool is_superminimal = false;
  double lhs = 0.0;  // (K - 1)^2 - K_N / 4
  double rhs = 0.0;  // (|B11|^2 - |B12|^2)^2 + 4 <B11, B12>^2
};

/// Evaluates both sides of the superminimality identity through separate
/// code paths and checks they agree. Throws NotMinimal for traced data.
SuperminimalityResult superminimality_check(const SecondFundamentalTensor& h,
                                            double minimality_tolerance = kMinimalityTolerance);

}  // namespace polarframes
