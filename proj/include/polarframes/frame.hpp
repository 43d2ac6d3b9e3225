#pragma once

#include <array>
#include <span>
#include <vector>

#include "polarframes/surface.hpp"
#include "polarframes/types.hpp"

namespace polarframes {

/// How the normal block (e3, e4, e5) of an adapted frame is chosen.
///  - generic:   pivoted Gram-Schmidt of the standard basis against
///               {g, e1, e2}; each vector's first non-negligible entry > 0.
///  - b_aligned: e3 along B(e1,e1), e4 along the part of B(e1,e2) orthogonal
///               to e3, so (h^a_1j) is lower triangular. In rank one the
///               surviving column seeds e3 and e4 comes from the completion.
///               e5 is oriented so that det[g, e1, ..., e5] > 0.
enum class Gauge { generic, b_aligned };

const char* to_string(Gauge gauge);

struct AdaptedFrame {
  ChartPoint chart;
  Vec6 point = Vec6::Zero();
  std::array<Vec6, 2> tangent{Vec6::Zero(), Vec6::Zero()};
  std::array<Vec6, 3> normal{Vec6::Zero(), Vec6::Zero(), Vec6::Zero()};
  bool has_normals = false;
  Gauge gauge = Gauge::generic;
  // Tangent direction angle (from e1) whose B(X,X) seeds e3 in the B-aligned gauge.
  double theta_reference = 0.0;
  // True once the normal block was rotated onto a reference by align_to().
  bool aligned = false;
  // [g_u g_v] at the point, and the chart components of e1, e2:
  // e_i = chart_coefficients(i,0) g_u + chart_coefficients(i,1) g_v.
  Mat62 jacobian = Mat62::Zero();
  Mat2 chart_coefficients = Mat2::Zero();

  /// 1-based access matching the e1..e5 naming.
  const Vec6& e(int k) const { return k <= 2 ? tangent[k - 1] : normal[k - 3]; }
  Mat63 normal_block() const;
  void set_normal_block(const Mat63& n);

  /// Largest deviation from orthonormality of {g, e1..e5} (or {g, e1, e2}
  /// when normals are unset).
  double orthonormality_defect() const;
  /// Residual of projecting the chart differential onto span{e1, e2}.
  double tangent_span_residual() const;
};

/// e1 = normalized g_u, e2 = Gram-Schmidt of g_v against e1. Throws
/// DegenerateImmersion when the smallest singular value of [g_u g_v] < 1e-8.
AdaptedFrame build_tangent_frame(const SurfaceImmersion& surface, const ChartPoint& p);
AdaptedFrame build_tangent_frame(const SurfaceJet& jet, const ChartPoint& p);

/// Completes a tangent frame with normals in the requested gauge. Throws
/// ZeroSecondFundamentalForm for the B-aligned gauge when S < 1e-12.
AdaptedFrame build_normal_frame(const SurfaceImmersion& surface, const ChartPoint& p,
                                const AdaptedFrame& tangent_frame, Gauge gauge);

/// build_tangent_frame followed by build_normal_frame.
AdaptedFrame build_frame(const SurfaceImmersion& surface, const ChartPoint& p, Gauge gauge);

/// Rotates the normal block by the orthogonal matrix that brings it closest
/// (Frobenius) to `reference`, i.e. the polar factor of N^T N_ref.
AdaptedFrame align_to(const AdaptedFrame& frame, const Mat63& reference);

/// Aligns each frame of a row to its predecessor, in order.
void align_row(std::span<AdaptedFrame> row);

/// Orthonormal completion: appends `count` unit vectors orthogonal to
/// `basis` (assumed orthonormal) by pivoted Gram-Schmidt over the standard
/// basis, ties broken by lowest index, first entry above 1e-12 made positive.
std::vector<Vec6> complete_orthonormal(const std::vector<Vec6>& basis, int count);

}  // namespace polarframes
