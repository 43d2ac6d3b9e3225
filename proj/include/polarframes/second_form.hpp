#pragma once

#include <array>
#include <optional>

#include "polarframes/frame.hpp"
#include "polarframes/surface.hpp"
#include "polarframes/types.hpp"

namespace polarframes {

/// Coefficients h^a_ij (a = 3, 4, 5 stored at index a-3; i, j = 1, 2 stored
/// at 0, 1) of the second fundamental form in an adapted frame.
struct SecondFundamentalTensor {
  std::array<Mat2, 3> h{Mat2::Zero(), Mat2::Zero(), Mat2::Zero()};
  std::optional<AdaptedFrame> frame;
  // max |raw_ij - raw_ji| before symmetrisation.
  double asymmetry = 0.0;

  /// Tensor from three 2x2 blocks; each block is symmetrised.
  static SecondFundamentalTensor from_components(const Mat2& h3, const Mat2& h4, const Mat2& h5);

  /// B11 = (h^a_11)_a and B12 = (h^a_12)_a in normal coordinates.
  Vec3 b11() const { return {h[0](0, 0), h[1](0, 0), h[2](0, 0)}; }
  Vec3 b12() const { return {h[0](0, 1), h[1](0, 1), h[2](0, 1)}; }
  /// The 3x2 matrix (h^a_1j).
  Mat32 first_row_matrix() const;
  /// max_a |h^a_11 + h^a_22|
  double trace_defect() const;
  /// S = sum of squares of all coefficients.
  double squared_norm() const;
  double max_abs() const;
};

/// h^a_ij = <D_{e_i} e_j, e_a>.
///
/// With analytic partials the ambient derivative of the tangent frame field
/// is exact and its normal part reduces to the projected chart Hessian. In
/// finite-difference mode the tangent frame field is differenced along chart
/// steps in the e_i directions; the asymmetry of the raw coefficients is
/// returned as a quality metric before symmetrising.
SecondFundamentalTensor second_fundamental_form(const SurfaceImmersion& surface, const ChartPoint& p,
                                                const AdaptedFrame& frame);

/// Hessian projection with an already evaluated jet (analytic path).
SecondFundamentalTensor second_fundamental_form(const SurfaceJet& jet, const AdaptedFrame& frame);

}  // namespace polarframes
