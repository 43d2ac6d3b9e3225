#pragma once

#include <array>
#include <numbers>
#include <optional>

#include "polarframes/frame.hpp"
#include "polarframes/invariants.hpp"
#include "polarframes/second_form.hpp"
#include "polarframes/surface.hpp"
#include "polarframes/types.hpp"

namespace polarframes {

/// Spherical coordinates on the unit normal sphere. The primary chart has its
/// poles at +-e5; the rotated chart has them at +-e3 and covers e5.
enum class FiberChart { primary, rotated };

/// Fiber charts are valid for phi in [kPoleBand, pi - kPoleBand].
inline constexpr double kPoleBand = 1e-3;

/// Unit direction V(theta, phi) in normal coordinates (e3, e4, e5).
Vec3 fiber_direction(double theta, double phi, FiberChart chart = FiberChart::primary);

/// Point (p, theta, phi) of the unit normal bundle.
struct FiberPoint {
  ChartPoint base;
  double theta = 0.0;
  double phi = 0.5 * std::numbers::pi;
  FiberChart chart = FiberChart::primary;
  bool in_N_star = false;
  double detC = 0.0;
};

/// The 2x2 pencil a_ij = sum_a V_a h^a_ij of the second fundamental form in
/// the direction V, with det A and det C = det(A^2).
struct PencilMatrix {
  Mat2 a = Mat2::Zero();
  double detA = 0.0;
  double detC = 0.0;
  /// |(h^a_11; h^a_12) V|: the left side of the regularity system. For
  /// traceless data detC equals its fourth power.
  double system_residual = 0.0;
};

PencilMatrix pencil(const SecondFundamentalTensor& h, const Vec3& direction);
PencilMatrix pencil(const SecondFundamentalTensor& h, double theta, double phi,
                    FiberChart chart = FiberChart::primary);

/// detC > 1e-8 (max |h|)^4; zero for a vanishing tensor.
double default_regularity_threshold(const SecondFundamentalTensor& h);

/// Membership of V(theta, phi) in the punctured fiber N_*(p).
bool classify_fiber(const SecondFundamentalTensor& h, double theta, double phi, double reg_threshold,
                    FiberChart chart = FiberChart::primary);

/// Directions removed from the normal sphere. Rank a: the two antipodal
/// points +-axis. Rank b: the great circle orthogonal to axis. Rank c: all.
struct ExcludedSet {
  RankCase rank = RankCase::c;
  Vec3 axis = Vec3::Zero();
};

ExcludedSet excluded_set(const SecondFundamentalTensor& h);

/// Adapted frames along a surface in one gauge, optionally rotated onto a
/// fixed anchor normal block so that nearby frames vary smoothly. B-aligned
/// requests fall back to the generic gauge at totally geodesic points.
class FrameField {
 public:
  FrameField(SurfaceImmersion surface, Gauge gauge, std::optional<Mat63> anchor = std::nullopt);

  AdaptedFrame at(const ChartPoint& p) const;
  /// Copy anchored at the (unanchored) frame of p.
  FrameField anchored_at(const ChartPoint& p) const;

  const SurfaceImmersion& surface() const { return surface_; }
  Gauge gauge() const { return gauge_; }
  const std::optional<Mat63>& anchor() const { return anchor_; }

 private:
  SurfaceImmersion surface_;
  Gauge gauge_;
  std::optional<Mat63> anchor_;
};

/// x = sin(phi) cos(theta) e3 + sin(phi) sin(theta) e4 + cos(phi) e5 (primary
/// chart). Throws PoleExcluded outside the chart's validity band.
Vec6 x_map(const AdaptedFrame& frame, double theta, double phi, FiberChart chart = FiberChart::primary);
Vec6 x_map(const FrameField& field, const FiberPoint& fp);

/// Frames at a base point and at its four central-difference neighbours, the
/// neighbours aligned onto the centre frame.
struct BaseStencil {
  ChartPoint base;
  double step = 0.0;
  AdaptedFrame center;
  // u+, u-, v+, v-
  std::array<AdaptedFrame, 4> neighbours;
  SecondFundamentalTensor h;
};

BaseStencil make_base_stencil(const FrameField& field, const ChartPoint& p);

/// First-order data of the polar map at one bundle point, in coordinates
/// (u, v, theta, phi).
struct PolarDifferential {
  Vec6 x = Vec6::Zero();
  Vec6 normal = Vec6::Zero();  // g at the base point
  Mat64 dx = Mat64::Zero();
  Mat64 dn = Mat64::Zero();
};

PolarDifferential polar_differential(const BaseStencil& stencil, double theta, double phi,
                                     FiberChart chart = FiberChart::primary);

/// Pullback metric <dx, dx>; throws SingularMetric when its smallest
/// eigenvalue is <= 1e-10.
Mat4 induced_metric(const PolarDifferential& d);
Mat4 induced_metric(const FrameField& field, const FiberPoint& fp);

inline constexpr double kSingularMetricTolerance = 1e-10;

double min_eigenvalue(const Mat4& m);

struct PolarSecondForm {
  Mat4 II = Mat4::Zero();
  double asymmetry = 0.0;
  /// max |II(d_theta, .)|, |II(d_phi, .)|
  double fiber_block = 0.0;
  /// max deviation of the (u, v) block from the pencil in chart coordinates.
  double tangential_mismatch = 0.0;
  /// Schur complement of the fiber block in the metric, compared against
  /// -det A times the base metric (relative max-norm deviation).
  double metric_factor_mismatch = 0.0;
};

/// II = -<dx, dn>, symmetrised, plus its structural diagnostics.
PolarSecondForm polar_second_form(const BaseStencil& stencil, const PolarDifferential& d, double theta, double phi,
                                  FiberChart chart = FiberChart::primary);
Mat4 second_fundamental_form_x(const FrameField& field, const FiberPoint& fp);

/// Induced metric, shape operator and curvature profile of the polar
/// hypersurface at one point.
struct HypersurfaceData {
  Vec6 point = Vec6::Zero();
  Vec6 normal = Vec6::Zero();
  Mat4 metric = Mat4::Identity();
  Mat4 shape = Mat4::Zero();
  /// Principal curvatures, descending.
  Vec4 lambdas = Vec4::Zero();
  /// Metric-orthonormal principal directions (coordinate components), in the
  /// order of `lambdas`.
  Mat4 directions = Mat4::Identity();
  /// H1..H4
  Vec4 H = Vec4::Zero();
};

/// shape = metric^-1 II (metric-symmetrised), eigenvalues descending, H_r
/// from the elementary symmetric polynomials.
HypersurfaceData shape_and_H(const Mat4& metric, const Mat4& II);

/// (H1, H2, H3, H4) of four principal curvatures.
Vec4 mean_curvatures(const Vec4& lambdas);

/// Number of principal curvatures above `relative` times the largest.
int shape_rank(const Vec4& lambdas, double relative = 1e-6);

}  // namespace polarframes
