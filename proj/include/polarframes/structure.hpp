#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "polarframes/polar.hpp"

namespace polarframes {

/// Connection data of a hypersurface with principal curvatures
/// {lambda, -lambda, 0, 0} in a frame e1 (+lambda), e2 (-lambda), e3, e4
/// (nullity):
///   f_k = omega^k_2(e1), g_k = omega^k_2(e2), k = 3, 4,
///   w34[k] = omega^3_4(e_{k+1}),
/// with omega^i_j(X) = <nabla_X e_j, e_i>.
struct ConnectionScalars {
  double lambda = 1.0;
  double f3 = 0.0;
  double f4 = 0.0;
  double g3 = 0.0;
  double g4 = 0.0;
  Vec4 w34 = Vec4::Zero();
};

/// Scalars of the same point after rotating the nullity pair by a constant
/// angle: [e3~; e4~] = R(theta) [e3; e4]. (f3, f4) and (g3, g4) rotate by
/// R(theta); the form omega^3_4 is unchanged, so its values on e1, e2 stay
/// and its values on (e3, e4) rotate with the vectors.
ConnectionScalars rotate_frame_scalars(const ConnectionScalars& s, double theta);

/// The four rotation invariants f.f, g.g, f.g and f x g.
Vec4 rotation_invariants(const ConnectionScalars& s);

struct EtaCurvatures {
  double K = 0.0;
  double KN = 0.0;
  double R3412 = 0.0;
  double R3512 = 0.0;
  double R4512 = 0.0;
};

/// Gauss and normal curvature of the surface swept by the Gauss map, from
/// the connection scalars. Throws NonpositiveLambda.
EtaCurvatures eta_curvatures(const ConnectionScalars& s);

/// Metric-orthonormal principal frame in coordinate components.
struct NullityBasis {
  Vec4 e1 = Vec4::Zero();
  Vec4 e2 = Vec4::Zero();
  Vec4 e3 = Vec4::Zero();
  Vec4 e4 = Vec4::Zero();
  double lambda = 0.0;
  /// max(|l1 + l2|, |l3|, |l4|)
  double spectrum_residual = 0.0;
  /// max |shape e3|, |shape e4| in the metric norm.
  double kernel_residual = 0.0;
};

/// Splits the shape operator into the +-lambda directions and its 2-D
/// kernel. Throws WrongSpectrum unless the two eigenvalues nearest zero are
/// within `tol` of 0, the others are opposite within `tol`, and lambda > tol.
NullityBasis nullity_distribution(const HypersurfaceData& data, double tol);

/// Coordinate vector fields q -> (X(q), Y(q)) and a metric field q -> G(q).
using FieldPair = std::function<std::pair<Vec4, Vec4>(const Vec4&)>;
using MetricField = std::function<Mat4(const Vec4&)>;

/// Length (in G) of the part of the Lie bracket [X, Y] at q orthogonal to
/// span{X, Y}; zero for an involutive pair. Coordinate derivatives use
/// fourth-order central differences with the given step.
double involutivity_residual(const FieldPair& fields, const MetricField& metric, const Vec4& q, double step);

/// Finite-difference steps for the nested stencils of the structure checks:
/// tangent vectors of the polar map, derivatives of the principal frame, and
/// derivatives of scalars built from the frame. All are fourth order.
struct StructureSteps {
  double tangent = 1e-3;
  double frame = 1e-3;
  double scalar = 1e-2;
};

/// Throws StencilOutOfDomain when the nested stencils around q would leave
/// the chart or the fiber chart's validity band.
void require_structure_stencil(const SurfaceImmersion& surface, const StructureSteps& steps, const Vec4& q);

/// Principal frame of the polar hypersurface at coordinates q = (u, v,
/// theta, phi), with its ambient vectors.
struct PrincipalFrame {
  Vec4 q = Vec4::Zero();
  Vec6 x = Vec6::Zero();
  Vec6 eta = Vec6::Zero();
  Mat64 dx = Mat64::Zero();
  Mat64 deta = Mat64::Zero();
  HypersurfaceData data;
  NullityBasis basis;
  /// Columns are the coordinate components of e1..e4.
  Mat4 coords = Mat4::Identity();
  /// Columns are e1..e4 in R^6.
  Mat64 ambient = Mat64::Zero();
};

/// Connection of the principal frame at one point.
struct FrameConnection {
  PrincipalFrame frame;
  /// covariant[k].col(j) = D_{e_{k+1}} e_{j+1} in R^6 (ambient derivative).
  std::array<Mat64, 4> covariant{};
  /// omega[k](i, j) = omega^{i+1}_{j+1}(e_{k+1}).
  std::array<Mat4, 4> omega{};
  ConnectionScalars scalars;
};

/// Polar hypersurface over a catalog surface, parametrised by (u, v, theta,
/// phi) with a B-aligned frame field anchored at `anchor`. Principal frames
/// are gauge-fixed onto the frame at the anchor fiber point so that they
/// form a smooth field, then optionally rotated in the nullity plane.
class PolarHypersurface {
 public:
  PolarHypersurface(SurfaceImmersion surface, const FiberPoint& anchor, StructureSteps steps = {},
                    double fiber_rotation = 0.0);

  const SurfaceImmersion& surface() const { return field_.surface(); }
  const FiberPoint& anchor() const { return anchor_; }
  const StructureSteps& steps() const { return steps_; }
  double fiber_rotation() const { return rotation_; }

  /// Same hypersurface and anchor, nullity pair rotated by a constant angle.
  PolarHypersurface rotated(double theta) const;
  /// Same hypersurface with the nullity pair turned by the non-constant angle
  /// twist . (q - anchor); exercises omega^3_4 on fixtures where it vanishes.
  PolarHypersurface twisted(const Vec4& twist) const;

  Vec6 x(const Vec4& q) const;
  PrincipalFrame frame(const Vec4& q) const;
  FrameConnection connection(const Vec4& q) const;

  void require_stencil(const Vec4& q) const { require_structure_stencil(surface(), steps_, q); }

 private:
  PrincipalFrame raw_frame(const Vec4& q) const;
  void fix_gauge(PrincipalFrame& f) const;

  FrameField field_;
  FiberPoint anchor_;
  StructureSteps steps_;
  double rotation_ = 0.0;
  Vec4 twist_ = Vec4::Zero();
  Mat64 reference_ = Mat64::Zero();
};

inline Vec4 coordinates(const FiberPoint& fp) { return {fp.base.u, fp.base.v, fp.theta, fp.phi}; }

double involutivity_residual(const PolarHypersurface& ctx, const FiberPoint& fp);
ConnectionScalars connection_scalars(const PolarHypersurface& ctx, const FiberPoint& fp);

/// Absolute residuals of the structure identities at one point.
struct StructureResiduals {
  ConnectionScalars scalars;
  double spectrum = 0.0;
  double involutivity = 0.0;
  /// |e3[lambda] - lambda g3|, |e4[lambda] - lambda g4|
  Vec2 lambda_derivative = Vec2::Zero();
  Vec4 difI = Vec4::Zero();
  Vec4 difII = Vec4::Zero();
  Vec4 difIII = Vec4::Zero();
  Vec2 dif_lambda12 = Vec2::Zero();
  Vec4 dif_lambda34 = Vec4::Zero();
  Vec2 dif_lambda34_b = Vec2::Zero();
  /// e3[f.f + g.g] and the seven R-derivative relations.
  Eigen::Matrix<double, 8, 1> dif_KN = Eigen::Matrix<double, 8, 1>::Zero();
  /// e3[K], e4[K], e3[KN], e4[KN]
  Vec4 leaf_derivative = Vec4::Zero();
  /// |dEta(e3)|, |dEta(e4)|
  Vec2 gauss_map = Vec2::Zero();
  /// Codazzi consequences omega^3_2(e1) + omega^3_1(e2), same for 4.
  Vec2 codazzi = Vec2::Zero();
  /// max |omega^k_i(e_j)|, k in {1, 2}, i, j in {3, 4}.
  double leaf_totally_geodesic = 0.0;
  /// Ambient derivatives of e3, e4 along the leaf against their closed form.
  double leaf_ambient = 0.0;
  /// [e3, e4] against omega^3_4(e3) e3 + omega^3_4(e4) e4.
  double bracket34 = 0.0;
  /// Worst of the six bracket expansions.
  double bracket = 0.0;
  /// Skew-symmetry defect of the computed connection matrices.
  double skew = 0.0;
  /// Deviation of the connection matrices from their expression in terms
  /// of f, g, lambda derivatives and omega^3_4.
  double connection_table = 0.0;
  /// Surface curvatures from the scalars against the base surface.
  double loop_K = 0.0;
  double loop_KN = 0.0;
  double base_K = 0.0;
  double base_KN = 0.0;
};

StructureResiduals derivative_identity_residuals(const PolarHypersurface& ctx, const FiberPoint& fp);

/// max |K(q') - K(q)|, |KN(q') - KN(q)| over fiber points q' of the same
/// leaf at the given (theta, phi) offsets.
Vec2 leaf_constancy_drift(const PolarHypersurface& ctx, const FiberPoint& fp,
                          const std::vector<Vec2>& offsets);

}  // namespace polarframes
