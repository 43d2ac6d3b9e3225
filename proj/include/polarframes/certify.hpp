#pragma once

#include <cstdint>
#include <vector>

#include "polarframes/catalog.hpp"
#include "polarframes/report.hpp"
#include "polarframes/structure.hpp"

namespace polarframes {

/// Open theta interval [center - width/2, center + width/2] skipped by a sweep.
struct ThetaBand {
  double center = 0.0;
  double width = 0.0;
};

/// Chart x fiber sample grid. Chart nodes are equispaced in the chart domain
/// shrunk by `margin` (a fraction of each side); theta_k = 2 pi k / ntheta,
/// phi_k = pi (k + 1) / (nphi + 1).
struct GridSpec {
  int nu = 12;
  int nv = 12;
  int ntheta = 12;
  int nphi = 8;
  double margin = 0.05;
  std::vector<ThetaBand> theta_bands;

  bool in_band(double theta) const;
};

std::vector<ChartPoint> chart_grid(const ChartDomain& domain, const GridSpec& grid);
std::vector<double> theta_grid(int n);
std::vector<double> phi_grid(int n);

struct InvariantTolerances {
  double catalog = 1e-5;     // K, KN, S against the catalog values
  double minimality = 1e-6;  // |H|
  double gauge = 1e-10;      // K, KN across frame gauges
  double identity = 1e-12;   // random-tensor identities, relative
};

/// Catalog invariants over the chart grid, gauge independence, and the
/// algebraic identities on `random_samples` random traceless tensors.
SuiteReport analyze_surface(const CatalogEntry& entry, const GridSpec& grid, const InvariantTolerances& tol,
                            std::uint64_t seed = 1, int random_samples = 10000);

struct Theorem1Tolerances {
  double H1 = 1e-5;
  double H3 = 1e-5;
  double H4 = 1e-5;
  double fiber_block = 1e-6;
  double tangential = 1e-6;
  double metric_factor = 1e-5;
  double minimality = 1e-6;
};

/// Sweeps the polar map over the grid. Points outside N_* or inside a theta
/// band are excluded; per-point errors count as failed. NOT-APPLICABLE when
/// nothing is evaluated; FAIL when a rank-2 surface loses more than half of
/// its fiber points.
SuiteReport certify_theorem1(const SurfaceImmersion& surface, const GridSpec& grid, const Theorem1Tolerances& tol,
                             unsigned threads = 0);

struct Theorem2Tolerances {
  double spectrum = 1e-5;
  double involutivity = 1e-4;
  double lambda_derivative = 1e-3;
  double difI = 1e-2;
  double difII = 1e-3;  // and the e4 relations
  double dif_lambda = 1e-3;
  double dif_KN = 1e-3;
  double leaf_derivative = 1e-3;
  double leaf_drift = 1e-6;
  double gauss_map = 1e-6;
  double leaf_geodesic = 1e-4;
  double bracket = 1e-3;
  double connection_table = 1e-3;
  double skew = 1e-6;
  double codazzi = 1e-4;
  double loop = 1e-3;
  double rotation = 1e-8;
};

/// Structure residuals at `samples` polar points picked deterministically
/// from the grid among well-conditioned points (detC >= 1e-2 max|h|^4 on the
/// point and its leaf-drift neighbours, nested stencils inside the chart).
SuiteReport verify_theorem2(const SurfaceImmersion& surface, const GridSpec& grid, const Theorem2Tolerances& tol,
                            int samples = 27, unsigned threads = 0);

}  // namespace polarframes
