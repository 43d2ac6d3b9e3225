#include <cmath>

#include <doctest.h>

#include "polarframes/catalog.hpp"
#include "polarframes/errors.hpp"
#include "polarframes/frame.hpp"
#include "polarframes/invariants.hpp"

using namespace polarframes;

namespace {

// K, KN, S, |H| and the rank over a 20x20 grid, compared with the catalog values.
void check_catalog(const CatalogEntry& e, DerivativeMode mode, double tol) {
  const SurfaceImmersion s = e.surface.with_mode(mode);
  const ChartDomain& d = s.domain();
  const double du = 0.05 * (d.u_max - d.u_min), dv = 0.05 * (d.v_max - d.v_min);
  double worst_K = 0, worst_KN = 0, worst_S = 0, worst_H = 0, worst_norm = 0;
  int rank_mismatch = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const ChartPoint p{d.u_min + du + (d.u_max - d.u_min - 2 * du) * i / 19.0,
                         d.v_min + dv + (d.v_max - d.v_min - 2 * dv) * j / 19.0};
      worst_norm = std::max(worst_norm, std::abs(s.point(p).norm() - 1.0));
      const SecondFundamentalTensor h = second_fundamental_form(s, p, build_frame(s, p, Gauge::generic));
      const CurvatureInvariants c = curvature_invariants(h, e.expected.minimal);
      worst_K = std::max(worst_K, std::abs(c.K - *e.expected.K));
      worst_KN = std::max(worst_KN, std::abs(c.KN - *e.expected.KN));
      worst_S = std::max(worst_S, std::abs(c.S - *e.expected.S));
      worst_H = std::max(worst_H, mean_curvature_vector(h).norm());
      if (c.rank_case != e.expected.rank_case) ++rank_mismatch;
    }
  }
  INFO(s.name());
  CHECK(worst_norm <= 1e-12);
  CHECK(worst_K <= tol);
  CHECK(worst_KN <= tol);
  CHECK(worst_S <= tol);
  CHECK(worst_H <= 1e-6);
  CHECK(rank_mismatch == 0);
}

}  // namespace

TEST_CASE("catalog names") {
  const auto names = catalog_names();
  REQUIRE(names.size() == 4);
  for (const auto& n : names) CHECK(get(n).surface.name() == n);
}

TEST_CASE("unknown names throw UnknownSurface") {
  CHECK_THROWS_AS(get("enneper"), UnknownSurface);
  CHECK_THROWS_AS(get(""), UnknownSurface);
}

TEST_CASE("expected invariants with exact derivatives") {
  for (const auto& n : catalog_names()) check_catalog(get(n), DerivativeMode::analytic, 1e-5);
}

TEST_CASE("expected invariants with finite differences") {
  for (const auto& n : catalog_names()) check_catalog(get(n), DerivativeMode::finite_difference, 1e-4);
}

TEST_CASE("superminimal flags agree with the identity") {
  for (const auto& n : catalog_names()) {
    const CatalogEntry e = get(n);
    const ChartPoint p{0.3, -0.8};
    const SecondFundamentalTensor h = second_fundamental_form(e.surface, p, build_frame(e.surface, p, Gauge::generic));
    INFO(n);
    CHECK(superminimality_check(h).is_superminimal == e.expected.superminimal);
  }
}

TEST_CASE("catalog charts stay inside one periodicity cell") {
  for (const auto& n : catalog_names()) {
    const ChartDomain d = get(n).surface.domain();
    CHECK(d.u_max - d.u_min < 2 * M_PI);
    CHECK(d.v_max - d.v_min < 2 * M_PI);
  }
}
