#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polarframes/invariants.hpp"
#include "polarframes/surface.hpp"

namespace polarframes {

/// Invariants a catalog surface is known to have. Empty optionals mean the
/// quantity varies over the chart.
struct ExpectedInvariants {
  std::optional<double> K;
  std::optional<double> KN;
  std::optional<double> S;
  bool minimal = true;
  RankCase rank_case = RankCase::a;
  bool superminimal = false;
};

struct CatalogEntry {
  SurfaceImmersion surface;
  ExpectedInvariants expected;
};

/// Reference immersions: "geodesic-sphere", "clifford-torus",
/// "equilateral-torus", "veronese". Throws UnknownSurface.
CatalogEntry get(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace polarframes
