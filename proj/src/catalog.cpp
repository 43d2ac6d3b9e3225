#include "polarframes/catalog.hpp"

#include <array>
#include <cmath>

#include "polarframes/errors.hpp"

namespace polarframes {

namespace {

using std::cos;
using std::sin;

// Each parametrisation is generic in its scalar so the same code yields
// points (double) and exact jets (HyperDual).

struct GeodesicSphere {
  template <class T>
  std::array<T, 6> operator()(const T& u, const T& v) const {
    return {cos(u) * cos(v), cos(u) * sin(v), sin(u), T(0.0), T(0.0), T(0.0)};
  }
};

struct CliffordTorus {
  template <class T>
  std::array<T, 6> operator()(const T& u, const T& v) const {
    const double s = 1.0 / std::sqrt(2.0);
    return {s * cos(u), s * sin(u), s * cos(v), s * sin(v), T(0.0), T(0.0)};
  }
};

struct EquilateralTorus {
  template <class T>
  std::array<T, 6> operator()(const T& u, const T& v) const {
    const double s = 1.0 / std::sqrt(3.0);
    const T w = u + v;
    return {s * cos(u), s * sin(u), s * cos(v), s * sin(v), s * cos(w), s * sin(w)};
  }
};

// Standard minimal Veronese embedding of the unit sphere into S^4 (last
// coordinate zero), composed with latitude/longitude coordinates.
struct Veronese {
  template <class T>
  std::array<T, 6> operator()(const T& u, const T& v) const {
    const double r3 = std::sqrt(3.0);
    const T x = cos(u) * cos(v);
    const T y = cos(u) * sin(v);
    const T z = sin(u);
    return {r3 * x * y,
            r3 * x * z,
            r3 * y * z,
            0.5 * r3 * (x * x - y * y),
            0.5 * (x * x + y * y - 2.0 * z * z),
            T(0.0)};
  }
};

constexpr ChartDomain kTorusChart{-3.0, 3.0, -3.0, 3.0};
constexpr ChartDomain kLatLongChart{-1.4, 1.4, -3.0, 3.0};

}  // namespace

std::vector<std::string> catalog_names() {
  return {"geodesic-sphere", "clifford-torus", "equilateral-torus", "veronese"};
}

CatalogEntry get(const std::string& name) {
  if (name == "geodesic-sphere") {
    return {make_surface(name, kLatLongChart, GeodesicSphere{}),
            {.K = 1.0, .KN = 0.0, .S = 0.0, .minimal = true, .rank_case = RankCase::c, .superminimal = true}};
  }
  if (name == "clifford-torus") {
    return {make_surface(name, kTorusChart, CliffordTorus{}),
            {.K = 0.0, .KN = 0.0, .S = 2.0, .minimal = true, .rank_case = RankCase::b, .superminimal = false}};
  }
  if (name == "equilateral-torus") {
    return {make_surface(name, kTorusChart, EquilateralTorus{}),
            {.K = 0.0, .KN = 4.0, .S = 2.0, .minimal = true, .rank_case = RankCase::a, .superminimal = true}};
  }
  if (name == "veronese") {
    return {make_surface(name, kLatLongChart, Veronese{}),
            {.K = 1.0 / 3.0, .KN = 16.0 / 9.0, .S = 4.0 / 3.0, .minimal = true, .rank_case = RankCase::a,
             .superminimal = true}};
  }
  throw UnknownSurface("no catalog surface named '" + name + "'");
}

}  // namespace polarframes
