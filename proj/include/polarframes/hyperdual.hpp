#pragma once

#include <cmath>

namespace polarframes {

// Hyper-dual number a + b e1 + c e2 + d e1e2 with e1^2 = e2^2 = 0.
// Seeding the two infinitesimal parts along chart directions gives exact
// first partials in `d1`/`d2` and the mixed second partial in `d12`.
struct HyperDual {
  double re = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d12 = 0.0;

  constexpr HyperDual() = default;
  constexpr HyperDual(double r) : re(r) {}  // NOLINT(google-explicit-constructor)
  constexpr HyperDual(double r, double a, double b, double c) : re(r), d1(a), d2(b), d12(c) {}
};

inline HyperDual operator+(const HyperDual& x, const HyperDual& y) {
  return {x.re + y.re, x.d1 + y.d1, x.d2 + y.d2, x.d12 + y.d12};
}
inline HyperDual operator-(const HyperDual& x, const HyperDual& y) {
  return {x.re - y.re, x.d1 - y.d1, x.d2 - y.d2, x.d12 - y.d12};
}
inline HyperDual operator-(const HyperDual& x) { return {-x.re, -x.d1, -x.d2, -x.d12}; }
inline HyperDual operator*(const HyperDual& x, const HyperDual& y) {
  return {x.re * y.re, x.re * y.d1 + x.d1 * y.re, x.re * y.d2 + x.d2 * y.re,
          x.re * y.d12 + x.d1 * y.d2 + x.d2 * y.d1 + x.d12 * y.re};
}
inline HyperDual operator/(const HyperDual& x, const HyperDual& y) {
  const double inv = 1.0 / y.re;
  const HyperDual r{inv, -y.d1 * inv * inv, -y.d2 * inv * inv,
                    2.0 * y.d1 * y.d2 * inv * inv * inv - y.d12 * inv * inv};
  return x * r;
}

// f(x) lifted through its first two derivatives.
inline HyperDual lift(const HyperDual& x, double f, double df, double ddf) {
  return {f, df * x.d1, df * x.d2, df * x.d12 + ddf * x.d1 * x.d2};
}

inline HyperDual sin(const HyperDual& x) {
  return lift(x, std::sin(x.re), std::cos(x.re), -std::sin(x.re));
}
inline HyperDual cos(const HyperDual& x) {
  return lift(x, std::cos(x.re), -std::sin(x.re), -std::cos(x.re));
}
inline HyperDual sqrt(const HyperDual& x) {
  const double s = std::sqrt(x.re);
  return lift(x, s, 0.5 / s, -0.25 / (s * x.re));
}

}  // namespace polarframes
