#pragma once

#include <cmath>
#include <random>

#include "polarframes/second_form.hpp"

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline polarframes::SecondFundamentalTensor random_tensor(std::mt19937_64& rng, double scale, bool traceless) {
  std::array<polarframes::Mat2, 3> h;
  for (auto& m : h) {
    const double a = uniform(rng, -scale, scale), b = uniform(rng, -scale, scale);
    const double c = traceless ? -a : uniform(rng, -scale, scale);
    m << a, b, b, c;
  }
  return polarframes::SecondFundamentalTensor::from_components(h[0], h[1], h[2]);
}

inline polarframes::SecondFundamentalTensor tensor(const polarframes::Mat2& h3, const polarframes::Mat2& h4 = polarframes::Mat2::Zero(),
                                                   const polarframes::Mat2& h5 = polarframes::Mat2::Zero()) {
  return polarframes::SecondFundamentalTensor::from_components(h3, h4, h5);
}

inline polarframes::Mat2 m2(double a, double b, double c, double d) {
  polarframes::Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace testing
