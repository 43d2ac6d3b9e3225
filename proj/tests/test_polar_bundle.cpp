#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "polarframes/catalog.hpp"
#include "polarframes/certify.hpp"
#include "polarframes/errors.hpp"
#include "polarframes/polar.hpp"

using namespace polarframes;
using testing::m2;
using testing::tensor;

namespace {

constexpr double pi = std::numbers::pi;

const SecondFundamentalTensor kCircle = tensor(m2(1, 0, 0, -1), m2(0, 1, 1, 0));
const SecondFundamentalTensor kClifford = tensor(m2(1, 0, 0, -1));

FiberPoint fiber_point(double u, double v, double theta, double phi) {
  FiberPoint fp;
  fp.base = {u, v};
  fp.theta = theta;
  fp.phi = phi;
  return fp;
}

// (theta, phi) of a unit normal direction in the primary chart.
std::pair<double, double> angles(const Vec3& V) {
  double theta = std::atan2(V[1], V[0]);
  if (theta < 0) theta += 2 * pi;
  return {theta, std::acos(std::clamp(V[2], -1.0, 1.0))};
}

}  // namespace

TEST_SUITE("x map") {
  TEST_CASE("coordinate directions") {
    const AdaptedFrame f = build_frame(get("equilateral-torus").surface, {0.2, 0.3}, Gauge::generic);
    CHECK((x_map(f, 0, pi / 2) - f.e(3)).norm() <= 1e-15);
    CHECK((x_map(f, pi / 2, pi / 2) - f.e(4)).norm() <= 1e-15);
    CHECK((x_map(f, 1.0, 1e-3 + 1e-9) - f.e(5)).norm() <= 2e-3);
  }

  TEST_CASE("on the Clifford torus the equator stays in the S^3-normal / flat-normal plane") {
    const AdaptedFrame f = build_frame(get("clifford-torus").surface, {0.4, -0.2}, Gauge::b_aligned);
    for (double theta : theta_grid(16)) {
      const Vec6 x = x_map(f, theta, pi / 2);
      CHECK(std::abs(x.dot(f.e(5))) <= 1e-15);
      CHECK(std::abs(std::hypot(x.dot(f.e(3)), x.dot(f.e(4))) - 1.0) <= 1e-14);
    }
  }

  TEST_CASE("pole band") {
    const AdaptedFrame f = build_frame(get("veronese").surface, {0.2, 0.3}, Gauge::generic);
    CHECK_THROWS_AS(x_map(f, 0.3, 1e-4), PoleExcluded);
    CHECK_THROWS_AS(x_map(f, 0.3, pi - 1e-4), PoleExcluded);
    CHECK_THROWS_AS(x_map(f, 0.3, 0.0), PoleExcluded);
    CHECK_NOTHROW(x_map(f, 0.3, 2e-3));
  }

  TEST_CASE("rotated chart covers the primary poles") {
    const AdaptedFrame f = build_frame(get("veronese").surface, {0.2, 0.3}, Gauge::generic);
    bool hit = false;
    for (double theta : theta_grid(8)) {
      for (double phi : {pi / 4, pi / 2, 3 * pi / 4}) {
        const Vec6 x = x_map(f, theta, phi, FiberChart::rotated);
        if (std::abs(x.dot(f.e(5)) - 1.0) <= 1e-14) hit = true;
        CHECK(std::abs(x.norm() - 1.0) <= 1e-14);
      }
    }
    CHECK(hit);
  }

  TEST_CASE("property: x is a unit vector normal to g, e1 and e2") {
    for (const auto& name : catalog_names()) {
      const FrameField field(get(name).surface, Gauge::b_aligned);
      double worst_norm = 0, worst_perp = 0;
      for (const ChartPoint& p : chart_grid(field.surface().domain(), GridSpec{.nu = 6, .nv = 6})) {
        const AdaptedFrame f = field.at(p);
        for (double theta : theta_grid(12)) {
          for (double phi : phi_grid(8)) {
            const Vec6 x = x_map(f, theta, phi);
            worst_norm = std::max(worst_norm, std::abs(x.norm() - 1));
            for (const Vec6& w : {f.point, f.e(1), f.e(2)}) worst_perp = std::max(worst_perp, std::abs(x.dot(w)));
          }
        }
      }
      INFO(name);
      CHECK(worst_norm <= 1e-12);
      CHECK(worst_perp <= 1e-10);
    }
  }
}

TEST_SUITE("pencil") {
  TEST_CASE("vanishing tensor") {
    for (double theta : theta_grid(6)) CHECK(pencil(tensor(Mat2::Zero()), theta, 1.0).detC == 0.0);
    CHECK(default_regularity_threshold(tensor(Mat2::Zero())) == 0.0);
  }

  TEST_CASE("Clifford pencil") {
    const PencilMatrix quarter = pencil(kClifford, pi / 4, pi / 2);
    CHECK((quarter.a - std::sqrt(0.5) * m2(1, 0, 0, -1)).norm() <= 1e-15);
    CHECK(quarter.detA == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(quarter.detC == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(pencil(kClifford, pi / 2, pi / 2).detC <= 1e-60);
  }

  TEST_CASE("detC is the square of det A and the fourth power of the system residual") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 1000; ++k) {
      const SecondFundamentalTensor h = testing::random_tensor(rng, 2.0, true);
      const PencilMatrix p = pencil(h, testing::uniform(rng, 0, 2 * pi), testing::uniform(rng, 0.01, pi - 0.01));
      REQUIRE(std::abs(p.a.trace()) <= 1e-14);
      REQUIRE(p.detC >= 0.0);
      REQUIRE(std::abs(p.detC - p.detA * p.detA) <= 1e-13 * std::max(1.0, p.detC));
      REQUIRE(std::abs(p.detC - std::pow(p.system_residual, 4)) <= 1e-12 * std::max(1.0, p.detC));
    }
  }

  TEST_CASE("property: detC below eps^4 exactly when the regularity system holds to eps") {
    // Tensors with a controlled residual delta along a random direction V:
    // the components of B11 and B12 along V are rescaled to delta.
    std::mt19937_64 rng(17);
    const double eps = 1e-7, threshold = std::pow(eps, 4);
    int small = 0, large = 0;
    for (int k = 0; k < 1000; ++k) {
      const Vec3 V = Vec3(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)).normalized();
      const auto [theta, phi] = angles(V);
      if (phi < kPoleBand || phi > pi - kPoleBand) continue;
      SecondFundamentalTensor h0 = testing::random_tensor(rng, 2.0, true);
      Vec3 b11 = h0.b11(), b12 = h0.b12();
      const double delta = std::pow(10.0, testing::uniform(rng, -10, -4));
      const double angle = testing::uniform(rng, 0, 2 * pi);
      b11 += (delta * std::cos(angle) - b11.dot(V)) * V;
      b12 += (delta * std::sin(angle) - b12.dot(V)) * V;
      const SecondFundamentalTensor h = tensor(m2(b11[0], b12[0], b12[0], -b11[0]), m2(b11[1], b12[1], b12[1], -b11[1]),
                                               m2(b11[2], b12[2], b12[2], -b11[2]));
      const PencilMatrix p = pencil(h, theta, phi);
      // margins: a factor of two on the residual either side of eps
      if (p.system_residual <= 0.5 * eps) {
        ++small;
        REQUIRE(p.detC <= threshold);
      } else if (p.system_residual >= 2 * eps) {
        ++large;
        REQUIRE(p.detC > threshold);
      }
      if (p.detC <= threshold / 16) REQUIRE(p.system_residual <= eps);
      if (p.detC >= threshold * 16) REQUIRE(p.system_residual >= eps);
    }
    CHECK(small > 100);
    CHECK(large > 100);
  }
}

TEST_SUITE("fiber classification") {
  TEST_CASE("rank a: only the two antipodal directions along B11 x B12 are excluded") {
    const ExcludedSet ex = excluded_set(kCircle);
    CHECK(ex.rank == RankCase::a);
    CHECK((ex.axis.cwiseAbs() - Vec3(0, 0, 1)).norm() <= 1e-15);
    const double threshold = default_regularity_threshold(kCircle);
    for (double theta : theta_grid(24)) {
      for (int k = 0; k <= 40; ++k) {
        const double phi = 0.02 + (pi - 0.04) * k / 40.0;
        REQUIRE(classify_fiber(kCircle, theta, phi, threshold));
      }
    }
    CHECK(pencil(kCircle, ex.axis).detC == 0.0);
    // the rotated chart reaches the excluded poles
    int poles = 0;
    for (double theta : theta_grid(8)) {
      for (double phi : {pi / 4, pi / 2, 3 * pi / 4}) {
        if (std::abs(std::abs(fiber_direction(theta, phi, FiberChart::rotated)[2]) - 1.0) > 1e-14) continue;
        ++poles;
        CHECK_FALSE(classify_fiber(kCircle, theta, phi, threshold, FiberChart::rotated));
      }
    }
    CHECK(poles == 2);
  }

  TEST_CASE("rank b: the great circle theta = pi/2, 3pi/2 is excluded") {
    const ExcludedSet ex = excluded_set(kClifford);
    CHECK(ex.rank == RankCase::b);
    CHECK(std::abs(std::abs(ex.axis[0]) - 1.0) <= 1e-15);
    const double threshold = default_regularity_threshold(kClifford);
    for (double phi : phi_grid(8)) {
      CHECK_FALSE(classify_fiber(kClifford, pi / 2, phi, threshold));
      CHECK_FALSE(classify_fiber(kClifford, 3 * pi / 2, phi, threshold));
      CHECK(classify_fiber(kClifford, pi / 2 + 0.1, phi, threshold));
      CHECK(classify_fiber(kClifford, 0.0, phi, threshold));
    }
  }

  TEST_CASE("rank c: nothing survives") {
    const SecondFundamentalTensor zero = tensor(Mat2::Zero());
    CHECK(excluded_set(zero).rank == RankCase::c);
    for (double theta : theta_grid(8)) {
      for (double phi : phi_grid(4)) CHECK_FALSE(classify_fiber(zero, theta, phi, default_regularity_threshold(zero)));
    }
  }
}

TEST_SUITE("induced metric and second form") {
  TEST_CASE("geodesic sphere: the metric is singular everywhere") {
    const FrameField field(get("geodesic-sphere").surface, Gauge::b_aligned);
    for (double theta : {0.0, 1.0, 4.0}) CHECK_THROWS_AS(induced_metric(field, fiber_point(0.2, 0.5, theta, 1.2)), SingularMetric);
  }

  TEST_CASE("Clifford torus at theta = pi/4, phi = pi/2") {
    const FrameField field(get("clifford-torus").surface, Gauge::b_aligned);
    const FiberPoint fp = fiber_point(0.7, -1.1, pi / 4, pi / 2);
    const Mat4 g = induced_metric(field, fp);
    Mat4 expected = Mat4::Zero();
    expected.diagonal() << 0.25, 0.25, 1.0, 1.0;  // half the base metric diag(1/2, 1/2), then the unit fiber
    CHECK((g - expected).cwiseAbs().maxCoeff() <= 1e-8);

    const Mat4 II = second_fundamental_form_x(field, fp);
    Mat4 expected_II = Mat4::Zero();
    expected_II(0, 0) = std::sqrt(2.0) / 4;  // a11 |g_u|^2
    expected_II(1, 1) = -std::sqrt(2.0) / 4;
    CHECK((II - expected_II).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(std::abs((g.inverse() * II).trace()) <= 1e-6);
  }

  TEST_CASE("equilateral torus: positive definite metric and rank-two II") {
    const FrameField field(get("equilateral-torus").surface, Gauge::b_aligned);
    const FiberPoint fp = fiber_point(0.3, 0.9, 1.1, 1.3);
    const Mat4 g = induced_metric(field, fp);
    CHECK((g - g.transpose()).norm() <= 1e-14);
    CHECK(min_eigenvalue(g) > 1e-3);
    const HypersurfaceData data = shape_and_H(g, second_fundamental_form_x(field, fp));
    CHECK(shape_rank(data.lambdas) == 2);
    CHECK(data.lambdas[0] > 0);
    CHECK(std::abs(data.lambdas[0] + data.lambdas[3]) <= 1e-5);
    CHECK(std::abs(data.lambdas[1]) <= 1e-5);
    CHECK(std::abs(data.lambdas[2]) <= 1e-5);
    CHECK(std::abs(data.H[0]) <= 1e-5);
    CHECK(std::abs(data.H[2]) <= 1e-5);
    CHECK(std::abs(data.H[3]) <= 1e-5);
  }

  TEST_CASE("property: the fiber directions are in the kernel of II") {
    for (const auto& name : {"clifford-torus", "equilateral-torus", "veronese"}) {
      const FrameField field(get(name).surface, Gauge::b_aligned);
      double worst = 0;
      for (const ChartPoint& p : chart_grid(field.surface().domain(), GridSpec{.nu = 4, .nv = 4})) {
        for (double theta : {0.3, 2.0, 4.0}) {
          for (double phi : {0.7, 1.9}) {
            const Mat4 II = second_fundamental_form_x(field, fiber_point(p.u, p.v, theta, phi));
            worst = std::max(worst, II.block<2, 4>(2, 0).cwiseAbs().maxCoeff());
          }
        }
      }
      INFO(name);
      CHECK(worst <= 1e-6);
    }
  }

  TEST_CASE("property: principal curvatures follow the pattern (l, 0, 0, -l)") {
    for (const auto& name : {"equilateral-torus", "veronese"}) {
      const FrameField field(get(name).surface, Gauge::b_aligned);
      for (const ChartPoint& p : chart_grid(field.surface().domain(), GridSpec{.nu = 3, .nv = 3})) {
        for (double theta : {0.5, 2.5, 5.0}) {
          const FiberPoint fp = fiber_point(p.u, p.v, theta, 1.0);
          const HypersurfaceData d = shape_and_H(induced_metric(field, fp), second_fundamental_form_x(field, fp));
          CHECK(d.lambdas[0] > 0);
          CHECK(std::abs(d.lambdas[0] + d.lambdas[3]) <= 1e-5);
          CHECK(std::abs(d.lambdas[1]) <= 1e-5);
          CHECK(std::abs(d.lambdas[2]) <= 1e-5);
        }
      }
    }
  }

  TEST_CASE("property: the smallest metric eigenvalue decreases toward the excluded direction") {
    const FrameField field(get("equilateral-torus").surface, Gauge::b_aligned);
    const BaseStencil stencil = make_base_stencil(field, {0.4, -0.5});
    const ExcludedSet ex = excluded_set(stencil.h);
    REQUIRE(ex.rank == RankCase::a);
    Vec3 axis = ex.axis;
    if (std::abs(axis[2]) > 0.9) axis = -axis;
    const Vec3 off = axis.unitOrthogonal();
    double last_eig = 1e300, last_detC = 1e300;
    for (double t : {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005}) {
      const auto [theta, phi] = angles((axis + t * off).normalized());
      const PolarDifferential d = polar_differential(stencil, theta, phi);
      const double eig = min_eigenvalue(d.dx.transpose() * d.dx);
      const double detC = pencil(stencil.h, theta, phi).detC;
      CHECK(eig < last_eig);
      CHECK(detC < last_detC);
      last_eig = eig;
      last_detC = detC;
    }
    CHECK(last_eig < 1e-3);
  }
}

TEST_SUITE("shape operator") {
  TEST_CASE("mean curvatures of fixed spectra") {
    CHECK((mean_curvatures(Vec4(1, 0, 0, -1)) - Vec4(0, -1.0 / 6, 0, 0)).norm() <= 1e-15);
    CHECK((mean_curvatures(Vec4(2, 0, 0, -2)) - Vec4(0, -2.0 / 3, 0, 0)).norm() <= 1e-15);
    CHECK((mean_curvatures(Vec4(1, 1, 1, 1)) - Vec4(1, 1, 1, 1)).norm() <= 1e-15);
  }

  TEST_CASE("shape_and_H sorts descending and is metric compatible") {
    Mat4 II = Mat4::Zero();
    II.diagonal() << 1, -1, 0, 0;
    const HypersurfaceData d = shape_and_H(Mat4::Identity(), II);
    CHECK((d.lambdas - Vec4(1, 0, 0, -1)).norm() <= 1e-15);
    CHECK((d.H - Vec4(0, -1.0 / 6, 0, 0)).norm() <= 1e-15);

    Mat4 g = Mat4::Identity();
    g.diagonal() << 4, 1, 1, 1;
    II.setZero();
    II(0, 0) = 8;
    II(1, 1) = -2;
    const HypersurfaceData e = shape_and_H(g, II);
    CHECK((e.lambdas - Vec4(2, 0, 0, -2)).norm() <= 1e-14);
    CHECK((e.directions.transpose() * g * e.directions - Mat4::Identity()).norm() <= 1e-14);
    CHECK_THROWS_AS(shape_and_H(Mat4::Zero(), II), SingularMetric);
  }
}

TEST_SUITE("certification sweeps") {
  TEST_CASE("equilateral torus passes on the default grid") {
    const SuiteReport r = certify_theorem1(get("equilateral-torus").surface, GridSpec{}, Theorem1Tolerances{});
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.counts.evaluated == 12 * 12 * 12 * 8);
    CHECK(r.counts.failed == 0);
    for (const char* k : {"H1", "H3", "H4"}) CHECK(r.checks.at(k).max <= 1e-5);
    CHECK(r.checks.at("min_metric_eigenvalue").min > 0);
  }

  TEST_CASE("Clifford torus passes outside theta bands of width 0.2") {
    GridSpec grid;
    grid.theta_bands = {{pi / 2, 0.2}, {3 * pi / 2, 0.2}};
    const SuiteReport r = certify_theorem1(get("clifford-torus").surface, grid, Theorem1Tolerances{});
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.counts.excluded == 12 * 12 * 2 * 8);
    CHECK(r.checks.at("rank_defect").max == 0);
  }

  TEST_CASE("Clifford torus without bands still excludes the degenerate circle") {
    const SuiteReport r = certify_theorem1(get("clifford-torus").surface, GridSpec{}, Theorem1Tolerances{});
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.counts.excluded == 12 * 12 * 2 * 8);
  }

  TEST_CASE("geodesic sphere is not applicable") {
    const SuiteReport r = certify_theorem1(get("geodesic-sphere").surface, GridSpec{}, Theorem1Tolerances{});
    CHECK(r.verdict == Verdict::not_applicable);
    CHECK(r.counts.evaluated == 0);
    CHECK(r.counts.excluded == 12 * 12 * 12 * 8);
  }

  TEST_CASE("an impossible tolerance fails") {
    Theorem1Tolerances tol;
    tol.H3 = 1e-30;
    const SuiteReport r = certify_theorem1(get("veronese").surface, GridSpec{.nu = 3, .nv = 3, .ntheta = 4, .nphi = 2}, tol);
    CHECK(r.verdict == Verdict::fail);
  }
}
