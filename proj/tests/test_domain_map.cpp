#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lpcont/domain_map.hpp"
#include "lpcont/errors.hpp"

using namespace lpcont;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<PerturbationMap> shipped_maps() {
  return {family_identity(), family_affine(1.1, 0.9), family_affine(2.0, 3.0),
          family_conformal_quadratic(0.05), family_conformal_quadratic(-0.07),
          family_bump(0.05, {kPi / 2, kPi / 2}, 1.0), family_bump(-0.03, {1.2, 2.0}, 0.7)};
}

std::vector<Vector2d> random_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kPi);
  std::vector<Vector2d> pts;
  for (int i = 0; i < count; ++i) pts.emplace_back(u(rng), u(rng));
  return pts;
}

}  // namespace

TEST_CASE("identity map has trivial Jacobian data everywhere") {
  auto map = family_identity();
  for (const auto& p : random_points(20, 1)) {
    auto jd = jacobian_at(map, p);
    CHECK(jd.J == Matrix2d::Identity());
    CHECK(jd.det == 1.0);
    CHECK(jd.A == Matrix2d::Identity());
    CHECK(jd.M == Matrix2d::Zero());
  }
}

TEST_CASE("affine map: constant det and diagonal A") {
  const double a = 1.1, b = 0.9;
  auto map = family_affine(a, b);
  for (const auto& p : random_points(10, 2)) {
    auto jd = jacobian_at(map, p);
    CHECK(jd.det == doctest::Approx(0.99).epsilon(1e-15));
    // diag(1/a^2, 1/b^2) * ab by hand
    CHECK(jd.A(0, 0) == doctest::Approx(b / a).epsilon(1e-14));
    CHECK(jd.A(1, 1) == doctest::Approx(a / b).epsilon(1e-14));
    CHECK(jd.A(0, 1) == 0.0);
  }
  CHECK(jacobian_at(family_affine(2.0, 3.0), {1.0, 1.0}).det == doctest::Approx(6.0));

  auto id = jacobian_at(family_affine(1.0, 1.0), {0.3, 2.0});
  CHECK(id.M.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(family_affine(0.0, 1.0), AdmissibilityError);
  CHECK_THROWS_AS(family_affine(1.0, -2.0), AdmissibilityError);
}

TEST_CASE("affine metrics") {
  auto metrics = admissibility_metrics(family_affine(1.1, 0.9), 32);
  CHECK(metrics.inf_det == doctest::Approx(0.99));
  CHECK(metrics.sup_det == doctest::Approx(0.99));
  CHECK(metrics.sup_one_minus_det == doctest::Approx(0.01).epsilon(1e-10));
  const double expected_kappa = std::max(std::abs(0.9 / 1.1 - 1.0), std::abs(1.1 / 0.9 - 1.0));
  CHECK(metrics.kappa == doctest::Approx(expected_kappa).epsilon(1e-10));
  CHECK(metrics.kappa == doctest::Approx(0.2222).epsilon(1e-3));
  // displacement (a-1)x peaks at x = pi; its gradient is the constant a-1
  CHECK(metrics.w1inf_dist == doctest::Approx(0.1 * kPi).epsilon(1e-12));
}

TEST_CASE("conformal quadratic map has M = 0") {
  for (double eps : {0.05, -0.05, 0.07}) {
    auto map = family_conformal_quadratic(eps);
    for (const auto& p : random_points(50, 3)) {
      auto jd = jacobian_at(map, p);
      CHECK(jd.M.cwiseAbs().maxCoeff() <= 1e-12);
      // det = |1 + 2 eps z|^2
      std::complex<double> z(p.x(), p.y());
      CHECK(jd.det == doctest::Approx(std::norm(1.0 + 2.0 * eps * z)).epsilon(1e-13));
    }
    CHECK(jacobian_at(map, {0.0, 0.0}).det == 1.0);
  }
  auto metrics = admissibility_metrics(family_conformal_quadratic(0.05), 64);
  CHECK(metrics.kappa <= 1e-9);  // divergence rows are finite differences of zero
  CHECK_THROWS_AS(family_conformal_quadratic(0.1), AdmissibilityError);
}

TEST_CASE("identity metrics are exactly zero") {
  auto metrics = admissibility_metrics(family_identity(), 16);
  CHECK(metrics.inf_det == 1.0);
  CHECK(metrics.sup_det == 1.0);
  CHECK(metrics.sup_one_minus_det == 0.0);
  CHECK(metrics.w1inf_dist == 0.0);
  CHECK(metrics.w2inf_dist == 0.0);
  CHECK(metrics.kappa == 0.0);
  CHECK_THROWS_AS(admissibility_metrics(family_identity(), 8), std::invalid_argument);
}

TEST_CASE("A is symmetric with unit determinant for every shipped family") {
  for (const auto& map : shipped_maps()) {
    for (const auto& p : random_points(40, 4)) {
      auto jd = jacobian_at(map, p);
      CHECK(jd.A(0, 1) == jd.A(1, 0));
      CHECK(jd.A.determinant() == doctest::Approx(1.0).epsilon(1e-10));
      auto d = map.jet(p);
      CHECK(jd.det == doctest::Approx((1 + d.fx) * (1 + d.gy) - d.fy * d.gx).epsilon(1e-13));
    }
  }
}

TEST_CASE("finite-difference and analytic gradients of M agree") {
  for (const auto& map : shipped_maps()) {
    for (const auto& p : random_points(10, 5)) {
      if (p.minCoeff() < 0.01 || p.maxCoeff() > kPi - 0.01) continue;
      auto fd = deviation_gradient_fd(map, p);
      auto an = deviation_gradient_analytic(map, p);
      CHECK((fd.dx - an.dx).cwiseAbs().maxCoeff() <= 1e-5);
      CHECK((fd.dy - an.dy).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }
}

TEST_CASE("bump family") {
  auto zero = family_bump(0.0, {kPi / 2, kPi / 2}, 1.0);
  auto jd = jacobian_at(zero, {1.0, 2.0});
  CHECK(jd.M.cwiseAbs().maxCoeff() == 0.0);

  auto bump = family_bump(0.03, {kPi / 2, kPi / 2}, 1.0);
  auto d = bump.jet(kPi / 2, kPi / 2);
  CHECK(d.f == doctest::Approx(0.03));
  CHECK(d.g == doctest::Approx(0.03));

  // linear scaling of kappa under halving
  auto k = [](double eps) {
    return admissibility_metrics(family_bump(eps, {kPi / 2, kPi / 2}, 1.0), 64).kappa;
  };
  for (double eps : {0.04, 0.02}) {
    double ratio = k(eps) / k(eps / 2);
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);
  }

  CHECK_THROWS_AS(family_bump(0.01, {kPi / 2, kPi / 2}, 0.0), AdmissibilityError);
  CHECK_THROWS_AS(family_bump(0.01, {0.0, 1.0}, 1.0), AdmissibilityError);
  CHECK_THROWS_AS(family_bump(5.0, {kPi / 2, kPi / 2}, 0.3), AdmissibilityError);
}

TEST_CASE("metrics shrink along a halving sweep") {
  double prev_kappa = 1e300, prev_det = 1e300;
  for (double eps : {0.08, 0.04, 0.02, 0.01}) {
    auto m = admissibility_metrics(family_bump(eps, {kPi / 2, kPi / 2}, 1.0), 32);
    CHECK(m.kappa < prev_kappa);
    CHECK(m.sup_one_minus_det < prev_det);
    prev_kappa = m.kappa;
    prev_det = m.sup_one_minus_det;
  }
}

TEST_CASE("make_family") {
  MapParams params;
  CHECK(make_family(params).label() == "identity");
  params.family = "affine";
  params.a = 2.0;
  params.b = 3.0;
  CHECK(jacobian_at(make_family(params), {0.5, 0.5}).det == doctest::Approx(6.0));
  params.family = "spiral";
  CHECK_THROWS_AS(make_family(params), ConfigError);
}

TEST_CASE("singular Jacobian is rejected") {
  PerturbationMap collapse("collapse", [](double x, double) {
    DisplacementJet d;
    d.f = -x;
    d.fx = -1.0;
    return d;
  });
  CHECK_THROWS_AS(jacobian_at(collapse, {1.0, 1.0}), AdmissibilityError);
}
