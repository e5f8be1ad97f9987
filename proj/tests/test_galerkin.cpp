#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>

#include "lpcont/errors.hpp"
#include "lpcont/galerkin.hpp"

using namespace lpcont;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarter = kPi * kPi / 4.0;

VectorXd random_coeffs(Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VectorXd c(size);
  for (auto& v : c) v = normal(rng);
  return c;
}

/// Sorted m^2/a^2 + n^2/b^2 over a generous box.
std::vector<double> rectangle_spectrum(double a, double b, std::size_t count) {
  std::vector<double> values;
  for (int m = 1; m <= 20; ++m)
    for (int n = 1; n <= 20; ++n) values.push_back(m * m / (a * a) + n * n / (b * b));
  std::sort(values.begin(), values.end());
  values.resize(count);
  return values;
}

double max_relative_deviation(const EigenBasis& basis) {
  std::vector<double> listing;
  for (auto mode : enumerate_modes(12)) listing.push_back(static_cast<double>(mode.eigenvalue()));
  std::sort(listing.begin(), listing.end());
  double worst = 0.0;
  for (Index j = 0; j < basis.count(); ++j) {
    worst = std::max(worst, std::abs(basis.eigenvalues[j] / listing[static_cast<std::size_t>(j)] - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("identity map assembles the diagonal pair") {
  const int order = 3;
  auto grid = make_grid(required_nodes(order));
  auto pair = assemble(family_identity(), order, grid);
  SineBasis basis(order);
  MatrixXd s_exact = kQuarter * basis.eigenvalues().asDiagonal().toDenseMatrix();
  CHECK((pair.S - s_exact).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((pair.Mw - kQuarter * MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(pair.S == pair.S.transpose());
  CHECK(pair.order == 3);
  CHECK(pair.label == "identity");
}

TEST_CASE("affine map assembles a diagonal pair") {
  const double a = 1.3, b = 0.8;
  const int order = 3;
  auto grid = make_grid(required_nodes(order));
  auto pair = assemble(family_affine(a, b), order, grid);
  SineBasis basis(order);
  for (Index k = 0; k < basis.size(); ++k) {
    auto mode = basis.mode(k);
    const double expected = kQuarter * ((b / a) * mode.m * mode.m + (a / b) * mode.n * mode.n);
    CHECK(pair.S(k, k) == doctest::Approx(expected).epsilon(1e-12));
  }
  MatrixXd off = pair.S;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((pair.Mw - a * b * kQuarter * MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("conformal map leaves the stiffness matrix unchanged") {
  const int order = 6;
  auto grid = make_grid(required_nodes(order));
  auto plain = assemble(family_identity(), order, grid);
  auto conformal = assemble(family_conformal_quadratic(0.05), order, grid);
  CHECK((conformal.S - plain.S).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((conformal.Mw - plain.Mw).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("assembly rejects coarse grids") {
  CHECK_THROWS_AS(assemble(family_identity(), 8, make_grid(16)), std::invalid_argument);
}

TEST_CASE("eigenvalues of the square and the rectangle") {
  const int order = 8;
  auto grid = make_grid(required_nodes(order));
  auto square = solve_eigen(assemble(family_identity(), order, grid), 4);
  VectorXd expected(4);
  expected << 2, 5, 5, 8;
  CHECK((square.eigenvalues - expected).cwiseAbs().maxCoeff() <= 1e-8);

  const double a = 1.1, b = 0.9;
  auto rect = solve_eigen(assemble(family_affine(a, b), order, grid), 5);
  auto oracle = rectangle_spectrum(a, b, 5);
  for (Index j = 0; j < 5; ++j) {
    CHECK(rect.eigenvalues[j] == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-10));
  }
  CHECK(rect.eigenvalues[0] == doctest::Approx(1 / (a * a) + 1 / (b * b)).epsilon(1e-12));
}

TEST_CASE("eigenpairs satisfy the generalized problem with Mw-orthonormal vectors") {
  const int order = 10;
  auto grid = make_grid(required_nodes(order));
  auto pair = assemble(family_bump(0.05), order, grid);
  auto basis = solve_eigen(pair, 30);
  CHECK(basis.count() == 30);
  MatrixXd residual = pair.S * basis.vectors - pair.Mw * basis.vectors * basis.eigenvalues.asDiagonal();
  CHECK(residual.cwiseAbs().maxCoeff() <= 1e-8);
  MatrixXd gram = basis.vectors.transpose() * pair.Mw * basis.vectors;
  CHECK((gram - MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(std::is_sorted(basis.eigenvalues.begin(), basis.eigenvalues.end()));
  CHECK(basis.eigenvalues.minCoeff() > 0.0);

  for (Index j = 0; j < basis.count(); ++j) {
    auto v = basis.vectors.col(j);
    Index first = 0;
    while (std::abs(v[first]) <= 1e-8 * v.cwiseAbs().maxCoeff()) ++first;
    CHECK(v[first] > 0.0);
  }
  CHECK_THROWS_AS(solve_eigen(pair, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_eigen(pair, 101), std::invalid_argument);
}

TEST_CASE("bump eigenvalues move linearly in eps") {
  const int order = 12;
  auto grid = make_grid(required_nodes(order));
  auto dev = [&](double eps) {
    return max_relative_deviation(solve_eigen(assemble(family_bump(eps), order, grid), 10));
  };
  const double c02 = dev(0.02) / 0.02;
  const double c01 = dev(0.01) / 0.01;
  CHECK(c02 > 0.0);
  CHECK(c02 / c01 == doctest::Approx(1.0).epsilon(0.25));
  CHECK(dev(0.0) <= 1e-9);
}

TEST_CASE("Galerkin eigenvalues converge in the truncation order") {
  auto lambda1 = [](int order) {
    auto grid = make_grid(required_nodes(order));
    return solve_eigen(assemble(family_bump(0.02), order, grid), 1).eigenvalues[0];
  };
  CHECK(std::abs(lambda1(12) - lambda1(16)) <= 1e-6);
}

TEST_CASE("apply_T") {
  VectorXd c = VectorXd::Zero(16);
  SineBasis basis(4);
  c[basis.index({1, 1})] = 1.0;
  CHECK(apply_T(c)[basis.index({1, 1})] == 0.5);
  c.setZero();
  c[basis.index({3, 4})] = 1.0;
  CHECK(apply_T(c)[basis.index({3, 4})] == doctest::Approx(1.0 / 25.0));

  VectorXd r = random_coeffs(16, 1);
  VectorXd back = (apply_T(r).array() * basis.eigenvalues().array()).matrix();
  CHECK((back - r).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(apply_T(VectorXd::Zero(15)), std::invalid_argument);
}

TEST_CASE("apply_T_phi") {
  const int order = 5;
  auto grid = make_grid(required_nodes(order));
  SineBasis basis(order);
  VectorXd r = random_coeffs(basis.size(), 2);

  auto identity = assemble(family_identity(), order, grid);
  CHECK((apply_T_phi(r, identity) - apply_T(r)).cwiseAbs().maxCoeff() <= 1e-10);

  const double a = 1.2, b = 0.7;
  auto affine = assemble(family_affine(a, b), order, grid);
  VectorXd unit = VectorXd::Zero(basis.size());
  const Index k = basis.index({2, 3});
  unit[k] = 1.0;
  VectorXd out = apply_T_phi(unit, affine);
  CHECK(out[k] == doctest::Approx(a * b / ((b / a) * 4 + (a / b) * 9)).epsilon(1e-10));
  out[k] = 0.0;
  CHECK(out.cwiseAbs().maxCoeff() <= 1e-12);

  auto bump = assemble(family_bump(0.04), order, grid);
  auto eig = solve_eigen(bump, 8);
  PulledBackInverse t_phi(bump);
  for (Index j = 0; j < eig.count(); ++j) {
    VectorXd v = eig.vectors.col(j);
    CHECK((t_phi.apply(v) - v / eig.eigenvalues[j]).cwiseAbs().maxCoeff() <= 1e-7);
  }

  // self-adjoint in the Q_phi inner product u^T Mw v
  VectorXd u = random_coeffs(basis.size(), 3), v = random_coeffs(basis.size(), 4);
  const double lhs = t_phi.apply(u).dot(bump.Mw * v);
  const double rhs = u.dot(bump.Mw * t_phi.apply(v));
  CHECK(std::abs(lhs - rhs) <= 1e-9);
  CHECK((t_phi.matrix() * u - t_phi.apply(u)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("indefinite matrices are reported as numerical failures") {
  GalerkinPair bad;
  bad.S = MatrixXd::Identity(4, 4);
  bad.Mw = -MatrixXd::Identity(4, 4);
  bad.order = 2;
  CHECK_THROWS_AS(solve_eigen(bad, 2), NumericalError);
  std::swap(bad.S, bad.Mw);
  CHECK_THROWS_AS(apply_T_phi(VectorXd::Ones(4), bad), NumericalError);
}

TEST_CASE("matrix CSV dump") {
  std::ostringstream os;
  MatrixXd m(1, 2);
  m << 1.5, -2;
  write_matrix_csv(os, m);
  CHECK(os.str() == "row,col,value\n0,0,1.5\n0,1,-2\n");
}
