#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "lpcont/errors.hpp"
#include "lpcont/projections.hpp"

using namespace lpcont;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

VectorXd random_coeffs(Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  VectorXd c(size);
  for (auto& v : c) v = normal(rng);
  return c;
}

struct Setup {
  int order;
  QuadGrid grid;
  GalerkinPair pair;
  EigenBasis basis;
  VectorXd abs_det;

  Setup(const PerturbationMap& map, int m)
      : order(m),
        grid(required_nodes(m)),
        pair(assemble(map, m, grid)),
        basis(solve_eigen(pair)),
        abs_det(abs_det_on_grid(map, grid)) {}
};

}  // namespace

TEST_CASE("project_F on coefficients") {
  std::mt19937_64 rng(1);
  VectorXd c = random_coeffs(25, rng);
  CHECK(project_F(c, cutoff_square(5)) == c);
  CHECK(project_F(c, IndexSet{}).cwiseAbs().maxCoeff() == 0.0);
  auto F = eigenvalue_window(10);
  VectorXd once = project_F(c, F);
  CHECK(project_F(once, F) == once);
  SineBasis basis(5);
  CHECK(once[basis.index({3, 1})] == c[basis.index({3, 1})]);
  CHECK(once[basis.index({3, 2})] == 0.0);
  CHECK_THROWS_AS(project_F(c, cutoff_square(6)), std::invalid_argument);
}

TEST_CASE("listing positions") {
  CHECK(listing_positions(cutoff_square(2), 4) == std::vector<Index>{0, 1, 2, 3});
  CHECK(listing_positions(IndexSet({{2, 2}}, "one"), 3) == std::vector<Index>{3});
  CHECK(listing_positions(eigenvalue_window(10), 5) == std::vector<Index>{0, 1, 2, 3, 4, 5});
  CHECK_THROWS_AS(listing_positions(cutoff_square(6), 8), SplittingError);
  CHECK_THROWS_AS(listing_positions(IndexSet({{1, 2}}, "half"), 3), SplittingError);
  CHECK_THROWS_AS(listing_positions(cutoff_square(4), 3), std::invalid_argument);
}

TEST_CASE("cluster check") {
  VectorXd lambda(4);
  lambda << 2.0, 5.0, 5.0 + 1e-9, 8.0;
  CHECK_THROWS_AS(check_clusters(lambda, {0, 1}), SplittingError);
  CHECK(check_clusters(lambda, {0, 1, 2}) == doctest::Approx(3.0 / 8.0));
  CHECK(check_clusters(lambda, {0}) == doctest::Approx(3.0 / 5.0));
  CHECK(std::isinf(check_clusters(lambda, {0, 1, 2, 3})));
  CHECK_THROWS_AS(check_clusters(lambda, {4}), std::invalid_argument);
}

TEST_CASE("identity map: P_F^phi coincides with P_F") {
  Setup s(family_identity(), 8);
  std::mt19937_64 rng(2);
  for (const auto& F : {cutoff_square(2), eigenvalue_window(10), cutoff_ball(5)}) {
    VectorXd c = random_coeffs(64, rng);
    VectorXd f = synthesize(s.grid, c, 8);
    VectorXd expected = synthesize(s.grid, project_F(c, F), 8);
    VectorXd got = project_F_phi(s.grid, f, F, s.basis, family_identity(), 8);
    CHECK((got - expected).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("P_F^phi is a Q_phi-orthogonal projection of rank |F|") {
  auto map = family_bump(0.05);
  Setup s(map, 10);
  auto F = eigenvalue_window(13);
  std::mt19937_64 rng(3);
  VectorXd u = synthesize(s.grid, random_coeffs(100, rng), 10);
  VectorXd v = synthesize(s.grid, random_coeffs(100, rng), 10);

  VectorXd pu = project_F_phi(s.grid, u, F, s.basis, map, 10);
  VectorXd ppu = project_F_phi(s.grid, pu, F, s.basis, map, 10);
  CHECK(lp_norm(s.grid, VectorXd(ppu - pu), 2.0) <= 1e-8);

  VectorXd pv = project_F_phi(s.grid, v, F, s.basis, map, 10);
  CHECK(std::abs(q_phi_inner(s.grid, pu, v, s.abs_det) - q_phi_inner(s.grid, u, pv, s.abs_det)) <=
        1e-8);

  auto sel = select_eigenfunctions(s.basis, F, 10, s.grid);
  MatrixXd p = projection_matrix_F_phi(sel, s.pair);
  Eigen::JacobiSVD<MatrixXd> svd(p);
  Index rank = (svd.singularValues().array() > 1e-6).count();
  CHECK(rank == static_cast<Index>(F.size()));
  CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("P_F is an orthogonal projection with unit 2-norm") {
  const int order = 6;
  auto grid = make_grid(required_nodes(order));
  auto op = projection_operator_F(grid, cutoff_ball(4), order);
  CHECK(std::abs(estimate_opnorm_p(op, grid, 2.0) - 1.0) <= 1e-8);
  MatrixXd p = projection_matrix_F(cutoff_ball(4), order);
  CHECK(p.trace() == static_cast<double>(cutoff_ball(4).size()));
  CHECK(p * p == p);
}

TEST_CASE("affine maps satisfy the |1 - ab| bound") {
  const int order = 8;
  std::mt19937_64 rng(4);
  for (auto [a, b] : {std::pair{1.1, 0.9}, std::pair{1.05, 0.97}, std::pair{0.9, 1.2}}) {
    auto map = family_affine(a, b);
    Setup s(map, order);
    for (const auto& F : {IndexSet({{1, 1}}, "single"), eigenvalue_window(5)}) {
      for (int trial = 0; trial < 10; ++trial) {
        VectorXd c = random_coeffs(64, rng);
        VectorXd u = synthesize(s.grid, c, order);
        VectorXd pu = synthesize(s.grid, project_F(c, F), order);
        VectorXd pphi = project_F_phi(s.grid, u, F, s.basis, map, order);
        for (double p : {1.5, 2.0, 3.0}) {
          CHECK(lp_norm(s.grid, VectorXd(pu - pphi), p) <=
                std::abs(1.0 - a * b) * lp_norm(s.grid, pu, p) + 1e-6);
        }
      }
    }
  }
}

TEST_CASE("projection reports") {
  ReportOptions options;
  options.order = 8;
  options.n_1d = required_nodes(8);
  options.sample_density = 32;

  auto id = projection_diff_report(eigenvalue_window(10), family_identity(), 3.0, options);
  CHECK(id.measured_diff_norm <= 1e-8);
  CHECK(id.kappa == 0.0);
  CHECK(id.bound_value == 0.0);
  CHECK(id.CFphi > 0.0);

  auto affine = projection_diff_report(IndexSet({{1, 1}}, "single"), family_affine(1.05, 0.95), 2.0,
                                       options);
  CHECK(affine.measured_diff_norm <= std::abs(1.0 - 1.05 * 0.95) + 1e-6);
  CHECK(affine.bound_value > 0.0);
  CHECK(affine.inf_det == doctest::Approx(1.05 * 0.95));

  auto bump = projection_diff_report(eigenvalue_window(10), family_bump(0.04), 2.0, options);
  CHECK(bump.measured_diff_norm > 1e-4);
  CHECK(std::isfinite(bump.bound_value));
  CHECK(bump.boundary_gap > kClusterTol);

  CHECK_THROWS_AS(projection_diff_report(cutoff_square(6), family_identity(), 2.0, options),
                  SplittingError);
  CHECK_THROWS_AS(projection_diff_report(cutoff_ball(10), family_identity(), 2.0, options),
                  std::invalid_argument);
  CHECK_THROWS_AS(projection_diff_report(IndexSet({{1, 2}}, "half"), family_identity(), 2.0, options),
                  SplittingError);

  std::ostringstream os;
  write_report_header(os);
  write_report_row(os, id);
  CHECK(os.str().rfind("F,map,p,measured,inf_det,sup_one_minus_det,kappa,C_F_phi", 0) == 0);
}

TEST_CASE("transference") {
  const int order = 8;
  auto F = eigenvalue_window(10);

  // identity: the transferred projection is P_F itself
  Setup id(family_identity(), order);
  auto g = [](const Eigen::Vector2d& p) { return p.x() * (kPi - p.x()) * std::sin(p.y()) * std::exp(p.y()); };
  VectorXd gf(id.grid.size());
  for (Index k = 0; k < id.grid.size(); ++k) gf[k] = g(id.grid.node(k));
  VectorXd direct = synthesize(id.grid, project_F(analyze(id.grid, gf, order), F), order);
  CHECK((transfer_projection(id.grid, g, F, id.basis, family_identity(), order) - direct)
            .cwiseAbs()
            .maxCoeff() <= 1e-10);

  // bump, p = 2: ||P~ g|| <= (sup/inf)^{1/2} ||P_F^phi|| ||g|| on the target domain
  auto map = family_bump(0.05);
  Setup s(map, order);
  auto metrics = admissibility_metrics(map, 64);
  auto sel = select_eigenfunctions(s.basis, F, order, s.grid);
  const double n_phi = estimate_opnorm_p(projection_operator_F_phi(s.grid, sel, s.abs_det), s.grid, 2.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    const double a1 = normal(rng), a2 = normal(rng), a3 = normal(rng);
    auto h = [=](const Eigen::Vector2d& p) {
      return a1 * std::sin(p.x()) * std::sin(p.y()) + a2 * std::sin(2 * p.x()) * std::sin(p.y()) +
             a3 * std::cos(p.x() + 0.3 * p.y());
    };
    VectorXd hf(s.grid.size());
    for (Index k = 0; k < s.grid.size(); ++k) hf[k] = h(map(s.grid.node(k)));
    VectorXd ph = transfer_projection(s.grid, h, F, s.basis, map, order);
    const double lhs = target_lp_norm(s.grid, ph, s.abs_det, 2.0);
    const double rhs = std::sqrt(metrics.sup_det / metrics.inf_det) * n_phi *
                       target_lp_norm(s.grid, hf, s.abs_det, 2.0);
    CHECK(lhs <= rhs + 1e-6);
  }
}
