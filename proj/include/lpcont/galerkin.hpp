#pragma once

// Galerkin realization of T = Delta^{-1} and the pulled-back T_phi = L_phi^{-1} J_phi
// in the double-sine basis of the reference square.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "lpcont/domain_map.hpp"
#include "lpcont/grid.hpp"

namespace lpcont {

/// S[j,k] = sum w (grad u_j)^T A_phi grad u_k and Mw[j,k] = sum w u_j u_k |det Dphi|,
/// indexed in SineBasis storage order.
struct GalerkinPair {
  Eigen::MatrixXd S;
  Eigen::MatrixXd Mw;
  int order = 0;
  std::string label;
};

/// Throws AdmissibilityError if det Dphi <= 0 at a node, std::invalid_argument
/// if the grid under-resolves the order.
GalerkinPair assemble(const PerturbationMap& map, int order, const QuadGrid& grid);

/// Lowest generalized eigenpairs S v = lambda Mw v, ascending, with v^T Mw v = 1
/// and the first significant coefficient of each v positive.
struct EigenBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;  // one column per eigenpair

  Index count() const noexcept { return eigenvalues.size(); }
};

/// Throws NumericalError when Mw is not positive definite.
EigenBasis solve_eigen(const GalerkinPair& pair, Index k);
inline EigenBasis solve_eigen(const GalerkinPair& pair) {
  return solve_eigen(pair, pair.S.rows());
}

/// Truncation order of a coefficient vector (its length must be a square).
int coefficient_order(Index size);

/// c_{m,n} / (m^2 + n^2).
Eigen::VectorXd apply_T(const Eigen::VectorXd& coeffs);

/// S^{-1} Mw with the Cholesky factor of S computed once.
class PulledBackInverse {
 public:
  explicit PulledBackInverse(const GalerkinPair& pair);

  Eigen::VectorXd apply(const Eigen::VectorXd& coeffs) const;
  Eigen::MatrixXd matrix() const;

 private:
  Eigen::MatrixXd mw_;
  Eigen::LLT<Eigen::MatrixXd> s_factor_;
};

/// One-off S^{-1} Mw c. Throws NumericalError when S is not positive definite.
Eigen::VectorXd apply_T_phi(const Eigen::VectorXd& coeffs, const GalerkinPair& pair);

/// CSV triplets "row,col,value" for every entry.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& matrix);

}  // namespace lpcont
