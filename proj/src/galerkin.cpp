#include "lpcont/galerkin.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>

#include "lpcont/errors.hpp"

namespace lpcont {

using Eigen::MatrixXd;
using Eigen::VectorXd;

GalerkinPair assemble(const PerturbationMap& map, int order, const QuadGrid& grid) {
  require_resolution(grid, order);

  const Index nodes = grid.size();
  VectorXd a00(nodes), a01(nodes), a11(nodes), det(nodes);
  for (Index k = 0; k < nodes; ++k) {
    const JacobianData jd = jacobian_at(map, grid.node(k));
    if (jd.det <= 0.0) {
      throw AdmissibilityError(map.label() + ": det Dphi <= 0 at a quadrature node");
    }
    a00[k] = jd.A(0, 0);
    a01[k] = jd.A(0, 1);
    a11[k] = jd.A(1, 1);
    det[k] = jd.det;
  }

  const MatrixXd u = mode_matrix(grid, order);
  const MatrixXd ux = mode_matrix_dx(grid, order);
  const MatrixXd uy = mode_matrix_dy(grid, order);
  const auto& w = grid.weights().array();

  GalerkinPair pair;
  pair.order = order;
  pair.label = map.label();

  const MatrixXd wux = (w * a00.array()).matrix().asDiagonal() * ux +
                       (w * a01.array()).matrix().asDiagonal() * uy;
  const MatrixXd wuy = (w * a01.array()).matrix().asDiagonal() * ux +
                       (w * a11.array()).matrix().asDiagonal() * uy;
  pair.S = ux.transpose() * wux + uy.transpose() * wuy;
  pair.Mw = u.transpose() * (w * det.array()).matrix().asDiagonal() * u;

  // exact symmetry; the two triangles differ only by summation order
  pair.S = 0.5 * (pair.S + pair.S.transpose()).eval();
  pair.Mw = 0.5 * (pair.Mw + pair.Mw.transpose()).eval();
  return pair;
}

EigenBasis solve_eigen(const GalerkinPair& pair, Index k) {
  const Index n = pair.S.rows();
  if (k < 1 || k > n) throw std::invalid_argument("solve_eigen: k must lie in [1, M^2]");
  if (Eigen::LLT<MatrixXd>(pair.Mw).info() != Eigen::Success) {
    throw NumericalError(pair.label + ": weighted mass matrix is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> solver(pair.S, pair.Mw);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(pair.label + ": generalized eigensolver failed");
  }

  EigenBasis basis;
  basis.eigenvalues = solver.eigenvalues().head(k);
  basis.vectors = solver.eigenvectors().leftCols(k);
  for (Index j = 0; j < k; ++j) {
    auto v = basis.vectors.col(j);
    const double cutoff = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i) {
      if (std::abs(v[i]) > cutoff) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
  }
  return basis;
}

int coefficient_order(Index size) {
  const auto order = static_cast<Index>(std::lround(std::sqrt(static_cast<double>(size))));
  if (order < 1 || order * order != size) {
    throw std::invalid_argument("coefficient vector length " + std::to_string(size) +
                                " is not a square");
  }
  return static_cast<int>(order);
}

VectorXd apply_T(const VectorXd& coeffs) {
  const SineBasis basis(coefficient_order(coeffs.size()));
  return (coeffs.array() / basis.eigenvalues().array()).matrix();
}

PulledBackInverse::PulledBackInverse(const GalerkinPair& pair) : mw_(pair.Mw), s_factor_(pair.S) {
  if (s_factor_.info() != Eigen::Success) {
    throw NumericalError(pair.label + ": stiffness matrix is not positive definite");
  }
}

VectorXd PulledBackInverse::apply(const VectorXd& coeffs) const {
  return s_factor_.solve(mw_ * coeffs);
}

MatrixXd PulledBackInverse::matrix() const { return s_factor_.solve(mw_); }

VectorXd apply_T_phi(const VectorXd& coeffs, const GalerkinPair& pair) {
  if (coeffs.size() != pair.S.rows()) {
    throw std::invalid_argument("coefficient vector does not match the Galerkin order");
  }
  return PulledBackInverse(pair).apply(coeffs);
}

void write_matrix_csv(std::ostream& os, const MatrixXd& matrix) {
  os << "row,col,value\n";
  os.precision(17);
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) os << i << ',' << j << ',' << matrix(i, j) << '\n';
  }
}

}  // namespace lpcont
