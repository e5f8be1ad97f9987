#pragma once

// Tensor Gauss-Legendre quadrature on [0,pi]^2 and the double-sine basis.
//
// A field is an Eigen vector of values at the grid nodes, node (i, j) stored
// at i * n_1d + j with coordinates (x_i, y_j). A coefficient vector of order
// M is an Eigen vector of length M^2, mode (m, n) stored at (m-1) * M + (n-1).
// Modes are the raw products sin(mx) sin(ny) with squared L^2 norm pi^2/4.

#include <Eigen/Dense>
#include <iosfwd>

#include "lpcont/domain_map.hpp"
#include "lpcont/lattice.hpp"

namespace lpcont {

using Eigen::Index;

class QuadGrid {
 public:
  explicit QuadGrid(int n_1d);

  int n_1d() const noexcept { return n_1d_; }
  Index size() const noexcept { return static_cast<Index>(n_1d_) * n_1d_; }

  const Eigen::VectorXd& nodes_1d() const noexcept { return nodes_1d_; }
  const Eigen::VectorXd& weights_1d() const noexcept { return weights_1d_; }
  /// Flattened node coordinates and tensor weights (sum pi^2).
  const Eigen::VectorXd& x() const noexcept { return x_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  Eigen::Vector2d node(Index k) const { return {x_[k], y_[k]}; }

 private:
  int n_1d_;
  Eigen::VectorXd nodes_1d_, weights_1d_;
  Eigen::VectorXd x_, y_, weights_;
};

/// Tensor Gauss-Legendre grid with n_1d >= 4 nodes per axis.
QuadGrid make_grid(int n_1d);

/// Gauss-Legendre nodes and weights on [a, b], nodes ascending.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b);

/// Storage layout of order-M coefficient vectors.
class SineBasis {
 public:
  explicit SineBasis(int order);

  int order() const noexcept { return order_; }
  Index size() const noexcept { return static_cast<Index>(order_) * order_; }
  Index index(const LatticeMode& mode) const;
  LatticeMode mode(Index k) const {
    return {static_cast<Int>(k / order_) + 1, static_cast<Int>(k % order_) + 1};
  }
  /// m^2 + n^2 for every stored mode.
  Eigen::VectorXd eigenvalues() const;
  /// Storage indices in listing order (eigenvalue, m, n).
  std::vector<Index> listing() const;

 private:
  int order_;
};

/// Smallest n_1d at which the grid integrates all products of modes of
/// order M to near machine precision.
constexpr int required_nodes(int order) { return 2 * order + 12; }
/// Throws std::invalid_argument when grid.n_1d() < required_nodes(order).
void require_resolution(const QuadGrid& grid, int order);

/// sin(mx) sin(ny) at every node.
Eigen::VectorXd eval_mode(const LatticeMode& mode, const QuadGrid& grid);

/// sin(k x_i) for i < n_1d, k = 1..order (n_1d x order).
Eigen::MatrixXd sine_table(const QuadGrid& grid, int order);
Eigen::MatrixXd cosine_table(const QuadGrid& grid, int order);

/// Mode values (grid.size() x M^2), columns in SineBasis storage order.
Eigen::MatrixXd mode_matrix(const QuadGrid& grid, int order);
/// x and y partial derivatives of every mode at every node.
Eigen::MatrixXd mode_matrix_dx(const QuadGrid& grid, int order);
Eigen::MatrixXd mode_matrix_dy(const QuadGrid& grid, int order);

/// c_{m,n} = (4/pi^2) sum_k w_k u_{m,n}(x_k) field(x_k).
Eigen::VectorXd analyze(const QuadGrid& grid, const Eigen::VectorXd& field, int order);
/// Pointwise sum of c_{m,n} u_{m,n}.
Eigen::VectorXd synthesize(const QuadGrid& grid, const Eigen::VectorXd& coeffs, int order);

/// (sum_k weights_k |values_k|^p)^{1/p}; max |value| for p = infinity.
double lp_norm(const Eigen::VectorXd& weights, const Eigen::VectorXd& values, double p);
inline double lp_norm(const QuadGrid& grid, const Eigen::VectorXd& field, double p) {
  return lp_norm(grid.weights(), field, p);
}

/// |det Dphi| at every node.
Eigen::VectorXd abs_det_on_grid(const PerturbationMap& map, const QuadGrid& grid);

/// Q_phi[u, v] = sum_k w_k u_k v_k |det Dphi(x_k)|.
double q_phi_inner(const QuadGrid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   const PerturbationMap& map);
double q_phi_inner(const QuadGrid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   const Eigen::VectorXd& abs_det);

/// CSV "x,y,value".
void write_field_csv(std::ostream& os, const QuadGrid& grid, const Eigen::VectorXd& field);
/// CSV "m,n,coefficient".
void write_coeffs_csv(std::ostream& os, const Eigen::VectorXd& coeffs, int order);

}  // namespace lpcont
