#include "lpcont/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace lpcont {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::pair<VectorXd, VectorXd> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  // P_n(t) and P_n'(t) by the three-term recurrence
  auto legendre = [n](double t) {
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, n * (t * p1 - p0) / (t * t - 1.0)};
  };

  VectorXd nodes(n), weights(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, dp] = legendre(t);
      double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    double dp = legendre(t).second;
    nodes[i] = mid - half * t;
    nodes[n - 1 - i] = mid + half * t;
    weights[i] = weights[n - 1 - i] = half * 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {nodes, weights};
}

QuadGrid::QuadGrid(int n_1d) : n_1d_(n_1d) {
  if (n_1d < 4) throw std::invalid_argument("quadrature grid needs n_1d >= 4");
  std::tie(nodes_1d_, weights_1d_) = gauss_legendre(n_1d, 0.0, std::numbers::pi);
  x_.resize(size());
  y_.resize(size());
  weights_.resize(size());
  for (int i = 0; i < n_1d; ++i) {
    for (int j = 0; j < n_1d; ++j) {
      Index k = static_cast<Index>(i) * n_1d + j;
      x_[k] = nodes_1d_[i];
      y_[k] = nodes_1d_[j];
      weights_[k] = weights_1d_[i] * weights_1d_[j];
    }
  }
}

QuadGrid make_grid(int n_1d) { return QuadGrid(n_1d); }

SineBasis::SineBasis(int order) : order_(order) {
  if (order < 1) throw std::invalid_argument("sine basis order must be >= 1");
}

Index SineBasis::index(const LatticeMode& mode) const {
  if (mode.m < 1 || mode.n < 1 || mode.m > order_ || mode.n > order_) {
    throw std::out_of_range("mode (" + std::to_string(mode.m) + "," + std::to_string(mode.n) +
                            ") above truncation order " + std::to_string(order_));
  }
  return static_cast<Index>(mode.m - 1) * order_ + (mode.n - 1);
}

VectorXd SineBasis::eigenvalues() const {
  VectorXd lambda(size());
  for (Index k = 0; k < size(); ++k) lambda[k] = static_cast<double>(mode(k).eigenvalue());
  return lambda;
}

std::vector<Index> SineBasis::listing() const {
  std::vector<Index> order(static_cast<std::size_t>(size()));
  for (Index k = 0; k < size(); ++k) order[static_cast<std::size_t>(k)] = k;
  std::sort(order.begin(), order.end(), [this](Index a, Index b) { return mode(a) < mode(b); });
  return order;
}

void require_resolution(const QuadGrid& grid, int order) {
  if (grid.n_1d() < required_nodes(order)) {
    throw std::invalid_argument("grid with n_1d=" + std::to_string(grid.n_1d()) +
                                " under-resolves order " + std::to_string(order) +
                                " (need n_1d >= " + std::to_string(required_nodes(order)) + ")");
  }
}

VectorXd eval_mode(const LatticeMode& mode, const QuadGrid& grid) {
  const double m = static_cast<double>(mode.m), n = static_cast<double>(mode.n);
  return (m * grid.x().array()).sin() * (n * grid.y().array()).sin();
}

MatrixXd sine_table(const QuadGrid& grid, int order) {
  MatrixXd table(grid.n_1d(), order);
  for (int k = 1; k <= order; ++k) table.col(k - 1) = (k * grid.nodes_1d().array()).sin();
  return table;
}

MatrixXd cosine_table(const QuadGrid& grid, int order) {
  MatrixXd table(grid.n_1d(), order);
  for (int k = 1; k <= order; ++k) table.col(k - 1) = (k * grid.nodes_1d().array()).cos();
  return table;
}

namespace {

MatrixXd tensor_columns(const MatrixXd& along_x, const MatrixXd& along_y) {
  const Index n = along_x.rows();
  const Index order = along_x.cols();
  MatrixXd out(n * n, order * order);
  for (Index m = 0; m < order; ++m) {
    for (Index k = 0; k < order; ++k) {
      auto col = out.col(m * order + k);
      for (Index i = 0; i < n; ++i) col.segment(i * n, n) = along_x(i, m) * along_y.col(k);
    }
  }
  return out;
}

}  // namespace

MatrixXd mode_matrix(const QuadGrid& grid, int order) {
  MatrixXd s = sine_table(grid, order);
  return tensor_columns(s, s);
}

MatrixXd mode_matrix_dx(const QuadGrid& grid, int order) {
  MatrixXd s = sine_table(grid, order);
  MatrixXd c = cosine_table(grid, order);
  for (int k = 1; k <= order; ++k) c.col(k - 1) *= k;
  return tensor_columns(c, s);
}

MatrixXd mode_matrix_dy(const QuadGrid& grid, int order) {
  MatrixXd s = sine_table(grid, order);
  MatrixXd c = cosine_table(grid, order);
  for (int k = 1; k <= order; ++k) c.col(k - 1) *= k;
  return tensor_columns(s, c);
}

VectorXd analyze(const QuadGrid& grid, const VectorXd& field, int order) {
  if (field.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  require_resolution(grid, order);
  const int n = grid.n_1d();
  const MatrixXd s = sine_table(grid, order);
  const auto& w = grid.weights_1d();
  RowMajorMatrix values = Eigen::Map<const RowMajorMatrix>(field.data(), n, n);
  values = w.asDiagonal() * values * w.asDiagonal();
  RowMajorMatrix coeffs = (4.0 / (std::numbers::pi * std::numbers::pi)) * s.transpose() * values * s;
  return Eigen::Map<const VectorXd>(coeffs.data(), coeffs.size());
}

VectorXd synthesize(const QuadGrid& grid, const VectorXd& coeffs, int order) {
  if (coeffs.size() != static_cast<Index>(order) * order) {
    throw std::invalid_argument("coefficient vector size does not match order");
  }
  const MatrixXd s = sine_table(grid, order);
  RowMajorMatrix c = Eigen::Map<const RowMajorMatrix>(coeffs.data(), order, order);
  RowMajorMatrix values = s * c * s.transpose();
  return Eigen::Map<const VectorXd>(values.data(), values.size());
}

double lp_norm(const VectorXd& weights, const VectorXd& values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  if (std::isinf(p)) return values.cwiseAbs().maxCoeff();
  // factoring out the max keeps the sum in range and makes ||2f|| = 2||f|| exact
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Eigen::ArrayXd r = values.array().abs() / scale;
  if (p == 2.0) return scale * std::sqrt((weights.array() * r.square()).sum());
  return scale * std::pow((weights.array() * r.pow(p)).sum(), 1.0 / p);
}

VectorXd abs_det_on_grid(const PerturbationMap& map, const QuadGrid& grid) {
  VectorXd det(grid.size());
  for (Index k = 0; k < grid.size(); ++k) det[k] = std::abs(jacobian_at(map, grid.node(k)).det);
  return det;
}

double q_phi_inner(const QuadGrid& grid, const VectorXd& u, const VectorXd& v,
                   const VectorXd& abs_det) {
  return (grid.weights().array() * u.array() * v.array() * abs_det.array()).sum();
}

double q_phi_inner(const QuadGrid& grid, const VectorXd& u, const VectorXd& v,
                   const PerturbationMap& map) {
  return q_phi_inner(grid, u, v, abs_det_on_grid(map, grid));
}

void write_field_csv(std::ostream& os, const QuadGrid& grid, const VectorXd& field) {
  os << "x,y,value\n";
  os.precision(17);
  for (Index k = 0; k < grid.size(); ++k) {
    os << grid.x()[k] << ',' << grid.y()[k] << ',' << field[k] << '\n';
  }
}

void write_coeffs_csv(std::ostream& os, const VectorXd& coeffs, int order) {
  SineBasis basis(order);
  os << "m,n,coefficient\n";
  os.precision(17);
  for (Index k = 0; k < basis.size(); ++k) {
    auto mode = basis.mode(k);
    os << mode.m << ',' << mode.n << ',' << coeffs[k] << '\n';
  }
}

}  // namespace lpcont
