#include "lpcont/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "lpcont/errors.hpp"

namespace lpcont {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInvNormSq = 4.0 / (std::numbers::pi * std::numbers::pi);

void require_within_order(const IndexSet& F, int order) {
  if (!F.empty() && F.max_index() > order) {
    throw std::invalid_argument("index set " + F.label() + " has modes above truncation order " +
                                std::to_string(order));
  }
}

MatrixXd mode_columns(const QuadGrid& grid, const IndexSet& F) {
  MatrixXd cols(grid.size(), static_cast<Index>(F.size()));
  Index j = 0;
  for (const auto& mode : F) cols.col(j++) = eval_mode(mode, grid);
  return cols;
}

}  // namespace

std::vector<Index> listing_positions(const IndexSet& F, int order) {
  require_within_order(F, order);
  if (!F.empty()) {
    auto split = splits(F, exhaustive_index(F.max_eigenvalue()));
    if (!split.empty()) {
      throw SplittingError(F.label() + " splits the eigenvalue " +
                           std::to_string(split.front().eigenvalue));
    }
  }
  const SineBasis basis(order);
  const auto listing = basis.listing();
  std::vector<Index> positions;
  for (std::size_t pos = 0; pos < listing.size(); ++pos) {
    if (F.contains(basis.mode(listing[pos]))) positions.push_back(static_cast<Index>(pos));
  }
  return positions;
}

double check_clusters(const VectorXd& eigenvalues, const std::vector<Index>& positions) {
  std::vector<bool> selected(static_cast<std::size_t>(eigenvalues.size()), false);
  for (Index pos : positions) {
    if (pos < 0 || pos >= eigenvalues.size()) {
      throw std::invalid_argument("position " + std::to_string(pos) + " beyond the computed spectrum");
    }
    selected[static_cast<std::size_t>(pos)] = true;
  }
  double gap = std::numeric_limits<double>::infinity();
  for (Index j = 0; j + 1 < eigenvalues.size(); ++j) {
    if (selected[static_cast<std::size_t>(j)] == selected[static_cast<std::size_t>(j + 1)]) continue;
    const double rel = (eigenvalues[j + 1] - eigenvalues[j]) / eigenvalues[j + 1];
    gap = std::min(gap, rel);
    if (rel < kClusterTol) {
      throw SplittingError("selection splits the perturbed eigenvalue cluster near " +
                           std::to_string(eigenvalues[j]));
    }
  }
  return gap;
}

VectorXd project_F(const VectorXd& coeffs, const IndexSet& F) {
  const int order = coefficient_order(coeffs.size());
  require_within_order(F, order);
  const SineBasis basis(order);
  VectorXd out = VectorXd::Zero(coeffs.size());
  for (const auto& mode : F) {
    const Index k = basis.index(mode);
    out[k] = coeffs[k];
  }
  return out;
}

SelectedEigenfunctions select_eigenfunctions(const EigenBasis& basis, const IndexSet& F, int order,
                                             const QuadGrid& grid) {
  if (basis.vectors.rows() != static_cast<Index>(order) * order) {
    throw std::invalid_argument("eigenbasis does not match truncation order");
  }
  SelectedEigenfunctions sel;
  sel.positions = listing_positions(F, order);
  sel.boundary_gap = check_clusters(basis.eigenvalues, sel.positions);
  const auto count = static_cast<Index>(sel.positions.size());
  sel.eigenvalues.resize(count);
  sel.coeffs.resize(basis.vectors.rows(), count);
  for (Index j = 0; j < count; ++j) {
    sel.eigenvalues[j] = basis.eigenvalues[sel.positions[static_cast<std::size_t>(j)]];
    sel.coeffs.col(j) = basis.vectors.col(sel.positions[static_cast<std::size_t>(j)]);
  }
  sel.values = mode_matrix(grid, order) * sel.coeffs;
  return sel;
}

VectorXd project_F_phi(const QuadGrid& grid, const VectorXd& field, const IndexSet& F,
                       const EigenBasis& basis, const PerturbationMap& map, int order) {
  if (field.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  const auto sel = select_eigenfunctions(basis, F, order, grid);
  const VectorXd abs_det = abs_det_on_grid(map, grid);
  const VectorXd weighted = (grid.weights().array() * abs_det.array() * field.array()).matrix();
  return sel.values * (sel.values.transpose() * weighted);
}

LinearOperator projection_operator_F(const QuadGrid& grid, const IndexSet& F, int order) {
  require_within_order(F, order);
  require_resolution(grid, order);
  MatrixXd left = mode_columns(grid, F);
  MatrixXd right = kInvNormSq * grid.weights().asDiagonal() * left;
  return low_rank_operator(std::move(left), std::move(right));
}

LinearOperator projection_operator_F_phi(const QuadGrid& grid, const SelectedEigenfunctions& sel,
                                         const VectorXd& abs_det) {
  MatrixXd right = (grid.weights().array() * abs_det.array()).matrix().asDiagonal() * sel.values;
  return low_rank_operator(sel.values, std::move(right));
}

LinearOperator projection_difference_operator(const QuadGrid& grid, const IndexSet& F, int order,
                                              const SelectedEigenfunctions& sel,
                                              const VectorXd& abs_det) {
  require_within_order(F, order);
  require_resolution(grid, order);
  const MatrixXd uf = mode_columns(grid, F);
  const Index a = uf.cols(), b = sel.values.cols();
  MatrixXd left(grid.size(), a + b), right(grid.size(), a + b);
  left << uf, -sel.values;
  right << kInvNormSq * grid.weights().asDiagonal() * uf,
      (grid.weights().array() * abs_det.array()).matrix().asDiagonal() * sel.values;
  return low_rank_operator(std::move(left), std::move(right));
}

MatrixXd projection_matrix_F(const IndexSet& F, int order) {
  require_within_order(F, order);
  const SineBasis basis(order);
  MatrixXd p = MatrixXd::Zero(basis.size(), basis.size());
  for (const auto& mode : F) {
    const Index k = basis.index(mode);
    p(k, k) = 1.0;
  }
  return p;
}

MatrixXd projection_matrix_F_phi(const SelectedEigenfunctions& sel, const GalerkinPair& pair) {
  return sel.coeffs * (sel.coeffs.transpose() * pair.Mw);
}

double target_lp_norm(const QuadGrid& grid, const VectorXd& field, const VectorXd& abs_det,
                      double p) {
  return lp_norm((grid.weights().array() * abs_det.array()).matrix(), field, p);
}

VectorXd transfer_projection(const QuadGrid& grid,
                             const std::function<double(const Eigen::Vector2d&)>& g,
                             const IndexSet& F, const EigenBasis& basis,
                             const PerturbationMap& map, int order) {
  VectorXd pulled(grid.size());
  for (Index k = 0; k < grid.size(); ++k) pulled[k] = g(map(grid.node(k)));
  return project_F_phi(grid, pulled, F, basis, map, order);
}

double projection_constant(const QuadGrid& grid, const SelectedEigenfunctions& sel,
                           const VectorXd& abs_det, const AdmissibilityMetrics& metrics, double p) {
  const double q = p / (p - 1.0);
  double sum = 0.0;
  for (Index j = 0; j < sel.values.cols(); ++j) {
    const VectorXd u = sel.values.col(j);
    sum += target_lp_norm(grid, u, abs_det, p) * target_lp_norm(grid, u, abs_det, q);
  }
  return metrics.sup_det / metrics.inf_det * sum;
}

ProjectionReport projection_diff_report(const IndexSet& F, const PerturbationMap& map, double p,
                                        const ReportOptions& options) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("report needs 1 < p < inf");
  const auto grid = make_grid(options.n_1d);
  const auto metrics = admissibility_metrics(map, options.sample_density);
  const auto pair = assemble(map, options.order, grid);
  const auto basis = solve_eigen(pair);
  const auto sel = select_eigenfunctions(basis, F, options.order, grid);
  const VectorXd abs_det = abs_det_on_grid(map, grid);

  ProjectionReport report;
  report.F_label = F.label();
  report.map_label = map.label();
  report.p = p;
  report.measured_diff_norm = estimate_opnorm_p(
      projection_difference_operator(grid, F, options.order, sel, abs_det), grid, p,
      options.estimator);
  report.inf_det = metrics.inf_det;
  report.sup_one_minus_det = metrics.sup_one_minus_det;
  report.kappa = metrics.kappa;
  report.CFphi = projection_constant(grid, sel, abs_det, metrics, p);
  report.bound_value = report.CFphi * (metrics.sup_one_minus_det + metrics.kappa) / metrics.inf_det;
  report.boundary_gap = sel.boundary_gap;
  return report;
}

void write_report_header(std::ostream& os) {
  os << "F,map,p,measured,inf_det,sup_one_minus_det,kappa,C_F_phi,bound,rel_gap\n";
}

void write_report_row(std::ostream& os, const ProjectionReport& r) {
  os.precision(10);
  os << r.F_label << ",\"" << r.map_label << "\"," << r.p << ',' << r.measured_diff_norm << ','
     << r.inf_det << ',' << r.sup_one_minus_det << ',' << r.kappa << ',' << r.CFphi << ','
     << r.bound_value << ',' << r.boundary_gap << '\n';
}

}  // namespace lpcont
