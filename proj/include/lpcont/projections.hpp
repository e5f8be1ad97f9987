#pragma once

// Spectral projections P_F (reference square), P_F^phi (pulled-back operator)
// and their difference, on fields sampled on a quadrature grid.
//
// F is given as a set of lattice modes. On the perturbed side it selects the
// eigenpairs at the positions those modes occupy in the ascending listing of
// the order-M truncation.

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lpcont/domain_map.hpp"
#include "lpcont/galerkin.hpp"
#include "lpcont/grid.hpp"
#include "lpcont/lattice.hpp"
#include "lpcont/opnorm.hpp"

namespace lpcont {

/// Relative width below which perturbed eigenvalues count as one cluster.
inline constexpr double kClusterTol = 1e-6;

/// Positions of F's modes in the listing of all modes with m, n <= order.
/// Throws std::invalid_argument for modes above the order and SplittingError
/// when F splits an eigenvalue of the square.
std::vector<Index> listing_positions(const IndexSet& F, int order);

/// Throws SplittingError when a cluster of `eigenvalues` (ascending, chained
/// by relative gaps below kClusterTol) is only partly selected. Returns the
/// smallest relative gap between a selected and an unselected eigenvalue
/// (infinity when there is none).
double check_clusters(const Eigen::VectorXd& eigenvalues, const std::vector<Index>& positions);

/// Zeroes every coefficient outside F.
Eigen::VectorXd project_F(const Eigen::VectorXd& coeffs, const IndexSet& F);

/// Pulled-back eigenfunctions selected by F, Q_phi-orthonormal.
struct SelectedEigenfunctions {
  std::vector<Index> positions;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd coeffs;  // M^2 x |F|
  Eigen::MatrixXd values;  // grid nodes x |F|
  double boundary_gap = 0;  // see check_clusters
};

SelectedEigenfunctions select_eigenfunctions(const EigenBasis& basis, const IndexSet& F, int order,
                                             const QuadGrid& grid);

/// sum_{j in F} Q_phi[u_j^phi, f] u_j^phi.
Eigen::VectorXd project_F_phi(const QuadGrid& grid, const Eigen::VectorXd& field, const IndexSet& F,
                              const EigenBasis& basis, const PerturbationMap& map, int order);

/// Field operators for the weighted-norm estimator. abs_det is |det Dphi| on
/// the grid.
LinearOperator projection_operator_F(const QuadGrid& grid, const IndexSet& F, int order);
LinearOperator projection_operator_F_phi(const QuadGrid& grid, const SelectedEigenfunctions& sel,
                                         const Eigen::VectorXd& abs_det);
LinearOperator projection_difference_operator(const QuadGrid& grid, const IndexSet& F, int order,
                                              const SelectedEigenfunctions& sel,
                                              const Eigen::VectorXd& abs_det);

/// Coefficient-space matrices: the 0/1 diagonal of F, and V_F V_F^T Mw.
Eigen::MatrixXd projection_matrix_F(const IndexSet& F, int order);
Eigen::MatrixXd projection_matrix_F_phi(const SelectedEigenfunctions& sel, const GalerkinPair& pair);

/// (sum_k w_k |f_k|^p |det Dphi_k|)^{1/p}: the L^p norm on the perturbed domain
/// of the function whose pullback is f.
double target_lp_norm(const QuadGrid& grid, const Eigen::VectorXd& field,
                      const Eigen::VectorXd& abs_det, double p);

/// (P~_F g) o phi for g given on the perturbed domain, computed on the
/// reference grid as P_F^phi (g o phi).
Eigen::VectorXd transfer_projection(const QuadGrid& grid,
                                    const std::function<double(const Eigen::Vector2d&)>& g,
                                    const IndexSet& F, const EigenBasis& basis,
                                    const PerturbationMap& map, int order);

struct ProjectionReport {
  std::string F_label;
  std::string map_label;
  double p = 2;
  double measured_diff_norm = 0;  // lower bound on ||P_F - P_F^phi||_{p->p}
  double bound_value = 0;         // C(F,phi) (sup|1-det| + kappa) / inf det
  double inf_det = 1;
  double sup_one_minus_det = 0;
  double kappa = 0;
  double CFphi = 0;
  double boundary_gap = 0;
};

struct ReportOptions {
  int order = 16;
  int n_1d = 44;
  int sample_density = 128;
  OpNormOptions estimator;
};

/// Throws SplittingError for F splitting either spectrum and
/// AdmissibilityError for maps with non-positive det.
ProjectionReport projection_diff_report(const IndexSet& F, const PerturbationMap& map, double p,
                                        const ReportOptions& options = {});

/// C(F,phi) = (sup det / inf det) sum_{j in F} ||u~_j||_p ||u~_j||_q.
double projection_constant(const QuadGrid& grid, const SelectedEigenfunctions& sel,
                           const Eigen::VectorXd& abs_det, const AdmissibilityMetrics& metrics,
                           double p);

void write_report_header(std::ostream& os);
void write_report_row(std::ostream& os, const ProjectionReport& report);

}  // namespace lpcont
