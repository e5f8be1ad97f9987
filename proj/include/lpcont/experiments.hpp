#pragma once

// Experiment drivers behind the command-line subcommands. Each writes a CSV
// (config echo as '#' comment lines, then a header row) and returns the rows.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lpcont/config.hpp"
#include "lpcont/projections.hpp"
#include "lpcont/resolvent.hpp"

namespace lpcont {

struct CensusRow {
  Int N = 0;
  Int card_F = 0;
  Int n_splits = 0;
  Int card_gamma = 0;
  Int first_split_lambda = 0;  // 0 when nothing splits
};

/// F_N for N = 1..N_max. Columns N,card_F,n_splits,card_gamma,first_split_lambda.
std::vector<CensusRow> run_census(const ExperimentConfig& config, std::ostream& os);

struct SweepRow {
  double eps = 0;
  ProjectionReport report;
};

/// One row per (sweep value, p). The sweep replaces map.eps for the bump and
/// conformal families; other families give one row per p.
std::vector<SweepRow> run_perturb_sweep(const ExperimentConfig& config, std::ostream& os);

struct KatoRow {
  int nodes = 0;
  double err_T = 0;
  double err_Tphi = 0;
  double err_diff = 0;
  double imag_max = 0;
};

/// Contour vs direct projections at nodes/4, nodes/2 and nodes. Throws
/// NumericalError after writing when the run at `nodes` is under-resolved.
std::vector<KatoRow> run_kato_check(const ExperimentConfig& config, std::ostream& os);

struct MultiplierRow {
  int N = 0;
  Complex z;
  double A = 0;
};

/// For N in N_list: lambda_N is the N-th distinct eigenvalue and z the real
/// point whose pole radius 1/sqrt(z) sits midway between sqrt(lambda_N) and
/// sqrt(lambda_{N+1}). The fitted log-log slope of A against N is appended
/// as a '#' footer line.
std::vector<MultiplierRow> run_multiplier_growth(const ExperimentConfig& config, std::ostream& os);
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct LebesgueRow {
  int N = 0;
  double p = 0;
  double norm_square = 0;
  double norm_ball = 0;
};

/// Lower bounds for ||P_{F_N}||_{p->p} and ||P_{B_N}||_{p->p} on a grid with
/// 2N+12 nodes per axis.
std::vector<LebesgueRow> run_lebesgue_trend(const ExperimentConfig& config, std::ostream& os);

struct ContinuityRow {
  double eps = 0;
  double w1inf = 0;
  double max_rel_dev = 0;
  double ratio = 0;  // 0 when w1inf vanishes
};

/// max_{j<=k} |lambda~_j / lambda_j - 1| for the bump family over the sweep.
std::vector<ContinuityRow> run_eigen_continuity(const ExperimentConfig& config, std::ostream& os);

OpNormOptions estimator_options(const ExperimentConfig& config);

}  // namespace lpcont
