#include "lpcont/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include "lpcont/errors.hpp"

namespace lpcont {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr int kMetricDensity = 128;

void begin_csv(std::ostream& os, const ExperimentConfig& config, const char* header) {
  write_config_echo(os, config);
  os.precision(10);
  os << header << '\n';
}

/// Runs f over the inputs concurrently and returns the results in input order.
template <typename In, typename F>
auto parallel_map(const std::vector<In>& inputs, F f) {
  using Out = decltype(f(inputs.front()));
  std::vector<std::future<Out>> futures;
  for (const auto& in : inputs) futures.push_back(std::async(std::launch::async, f, in));
  std::vector<Out> out;
  for (auto& fut : futures) out.push_back(fut.get());
  return out;
}

bool sweeps_eps(const std::string& family) {
  return family == "bump" || family == "conformal_quadratic";
}

VectorXd sorted_reference(int order) {
  VectorXd lambda = SineBasis(order).eigenvalues();
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

}  // namespace

OpNormOptions estimator_options(const ExperimentConfig& config) {
  return {config.restarts, config.iters, config.seed};
}

std::vector<CensusRow> run_census(const ExperimentConfig& config, std::ostream& os) {
  validate(config);
  begin_csv(os, config, "N,card_F,n_splits,card_gamma,first_split_lambda");
  std::vector<CensusRow> rows;
  for (Int N = 1; N <= config.N_max; ++N) {
    const IndexSet F = cutoff_square(N);
    const auto split = splits(F, exhaustive_index(F.max_eigenvalue()));
    CensusRow row{N, static_cast<Int>(F.size()), static_cast<Int>(split.size()),
                  static_cast<Int>(bad_region(N).size()), split.empty() ? 0 : split.front().eigenvalue};
    os << row.N << ',' << row.card_F << ',' << row.n_splits << ',' << row.card_gamma << ','
       << row.first_split_lambda << '\n';
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> run_perturb_sweep(const ExperimentConfig& config, std::ostream& os) {
  validate(config);
  const IndexSet F = parse_index_set(config.F);
  ReportOptions options;
  options.order = config.M;
  options.n_1d = config.n_1d;
  options.sample_density = kMetricDensity;
  options.estimator = estimator_options(config);

  std::vector<double> eps_values{config.map.eps};
  if (sweeps_eps(config.map.family)) eps_values = config.sweep;
  // admissibility and splitting failures surface before the sweep starts
  for (double eps : eps_values) {
    MapParams params = config.map;
    params.eps = eps;
    admissibility_metrics(make_family(params), kMetricDensity);
  }

  auto blocks = parallel_map(eps_values, [&](double eps) {
    MapParams params = config.map;
    params.eps = eps;
    const auto map = make_family(params);
    std::vector<SweepRow> out;
    for (double p : config.p) out.push_back({eps, projection_diff_report(F, map, p, options)});
    return out;
  });

  begin_csv(os, config, "eps,F,map,p,measured,inf_det,sup_one_minus_det,kappa,C_F_phi,bound,rel_gap");
  std::vector<SweepRow> rows;
  for (const auto& block : blocks) {
    for (const auto& row : block) {
      os << row.eps << ',';
      write_report_row(os, row.report);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<KatoRow> run_kato_check(const ExperimentConfig& config, std::ostream& os) {
  validate(config);
  const IndexSet F = parse_index_set(config.F);
  const auto map = make_family(config.map);
  const auto grid = make_grid(config.n_1d);
  const auto pair = assemble(map, config.M, grid);
  const auto basis = solve_eigen(pair);
  const auto sel = select_eigenfunctions(basis, F, config.M, grid);
  const MatrixXd direct_T = projection_matrix_F(F, config.M);
  const MatrixXd direct_Tphi = projection_matrix_F_phi(sel, pair);
  const auto contour =
      build_contour_for_positions(sorted_reference(config.M), basis.eigenvalues, sel.positions, config.nodes);

  begin_csv(os, config, "nodes,err_T,err_Tphi,err_diff,imag_max");
  std::vector<KatoRow> rows;
  KatoResult last;
  for (int n : {config.nodes / 4, config.nodes / 2, config.nodes}) {
    KatoOptions options;
    options.check_refinement = n == config.nodes;
    const auto c = contour.with_nodes(n);
    const auto kt = kato_projection(config.M, c, options);
    const auto kphi = kato_projection(pair, c, options);
    KatoRow row{n, (kt.projection - direct_T).norm(), (kphi.projection - direct_Tphi).norm(),
                ((kt.projection - kphi.projection) - (direct_T - direct_Tphi)).norm(),
                std::max(kt.imag_max, kphi.imag_max)};
    os << row.nodes << ',' << row.err_T << ',' << row.err_Tphi << ',' << row.err_diff << ','
       << row.imag_max << '\n';
    rows.push_back(row);
    last = kphi;
    last.underresolved = kt.underresolved || kphi.underresolved;
  }
  if (last.underresolved || last.imag_max > 1e-9) {
    os.flush();
    throw NumericalError("contour quadrature under-resolved at " + std::to_string(config.nodes) +
                         " nodes (refinement change " + std::to_string(last.refinement_change) + ")");
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<MultiplierRow> run_multiplier_growth(const ExperimentConfig& config, std::ostream& os) {
  validate(config);
  MihlinSampling sampling;
  sampling.density = config.sample_density;
  auto rows = parallel_map(config.N_list, [&](int N) {
    const auto values = distinct_eigenvalues(N + 1);
    const Int lambda_n = values[static_cast<std::size_t>(N - 1)];
    const auto window = spectrum_window(eigenvalue_window(lambda_n), exhaustive_index(lambda_n));
    const double c = 0.5 * (std::sqrt(static_cast<double>(lambda_n)) +
                            std::sqrt(static_cast<double>(values.back())));
    const Complex z(1.0 / (c * c), 0.0);
    return MultiplierRow{N, z, mihlin_constant(build_cutoff(z, window), sampling)};
  });

  begin_csv(os, config, "N,z_re,z_im,A_estimate,sample_density");
  std::vector<double> x, y;
  for (const auto& row : rows) {
    os << row.N << ',' << row.z.real() << ',' << row.z.imag() << ',' << row.A << ','
       << config.sample_density << '\n';
    x.push_back(row.N);
    y.push_back(row.A);
  }
  if (rows.size() >= 2) os << "# loglog_slope=" << loglog_slope(x, y) << '\n';
  return rows;
}

std::vector<LebesgueRow> run_lebesgue_trend(const ExperimentConfig& config, std::ostream& os) {
  validate(config);
  const auto options = estimator_options(config);
  auto blocks = parallel_map(config.N_list, [&](int N) {
    const auto grid = make_grid(2 * N + 12);
    const auto square = projection_operator_F(grid, cutoff_square(N), N);
    const auto ball = projection_operator_F(grid, cutoff_ball(N), N);
    std::vector<LebesgueRow> out;
    for (double p : config.p) {
      out.push_back({N, p, estimate_opnorm_p(square, grid, p, options),
                     estimate_opnorm_p(ball, grid, p, options)});
    }
    return out;
  });

  begin_csv(os, config, "N,p,norm_square_cutoff,norm_ball_cutoff");
  std::vector<LebesgueRow> rows;
  for (const auto& block : blocks) {
    for (const auto& row : block) {
      os << row.N << ',' << row.p << ',' << row.norm_square << ',' << row.norm_ball << '\n';
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ContinuityRow> run_eigen_continuity(const ExperimentConfig& config, std::ostream& os) {
  validate(config);
  if (config.map.family != "bump") throw ConfigError("eigencont needs map.family = bump");
  const auto grid = make_grid(config.n_1d);
  const VectorXd reference = sorted_reference(config.M).head(config.k);

  auto rows = parallel_map(config.sweep, [&](double eps) {
    MapParams params = config.map;
    params.eps = eps;
    const auto map = make_family(params);
    const auto metrics = admissibility_metrics(map, kMetricDensity);
    const auto basis = solve_eigen(assemble(map, config.M, grid), config.k);
    const double dev = (basis.eigenvalues.array() / reference.array() - 1.0).abs().maxCoeff();
    return ContinuityRow{eps, metrics.w1inf_dist, dev, metrics.w1inf_dist > 0 ? dev / metrics.w1inf_dist : 0.0};
  });

  begin_csv(os, config, "eps,w1inf,max_rel_dev,ratio");
  for (const auto& row : rows) {
    os << row.eps << ',' << row.w1inf << ',' << row.max_rel_dev << ',' << row.ratio << '\n';
  }
  return rows;
}

}  // namespace lpcont
