#include "lpcont/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <vector>

namespace lpcont {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

LinearOperator identity_operator(Index dim) {
  auto same = [](const VectorXd& x) { return x; };
  return {dim, same, same};
}

LinearOperator matrix_operator(MatrixXd matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("operator matrix must be square");
  auto shared = std::make_shared<const MatrixXd>(std::move(matrix));
  return {shared->rows(), [shared](const VectorXd& x) -> VectorXd { return *shared * x; },
          [shared](const VectorXd& x) -> VectorXd { return shared->transpose() * x; }};
}

LinearOperator low_rank_operator(MatrixXd left, MatrixXd right) {
  if (left.rows() != right.rows() || left.cols() != right.cols()) {
    throw std::invalid_argument("low-rank factors must have equal shapes");
  }
  auto l = std::make_shared<const MatrixXd>(std::move(left));
  auto r = std::make_shared<const MatrixXd>(std::move(right));
  return {l->rows(),
          [l, r](const VectorXd& x) -> VectorXd { return *l * (r->transpose() * x); },
          [l, r](const VectorXd& x) -> VectorXd { return *r * (l->transpose() * x); }};
}

namespace {

double pnorm(const VectorXd& v, double p) { return std::pow(v.array().abs().pow(p).sum(), 1.0 / p); }

/// sign(v) |v|^{p-1} / ||v||_p^{p-1}: the unit-q-norm vector attaining <., v> = ||v||_p.
VectorXd dual(const VectorXd& v, double p) {
  const double norm = pnorm(v, p);
  if (norm == 0.0) return VectorXd::Zero(v.size());
  ArrayXd scaled = v.array() / norm;
  return (scaled.sign() * scaled.abs().pow(p - 1.0)).matrix();
}

double power_iteration(const LinearOperator& op, const ArrayXd& scale, VectorXd x, double p,
                       int iters) {
  const double q = p / (p - 1.0);
  // hat(A) = D A D^{-1} with D = diag(w^{1/p}) turns the weighted norm into the plain one
  auto apply_hat = [&](const VectorXd& v) -> VectorXd {
    return (scale * op.apply((v.array() / scale).matrix()).array()).matrix();
  };
  auto apply_hat_t = [&](const VectorXd& v) -> VectorXd {
    return (op.apply_transpose((scale * v.array()).matrix()).array() / scale).matrix();
  };

  x /= pnorm(x, p);
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    VectorXd y = apply_hat(x);
    const double nu = pnorm(y, p);
    best = std::max(best, nu);
    if (nu == 0.0) break;
    VectorXd z = apply_hat_t(dual(y, p));
    if (pnorm(z, q) <= z.dot(x)) break;
    x = dual(z, q);
  }
  return best;
}

}  // namespace

double estimate_opnorm_p(const LinearOperator& op, const VectorXd& weights, double p,
                         const OpNormOptions& options) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("estimate_opnorm_p needs 1 < p < inf");
  if (weights.size() != op.dim) throw std::invalid_argument("weights do not match operator size");
  if (options.restarts < 1 || options.iters < 1) {
    throw std::invalid_argument("restarts and iters must be positive");
  }
  const ArrayXd scale = weights.array().pow(1.0 / p);

  // start vectors are drawn up front so the result does not depend on scheduling
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<VectorXd> starts;
  starts.push_back(VectorXd::Ones(op.dim));
  for (int r = 1; r < options.restarts; ++r) {
    VectorXd v(op.dim);
    for (Index i = 0; i < op.dim; ++i) v[i] = normal(rng);
    starts.push_back(std::move(v));
  }

  std::vector<std::future<double>> runs;
  for (auto& start : starts) {
    runs.push_back(std::async(std::launch::async, [&, start] {
      return power_iteration(op, scale, start, p, options.iters);
    }));
  }
  double best = 0.0;
  for (auto& run : runs) best = std::max(best, run.get());
  return best;
}

}  // namespace lpcont
