#pragma once

// Lower bounds on weighted l^p -> l^p operator norms by the duality-map
// power iteration (Boyd's method in Higham's formulation).

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "lpcont/grid.hpp"

namespace lpcont {

/// A real linear map on R^dim given by its action and the action of its
/// plain (unweighted) transpose.
struct LinearOperator {
  using Action = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  Index dim = 0;
  Action apply;
  Action apply_transpose;
};

LinearOperator identity_operator(Index dim);
LinearOperator matrix_operator(Eigen::MatrixXd matrix);
/// x -> left * (right^T * x).
LinearOperator low_rank_operator(Eigen::MatrixXd left, Eigen::MatrixXd right);

struct OpNormOptions {
  int restarts = 8;
  int iters = 60;
  std::uint64_t seed = 20240601;
};

/// Best ratio ||A x||_p / ||x||_p found over `restarts` duality-map power
/// iterations, the norms weighted by `weights`. Every reported value is
/// attained by an actual vector, so the result never exceeds the true norm
/// (up to rounding). Deterministic for a fixed seed. Requires 1 < p < inf.
double estimate_opnorm_p(const LinearOperator& op, const Eigen::VectorXd& weights, double p,
                         const OpNormOptions& options = {});

inline double estimate_opnorm_p(const LinearOperator& op, const QuadGrid& grid, double p,
                                const OpNormOptions& options = {}) {
  return estimate_opnorm_p(op, grid.weights(), p, options);
}

}  // namespace lpcont
