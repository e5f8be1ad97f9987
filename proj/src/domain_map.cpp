#include "lpcont/domain_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lpcont/errors.hpp"

namespace lpcont {

namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;

Matrix2d jacobian_matrix(const DisplacementJet& d) {
  Matrix2d J;
  J << 1.0 + d.fx, d.fy, d.gx, 1.0 + d.gy;
  return J;
}

Matrix2d coefficient_matrix(const Matrix2d& J, double det) {
  Matrix2d K = J.inverse();
  Matrix2d A = K * K.transpose() * std::abs(det);
  // exact symmetry: the two off-diagonal products differ only by rounding
  double off = 0.5 * (A(0, 1) + A(1, 0));
  A(0, 1) = A(1, 0) = off;
  return A;
}

double sampled_det(const PerturbationMap& map, double x, double y) {
  auto d = map.jet(x, y);
  return (1.0 + d.fx) * (1.0 + d.gy) - d.fy * d.gx;
}

void require_positive_det_on_square(const PerturbationMap& map, int density) {
  for (int i = 0; i < density; ++i) {
    for (int j = 0; j < density; ++j) {
      double x = std::numbers::pi * i / (density - 1);
      double y = std::numbers::pi * j / (density - 1);
      if (sampled_det(map, x, y) <= 0.0) {
        throw AdmissibilityError(map.label() + ": det Dphi <= 0 at sample (" +
                                 std::to_string(x) + ", " + std::to_string(y) + ")");
      }
    }
  }
}

}  // namespace

JacobianData jacobian_at(const PerturbationMap& map, const Vector2d& point) {
  JacobianData out;
  out.J = jacobian_matrix(map.jet(point));
  out.det = out.J(0, 0) * out.J(1, 1) - out.J(0, 1) * out.J(1, 0);
  if (std::abs(out.det) < kDegenerateDet) {
    throw AdmissibilityError(map.label() + ": singular Jacobian");
  }
  out.A = coefficient_matrix(out.J, out.det);
  out.M = out.A - Matrix2d::Identity();
  return out;
}

DeviationGradient deviation_gradient_fd(const PerturbationMap& map, const Vector2d& point,
                                        double h) {
  const Vector2d ex(h, 0.0), ey(0.0, h);
  DeviationGradient grad;
  grad.dx = (jacobian_at(map, point + ex).M - jacobian_at(map, point - ex).M) / (2.0 * h);
  grad.dy = (jacobian_at(map, point + ey).M - jacobian_at(map, point - ey).M) / (2.0 * h);
  return grad;
}

DeviationGradient deviation_gradient_analytic(const PerturbationMap& map, const Vector2d& point) {
  auto d = map.jet(point);
  JacobianData jd = jacobian_at(map, point);
  const Matrix2d K = jd.J.inverse();
  const Matrix2d KKt = K * K.transpose();
  const double abs_det = std::abs(jd.det);

  auto derivative = [&](const Matrix2d& dJ) {
    Matrix2d dK = -K * dJ * K;
    double d_abs_det = abs_det * (K * dJ).trace();
    return Matrix2d((dK * K.transpose() + K * dK.transpose()) * abs_det + KKt * d_abs_det);
  };

  Matrix2d dJx, dJy;
  dJx << d.fxx, d.fxy, d.gxx, d.gxy;
  dJy << d.fxy, d.fyy, d.gxy, d.gyy;
  return {derivative(dJx), derivative(dJy)};
}

AdmissibilityMetrics admissibility_metrics(const PerturbationMap& map, int sample_density) {
  if (sample_density < 16) throw std::invalid_argument("sample_density must be >= 16");

  AdmissibilityMetrics metrics;
  metrics.inf_det = std::numeric_limits<double>::infinity();
  metrics.sup_det = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < sample_density; ++i) {
    for (int j = 0; j < sample_density; ++j) {
      const Vector2d p(std::numbers::pi * i / (sample_density - 1),
                       std::numbers::pi * j / (sample_density - 1));
      const auto d = map.jet(p);
      const double det = (1.0 + d.fx) * (1.0 + d.gy) - d.fy * d.gx;
      metrics.inf_det = std::min(metrics.inf_det, det);
      metrics.sup_det = std::max(metrics.sup_det, det);
      if (det <= 0.0) continue;
      metrics.sup_one_minus_det = std::max(metrics.sup_one_minus_det, std::abs(1.0 - det));

      const double w1 = std::max({std::abs(d.f), std::abs(d.g), std::abs(d.fx), std::abs(d.fy),
                                  std::abs(d.gx), std::abs(d.gy)});
      const double w2 = std::max({w1, std::abs(d.fxx), std::abs(d.fxy), std::abs(d.fyy),
                                  std::abs(d.gxx), std::abs(d.gxy), std::abs(d.gyy)});
      metrics.w1inf_dist = std::max(metrics.w1inf_dist, w1);
      metrics.w2inf_dist = std::max(metrics.w2inf_dist, w2);

      const Eigen::Matrix2d M = jacobian_at(map, p).M;
      const Eigen::Vector2d div = deviation_gradient_fd(map, p).divergence_rows();
      metrics.kappa = std::max({metrics.kappa, M.cwiseAbs().maxCoeff(), div.cwiseAbs().maxCoeff()});
    }
  }
  if (metrics.inf_det <= 0.0) {
    throw AdmissibilityError(map.label() + ": inf det Dphi <= 0 on the sample grid");
  }
  return metrics;
}

PerturbationMap family_identity() {
  return PerturbationMap("identity", [](double, double) { return DisplacementJet{}; });
}

PerturbationMap family_affine(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw AdmissibilityError("affine map requires a, b > 0");
  }
  return PerturbationMap("affine(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")",
                         [a, b](double x, double y) {
                           DisplacementJet d;
                           d.f = (a - 1.0) * x;
                           d.g = (b - 1.0) * y;
                           d.fx = a - 1.0;
                           d.gy = b - 1.0;
                           return d;
                         });
}

PerturbationMap family_conformal_quadratic(double eps) {
  if (!(std::abs(eps) < 1.0 / (4.0 * std::numbers::pi))) {
    throw AdmissibilityError("conformal_quadratic requires |eps| < 1/(4 pi)");
  }
  return PerturbationMap("conformal_quadratic(eps=" + std::to_string(eps) + ")",
                         [eps](double x, double y) {
                           DisplacementJet d;
                           d.f = eps * (x * x - y * y);
                           d.g = 2.0 * eps * x * y;
                           d.fx = 2.0 * eps * x;
                           d.fy = -2.0 * eps * y;
                           d.gx = 2.0 * eps * y;
                           d.gy = 2.0 * eps * x;
                           d.fxx = 2.0 * eps;
                           d.fyy = -2.0 * eps;
                           d.gxy = 2.0 * eps;
                           return d;
                         });
}

PerturbationMap family_bump(double eps, const Vector2d& center, double width) {
  if (!(width > 0.0)) throw AdmissibilityError("bump width must be positive");
  const double pi = std::numbers::pi;
  if (!(center.x() > 0.0 && center.x() < pi && center.y() > 0.0 && center.y() < pi)) {
    throw AdmissibilityError("bump center must lie inside (0,pi)^2");
  }
  const double cx = center.x(), cy = center.y();
  const double w2 = width * width;
  PerturbationMap map(
      "bump(eps=" + std::to_string(eps) + ",width=" + std::to_string(width) + ")",
      [=](double x, double y) {
        const double u = x - cx, v = y - cy;
        const double e = eps * std::exp(-(u * u + v * v) / w2);
        DisplacementJet d;
        d.f = d.g = e;
        d.fx = d.gx = -2.0 * u / w2 * e;
        d.fy = d.gy = -2.0 * v / w2 * e;
        d.fxx = d.gxx = (4.0 * u * u / (w2 * w2) - 2.0 / w2) * e;
        d.fxy = d.gxy = 4.0 * u * v / (w2 * w2) * e;
        d.fyy = d.gyy = (4.0 * v * v / (w2 * w2) - 2.0 / w2) * e;
        return d;
      });
  require_positive_det_on_square(map, 64);
  return map;
}

PerturbationMap family_bump(double eps) {
  const MapParams defaults;
  return family_bump(eps, {defaults.cx, defaults.cy}, defaults.width);
}

PerturbationMap make_family(const MapParams& params) {
  if (params.family == "identity") return family_identity();
  if (params.family == "affine") return family_affine(params.a, params.b);
  if (params.family == "conformal_quadratic") return family_conformal_quadratic(params.eps);
  if (params.family == "bump") return family_bump(params.eps, {params.cx, params.cy}, params.width);
  throw ConfigError("unknown map.family '" + params.family + "'");
}

}  // namespace lpcont
