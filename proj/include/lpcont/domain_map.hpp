#pragma once

// Perturbation maps phi = id + (f, g) of the reference square [0,pi]^2 and
// the pointwise Jacobian quantities entering the pulled-back Dirichlet form:
//
//   A_phi = Dphi^{-1} Dphi^{-T} |det Dphi|,   M_phi = A_phi - I.

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace lpcont {

/// Displacement (f, g) and all partials through second order at a point.
struct DisplacementJet {
  double f = 0, g = 0;
  double fx = 0, fy = 0, gx = 0, gy = 0;
  double fxx = 0, fxy = 0, fyy = 0;
  double gxx = 0, gxy = 0, gyy = 0;
};

class PerturbationMap {
 public:
  using Evaluator = std::function<DisplacementJet(double x, double y)>;

  PerturbationMap(std::string label, Evaluator evaluator)
      : label_(std::move(label)), evaluator_(std::move(evaluator)) {}

  DisplacementJet jet(double x, double y) const { return evaluator_(x, y); }
  DisplacementJet jet(const Eigen::Vector2d& p) const { return evaluator_(p.x(), p.y()); }

  /// phi(p) = p + (f, g)(p).
  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const {
    auto d = jet(p);
    return {p.x() + d.f, p.y() + d.g};
  }

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  Evaluator evaluator_;
};

struct JacobianData {
  Eigen::Matrix2d J;  // Dphi
  double det = 1;
  Eigen::Matrix2d A;  // Dphi^{-1} Dphi^{-T} |det|
  Eigen::Matrix2d M;  // A - I, entries (a b; c d)
};

/// Sup-norm style metrics of a map over a uniform sample grid of the closed
/// square. The W^{k,inf} distances are sampled maxima, hence lower bounds on
/// the true suprema.
struct AdmissibilityMetrics {
  double inf_det = 1;
  double sup_det = 1;
  double sup_one_minus_det = 0;
  double w1inf_dist = 0;
  double w2inf_dist = 0;
  double kappa = 0;
};

/// Partial derivatives of the entries of M_phi at a point.
struct DeviationGradient {
  Eigen::Matrix2d dx;
  Eigen::Matrix2d dy;

  /// (a_x + b_y, c_x + d_y)
  Eigen::Vector2d divergence_rows() const {
    return {dx(0, 0) + dy(0, 1), dx(1, 0) + dy(1, 1)};
  }
};

/// Map family parameters as they appear in experiment configs.
struct MapParams {
  std::string family = "identity";  // identity | affine | conformal_quadratic | bump
  double a = 1.0;
  double b = 1.0;
  double eps = 0.0;
  // off-center default: a bump centered in the square moves opposite edges
  // symmetrically and the eigenvalues only change at second order in eps
  double cx = 1.2;
  double cy = 1.4;
  double width = 1.0;
};

inline constexpr double kDegenerateDet = 1e-12;
inline constexpr double kDefaultFdStep = 3.14159265358979323846 / 1024.0;

/// Throws AdmissibilityError when |det Dphi| < 1e-12.
JacobianData jacobian_at(const PerturbationMap& map, const Eigen::Vector2d& point);

/// Entry derivatives of M_phi by centered differences of step h.
DeviationGradient deviation_gradient_fd(const PerturbationMap& map, const Eigen::Vector2d& point,
                                        double h = kDefaultFdStep);
/// The same derivatives from the analytic second partials of the map.
DeviationGradient deviation_gradient_analytic(const PerturbationMap& map,
                                              const Eigen::Vector2d& point);

/// Extrema over a sample_density x sample_density grid of [0,pi]^2.
/// kappa = max of |a|,|b|,|c|,|d|,|a_x+b_y|,|c_x+d_y| with the divergence rows
/// from centered differences. Throws AdmissibilityError if inf det <= 0.
AdmissibilityMetrics admissibility_metrics(const PerturbationMap& map, int sample_density = 128);

PerturbationMap family_identity();
/// phi(x,y) = (a x, b y).
PerturbationMap family_affine(double a, double b);
/// phi(z) = z + eps z^2 in complex notation; requires |eps| < 1/(4 pi).
PerturbationMap family_conformal_quadratic(double eps);
/// f = g = eps exp(-|p - c|^2 / width^2). The Gaussian tail reaches the
/// boundary, so the perturbed domain differs from the square.
PerturbationMap family_bump(double eps, const Eigen::Vector2d& center, double width);
/// family_bump at the MapParams default center and width.
PerturbationMap family_bump(double eps);

/// Builds a family from config parameters; throws ConfigError for unknown
/// families.
PerturbationMap make_family(const MapParams& params);

}  // namespace lpcont
