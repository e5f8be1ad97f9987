#pragma once

// Resolvents (T - z)^{-1} and (T_phi - z)^{-1}, the multiplier symbol
// sigma_z(xi) = |xi|^2 / (1 - z |xi|^2) with its annular cutoff, contours
// around groups of inverse eigenvalues mu = 1/lambda, and Kato projections.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "lpcont/galerkin.hpp"
#include "lpcont/lattice.hpp"

namespace lpcont {

using Complex = std::complex<double>;

/// (m^2+n^2) / (1 - z (m^2+n^2)). Throws PoleError at z = 1/(m^2+n^2).
Complex sigma_z(const LatticeMode& mode, Complex z);

/// Value and partial derivatives through second order of a function on R^2.
struct SymbolJet {
  Complex value, dx, dy, dxx, dxy, dyy;
};

/// chi_z(xi) = sigma_z(|xi|) rho_z(|xi|) with rho_z a radial C^2 cutoff that
/// vanishes on a band around the pole radius 1/sqrt(Re z), equals 1 at and
/// below r_lo and at and above r_hi, and has quintic smoothstep transitions.
/// Without a cutoff (Re z <= 0) rho is identically 1.
struct MultiplierSymbol {
  Complex z;
  bool cutoff_active = false;
  double annulus_center = 0;
  double eps_width = 0;
  double r_lo = 0;
  double r_hi = 0;

  double rho(double r) const;
  double rho_d1(double r) const;
  double rho_d2(double r) const;
  /// chi and its radial derivatives d/dr, d^2/dr^2.
  std::array<Complex, 3> radial_jet(double r) const;
  SymbolJet jet(const Eigen::Vector2d& xi) const;
};

/// Cutoff for z whose annulus sits in the gap above the window:
/// g = sqrt(lambda_next) - sqrt(lambda_max), delta = g/4,
/// r_lo = sqrt(lambda_max) + delta, r_hi = sqrt(lambda_next) - delta, and the
/// zero band has half-width min(c - r_lo, r_hi - c)/2 around c = 1/sqrt(Re z).
/// Throws std::invalid_argument when c falls outside (r_lo, r_hi).
MultiplierSymbol build_cutoff(Complex z, const SpectrumWindow& window);

struct MihlinSampling {
  int density = 64;
  double r_min = 0.05;
  double r_max = 0;  // 0 selects 8 r_hi, or 1000 without a cutoff
};

/// max over samples and |alpha| <= 2 of |xi|^|alpha| |d^alpha chi_z(xi)|.
/// Samples: 4*density log-spaced radii, density radii across each transition
/// band, and density/4 + 1 angles in [0, pi/2].
double mihlin_constant(const MultiplierSymbol& symbol, const MihlinSampling& sampling = {});

/// Diagonal (T - z)^{-1} on coefficient vectors: c_{m,n} / (1/(m^2+n^2) - z).
/// Throws PoleError within 1e-10 of an inverse eigenvalue.
Eigen::VectorXcd apply_resolvent(const Eigen::VectorXcd& coeffs, Complex z);
/// (T_phi - z)^{-1} u = y with (Mw - z S) y = S u. Throws PoleError when the
/// system is numerically singular.
Eigen::VectorXcd apply_resolvent(const Eigen::VectorXcd& coeffs, Complex z, const GalerkinPair& pair);

/// One closed arc z = (a w + b)/(c w + d), w = radius e^{i theta}.
struct ContourArc {
  Complex a, b, c, d;
  double radius = 1;

  Complex point(double theta) const;
  Complex derivative(double theta) const;  // dz/dtheta
};

/// Closed contour made of one arc per group of adjacent enclosed values.
///
/// A shifted contour is used with the integrand (T - z)^{-1} + I/z, which has
/// the same integral over contours that exclude 0 and decays like 1/z^2, so
/// arcs may pass through infinity. Each arc is the Moebius image of a circle
/// that sends the enclosed hull [alpha, beta] to [-1, 1] and the nearest
/// excluded values (0 included) to -L and L; nodes sit at the geometric-mean
/// radius sqrt(L). A contour enclosing everything is a plain circle used with
/// (T - z)^{-1}.
struct Contour {
  std::vector<ContourArc> arcs;
  int nodes_per_arc = 0;
  bool shifted = true;
  std::vector<Complex> nodes;
  std::vector<Complex> weights;  // dz at each node (trapezoid)
  std::vector<double> enclosed_mu;
  std::vector<double> excluded_mu;
  double clearance = 0;

  /// Same arcs with a different node count.
  Contour with_nodes(int nodes) const;
};

/// Throws std::invalid_argument for non-positive values or overlap between
/// the two lists.
Contour build_contour(const std::vector<double>& enclosed_mu, const std::vector<double>& excluded_mu,
                      int nodes);

/// Contour around the window's mu values and the perturbed mu values, which
/// must stay strictly between the window's neighbouring mu values (otherwise
/// SplittingError). The window's distinct values must be consecutive
/// eigenvalues.
Contour build_contour(const SpectrumWindow& window, const std::vector<double>& perturbed_mu,
                      int nodes);

/// Contour enclosing 1/lambda_j and 1/lambda~_j for j in positions and
/// excluding both spectra elsewhere. Throws SplittingError when the perturbed
/// values break up a group that is contiguous in the unperturbed spectrum.
Contour build_contour_for_positions(const Eigen::VectorXd& lambda, const Eigen::VectorXd& lambda_tilde,
                                    const std::vector<Index>& positions, int nodes);

/// Quadrature of (1/2 pi i) \oint dz/(z - point), taken relative to the
/// origin (minus the same integral for 0) on shifted contours.
Complex winding_number(const Contour& contour, Complex point);

struct KatoOptions {
  bool check_refinement = true;
  double refinement_tol = 1e-8;
};

struct KatoResult {
  Eigen::MatrixXd projection;
  double imag_max = 0;          // largest |Im| entry of the quadrature sum
  double refinement_change = 0;  // Frobenius change when nodes double
  bool underresolved = false;
};

/// Re(-(1/2 pi i) sum_k dz_k R(z_k)) for the diagonal T of the given order.
KatoResult kato_projection(int order, const Contour& contour, const KatoOptions& options = {});
/// Same for T_phi = S^{-1} Mw.
KatoResult kato_projection(const GalerkinPair& pair, const Contour& contour,
                           const KatoOptions& options = {});

}  // namespace lpcont
