#include "lpcont/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "lpcont/errors.hpp"

namespace lpcont {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// quintic smoothstep and its derivatives on [0, 1]
double smooth(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smooth_d1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
double smooth_d2(double t) { return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }

struct Ramp {
  double value, d1, d2;
};

}  // namespace

Complex sigma_z(const LatticeMode& mode, Complex z) {
  const auto lambda = static_cast<double>(mode.eigenvalue());
  const Complex denom = 1.0 - z * lambda;
  if (std::abs(denom) <= 1e-14) {
    throw PoleError("sigma_z has a pole at z = 1/" + std::to_string(mode.eigenvalue()));
  }
  return lambda / denom;
}

namespace {

Ramp rho_profile(const MultiplierSymbol& s, double r) {
  if (!s.cutoff_active) return {1.0, 0.0, 0.0};
  const double inner = s.annulus_center - s.eps_width;
  const double outer = s.annulus_center + s.eps_width;
  if (r <= s.r_lo || r >= s.r_hi) return {1.0, 0.0, 0.0};
  if (r >= inner && r <= outer) return {0.0, 0.0, 0.0};
  if (r < inner) {
    const double h = inner - s.r_lo;
    const double t = (r - s.r_lo) / h;
    return {1.0 - smooth(t), -smooth_d1(t) / h, -smooth_d2(t) / (h * h)};
  }
  const double h = s.r_hi - outer;
  const double t = (r - outer) / h;
  return {smooth(t), smooth_d1(t) / h, smooth_d2(t) / (h * h)};
}

}  // namespace

double MultiplierSymbol::rho(double r) const { return rho_profile(*this, r).value; }
double MultiplierSymbol::rho_d1(double r) const { return rho_profile(*this, r).d1; }
double MultiplierSymbol::rho_d2(double r) const { return rho_profile(*this, r).d2; }

namespace {

// r2 is passed separately so integer points get sigma from the exact m^2+n^2
std::array<Complex, 3> radial_terms(const MultiplierSymbol& s, double r, double r2) {
  const Ramp rho = rho_profile(s, r);
  if (rho.value == 0.0 && rho.d1 == 0.0 && rho.d2 == 0.0) return {0.0, 0.0, 0.0};
  const Complex d = 1.0 - s.z * r2;
  const Complex sigma = r2 / d;
  const Complex sigma1 = 2.0 * r / (d * d);
  const Complex sigma2 = 2.0 / (d * d) + 8.0 * s.z * r2 / (d * d * d);
  return {sigma * rho.value, sigma1 * rho.value + sigma * rho.d1,
          sigma2 * rho.value + 2.0 * sigma1 * rho.d1 + sigma * rho.d2};
}

}  // namespace

std::array<Complex, 3> MultiplierSymbol::radial_jet(double r) const { return radial_terms(*this, r, r * r); }

SymbolJet MultiplierSymbol::jet(const Eigen::Vector2d& xi) const {
  const double r2 = xi.squaredNorm();
  const double r = std::sqrt(r2);
  const auto [g, g1, g2] = radial_terms(*this, r, r2);
  if (r == 0.0) return {g, 0.0, 0.0, g2, 0.0, g2};
  const double x = xi.x(), y = xi.y();
  const double r3 = r2 * r;
  SymbolJet out;
  out.value = g;
  out.dx = g1 * x / r;
  out.dy = g1 * y / r;
  out.dxx = g2 * x * x / r2 + g1 * (1.0 / r - x * x / r3);
  out.dyy = g2 * y * y / r2 + g1 * (1.0 / r - y * y / r3);
  out.dxy = g2 * x * y / r2 - g1 * x * y / r3;
  return out;
}

MultiplierSymbol build_cutoff(Complex z, const SpectrumWindow& window) {
  if (window.distinct_values_inside.empty()) throw std::invalid_argument("empty spectrum window");
  if (window.gap_above <= 0) throw std::invalid_argument("spectrum window has an empty gap");
  MultiplierSymbol s;
  s.z = z;
  if (z.real() <= 0.0) return s;

  const double low = std::sqrt(static_cast<double>(window.max_inside()));
  const double high = std::sqrt(static_cast<double>(window.max_inside() + window.gap_above));
  const double delta = (high - low) / 4.0;
  s.cutoff_active = true;
  s.r_lo = low + delta;
  s.r_hi = high - delta;
  s.annulus_center = 1.0 / std::sqrt(z.real());
  if (!(s.annulus_center > s.r_lo && s.annulus_center < s.r_hi)) {
    throw std::invalid_argument("1/sqrt(Re z) lies outside the targeted gap");
  }
  s.eps_width = 0.5 * std::min(s.annulus_center - s.r_lo, s.r_hi - s.annulus_center);
  return s;
}

double mihlin_constant(const MultiplierSymbol& symbol, const MihlinSampling& sampling) {
  if (sampling.density < 4 || !(sampling.r_min > 0.0)) {
    throw std::invalid_argument("mihlin sampling needs density >= 4 and r_min > 0");
  }
  double r_max = sampling.r_max;
  if (r_max <= 0.0) r_max = symbol.cutoff_active ? 8.0 * symbol.r_hi : 1000.0;

  std::vector<double> radii;
  const int n_log = 4 * sampling.density;
  for (int i = 0; i < n_log; ++i) {
    radii.push_back(sampling.r_min * std::pow(r_max / sampling.r_min, i / (n_log - 1.0)));
  }
  if (symbol.cutoff_active) {
    auto band = [&](double a, double b) {
      for (int i = 0; i < sampling.density; ++i) radii.push_back(a + (b - a) * i / (sampling.density - 1.0));
    };
    band(symbol.r_lo, symbol.annulus_center - symbol.eps_width);
    band(symbol.annulus_center + symbol.eps_width, symbol.r_hi);
  }

  const int n_angle = sampling.density / 4 + 1;
  double a = 0.0;
  for (double r : radii) {
    for (int k = 0; k < n_angle; ++k) {
      const double t = 0.5 * kPi * k / (n_angle - 1.0);
      const auto j = symbol.jet({r * std::cos(t), r * std::sin(t)});
      a = std::max({a, std::abs(j.value), r * std::abs(j.dx), r * std::abs(j.dy),
                    r * r * std::abs(j.dxx), r * r * std::abs(j.dxy), r * r * std::abs(j.dyy)});
    }
  }
  return a;
}

VectorXcd apply_resolvent(const VectorXcd& coeffs, Complex z) {
  const SineBasis basis(coefficient_order(coeffs.size()));
  const VectorXd lambda = basis.eigenvalues();
  VectorXcd out(coeffs.size());
  for (Index k = 0; k < coeffs.size(); ++k) {
    const Complex gap = 1.0 / lambda[k] - z;
    if (std::abs(gap) < 1e-10) throw PoleError("z is an inverse eigenvalue of T");
    out[k] = coeffs[k] / gap;
  }
  return out;
}

VectorXcd apply_resolvent(const VectorXcd& coeffs, Complex z, const GalerkinPair& pair) {
  if (coeffs.size() != pair.S.rows()) {
    throw std::invalid_argument("coefficient vector does not match the Galerkin order");
  }
  const MatrixXcd system = pair.Mw.cast<Complex>() - z * pair.S.cast<Complex>();
  Eigen::PartialPivLU<MatrixXcd> lu(system);
  if (!(lu.rcond() > 1e-14)) throw PoleError("z is numerically an inverse eigenvalue of T_phi");
  return lu.solve(pair.S.cast<Complex>() * coeffs);
}

Complex ContourArc::point(double theta) const {
  const Complex w = std::polar(radius, theta);
  return (a * w + b) / (c * w + d);
}

Complex ContourArc::derivative(double theta) const {
  const Complex w = std::polar(radius, theta);
  const Complex denom = c * w + d;
  return (a * d - b * c) / (denom * denom) * kI * w;
}

namespace {

/// Moebius matrix sending (z1, z2, z3) to (0, 1, infinity).
Eigen::Matrix2cd three_point(Complex z1, Complex z2, Complex z3) {
  Eigen::Matrix2cd m;
  m << z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1);
  return m;
}

/// Arc separating [alpha, beta] from e2 < alpha and e1 (above beta, or the
/// wrap-around value 0 when nothing lies above).
ContourArc mobius_arc(double alpha, double beta, double e1, double e2) {
  const double cr = ((alpha - e1) * (beta - e2)) / ((alpha - e2) * (beta - e1));
  const double s = std::sqrt(cr);
  const double L = (s + 1.0) / (s - 1.0);
  const Eigen::Matrix2cd f = three_point(-1.0, 1.0, L);
  const Eigen::Matrix2cd g = three_point(alpha, beta, e1);
  const Eigen::Matrix2cd h = g.inverse() * f;
  return {h(0, 0), h(0, 1), h(1, 0), h(1, 1), std::sqrt(L)};
}

struct Run {
  double alpha, beta;
};

std::vector<Run> group_runs(const std::vector<double>& enclosed, const std::vector<double>& excluded) {
  std::vector<Run> runs;
  for (double v : enclosed) {
    if (!runs.empty()) {
      const double prev = runs.back().beta;
      const bool blocked = std::any_of(excluded.begin(), excluded.end(),
                                       [&](double e) { return e > prev && e < v; });
      if (!blocked) {
        runs.back().beta = v;
        continue;
      }
    }
    runs.push_back({v, v});
  }
  return runs;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void place_nodes(Contour& contour) {
  const int n = contour.nodes_per_arc;
  contour.nodes.clear();
  contour.weights.clear();
  for (const auto& arc : contour.arcs) {
    for (int k = 0; k < n; ++k) {
      const double theta = 2.0 * kPi * (k + 0.5) / n;
      contour.nodes.push_back(arc.point(theta));
      contour.weights.push_back(arc.derivative(theta) * (2.0 * kPi / n));
    }
  }
}

double measure_clearance(const Contour& contour) {
  constexpr int kSamples = 4096;
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& arc : contour.arcs) {
    for (int k = 0; k < kSamples; ++k) {
      const Complex z = arc.point(2.0 * kPi * k / kSamples);
      if (!std::isfinite(std::abs(z))) continue;
      for (double mu : contour.enclosed_mu) clearance = std::min(clearance, std::abs(z - mu));
      for (double mu : contour.excluded_mu) clearance = std::min(clearance, std::abs(z - mu));
    }
  }
  return clearance;
}

}  // namespace

Contour Contour::with_nodes(int nodes) const {
  if (nodes < 4) throw std::invalid_argument("contour needs at least 4 nodes per arc");
  Contour out = *this;
  out.nodes_per_arc = nodes;
  place_nodes(out);
  return out;
}

Contour build_contour(const std::vector<double>& enclosed_mu, const std::vector<double>& excluded_mu,
                      int nodes) {
  if (nodes < 4) throw std::invalid_argument("contour needs at least 4 nodes per arc");
  if (enclosed_mu.empty()) throw std::invalid_argument("contour must enclose at least one value");
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!std::all_of(enclosed_mu.begin(), enclosed_mu.end(), positive) ||
      !std::all_of(excluded_mu.begin(), excluded_mu.end(), positive)) {
    throw std::invalid_argument("contour values must be positive and finite");
  }

  Contour contour;
  contour.enclosed_mu = sorted_unique(enclosed_mu);
  contour.excluded_mu = sorted_unique(excluded_mu);
  for (double e : contour.excluded_mu) {
    if (std::binary_search(contour.enclosed_mu.begin(), contour.enclosed_mu.end(), e)) {
      throw std::invalid_argument("a value is both enclosed and excluded");
    }
  }
  contour.nodes_per_arc = nodes;

  const auto runs = group_runs(contour.enclosed_mu, contour.excluded_mu);
  if (contour.excluded_mu.empty()) {
    // everything enclosed: a plain circle, no point needs to stay outside
    const double alpha = runs.front().alpha, beta = runs.front().beta;
    const double radius = std::max(beta - alpha, 0.5 * alpha);
    contour.shifted = false;
    contour.arcs.push_back({radius, 0.5 * (alpha + beta), 0.0, 1.0, 1.0});
  } else {
    contour.shifted = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      // everything outside this run is excluded, including 0 and the other runs
      std::vector<double> outside = contour.excluded_mu;
      outside.push_back(0.0);
      for (std::size_t q = 0; q < runs.size(); ++q) {
        if (q == r) continue;
        for (double v : contour.enclosed_mu) {
          if (v >= runs[q].alpha && v <= runs[q].beta) outside.push_back(v);
        }
      }
      double alpha = runs[r].alpha, beta = runs[r].beta;
      double e2 = 0.0;
      double e1 = std::numeric_limits<double>::infinity();
      for (double e : outside) {
        if (e < alpha) e2 = std::max(e2, e);
        if (e > beta) e1 = std::min(e1, e);
      }
      const bool wrap = std::isinf(e1);
      if (beta - alpha <= 1e-9 * beta) {
        // a single point: open it up slightly so the cross ratio exceeds 1
        double room = alpha - e2;
        if (!wrap) room = std::min(room, e1 - beta);
        const double h = 1e-3 * room;
        alpha -= h;
        beta += h;
      }
      contour.arcs.push_back(mobius_arc(alpha, beta, wrap ? 0.0 : e1, e2));
    }
  }
  place_nodes(contour);
  contour.clearance = measure_clearance(contour);
  return contour;
}

Contour build_contour(const SpectrumWindow& window, const std::vector<double>& perturbed_mu,
                      int nodes) {
  const auto& inside = window.distinct_values_inside;
  if (inside.empty()) throw std::invalid_argument("empty spectrum window");
  for (std::size_t i = 0; i + 1 < inside.size(); ++i) {
    if (next_eigenvalue(inside[i]) != inside[i + 1]) {
      throw std::invalid_argument("window values are not consecutive eigenvalues");
    }
  }
  std::vector<double> excluded;
  double mu_upper = std::numeric_limits<double>::infinity();
  if (window.gap_below) {
    mu_upper = 1.0 / static_cast<double>(window.min_inside() - *window.gap_below);
    excluded.push_back(mu_upper);
  }
  const double mu_lower = 1.0 / static_cast<double>(window.max_inside() + window.gap_above);
  excluded.push_back(mu_lower);
  for (double mu : perturbed_mu) {
    if (!(mu > mu_lower && mu < mu_upper)) {
      throw SplittingError("perturbed inverse eigenvalue " + std::to_string(mu) +
                           " escaped the spectral window");
    }
  }
  std::vector<double> enclosed = window.mu_values;
  enclosed.insert(enclosed.end(), perturbed_mu.begin(), perturbed_mu.end());
  return build_contour(enclosed, excluded, nodes);
}

Contour build_contour_for_positions(const VectorXd& lambda, const VectorXd& lambda_tilde,
                                    const std::vector<Index>& positions, int nodes) {
  if (lambda.size() != lambda_tilde.size()) {
    throw std::invalid_argument("spectra have different lengths");
  }
  std::vector<bool> selected(static_cast<std::size_t>(lambda.size()), false);
  for (Index p : positions) {
    if (p < 0 || p >= lambda.size()) throw std::invalid_argument("position out of range");
    selected[static_cast<std::size_t>(p)] = true;
  }
  std::vector<double> in_plain, out_plain, in_all, out_all;
  for (Index j = 0; j < lambda.size(); ++j) {
    const bool s = selected[static_cast<std::size_t>(j)];
    (s ? in_plain : out_plain).push_back(1.0 / lambda[j]);
    (s ? in_all : out_all).push_back(1.0 / lambda[j]);
    (s ? in_all : out_all).push_back(1.0 / lambda_tilde[j]);
  }
  const auto plain_runs = group_runs(sorted_unique(in_plain), sorted_unique(out_plain));
  const auto all_runs = group_runs(sorted_unique(in_all), sorted_unique(out_all));
  if (all_runs.size() != plain_runs.size()) {
    throw SplittingError("perturbed eigenvalues left their spectral gaps");
  }
  return build_contour(in_all, out_all, nodes);
}

Complex winding_number(const Contour& contour, Complex point) {
  Complex sum = 0.0;
  for (std::size_t k = 0; k < contour.nodes.size(); ++k) {
    const Complex z = contour.nodes[k];
    Complex f = 1.0 / (z - point);
    if (contour.shifted) f -= 1.0 / z;
    sum += contour.weights[k] * f;
  }
  return sum / (2.0 * kPi * kI);
}

namespace {

constexpr int kChunks = 8;

/// Sum over contour nodes of dz_k * integrand(k), split into a fixed number
/// of chunks evaluated concurrently and added in chunk order.
template <typename Integrand>
MatrixXcd contour_sum(const Contour& contour, Index n, Integrand integrand) {
  const auto total = static_cast<int>(contour.nodes.size());
  std::vector<std::future<MatrixXcd>> parts;
  for (int c = 0; c < kChunks; ++c) {
    const int begin = total * c / kChunks, end = total * (c + 1) / kChunks;
    parts.push_back(std::async(std::launch::async, [&, begin, end] {
      MatrixXcd acc = MatrixXcd::Zero(n, n);
      for (int k = begin; k < end; ++k) {
        acc += contour.weights[static_cast<std::size_t>(k)] *
               integrand(contour.nodes[static_cast<std::size_t>(k)]);
      }
      return acc;
    }));
  }
  MatrixXcd sum = MatrixXcd::Zero(n, n);
  for (auto& part : parts) sum += part.get();
  return sum;
}

KatoResult finish(const MatrixXcd& sum) {
  const MatrixXcd p = sum / (-2.0 * kPi * kI);
  return {p.real(), p.imag().cwiseAbs().maxCoeff(), 0.0, false};
}

template <typename Compute>
KatoResult with_refinement(const Contour& contour, const KatoOptions& options, Compute compute) {
  KatoResult result = compute(contour);
  if (options.check_refinement) {
    const KatoResult fine = compute(contour.with_nodes(2 * contour.nodes_per_arc));
    result.refinement_change = (fine.projection - result.projection).norm();
    result.underresolved = result.refinement_change > options.refinement_tol;
  }
  return result;
}

}  // namespace

KatoResult kato_projection(int order, const Contour& contour, const KatoOptions& options) {
  const VectorXd mu = SineBasis(order).eigenvalues().cwiseInverse();
  return with_refinement(contour, options, [&](const Contour& c) {
    VectorXcd diag = VectorXcd::Zero(mu.size());
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
      const Complex z = c.nodes[k];
      VectorXcd r = (mu.cast<Complex>().array() - z).inverse();
      if (c.shifted) r.array() += 1.0 / z;
      diag += c.weights[k] * r;
    }
    return finish(diag.asDiagonal().toDenseMatrix());
  });
}

KatoResult kato_projection(const GalerkinPair& pair, const Contour& contour, const KatoOptions& options) {
  const Index n = pair.S.rows();
  const MatrixXcd s = pair.S.cast<Complex>();
  const MatrixXcd mw = pair.Mw.cast<Complex>();
  return with_refinement(contour, options, [&](const Contour& c) {
    return finish(contour_sum(c, n, [&](Complex z) {
      Eigen::PartialPivLU<MatrixXcd> lu(mw - z * s);
      MatrixXcd r = lu.solve(s);
      if (c.shifted) r.diagonal().array() += 1.0 / z;
      return r;
    }));
  });
}

}  // namespace lpcont
