#pragma once

// The imaginary coordinate shift eta = e^{-theta p}, acting as
// (eta f)(x) = f(x + i theta). It is applied only where a closed form can be
// continued off the real axis: polynomials, Gaussian test functions, catalog
// potentials and catalog eigenfunctions.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "potential.hpp"
#include "quadrature.hpp"

namespace pseudospec {

/// Coefficients of p(x + i theta), by repeated synthetic division (Taylor
/// shift). Exact up to rounding: the Taylor series of a polynomial is finite.
inline PolyCoeffs shift_polynomial(const PolyCoeffs& p, double theta) {
  std::vector<cplx> a(p.coeffs().begin(), p.coeffs().end());
  const cplx s{0.0, theta};
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) a[j] += s * a[j + 1];
  return PolyCoeffs(std::move(a));
}

struct Gaussian {
  cplx center;
  double width;
};
struct GaussianTimesPoly {
  PolyCoeffs poly;
  double width;
};

/// exp(-(w - c)^2 / (2 width^2)), or p(w) exp(-w^2 / (2 width^2)); entire
/// functions with Gaussian decay along every horizontal line.
class AnalyticTestFn {
 public:
  AnalyticTestFn(Gaussian g) : kind_(std::move(g)) { check_width(std::get<Gaussian>(kind_).width); }
  AnalyticTestFn(GaussianTimesPoly g) : kind_(std::move(g)) {
    check_width(std::get<GaussianTimesPoly>(kind_).width);
  }

  [[nodiscard]] cplx operator()(cplx w) const {
    if (const auto* g = std::get_if<Gaussian>(&kind_)) {
      const cplx y = (w - g->center) / g->width;
      const cplx e = -0.5 * y * y;
      return e.real() < -745.0 ? cplx{0.0} : std::exp(e);
    }
    const auto& g = std::get<GaussianTimesPoly>(kind_);
    const cplx y = w / g.width;
    const cplx e = -0.5 * y * y;
    // far tail: the polynomial cannot rescue exp(e) from underflow
    if (e.real() < -700.0) return cplx{0.0};
    return g.poly(w) * std::exp(e);
  }

  /// (eta f)(w) = f(w + i theta)
  [[nodiscard]] cplx shifted(cplx w, double theta) const { return (*this)(w + cplx{0.0, theta}); }

 private:
  static void check_width(double w) {
    if (!(w > 0.0)) throw DomainError("analytic test function requires width > 0");
  }
  std::variant<Gaussian, GaussianTimesPoly> kind_;
};

/// The two sides of <eta u | v> = <u | eta v>, inner products conjugate-linear
/// in the first slot and evaluated by quadrature on the real line.
struct HermiticityCheck {
  IntegralResult eta_u_v;
  IntegralResult u_eta_v;
  [[nodiscard]] double defect() const { return std::abs(eta_u_v.value - u_eta_v.value); }
};

inline HermiticityCheck hermiticity_pairings(const AnalyticTestFn& u, const AnalyticTestFn& v,
                                             double theta, double tol = 1e-13) {
  HermiticityCheck out;
  out.eta_u_v = integrate_line(
      [&](double x) { return std::conj(u.shifted(x, theta)) * v(x); }, Domain::real_line(), tol);
  out.u_eta_v = integrate_line(
      [&](double x) { return std::conj(u(x)) * v.shifted(x, theta); }, Domain::real_line(), tol);
  return out;
}

/// |<eta u|v> - <u|eta v>|
inline double hermiticity_defect(const AnalyticTestFn& u, const AnalyticTestFn& v, double theta) {
  return hermiticity_pairings(u, v, theta).defect();
}

struct PseudoHermVerdict {
  double theta_used = 0.0;
  double max_residual = 0.0;  ///< max |V(x + i theta) - conj V(x)|
  double scale = 0.0;         ///< max |V(x)| on the grid
  double tolerance = 0.0;     ///< relative; passed iff max_residual <= tolerance * scale
  std::size_t grid_points = 0;
  bool passed = false;

  [[nodiscard]] double relative_residual() const {
    return scale > 0.0 ? max_residual / scale : max_residual;
  }
};

/// Potential-level form of eta H eta^{-1} = H^dagger: with H = kappa p^2 + V
/// and eta commuting with p, it reduces to V(x + i theta) = conj V(x).
inline PseudoHermVerdict check_pseudo_hermitian(const PotentialSpec& spec, double theta,
                                                std::span<const double> grid, double tol) {
  if (grid.empty()) throw DomainError("check_pseudo_hermitian: empty grid");
  PseudoHermVerdict v;
  v.theta_used = theta;
  v.tolerance = tol;
  v.grid_points = grid.size();
  for (double x : grid) {
    const cplx here = evaluate(spec, x);
    const cplx shifted = evaluate(spec, cplx{x, theta});
    v.max_residual = std::max(v.max_residual, std::abs(shifted - std::conj(here)));
    v.scale = std::max(v.scale, std::abs(here));
  }
  v.passed = v.max_residual <= tol * (v.scale > 0.0 ? v.scale : 1.0);
  return v;
}

/// The Morse variable z(x) = 2(A + iB) e^{-x} under the shift by
/// theta = 2 atan(B/A): returns (z(x + i theta), conj z(x)).
inline std::pair<cplx, cplx> morse_variable_conjugation(double A, double B, double x) {
  if (!(A > 0.0)) throw DomainError("morse_variable_conjugation requires A > 0");
  const double theta = 2.0 * std::atan(B / A);
  const cplx s{A, B};
  const cplx shifted = 2.0 * s * std::exp(-cplx{x, theta});
  return {shifted, std::conj(2.0 * s * std::exp(-x))};
}

}  // namespace pseudospec
