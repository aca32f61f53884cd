#pragma once

// The Laguerre overlap integral
//
//   I(m, n; c) = int_0^inf z^{2c-(m+n+1)} e^{-z} L_m^{2c-2m}(z) L_n^{2c-2n}(z) dz,
//
// which is the Morse bilinear overlap int Psi_m Psi_n dx after z = 2 sqrt(V1) e^{-x},
// computed by half-line quadrature and, independently, by expanding both
// polynomials and integrating term by term against Gamma functions. Also the
// Gram matrices of catalog eigenstates under the eta-, PT- and plain bilinear
// pairings.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact_spectra.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"

namespace pseudospec {

namespace detail {

inline double overlap_exponent(std::size_t m, std::size_t n, double c) {
  const double s = 2.0 * c - static_cast<double>(m + n + 1);
  if (!(s > -1.0))
    throw DomainError("laguerre overlap: 2c - (m+n+1) = " + std::to_string(s) +
                      " is not > -1, the integrand is not integrable at z = 0");
  return s;
}

}  // namespace detail

/// I(m, n; c) by tanh-sinh (exp-sinh branch) quadrature on (0, inf).
inline IntegralResult laguerre_overlap_quadrature(std::size_t m, std::size_t n, double c,
                                                  double tol = 1e-13) {
  const double s = detail::overlap_exponent(m, n, c);
  const double alpha_m = 2.0 * c - 2.0 * static_cast<double>(m);
  const double alpha_n = 2.0 * c - 2.0 * static_cast<double>(n);
  // crude log-bound on |L_m L_n| for the far tail cut-off
  const double coeff_bound = std::log(1.0 + std::abs(alpha_m) + static_cast<double>(m)) * static_cast<double>(m) +
                             std::log(1.0 + std::abs(alpha_n) + static_cast<double>(n)) * static_cast<double>(n);
  auto f = [=](double z) -> cplx {
    const double log_weight = s * std::log(z) - z;
    if (z > 1.0 && log_weight + coeff_bound + static_cast<double>(m + n) * std::log(z) < -745.0)
      return cplx{0.0};
    // the product of the two polynomials first keeps I(m, n) and I(n, m) bitwise equal
    return std::exp(log_weight) * (laguerre(m, alpha_m, z) * laguerre(n, alpha_n, z));
  };
  return integrate_line(f, Domain::half_line(), tol);
}

/// I(m, n; c) as the finite double sum sum_jk a_j b_k Gamma(s + j + k + 1),
/// written as Gamma(s + 1) sum_jk a_j b_k (s + 1)_{j+k} and accumulated in
/// long double.
///
/// condition = (largest |term|) / |value|; results with condition above 1e12
/// are marked untrusted (the alternating sum has lost most of its digits).
inline IntegralResult laguerre_overlap_exact(std::size_t m, std::size_t n, double c) {
  using ext = long double;
  const double s = detail::overlap_exponent(m, n, c);
  const auto a = laguerre_coeffs_real<ext>(m, static_cast<ext>(2.0 * c - 2.0 * static_cast<double>(m)));
  const auto b = laguerre_coeffs_real<ext>(n, static_cast<ext>(2.0 * c - 2.0 * static_cast<double>(n)));
  std::vector<ext> pochhammer(m + n + 1);
  pochhammer[0] = 1;
  for (std::size_t t = 1; t < pochhammer.size(); ++t)
    pochhammer[t] = pochhammer[t - 1] * (static_cast<ext>(s) + static_cast<ext>(t));
  IntegralResult r;
  r.method = QuadMethod::GammaExpansion;
  ext sum = 0;
  ext largest = 0;
  ext total = 0;
  for (std::size_t j = 0; j <= m; ++j) {
    for (std::size_t k = 0; k <= n; ++k) {
      const ext term = a[j] * b[k] * pochhammer[j + k];
      sum += term;
      largest = std::max(largest, std::abs(term));
      total += std::abs(term);
      ++r.evaluations;
    }
  }
  const double lead = complex_gamma(s + 1.0).real();
  r.value = cplx{static_cast<double>(sum) * lead};
  // a few ulps per term, accumulated over the sum, plus the Gamma prefactor
  r.abs_error_estimate = static_cast<double>(16 * std::numeric_limits<ext>::epsilon() * total) * lead +
                         4.0 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
  r.condition = sum != 0 ? static_cast<double>(largest / std::abs(sum)) : std::numeric_limits<double>::infinity();
  r.trusted = r.condition <= 1e12;
  r.trace.push_back(cplx{r.condition});
  return r;
}

enum class Pairing { EtaBilinear, PTBilinear, PlainBilinear };

inline const char* to_string(Pairing p) {
  switch (p) {
    case Pairing::EtaBilinear: return "eta";
    case Pairing::PTBilinear: return "pt";
    case Pairing::PlainBilinear: return "plain";
  }
  return "?";
}

/// How Gram entries are integrated. Auto uses the z-variable reduction for
/// Morse states and real-line quadrature for everything else.
enum class GramRoute { Auto, LineQuadrature };

struct OrthogonalityReport {
  Pairing pairing = Pairing::EtaBilinear;
  std::vector<std::vector<cplx>> gram;
  std::vector<std::vector<double>> error_estimates;
  double off_diag_max_rel = 0.0;  ///< max_{m != n} |gram[m][n]| / min_n |gram[n][n]|
  double theta = 0.0;              ///< shift used by the eta pairing

  [[nodiscard]] double min_diagonal() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gram.size(); ++i) d = std::min(d, std::abs(gram[i][i]));
    return d;
  }
};

namespace detail {

inline Interval joint_window(std::span<const BoundState> states) {
  Interval w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : states) {
    const Interval one = support_window(s);
    w.lo = std::min(w.lo, one.lo);
    w.hi = std::max(w.hi, one.hi);
  }
  return w;
}

inline void finish_report(OrthogonalityReport& r) {
  const double diag = r.min_diagonal();
  double off = 0.0;
  for (std::size_t i = 0; i < r.gram.size(); ++i)
    for (std::size_t j = 0; j < r.gram.size(); ++j)
      if (i != j) off = std::max(off, std::abs(r.gram[i][j]));
  r.off_diag_max_rel = r.gram.size() < 2 ? 0.0 : off / diag;
}

inline bool all_morse(std::span<const BoundState> states) {
  return std::all_of(states.begin(), states.end(), [](const BoundState& s) {
    return std::holds_alternative<MorseState>(s.eigenfunction);
  });
}

inline constexpr double kPanel = 8.0;

inline OrthogonalityReport gram_matrix(const PotentialSpec& spec, std::span<const BoundState> states,
                                       Pairing pairing, GramRoute route, double tol) {
  OrthogonalityReport r;
  r.pairing = pairing;
  const std::size_t k = states.size();
  r.gram.assign(k, std::vector<cplx>(k));
  r.error_estimates.assign(k, std::vector<double>(k));
  if (k == 0) return r;
  if (pairing == Pairing::EtaBilinear) r.theta = pseudo_shift_angle(spec).theta;

  // For Morse states, eta Psi_n = conj Psi_n and the plain bilinear overlap
  // rotates onto the real z axis, where it is I(m, n; C).
  const bool z_route = route == GramRoute::Auto && pairing != Pairing::PTBilinear && all_morse(states);
  if (z_route) {
    const double C = std::get<MorseState>(states.front().eigenfunction).C;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const IntegralResult q = laguerre_overlap_quadrature(states[i].n, states[j].n, C, tol);
        r.gram[i][j] = pairing == Pairing::EtaBilinear ? std::conj(q.value) : q.value;
        r.error_estimates[i][j] = q.abs_error_estimate;
      }
    finish_report(r);
    return r;
  }

  Interval window = joint_window(states);
  if (pairing == Pairing::PTBilinear) {
    // the integrand Psi_m(-x) Psi_n(x) is negligible outside the reflected overlap
    window = {std::max(window.lo, -window.hi), std::min(window.hi, -window.lo)};
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!(window.lo < window.hi)) continue;
      const BoundState& left = states[i];
      const BoundState& right = states[j];
      const double theta = r.theta;
      Integrand f;
      switch (pairing) {
        case Pairing::EtaBilinear:
          f = [&, theta](double x) {
            return std::conj(eigenfunction_value(left, x)) * eigenfunction_value(right, cplx{x, theta});
          };
          break;
        case Pairing::PTBilinear:
          f = [&](double x) {
            return std::conj(eigenfunction_value(left, -x)) * eigenfunction_value(right, x);
          };
          break;
        case Pairing::PlainBilinear:
          f = [&](double x) { return eigenfunction_value(left, x) * eigenfunction_value(right, x); };
          break;
      }
      // Panels no wider than kPanel: on one wide window the coarse levels can
      // straddle a narrow state and agree on zero.
      const auto panels = static_cast<std::size_t>(std::ceil((window.hi - window.lo) / kPanel));
      const double width = (window.hi - window.lo) / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double lo = window.lo + width * static_cast<double>(p);
        const double hi = p + 1 == panels ? window.hi : lo + width;
        const IntegralResult q = integrate_line(f, {lo, hi}, tol);
        r.gram[i][j] += q.value;
        r.error_estimates[i][j] += q.abs_error_estimate;
      }
    }
  }
  finish_report(r);
  return r;
}

}  // namespace detail

/// gram[m][n] = int conj(Psi_m(x)) Psi_n(x + i theta) dx with theta the
/// family's pseudo-Hermiticity shift.
inline OrthogonalityReport eta_orthogonality_matrix(const PotentialSpec& spec,
                                                    std::span<const BoundState> states,
                                                    GramRoute route = GramRoute::Auto,
                                                    double tol = 1e-12) {
  return detail::gram_matrix(spec, states, Pairing::EtaBilinear, route, tol);
}

/// gram[m][n] = int conj(Psi_m(-x)) Psi_n(x) dx.
inline OrthogonalityReport pt_orthogonality_matrix(const PotentialSpec& spec,
                                                   std::span<const BoundState> states,
                                                   double tol = 1e-12) {
  return detail::gram_matrix(spec, states, Pairing::PTBilinear, GramRoute::LineQuadrature, tol);
}

/// gram[m][n] = int Psi_m(x) Psi_n(x) dx, no conjugation.
inline OrthogonalityReport plain_orthogonality_matrix(const PotentialSpec& spec,
                                                      std::span<const BoundState> states,
                                                      GramRoute route = GramRoute::Auto,
                                                      double tol = 1e-12) {
  return detail::gram_matrix(spec, states, Pairing::PlainBilinear, route, tol);
}

inline OrthogonalityReport orthogonality_matrix(const PotentialSpec& spec,
                                                std::span<const BoundState> states, Pairing pairing,
                                                GramRoute route = GramRoute::Auto, double tol = 1e-12) {
  return detail::gram_matrix(spec, states, pairing, route, tol);
}

}  // namespace pseudospec
