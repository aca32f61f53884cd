#pragma once

// Gamma, confluent hypergeometric 1F1 and associated Laguerre polynomials at
// complex argument. Everything here is a pure function.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace pseudospec {

namespace detail {

inline bool is_nonpositive_integer(cplx w) {
  return w.imag() == 0.0 && w.real() <= 0.0 && std::floor(w.real()) == w.real();
}

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline cplx lanczos_gamma(cplx w) {
  // valid for Re w >= 1/2
  const cplx x = w - 1.0;
  cplx series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i)
    series += kLanczosCoeffs[i] / (x + static_cast<double>(i));
  const cplx t = x + kLanczosG + 0.5;
  constexpr double sqrt_two_pi = 2.5066282746310002;
  return sqrt_two_pi * std::exp((x + 0.5) * std::log(t) - t) * series;
}

}  // namespace detail

/// Gamma function at complex argument; reflection formula for Re w < 1/2.
/// Throws PoleError at non-positive integers.
inline cplx complex_gamma(cplx w) {
  using std::numbers::pi;
  if (detail::is_nonpositive_integer(w))
    throw PoleError("gamma: pole at non-positive integer " + std::to_string(w.real()));
  if (w.real() < 0.5) {
    // sin(pi w) with the real part reduced mod 2 first, so no digits are
    // lost forming pi * w near a pole.
    const cplx reduced{w.real() - 2.0 * std::round(w.real() / 2.0), w.imag()};
    return pi / (std::sin(pi * reduced) * complex_gamma(1.0 - w));
  }
  // The Lanczos exponential loses ~|w log w| ulps for large Re w; step down
  // with Gamma(w) = (w-1) Gamma(w-1) instead.
  cplx factor{1.0};
  while (w.real() > 12.0) {
    w -= 1.0;
    factor *= w;
  }
  return factor * detail::lanczos_gamma(w);
}

/// Kummer's confluent hypergeometric function 1F1(a; b; z) by direct
/// Maclaurin summation.
///
/// For a = -n the series is a degree-n polynomial and is summed exactly. In
/// that case b may be a non-positive integer -m provided n <= m, since no
/// vanishing denominator is reached before the series stops.
inline cplx hyp1f1(cplx a, cplx b, cplx z) {
  if (detail::is_nonpositive_integer(a)) {
    const auto n = static_cast<std::size_t>(-a.real());
    if (detail::is_nonpositive_integer(b) && static_cast<double>(n) > -b.real())
      throw PoleError("hyp1f1: denominator (b)_k vanishes before the series terminates");
    cplx term{1.0};
    cplx sum{1.0};
    for (std::size_t k = 0; k < n; ++k) {
      const double kd = static_cast<double>(k);
      term *= (a + kd) * z / ((b + kd) * (kd + 1.0));
      sum += term;
    }
    return sum;
  }
  if (detail::is_nonpositive_integer(b))
    throw PoleError("hyp1f1: b is a non-positive integer and the series does not terminate");

  constexpr std::size_t kMaxTerms = 1'000'000;
  constexpr double kRelTol = 1e-15;
  // Past this index the term ratio (a+k)z/((b+k)(k+1)) is eventually monotone;
  // stopping earlier could be fooled by a transiently small term.
  const double settle = std::abs(a) + std::abs(b);
  cplx term{1.0};
  cplx sum{1.0};
  for (std::size_t k = 0; k < kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * z / ((b + kd) * (kd + 1.0));
    sum += term;
    if (kd > settle && std::abs(term) <= kRelTol * std::abs(sum)) return sum;
  }
  throw ConvergenceError("hyp1f1: series did not converge within 10^6 terms");
}

/// Associated Laguerre polynomial L_n^alpha(z) by the three-term recurrence in n.
inline cplx laguerre(std::size_t n, cplx alpha, cplx z) {
  cplx prev{1.0};
  if (n == 0) return prev;
  cplx curr = 1.0 + alpha - z;
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const cplx next = ((2.0 * kd + 1.0 + alpha - z) * curr - (kd + alpha) * prev) / (kd + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Generalized binomial coefficient binom(t, j) as a falling-factorial product;
/// finite for every complex t.
inline cplx binomial(cplx t, std::size_t j) {
  cplx acc{1.0};
  for (std::size_t i = 0; i < j; ++i) acc *= (t - static_cast<double>(i)) / static_cast<double>(i + 1);
  return acc;
}

/// Power-basis coefficients of L_n^alpha: c_k = (-1)^k binom(n+alpha, n-k) / k!.
inline PolyCoeffs laguerre_coeffs(std::size_t n, cplx alpha) {
  std::vector<cplx> c(n + 1);
  double inv_factorial = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) inv_factorial /= static_cast<double>(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c[k] = sign * inv_factorial * binomial(static_cast<double>(n) + alpha, n - k);
  }
  return PolyCoeffs(std::move(c));
}

/// laguerre_coeffs for real alpha in a chosen floating type (the Gamma
/// expansion of the overlap integral accumulates in long double).
template <class T>
std::vector<T> laguerre_coeffs_real(std::size_t n, T alpha) {
  std::vector<T> c(n + 1);
  T inv_factorial = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) inv_factorial /= static_cast<T>(k);
    T binom = 1;
    const T top = static_cast<T>(n) + alpha;
    for (std::size_t i = 0; i < n - k; ++i) binom *= (top - static_cast<T>(i)) / static_cast<T>(i + 1);
    c[k] = (k % 2 == 0 ? inv_factorial : -inv_factorial) * binom;
  }
  return c;
}

}  // namespace pseudospec
