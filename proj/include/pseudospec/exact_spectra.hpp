#pragma once

// Closed-form bound states.
//
// Morse, with z = 2 sqrt(V1) e^{-x} and C = V2/(2 sqrt V1) - 1/2:
//   E_n = -(n - C)^2,  Psi_n = z^{C-n} e^{-z/2} L_n^{2C-2n}(z),  0 <= n < C.
// Shifted harmonic oscillator (kappa = 1/2), y = x - beta - i gamma:
//   E_n = n + 1/2,     Psi_n = H_n(y) e^{-y^2/2}.
// Shifted Eckart (kappa = 1), lambda = sqrt(alpha + 1/4) - 1/2, s = lambda - n:
//   E_n = -s^2,        Psi_n = sech^s(y) C_n^{(s+1/2)}(tanh y),  s > 0.
//
// The Hermite-Gaussian and sech-power eigenfunctions are the standard textbook
// solutions continued to complex argument. Eigenfunctions are unnormalized.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "potential.hpp"
#include "special_functions.hpp"

namespace pseudospec {

struct MorseState {
  cplx sqrt_v1;
  double C;
};
struct HarmonicState {
  double beta, gamma;
};
struct EckartState {
  double beta, gamma;
  double s;  ///< sech exponent lambda - n
};

using Eigenfunction = std::variant<MorseState, HarmonicState, EckartState>;

struct BoundState {
  std::size_t n = 0;
  cplx energy{0.0};
  Eigenfunction eigenfunction;
};

namespace detail {

// Bound-state threshold: n counts only if n < limit - kThresholdTol.
inline constexpr double kThresholdTol = 1e-12;

inline cplx hermite(std::size_t n, cplx y) {
  cplx prev{1.0};
  if (n == 0) return prev;
  cplx curr = 2.0 * y;
  for (std::size_t k = 1; k < n; ++k) {
    const cplx next = 2.0 * y * curr - 2.0 * static_cast<double>(k) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

inline cplx gegenbauer(std::size_t n, double a, cplx t) {
  cplx prev{1.0};
  if (n == 0) return prev;
  cplx curr = 2.0 * a * t;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const cplx next = (2.0 * t * (kd + a - 1.0) * curr - (kd + 2.0 * a - 2.0) * prev) / kd;
    prev = curr;
    curr = next;
  }
  return curr;
}

// log cosh y without overflow, on the branch continuous with log cosh(real) when |Im y| < pi/2
inline cplx log_cosh(cplx y) {
  const cplx u = y.real() >= 0.0 ? y : -y;
  return u + std::log((1.0 + std::exp(-2.0 * u)) / 2.0);
}

inline cplx morse_psi(std::size_t n, const MorseState& m, cplx w) {
  const cplx e = std::exp(-w);
  if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
    throw OverflowError("morse wavefunction: e^{-x} overflows at x = " + std::to_string(w.real()));
  const cplx z = 2.0 * m.sqrt_v1 * e;
  if (z == cplx{0.0}) return cplx{0.0};
  const double power = m.C - static_cast<double>(n);
  const cplx exponent = power * std::log(z) - 0.5 * z;
  if (exponent.real() < -745.0) return cplx{0.0};
  return std::exp(exponent) * laguerre(n, 2.0 * power, z);
}

}  // namespace detail

/// Psi_n at complex argument (the eta action needs Psi_n(x + i theta)).
inline cplx eigenfunction_value(const BoundState& state, cplx w) {
  return std::visit(
      [&](const auto& f) -> cplx {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, MorseState>) {
          return detail::morse_psi(state.n, f, w);
        } else if constexpr (std::is_same_v<T, HarmonicState>) {
          const cplx y = w - cplx{f.beta, f.gamma};
          const cplx e = -0.5 * y * y;
          if (e.real() < -700.0) return cplx{0.0};
          return detail::hermite(state.n, y) * std::exp(e);
        } else {
          const cplx y = w - cplx{f.beta, f.gamma};
          const cplx log_sech = -detail::log_cosh(y);
          const cplx e = f.s * log_sech;
          if (e.real() < -745.0) return cplx{0.0};
          return std::exp(e) * detail::gegenbauer(state.n, f.s + 0.5, std::tanh(y));
        }
      },
      state.eigenfunction);
}

/// Psi_n(x) for a Morse state on the real line; unnormalized.
inline cplx morse_wavefunction(const BoundState& state, double x) {
  if (!std::holds_alternative<MorseState>(state.eigenfunction))
    throw DomainError("morse_wavefunction: not a Morse bound state");
  return detail::morse_psi(state.n, std::get<MorseState>(state.eigenfunction), x);
}

/// Interval outside of which |Psi_n| has dropped below ~e^{-40} of its peak.
inline Interval support_window(const BoundState& state) {
  return std::visit(
      [&](const auto& f) -> Interval {
        using T = std::decay_t<decltype(f)>;
        const double n = static_cast<double>(state.n);
        if constexpr (std::is_same_v<T, MorseState>) {
          const double log_scale = std::log(2.0 * std::abs(f.sqrt_v1));
          const double decay = f.C - n;
          const double cos_phase = f.sqrt_v1.real() / std::abs(f.sqrt_v1);
          // left edge: Re z / 2 - (C + n) ln|z| >= 45
          double r = 100.0;
          for (int i = 0; i < 50; ++i) r = 2.0 * (45.0 + (f.C + n) * std::log(r)) / cos_phase;
          return {log_scale - std::log(r), log_scale + 45.0 / decay + 2.0};
        } else if constexpr (std::is_same_v<T, HarmonicState>) {
          const double half = std::sqrt(2.0 * n + 1.0) + std::sqrt(90.0 + f.gamma * f.gamma);
          return {f.beta - half, f.beta + half};
        } else {
          const double half = 45.0 / f.s + 2.0 + n;
          return {f.beta - half, f.beta + half};
        }
      },
      state.eigenfunction);
}

/// Morse levels E_n = -(n - C)^2 for 0 <= n < C (strict; threshold excluded).
inline std::vector<BoundState> morse_spectrum(const PotentialSpec& spec) {
  const cplx root = morse_sqrt_v1(spec);
  double C = 0.0;
  if (spec.is<MorseComplex>()) {
    C = spec.as<MorseComplex>().C;
  } else {
    const cplx c = morse_effective_C(spec);
    if (std::abs(c.imag()) > 1e-10)
      throw DomainError("morse_spectrum: effective parameter C is not real; closed form does not apply");
    C = c.real();
  }
  if (spec.kappa() != 1.0) throw DomainError("morse_spectrum: closed form assumes kappa = 1 (hbar = 1 = 2m)");
  std::vector<BoundState> out;
  for (std::size_t n = 0; static_cast<double>(n) < C - detail::kThresholdTol; ++n) {
    const double d = static_cast<double>(n) - C;
    out.push_back({n, cplx{-d * d, 0.0}, MorseState{root, C}});
  }
  return out;
}

/// E_n = n + 1/2 for n = 0..n_max, independent of (beta, gamma).
inline std::vector<BoundState> ho_spectrum(const PotentialSpec& spec, std::size_t n_max) {
  if (!spec.is<HarmonicShifted>()) throw DomainError("ho_spectrum: not a shifted oscillator");
  if (spec.kappa() != 0.5)
    throw DomainError("ho_spectrum: E_n = n + 1/2 requires kappa = 1/2 (hbar = 1 = m)");
  const auto& f = spec.as<HarmonicShifted>();
  std::vector<BoundState> out;
  for (std::size_t n = 0; n <= n_max; ++n)
    out.push_back({n, cplx{static_cast<double>(n) + 0.5, 0.0}, HarmonicState{f.beta, f.gamma}});
  return out;
}

/// E_n = -[n + 1/2 - sqrt(alpha + 1/4)]^2 for n + 1/2 < sqrt(alpha + 1/4); the
/// zero-energy threshold level is excluded.
inline std::vector<BoundState> eckart_spectrum(const PotentialSpec& spec) {
  if (!spec.is<EckartShifted>()) throw DomainError("eckart_spectrum: not a shifted Eckart well");
  if (spec.kappa() != 1.0)
    throw DomainError("eckart_spectrum: closed form assumes kappa = 1 (hbar = 1 = 2m)");
  const auto& f = spec.as<EckartShifted>();
  const double root = std::sqrt(f.alpha + 0.25);
  std::vector<BoundState> out;
  for (std::size_t n = 0; static_cast<double>(n) + 0.5 < root - detail::kThresholdTol; ++n) {
    const double s = root - 0.5 - static_cast<double>(n);
    out.push_back({n, cplx{-s * s, 0.0}, EckartState{f.beta, f.gamma, s}});
  }
  return out;
}

/// Closed-form spectrum of any family that has one; n_max bounds the
/// oscillator ladder. Empty optional for khare-mandal.
inline std::optional<std::vector<BoundState>> exact_spectrum(const PotentialSpec& spec,
                                                             std::size_t n_max = 5) {
  if (spec.is<MorseComplex>() || spec.is<MorseGeneral>()) return morse_spectrum(spec);
  if (spec.is<HarmonicShifted>()) return ho_spectrum(spec, n_max);
  if (spec.is<EckartShifted>()) return eckart_spectrum(spec);
  return std::nullopt;
}

}  // namespace pseudospec
