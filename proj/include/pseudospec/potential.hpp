#pragma once

// Catalog of complex one-dimensional potentials, H = kappa p^2 + V(x).
//
//   morse-complex   (A+iB)^2 e^{-2x} - (2C+1)(A+iB) e^{-x}
//   morse-general   V1 e^{-2x} - V2 e^{-x}
//   ho-shifted      (x - beta - i gamma)^2 / 2           (kappa = 1/2)
//   eckart-shifted  -alpha sech^2(x - beta - i gamma)
//   khare-mandal    [zeta cosh(2x) - i M]^2
//
// Each family carries the imaginary shift theta with V(x + i theta) = conj V(x).

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace pseudospec {

struct MorseComplex {
  double A, B, C;
};
struct MorseGeneral {
  cplx V1, V2;
};
struct HarmonicShifted {
  double beta, gamma;
};
struct EckartShifted {
  double alpha, beta, gamma;
};
struct KhareMandal {
  double zeta, M;
};

using PotentialFamily =
    std::variant<MorseComplex, MorseGeneral, HarmonicShifted, EckartShifted, KhareMandal>;

/// Closed interval on the real line.
struct Interval {
  double lo;
  double hi;
  [[nodiscard]] double length() const { return hi - lo; }
};

/// A validated potential: family parameters plus the kinetic coefficient
/// kappa (1 for hbar = 1 = 2m, 1/2 for hbar = 1 = m).
class PotentialSpec {
 public:
  static PotentialSpec morse_complex(double A, double B, double C, double kappa = 1.0) {
    if (!(A > 0.0))
      throw DomainError("morse-complex requires A > 0 (branch anchor for sqrt(V1) = A + iB)");
    check_finite({B, C});
    return PotentialSpec(MorseComplex{A, B, C}, kappa);
  }
  static PotentialSpec morse_general(cplx V1, cplx V2, double kappa = 1.0) {
    check_finite({V1.real(), V1.imag(), V2.real(), V2.imag()});
    if (V1 == cplx{0.0}) throw DomainError("morse-general requires V1 != 0");
    return PotentialSpec(MorseGeneral{V1, V2}, kappa);
  }
  static PotentialSpec harmonic_shifted(double beta, double gamma, double kappa = 0.5) {
    check_finite({beta, gamma});
    return PotentialSpec(HarmonicShifted{beta, gamma}, kappa);
  }
  static PotentialSpec eckart_shifted(double alpha, double beta, double gamma,
                                      double kappa = 1.0) {
    if (!(alpha > 0.0)) throw DomainError("eckart-shifted requires alpha > 0");
    check_finite({beta, gamma});
    return PotentialSpec(EckartShifted{alpha, beta, gamma}, kappa);
  }
  static PotentialSpec khare_mandal(double zeta, double M, double kappa = 1.0) {
    if (zeta == 0.0 || !std::isfinite(zeta)) throw DomainError("khare-mandal requires zeta != 0");
    check_finite({M});
    return PotentialSpec(KhareMandal{zeta, M}, kappa);
  }

  [[nodiscard]] const PotentialFamily& family() const { return family_; }
  [[nodiscard]] double kappa() const { return kappa_; }

  template <class F>
  [[nodiscard]] bool is() const {
    return std::holds_alternative<F>(family_);
  }
  template <class F>
  [[nodiscard]] const F& as() const {
    return std::get<F>(family_);
  }

  /// Catalog name, as accepted by from_name().
  [[nodiscard]] std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, MorseComplex>) return "morse-complex";
          else if constexpr (std::is_same_v<T, MorseGeneral>) return "morse-general";
          else if constexpr (std::is_same_v<T, HarmonicShifted>) return "ho-shifted";
          else if constexpr (std::is_same_v<T, EckartShifted>) return "eckart-shifted";
          else return "khare-mandal";
        },
        family_);
  }

 private:
  PotentialSpec(PotentialFamily f, double kappa) : family_(f), kappa_(kappa) {
    if (kappa != 1.0 && kappa != 0.5) throw DomainError("kinetic coefficient kappa must be 1 or 1/2");
  }
  static void check_finite(std::initializer_list<double> values) {
    for (double v : values)
      if (!std::isfinite(v)) throw DomainError("potential parameters must be finite");
  }

  PotentialFamily family_;
  double kappa_;
};

/// Parameters by name for the CLI and job files. Keys per family:
///   morse-complex A B C; morse-general V1 V1i V2 V2i (real/imag parts);
///   ho-shifted beta gamma; eckart-shifted alpha beta gamma; khare-mandal zeta M;
///   kappa is optional everywhere.
using ParamMap = std::map<std::string, double>;

inline PotentialSpec from_name(const std::string& name, const ParamMap& params) {
  auto get = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (auto it = params.find(key); it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw DomainError("potential '" + name + "' requires parameter '" + key + "'");
  };
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      bool ok = key == "kappa";
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw DomainError("potential '" + name + "' does not take parameter '" + key + "'");
    }
  };
  if (name == "morse-complex") {
    reject_unknown({"A", "B", "C"});
    return PotentialSpec::morse_complex(get("A"), get("B", 0.0), get("C"), get("kappa", 1.0));
  }
  if (name == "morse-general") {
    reject_unknown({"V1", "V1i", "V2", "V2i"});
    return PotentialSpec::morse_general(cplx{get("V1"), get("V1i", 0.0)},
                                        cplx{get("V2"), get("V2i", 0.0)}, get("kappa", 1.0));
  }
  if (name == "ho-shifted") {
    reject_unknown({"beta", "gamma"});
    return PotentialSpec::harmonic_shifted(get("beta", 0.0), get("gamma", 0.0), get("kappa", 0.5));
  }
  if (name == "eckart-shifted") {
    reject_unknown({"alpha", "beta", "gamma"});
    return PotentialSpec::eckart_shifted(get("alpha"), get("beta", 0.0), get("gamma", 0.0),
                                         get("kappa", 1.0));
  }
  if (name == "khare-mandal") {
    reject_unknown({"zeta", "M"});
    return PotentialSpec::khare_mandal(get("zeta"), get("M"), get("kappa", 1.0));
  }
  throw DomainError("unknown potential '" + name + "'");
}

/// Raw complex formula, no overflow check.
inline cplx evaluate_unchecked(const PotentialSpec& spec, cplx w) {
  return std::visit(
      [w](const auto& f) -> cplx {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, MorseComplex>) {
          const cplx s{f.A, f.B};
          const cplx e = std::exp(-w);
          return s * s * e * e - (2.0 * f.C + 1.0) * s * e;
        } else if constexpr (std::is_same_v<T, MorseGeneral>) {
          const cplx e = std::exp(-w);
          return f.V1 * e * e - f.V2 * e;
        } else if constexpr (std::is_same_v<T, HarmonicShifted>) {
          const cplx y = w - cplx{f.beta, f.gamma};
          return 0.5 * y * y;
        } else if constexpr (std::is_same_v<T, EckartShifted>) {
          const cplx c = std::cosh(w - cplx{f.beta, f.gamma});
          return -f.alpha / (c * c);
        } else {
          const cplx u = f.zeta * std::cosh(2.0 * w) - cplx{0.0, f.M};
          return u * u;
        }
      },
      spec.family());
}

/// V(w) at complex w. Throws OverflowError when the value is not finite.
inline cplx evaluate(const PotentialSpec& spec, cplx w) {
  const cplx v = evaluate_unchecked(spec, w);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream msg;
    msg << spec.name() << ": potential overflows at w = " << w.real() << (w.imag() < 0 ? "" : "+")
        << w.imag() << "i";
    throw OverflowError(msg.str());
  }
  return v;
}

/// Pointwise real and imaginary parts on a real grid.
inline std::pair<std::vector<double>, std::vector<double>> real_imag_parts(
    const PotentialSpec& spec, std::span<const double> x_grid) {
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.reserve(x_grid.size());
  out.second.reserve(x_grid.size());
  for (double x : x_grid) {
    const cplx v = evaluate(spec, x);
    out.first.push_back(v.real());
    out.second.push_back(v.imag());
  }
  return out;
}

/// sqrt(V1) on the branch with Re > 0. Throws BranchError when V1 is a
/// negative real number, where both roots have Re = 0.
inline cplx morse_sqrt_v1(const PotentialSpec& spec) {
  if (spec.is<MorseComplex>()) {
    const auto& f = spec.as<MorseComplex>();
    return {f.A, f.B};
  }
  if (!spec.is<MorseGeneral>()) throw DomainError(spec.name() + " is not a Morse potential");
  const cplx root = std::sqrt(spec.as<MorseGeneral>().V1);  // principal: Re >= 0
  if (root.real() == 0.0) throw BranchError("sqrt(V1) has Re = 0 on both branches; V1 is negative real");
  return root;
}

/// The effective Morse parameter C = V2 / (2 sqrt V1) - 1/2 that fixes the
/// spectrum E_n = -(n - C)^2; equals C itself for morse-complex.
inline cplx morse_effective_C(const PotentialSpec& spec) {
  const cplx root = morse_sqrt_v1(spec);
  const cplx V2 = spec.is<MorseComplex>()
                      ? (2.0 * spec.as<MorseComplex>().C + 1.0) * root
                      : spec.as<MorseGeneral>().V2;
  return V2 / (2.0 * root) - 0.5;
}

/// Imaginary shift angle theta.
struct ShiftParams {
  double theta;
};

namespace detail {

// Distance of an angle from the nearest multiple of `period`.
inline double angle_distance(double a, double period) {
  return std::abs(a - period * std::round(a / period));
}

inline double wrap_angle(double a) {
  using std::numbers::pi;
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

}  // namespace detail

/// theta with V(x + i theta) = conj V(x) for all real x.
///
/// morse-complex gives 2 atan(B/A); the shifted HO and Eckart families give
/// 2 gamma; khare-mandal gives pi/2. For morse-general the shifts required by
/// the two exponentials (theta = arg V1 mod pi, theta = 2 arg V2 mod 2 pi) must
/// coincide, otherwise NoKnownShiftError.
inline ShiftParams pseudo_shift_angle(const PotentialSpec& spec) {
  using std::numbers::pi;
  return std::visit(
      [](const auto& f) -> ShiftParams {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, MorseComplex>) {
          return {2.0 * std::atan(f.B / f.A)};
        } else if constexpr (std::is_same_v<T, MorseGeneral>) {
          if (f.V2 == cplx{0.0}) return {detail::wrap_angle(std::arg(f.V1))};
          const double theta = detail::wrap_angle(2.0 * std::arg(f.V2));
          if (detail::angle_distance(std::arg(f.V1) - theta, pi) > 1e-12)
            throw NoKnownShiftError(
                "morse-general: arg(V1) and arg(V2) require incompatible imaginary shifts");
          return {theta};
        } else if constexpr (std::is_same_v<T, HarmonicShifted> ||
                             std::is_same_v<T, EckartShifted>) {
          return {2.0 * f.gamma};
        } else {
          return {pi / 2.0};
        }
      },
      spec.family());
}

/// Invariance of V under x -> -x combined with complex conjugation.
inline bool is_pt_symmetric(const PotentialSpec& spec) {
  if (spec.is<HarmonicShifted>()) return spec.as<HarmonicShifted>().beta == 0.0;
  if (spec.is<EckartShifted>()) return spec.as<EckartShifted>().beta == 0.0;
  if (spec.is<KhareMandal>()) return spec.as<KhareMandal>().M == 0.0;
  return false;
}

/// Default truncation of the real line used for grids and diagnostics.
///
/// Morse: left edge where |V| reaches 1e6 (but not beyond -4), right edge 14,
/// stretched by 1/(C - n_top) when the shallowest bound state decays slower
/// than e^{-x}. HO and Eckart: [-half_width, half_width]. khare-mandal: the
/// symmetric interval where |V| stays below 1e6, capped at half_width.
inline Interval natural_domain(const PotentialSpec& spec, double half_width = 12.0) {
  constexpr double kMaxMagnitude = 1e6;
  if (spec.is<MorseComplex>() || spec.is<MorseGeneral>()) {
    const double v1 = spec.is<MorseComplex>()
                          ? std::norm(cplx{spec.as<MorseComplex>().A, spec.as<MorseComplex>().B})
                          : std::abs(spec.as<MorseGeneral>().V1);
    const double lo = std::max(-4.0, 0.5 * std::log(v1 / kMaxMagnitude));
    double hi = 14.0;
    try {
      const double c = morse_effective_C(spec).real();
      if (c > 0.0) {
        double gap = c - std::ceil(c - 1.0 - 1e-12);
        if (gap <= 1e-12) gap = 1.0;
        if (gap < 1.0) hi = 14.0 / gap;
      }
    } catch (const BranchError&) {
    }
    return {lo, hi};
  }
  if (spec.is<KhareMandal>()) {
    const double ratio = std::sqrt(kMaxMagnitude) / std::abs(spec.as<KhareMandal>().zeta);
    const double edge = ratio > 1.0 ? 0.5 * std::acosh(ratio) : 0.5;
    return {-std::min(edge, half_width), std::min(edge, half_width)};
  }
  return {-half_width, half_width};
}

/// n_points equally spaced points spanning the closed interval.
inline std::vector<double> linspace(Interval d, std::size_t n_points) {
  std::vector<double> xs(n_points);
  if (n_points == 1) {
    xs[0] = 0.5 * (d.lo + d.hi);
    return xs;
  }
  const double step = d.length() / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) xs[i] = d.lo + step * static_cast<double>(i);
  xs.back() = d.hi;
  return xs;
}

}  // namespace pseudospec
