#pragma once

// Double-exponential quadrature on finite, half-infinite and infinite
// intervals, with a mapped Gauss-Legendre rule as the alternative method.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace pseudospec {

enum class QuadMethod { TanhSinh, GaussLegendreMapped, GammaExpansion };

inline const char* to_string(QuadMethod m) {
  switch (m) {
    case QuadMethod::TanhSinh: return "tanh-sinh";
    case QuadMethod::GaussLegendreMapped: return "gauss-legendre-mapped";
    case QuadMethod::GammaExpansion: return "gamma-expansion";
  }
  return "?";
}

struct IntegralResult {
  cplx value{0.0};
  double abs_error_estimate = 0.0;
  QuadMethod method = QuadMethod::TanhSinh;
  std::size_t evaluations = 0;
  /// Per-level estimates for the quadratures; for GammaExpansion the ratio of
  /// the largest term to |value| (infinite when the sum cancels to zero).
  std::vector<cplx> trace;
  double condition = 1.0;
  /// False when GammaExpansion cancellation exceeded 1e12.
  bool trusted = true;
};

/// Integration range; either end may be infinite.
struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Domain real_line() { return {}; }
  static Domain half_line(double from = 0.0) {
    return {from, std::numeric_limits<double>::infinity()};
  }
};

using Integrand = std::function<cplx(double)>;

namespace detail {

struct Node {
  double x;
  double w;
};

// Abscissa/weight of the double-exponential map at parameter t. Nodes that
// collapse onto a finite endpoint or overflow are reported with w = 0.
inline Node de_node(const Domain& d, double t) {
  using std::numbers::pi;
  const double u = 0.5 * pi * std::sinh(t);
  const double du = 0.5 * pi * std::cosh(t);
  const bool lo_inf = std::isinf(d.lo);
  const bool hi_inf = std::isinf(d.hi);
  Node n{0.0, 0.0};
  if (!lo_inf && !hi_inf) {
    const double half = 0.5 * (d.hi - d.lo);
    // distance to the nearer endpoint, formed without cancellation
    const double complement = 2.0 / (1.0 + std::exp(2.0 * std::abs(u)));
    const double ch = std::cosh(u);
    n.x = t < 0 ? d.lo + half * complement : d.hi - half * complement;
    n.w = half * du / (ch * ch);
    if (n.x <= d.lo || n.x >= d.hi) n.w = 0.0;
  } else if (!lo_inf || !hi_inf) {
    const double e = std::exp(u);
    n.x = lo_inf ? d.hi - e : d.lo + e;
    n.w = du * e;
    if (n.x == (lo_inf ? d.hi : d.lo) || !std::isfinite(n.x)) n.w = 0.0;
  } else {
    n.x = std::sinh(u);
    n.w = du * std::cosh(u);
    if (!std::isfinite(n.x) || !std::isfinite(n.w)) n.w = 0.0;
  }
  if (!std::isfinite(n.w)) n.w = 0.0;
  return n;
}

inline bool converged(double estimate, double tol, cplx value, double l1) {
  return estimate <= tol * std::max({1.0, std::abs(value), l1});
}

[[noreturn]] inline void throw_nonconvergence(const char* method, const std::vector<cplx>& trace,
                                              double estimate) {
  std::ostringstream msg;
  msg.precision(17);
  msg << method << " quadrature did not converge by level 12; last error estimate " << estimate
      << "; level trace:";
  for (const auto& v : trace) msg << " (" << v.real() << "," << v.imag() << ")";
  throw ConvergenceError(msg.str());
}

inline IntegralResult tanh_sinh(const Integrand& f, const Domain& d, double tol, int max_level) {
  constexpr double kTMax = 6.5;
  constexpr int kMinLevel = 3;
  IntegralResult r;
  r.method = QuadMethod::TanhSinh;
  cplx sum{0.0};
  double l1 = 0.0;
  auto accumulate = [&](double t) {
    const Node n = de_node(d, t);
    if (n.w == 0.0) return;
    const cplx v = f(n.x);
    ++r.evaluations;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at x = " << n.x;
      throw DomainError(msg.str());
    }
    sum += n.w * v;
    l1 += n.w * std::abs(v);
  };
  const int k_max = static_cast<int>(kTMax);
  for (int j = -k_max; j <= k_max; ++j) accumulate(static_cast<double>(j));
  double h = 1.0;
  cplx estimate = sum * h;
  r.trace.push_back(estimate);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTMax; t += 2.0 * h) {
      accumulate(t);
      accumulate(-t);
    }
    const cplx next = sum * h;
    const double err = std::abs(next - estimate);
    estimate = next;
    r.trace.push_back(estimate);
    r.abs_error_estimate = err;
    if (level >= kMinLevel && converged(err, tol, estimate, l1 * h)) {
      r.value = estimate;
      return r;
    }
  }
  throw_nonconvergence("tanh-sinh", r.trace, r.abs_error_estimate);
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
inline std::vector<Node> gauss_legendre_rule(std::size_t n) {
  using std::numbers::pi;
  std::vector<Node> rule(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[i] = {-x, w};
    rule[n - 1 - i] = {x, w};
  }
  return rule;
}

inline IntegralResult gauss_legendre_mapped(const Integrand& f, const Domain& d, double tol,
                                            int max_level) {
  IntegralResult r;
  r.method = QuadMethod::GaussLegendreMapped;
  const bool lo_inf = std::isinf(d.lo);
  const bool hi_inf = std::isinf(d.hi);
  auto integrate = [&](std::size_t n, double& l1) {
    cplx sum{0.0};
    l1 = 0.0;
    for (const auto& node : gauss_legendre_rule(n)) {
      const double s = node.x;  // in (-1, 1)
      double x = 0.0;
      double jac = 0.0;
      if (!lo_inf && !hi_inf) {
        x = 0.5 * (d.lo + d.hi) + 0.5 * (d.hi - d.lo) * s;
        jac = 0.5 * (d.hi - d.lo);
      } else if (!lo_inf || !hi_inf) {
        const double u = 0.5 * (s + 1.0);  // (0, 1)
        const double off = u / (1.0 - u);
        x = lo_inf ? d.hi - off : d.lo + off;
        jac = 0.5 / ((1.0 - u) * (1.0 - u));
      } else {
        x = s / (1.0 - s * s);
        jac = (1.0 + s * s) / ((1.0 - s * s) * (1.0 - s * s));
      }
      const cplx v = f(x);
      ++r.evaluations;
      sum += node.w * jac * v;
      l1 += node.w * jac * std::abs(v);
    }
    return sum;
  };
  double l1 = 0.0;
  cplx estimate = integrate(16, l1);
  r.trace.push_back(estimate);
  for (int level = 1; level <= max_level; ++level) {
    const auto n = static_cast<std::size_t>(std::lround(16.0 * std::pow(1.5, level)));
    const cplx next = integrate(n, l1);
    r.abs_error_estimate = std::abs(next - estimate);
    estimate = next;
    r.trace.push_back(estimate);
    if (level >= 2 && converged(r.abs_error_estimate, tol, estimate, l1)) {
      r.value = estimate;
      return r;
    }
  }
  throw_nonconvergence("gauss-legendre", r.trace, r.abs_error_estimate);
}

}  // namespace detail

/// Integral of f over the domain.
///
/// The error estimate is the difference between the last two refinement
/// levels; convergence requires it to fall below tol * max(1, |value|, int|f|)
/// before level 12. Tanh-sinh clusters nodes at finite endpoints, so
/// integrable endpoint singularities are fine.
inline IntegralResult integrate_line(const Integrand& f, Domain domain, double tol = 1e-12,
                                     QuadMethod method = QuadMethod::TanhSinh) {
  constexpr int kMaxLevel = 12;
  if (!(domain.lo < domain.hi)) throw DomainError("integrate_line: empty domain");
  if (!(tol > 0.0)) throw DomainError("integrate_line: tolerance must be positive");
  switch (method) {
    case QuadMethod::TanhSinh: return detail::tanh_sinh(f, domain, tol, kMaxLevel);
    case QuadMethod::GaussLegendreMapped:
      return detail::gauss_legendre_mapped(f, domain, tol, kMaxLevel);
    case QuadMethod::GammaExpansion: break;
  }
  throw DomainError("integrate_line: GammaExpansion is not a line quadrature");
}

}  // namespace pseudospec
