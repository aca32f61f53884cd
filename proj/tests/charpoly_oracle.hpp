#pragma once

// Small-matrix eigenvalue oracle, independent of LAPACK: characteristic
// polynomial by Faddeev-LeVerrier, roots by Durand-Kerner with Newton polish.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "pseudospec/grid_solver.hpp"

namespace oracle {

using pseudospec::ComplexMatrix;
using pseudospec::cplx;

// Monic coefficients c[0..n], det(lambda I - M) = sum c[k] lambda^k.
inline std::vector<cplx> characteristic_polynomial(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  ComplexMatrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    ComplexMatrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += m(i, l) * mk(l, j);
        next(i, j) = s + (i == j ? c[n - k + 1] : cplx{0.0});
      }
    cplx trace = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += m(i, l) * next(l, i);
    c[n - k] = -trace / static_cast<double>(k);
    mk = next;
  }
  return c;
}

inline cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
  const std::size_t n = c.size() - 1;
  double radius = 0.0;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::pow(std::abs(c[k]), 1.0 / static_cast<double>(n - k)));
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = (1.0 + radius) * std::polar(1.0, 0.4 + 6.283185307179586 * static_cast<double>(k) / static_cast<double>(n));
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const cplx step = horner(c, z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * (1.0 + radius)) break;
  }
  // Newton polish on the polynomial itself
  std::vector<cplx> d(n);
  for (std::size_t k = 1; k <= n; ++k) d[k - 1] = static_cast<double>(k) * c[k];
  for (auto& r : z)
    for (int iter = 0; iter < 3; ++iter) {
      const cplx dp = horner(d, r);
      if (dp != cplx{0.0}) r -= horner(c, r) / dp;
    }
  return z;
}

// Largest distance from a computed eigenvalue to its greedily matched oracle root.
inline double match_error(std::vector<cplx> computed, std::vector<cplx> oracle_roots) {
  double worst = 0.0;
  for (const cplx& v : computed) {
    auto best = std::min_element(oracle_roots.begin(), oracle_roots.end(),
                                 [&](cplx a, cplx b) { return std::abs(a - v) < std::abs(b - v); });
    worst = std::max(worst, std::abs(*best - v));
    oracle_roots.erase(best);
  }
  return worst;
}

inline ComplexMatrix random_complex_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) m(i, j) = m(j, i) = cplx{u(rng), u(rng)};
  return m;
}

}  // namespace oracle
