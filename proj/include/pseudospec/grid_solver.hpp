#pragma once

// Finite-difference eigensolver for H = kappa p^2 + V(x) with complex V on a
// truncated interval with Dirichlet walls. The matrix is complex symmetric
// (H = H^T) but not Hermitian, and it is handed to a general complex
// eigensolver: nothing in the pipeline assumes real eigenvalues.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact_spectra.hpp"
#include "potential.hpp"

namespace pseudospec {

/// Dense column-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0}) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  [[nodiscard]] cplx operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  [[nodiscard]] std::span<const cplx> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }
  [[nodiscard]] cplx* data() { return data_.data(); }
  [[nodiscard]] const cplx* data() const { return data_.data(); }

  [[nodiscard]] ComplexMatrix transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
    return t;
  }
  [[nodiscard]] ComplexMatrix adjoint() const {
    ComplexMatrix t = transpose();
    for (auto& v : t.data_) v = std::conj(v);
    return t;
  }
  /// Maximum absolute column sum.
  [[nodiscard]] double norm1() const {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (cplx v : column(j)) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }
  /// max |a_ij - b_ij|
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.data_.size(); ++k) m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

enum class FdOrder { FD2, FD4 };

inline const char* to_string(FdOrder o) { return o == FdOrder::FD2 ? "fd2" : "fd4"; }

struct Discretization {
  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n_points = 1200;
  FdOrder order = FdOrder::FD4;

  /// Spacing; the walls sit at x_min and x_max, outside the unknowns.
  [[nodiscard]] double spacing() const {
    return (x_max - x_min) / static_cast<double>(n_points + 1);
  }
  [[nodiscard]] double point(std::size_t j) const {
    return x_min + spacing() * static_cast<double>(j + 1);
  }
  void validate() const {
    if (n_points < 16) throw DomainError("discretization needs at least 16 interior points");
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
      throw DomainError("discretization needs finite x_min < x_max");
  }
};

/// Reference discretization per family: the natural domain with 1600 points
/// for Morse and 1200 elsewhere, fourth-order stencil.
inline Discretization default_discretization(const PotentialSpec& spec) {
  const Interval d = natural_domain(spec);
  const bool morse = spec.is<MorseComplex>() || spec.is<MorseGeneral>();
  return {d.lo, d.hi, morse ? std::size_t{1600} : std::size_t{1200}, FdOrder::FD4};
}

/// kappa * (-d^2/dx^2) by central differences plus diag(V); Dirichlet walls
/// (the stencil simply drops points beyond them).
inline ComplexMatrix assemble_hamiltonian(std::span<const cplx> potential, double h, double kappa,
                                          FdOrder order) {
  const std::size_t n = potential.size();
  ComplexMatrix m(n, n);
  const double scale = kappa / (h * h);
  const double c0 = order == FdOrder::FD2 ? 2.0 : 30.0 / 12.0;
  const double c1 = order == FdOrder::FD2 ? -1.0 : -16.0 / 12.0;
  const double c2 = order == FdOrder::FD2 ? 0.0 : 1.0 / 12.0;
  for (std::size_t j = 0; j < n; ++j) {
    m(j, j) = scale * c0 + potential[j];
    if (j + 1 < n) m(j, j + 1) = m(j + 1, j) = scale * c1;
    if (c2 != 0.0 && j + 2 < n) m(j, j + 2) = m(j + 2, j) = scale * c2;
  }
  return m;
}

inline ComplexMatrix build_hamiltonian(const PotentialSpec& spec, const Discretization& disc) {
  disc.validate();
  std::vector<cplx> v(disc.n_points);
  for (std::size_t j = 0; j < disc.n_points; ++j) v[j] = evaluate(spec, disc.point(j));
  return assemble_hamiltonian(v, disc.spacing(), spec.kappa(), disc.order);
}

struct EigenDecomposition {
  std::vector<cplx> values;
  ComplexMatrix vectors;              ///< column k belongs to values[k], unit 2-norm
  std::vector<double> residual_norms;  ///< ||M v - lambda v||_2 / ||M||_1
};

namespace detail {

// ||M v_k - lambda_k v_k|| / ||M||_1 for every pair, touching only nonzeros.
inline std::vector<double> residuals(const ComplexMatrix& m, const std::vector<cplx>& values,
                                     const ComplexMatrix& vectors) {
  const std::size_t n = m.rows();
  struct Entry {
    std::size_t row, col;
    cplx value;
  };
  std::vector<Entry> nz;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (m(i, j) != cplx{0.0}) nz.push_back({i, j, m(i, j)});
  const double scale = std::max(m.norm1(), std::numeric_limits<double>::min());
  std::vector<double> out(values.size());
  std::vector<cplx> mv(n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto v = vectors.column(k);
    std::fill(mv.begin(), mv.end(), cplx{0.0});
    for (const auto& e : nz) mv[e.row] += e.value * v[e.col];
    double acc = 0.0;
    double vnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::norm(mv[i] - values[k] * v[i]);
      vnorm += std::norm(v[i]);
    }
    out[k] = std::sqrt(acc / vnorm) / scale;
  }
  return out;
}

}  // namespace detail

/// Full eigendecomposition of a general complex matrix: balancing, Hessenberg
/// reduction and shifted QR with deflation (LAPACK zgeev). Throws
/// ConvergenceError when QR stalls or when any eigenpair's relative residual
/// exceeds tol.
inline EigenDecomposition eig_general(const ComplexMatrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("eig_general: matrix must be square");
  const std::size_t n = m.rows();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw DomainError("eig_general: matrix has non-finite entries");

  ComplexMatrix work = m;
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  const auto ld = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', ld, reinterpret_cast<lapack_complex_double*>(work.data()), ld,
      reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), ld);
  if (info > 0) {
    std::ostringstream msg;
    msg << "eig_general: shifted QR failed to converge; only eigenvalues " << info + 1 << ".." << n
        << " of " << n << " deflated";
    throw ConvergenceError(msg.str());
  }
  if (info < 0) throw DomainError("eig_general: invalid argument to zgeev");

  out.residual_norms = detail::residuals(m, out.values, out.vectors);
  const auto worst = std::max_element(out.residual_norms.begin(), out.residual_norms.end());
  if (*worst > tol) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "eig_general: eigenpair residual " << *worst << " exceeds " << tol;
    throw ConvergenceError(msg.str());
  }
  return out;
}

struct SpectrumResult {
  std::vector<cplx> eigenvalues;  ///< ascending Re, ties (|dRe| < 1e-12) by ascending Im
  std::vector<double> residual_norms;
  std::vector<bool> bound_flags;
  std::vector<double> boundary_mass;  ///< eigenvector mass fraction in the outer 10%
  Discretization disc;
  std::vector<std::size_t> levels;       ///< indices of the k lowest-Re bound eigenpairs
  std::vector<std::vector<cplx>> level_vectors;  ///< their eigenvectors, unit 2-norm

  [[nodiscard]] std::vector<cplx> level_energies() const {
    std::vector<cplx> e;
    for (auto i : levels) e.push_back(eigenvalues[i]);
    return e;
  }
  /// Largest |Im lambda| / max(1, |Re lambda|) over the reported levels.
  [[nodiscard]] double max_relative_imag() const {
    double m = 0.0;
    for (auto i : levels)
      m = std::max(m, std::abs(eigenvalues[i].imag()) / std::max(1.0, std::abs(eigenvalues[i].real())));
    return m;
  }
};

namespace detail {

inline constexpr double kBoundMassThreshold = 1e-6;
inline constexpr double kOuterFraction = 0.05;  // per side

inline std::vector<std::size_t> spectral_order(const std::vector<cplx>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });
  // Near-ties in Re are ordered by Im.
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() &&
           std::abs(values[idx[end]].real() - values[idx[end - 1]].real()) < 1e-12)
      ++end;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                     idx.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return values[a].imag() < values[b].imag(); });
    start = end;
  }
  return idx;
}

}  // namespace detail

/// Discretize, diagonalize, sort, classify. `levels` holds the k lowest-Re
/// eigenpairs whose eigenvector mass in the outer 10% of the grid is below
/// 1e-6 of the total.
inline SpectrumResult solve_spectrum(const PotentialSpec& spec, const Discretization& disc,
                                     std::size_t k) {
  disc.validate();
  if (k > disc.n_points) throw DomainError("solve_spectrum: k exceeds the number of grid points");
  const ComplexMatrix h = build_hamiltonian(spec, disc);
  const EigenDecomposition eig = eig_general(h);
  const auto order = detail::spectral_order(eig.values);

  const std::size_t n = disc.n_points;
  const auto edge = static_cast<std::size_t>(detail::kOuterFraction * static_cast<double>(n));
  SpectrumResult r;
  r.disc = disc;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t col = order[pos];
    const auto v = eig.vectors.column(col);
    double total = 0.0;
    double outer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mass = std::norm(v[i]);
      total += mass;
      if (i < edge || i >= n - edge) outer += mass;
    }
    const double fraction = outer / total;
    const bool bound = fraction < detail::kBoundMassThreshold;
    r.eigenvalues.push_back(eig.values[col]);
    r.residual_norms.push_back(eig.residual_norms[col]);
    r.boundary_mass.push_back(fraction);
    r.bound_flags.push_back(bound);
    if (bound && r.levels.size() < k) {
      r.levels.push_back(pos);
      r.level_vectors.emplace_back(v.begin(), v.end());
    }
  }
  return r;
}

struct ConvergenceRow {
  std::size_t n_points = 0;
  double h = 0.0;
  std::vector<double> errors;  ///< |E_grid - E_exact| per compared level
  std::vector<double> ratios;  ///< error ratio to the previous row (empty on the first)
  std::vector<double> orders;  ///< log2 of the ratios
  bool plateau = false;        ///< ground-level error stopped shrinking (truncation-dominated)
};

struct ConvergenceTable {
  FdOrder order = FdOrder::FD4;
  std::vector<cplx> exact;
  std::vector<ConvergenceRow> rows;
};

/// Eigenvalue errors against the closed form on successively halved spacings
/// (n -> 2n + 1 keeps the grids nested).
inline ConvergenceTable convergence_study(const PotentialSpec& spec, const Discretization& base,
                                          std::size_t refinements, std::size_t n_levels = 1) {
  if (refinements < 2) throw DomainError("convergence_study needs at least 2 refinements");
  const auto exact_states = exact_spectrum(spec, n_levels);
  if (!exact_states || exact_states->empty())
    throw DomainError("convergence_study: " + spec.name() + " has no closed-form bound states");
  ConvergenceTable t;
  t.order = base.order;
  for (std::size_t i = 0; i < std::min(n_levels, exact_states->size()); ++i)
    t.exact.push_back((*exact_states)[i].energy);

  Discretization disc = base;
  for (std::size_t step = 0; step <= refinements; ++step) {
    const SpectrumResult s = solve_spectrum(spec, disc, t.exact.size());
    ConvergenceRow row;
    row.n_points = disc.n_points;
    row.h = disc.spacing();
    const auto found = s.level_energies();
    for (std::size_t i = 0; i < t.exact.size(); ++i)
      row.errors.push_back(i < found.size() ? std::abs(found[i] - t.exact[i])
                                            : std::numeric_limits<double>::infinity());
    if (!t.rows.empty()) {
      const auto& prev = t.rows.back();
      for (std::size_t i = 0; i < row.errors.size(); ++i) {
        const double ratio = prev.errors[i] / row.errors[i];
        row.ratios.push_back(ratio);
        row.orders.push_back(std::log2(ratio));
      }
      row.plateau = row.ratios.front() < 2.0;
    }
    t.rows.push_back(std::move(row));
    disc.n_points = 2 * disc.n_points + 1;
  }
  return t;
}

}  // namespace pseudospec
