#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace pseudospec {

using cplx = std::complex<double>;

/// Dense polynomial in one variable, coefficient k multiplies z^k.
///
/// Trailing zero coefficients are trimmed on construction, so degree() is
/// exact; the zero polynomial is stored as the single coefficient 0.
class PolyCoeffs {
 public:
  PolyCoeffs() : coeffs_{cplx{0.0}} {}
  PolyCoeffs(std::initializer_list<cplx> c) : coeffs_(c) { trim(); }
  explicit PolyCoeffs(std::vector<cplx> c) : coeffs_(std::move(c)) { trim(); }

  [[nodiscard]] std::size_t degree() const { return coeffs_.size() - 1; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] bool is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0};
  }
  [[nodiscard]] std::span<const cplx> coeffs() const { return coeffs_; }
  [[nodiscard]] cplx operator[](std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : cplx{0.0};
  }

  /// Horner evaluation.
  [[nodiscard]] cplx operator()(cplx z) const {
    cplx acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Sum of |c_k| |z|^k; the natural scale for judging rounding in operator().
  [[nodiscard]] double magnitude_bound(cplx z) const {
    double acc = 0.0;
    const double r = std::abs(z);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  [[nodiscard]] PolyCoeffs derivative() const {
    if (coeffs_.size() == 1) return PolyCoeffs{};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
      d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return PolyCoeffs(std::move(d));
  }

  friend PolyCoeffs operator+(const PolyCoeffs& a, const PolyCoeffs& b) {
    std::vector<cplx> c(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
    return PolyCoeffs(std::move(c));
  }

  friend PolyCoeffs operator*(cplx s, const PolyCoeffs& p) {
    std::vector<cplx> c(p.coeffs_);
    for (auto& v : c) v *= s;
    return PolyCoeffs(std::move(c));
  }

  friend PolyCoeffs operator*(const PolyCoeffs& a, const PolyCoeffs& b) {
    std::vector<cplx> c(a.size() + b.size() - 1, cplx{0.0});
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return PolyCoeffs(std::move(c));
  }

 private:
  void trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(cplx{0.0});
  }

  std::vector<cplx> coeffs_;
};

}  // namespace pseudospec
