#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qosc/error.hpp"

namespace qosc {

/**
 * Square banded matrix: finite truncation of a semi-infinite banded operator.
 *
 * Band k (k in [-lower, upper]) holds size - |k| entries; element m of band
 * k >= 0 is entry (m, m + k), element m of band k < 0 is entry (m - k, m).
 * Entries outside the declared band read as zero.
 *
 * Templated on the scalar so that the same kernel runs in double precision
 * and in exact rational arithmetic.
 */
template <class T>
class BasicBandMatrix {
 public:
  BasicBandMatrix() = default;

  BasicBandMatrix(std::size_t size, int lower, int upper)
      : size_(size), lower_(lower), upper_(upper) {
    if (size == 0) throw Error(ErrorKind::invalid_parameter, "band matrix size must be positive");
    if (lower < 0 || upper < 0) {
      throw Error(ErrorKind::invalid_parameter, "bandwidths must be non-negative");
    }
    bands_.resize(static_cast<std::size_t>(lower + upper + 1));
    for (int k = -lower; k <= upper; ++k) bands_[slot(k)].assign(band_length(k), T(0));
  }

  static BasicBandMatrix identity(std::size_t size) {
    BasicBandMatrix m(size, 0, 0);
    std::fill(m.bands_[0].begin(), m.bands_[0].end(), T(1));
    return m;
  }

  static BasicBandMatrix diagonal(std::vector<T> d) {
    BasicBandMatrix m(d.size(), 0, 0);
    m.bands_[0] = std::move(d);
    return m;
  }

  /// sub and super have size - 1 entries.
  static BasicBandMatrix tridiagonal(std::vector<T> sub, std::vector<T> diag, std::vector<T> super) {
    const std::size_t n = diag.size();
    if (n == 0 || sub.size() + 1 != n || super.size() + 1 != n) {
      throw Error(ErrorKind::invalid_parameter, "tridiagonal: band lengths inconsistent with size");
    }
    BasicBandMatrix m(n, 1, 1);
    m.bands_[m.slot(-1)] = std::move(sub);
    m.bands_[m.slot(0)] = std::move(diag);
    m.bands_[m.slot(1)] = std::move(super);
    return m;
  }

  std::size_t size() const noexcept { return size_; }
  int lower() const noexcept { return lower_; }
  int upper() const noexcept { return upper_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept {
    if (i >= size_ || j >= size_) return false;
    const long k = static_cast<long>(j) - static_cast<long>(i);
    return k >= -lower_ && k <= upper_;
  }

  T operator()(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return T(0);
    const int k = static_cast<int>(static_cast<long>(j) - static_cast<long>(i));
    return bands_[slot(k)][k >= 0 ? i : j];
  }

  /// Mutable access; throws out_of_range outside the declared band.
  T& ref(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) {
      throw Error(ErrorKind::out_of_range,
                  "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside band");
    }
    const int k = static_cast<int>(static_cast<long>(j) - static_cast<long>(i));
    return bands_[slot(k)][k >= 0 ? i : j];
  }

  std::span<const T> band(int k) const {
    check_offset(k);
    return bands_[slot(k)];
  }

  std::span<T> band(int k) {
    check_offset(k);
    return bands_[slot(k)];
  }

  /// Same entries with a wider declared band.
  BasicBandMatrix widened(int lower, int upper) const {
    BasicBandMatrix out(size_, std::max(lower, lower_), std::max(upper, upper_));
    for (int k = -lower_; k <= upper_; ++k) {
      std::copy(bands_[slot(k)].begin(), bands_[slot(k)].end(), out.bands_[out.slot(k)].begin());
    }
    return out;
  }

  BasicBandMatrix& operator+=(const BasicBandMatrix& o) { return axpy(T(1), o); }
  BasicBandMatrix& operator-=(const BasicBandMatrix& o) { return axpy(T(-1), o); }

  BasicBandMatrix& operator*=(const T& s) {
    for (auto& b : bands_) {
      for (auto& v : b) v *= s;
    }
    return *this;
  }

  /// this += s * o, widening the band when needed.
  BasicBandMatrix& axpy(const T& s, const BasicBandMatrix& o) {
    if (o.size_ != size_) throw Error(ErrorKind::invalid_parameter, "band matrix size mismatch");
    if (o.lower_ > lower_ || o.upper_ > upper_) *this = widened(o.lower_, o.upper_);
    for (int k = -o.lower_; k <= o.upper_; ++k) {
      auto& dst = bands_[slot(k)];
      const auto& src = o.bands_[o.slot(k)];
      for (std::size_t m = 0; m < src.size(); ++m) dst[m] += s * src[m];
    }
    return *this;
  }

  friend BasicBandMatrix operator+(BasicBandMatrix a, const BasicBandMatrix& b) { return a += b; }
  friend BasicBandMatrix operator-(BasicBandMatrix a, const BasicBandMatrix& b) { return a -= b; }
  friend BasicBandMatrix operator*(const T& s, BasicBandMatrix a) { return a *= s; }

 private:
  std::size_t slot(int k) const noexcept { return static_cast<std::size_t>(k + lower_); }

  std::size_t band_length(int k) const noexcept {
    const std::size_t ak = static_cast<std::size_t>(k < 0 ? -k : k);
    return ak >= size_ ? 0 : size_ - ak;
  }

  void check_offset(int k) const {
    if (k < -lower_ || k > upper_) {
      throw Error(ErrorKind::out_of_range, "band offset " + std::to_string(k) + " not stored");
    }
  }

  std::size_t size_ = 0;
  int lower_ = 0;
  int upper_ = 0;
  std::vector<std::vector<T>> bands_;
};

using BandMatrix = BasicBandMatrix<double>;

/// Exact product; output bandwidths are the sums of the input bandwidths.
template <class T>
BasicBandMatrix<T> band_mul(const BasicBandMatrix<T>& a, const BasicBandMatrix<T>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::invalid_parameter, "band_mul: size mismatch");
  const long n = static_cast<long>(a.size());
  BasicBandMatrix<T> c(a.size(), a.lower() + b.lower(), a.upper() + b.upper());
  for (long i = 0; i < n; ++i) {
    const long k_lo = std::max(0L, i - a.lower());
    const long k_hi = std::min(n - 1, i + a.upper());
    for (long k = k_lo; k <= k_hi; ++k) {
      const T aik = a(i, k);
      if (aik == T(0)) continue;
      const long j_lo = std::max(0L, k - b.lower());
      const long j_hi = std::min(n - 1, k + b.upper());
      for (long j = j_lo; j <= j_hi; ++j) c.ref(i, j) += aik * b(k, j);
    }
  }
  return c;
}

/// AB - qBA.
template <class T>
BasicBandMatrix<T> q_commutator(const BasicBandMatrix<T>& a, const BasicBandMatrix<T>& b, const T& q) {
  BasicBandMatrix<T> out = band_mul(a, b);
  out.axpy(-q, band_mul(b, a));
  return out;
}

template <class T>
BasicBandMatrix<T> transpose(const BasicBandMatrix<T>& m) {
  BasicBandMatrix<T> t(m.size(), m.upper(), m.lower());
  for (int k = -m.lower(); k <= m.upper(); ++k) {
    const auto src = m.band(k);
    auto dst = t.band(-k);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return t;
}

/// Number of leading rows of the truncated product X*Y that coincide with the
/// truncation of the product of the underlying semi-infinite operators. Row i
/// of X reaches column i + upper(X); when that column lies outside the
/// truncation, the missing term only matters if Y has a subdiagonal band.
template <class T>
std::size_t exact_product_rows(const BasicBandMatrix<T>& x, const BasicBandMatrix<T>& y) {
  const std::size_t n = x.size();
  if (x.upper() == 0 || y.lower() == 0) return n;
  const auto up = static_cast<std::size_t>(x.upper());
  return up >= n ? 0 : n - up;
}

}  // namespace qosc
