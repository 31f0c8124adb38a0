#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qdisc/errors.hpp"
#include "qdisc/tseries.hpp"

namespace qdisc {

/// Nonzero entries (i, j) of a banded matrix satisfy -lo <= i - j <= hi.
struct Band {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const Band&, const Band&) = default;
};

/// Truncated matrix of an operator on the basis {z^m}, m = 0..dim-1, columns
/// holding images of basis vectors.
///
/// Truncation bookkeeping: entries (i, j) with i, j < reliable() coincide with
/// the untruncated operator. When support() is set, the untruncated matrix
/// vanishes outside [0, support())^2, i.e. the operator is finite.
template <Scalar R>
class OpMatrix {
 public:
  OpMatrix(std::size_t dim, R zero)
      : dim_(dim), reliable_(dim), zero_(std::move(zero)), a_(dim * dim, zero_) {
    if (dim == 0) throw IndexOutOfRange("matrix dimension must be >= 1");
  }

  static OpMatrix identity(std::size_t dim, const R& zero) {
    OpMatrix m(dim, zero);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = lift(zero, Rational(1));
    m.band_ = Band{0, 0};
    return m;
  }

  std::size_t dim() const { return dim_; }
  std::size_t reliable() const { return reliable_; }
  const std::optional<Band>& band() const { return band_; }
  const std::optional<std::size_t>& support() const { return support_; }
  const R& zero() const { return zero_; }

  bool is_finite() const { return support_.has_value(); }
  /// Finite and entirely inside the reliable block.
  bool fully_known() const { return support_ && *support_ <= reliable_; }

  void set_band(std::optional<Band> b) { band_ = b; }
  void set_support(std::optional<std::size_t> s) { support_ = s; }
  void set_reliable(std::size_t r) { reliable_ = std::min(r, dim_); }

  const R& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  R& at(std::size_t i, std::size_t j) {
    if (i >= dim_ || j >= dim_) {
      throw IndexOutOfRange("entry (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside dimension " + std::to_string(dim_));
    }
    return a_[i * dim_ + j];
  }

  /// Entries stored outside the declared band or support must be zero.
  bool consistent() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        if (is_zero((*this)(i, j))) continue;
        if (support_ && (i >= *support_ || j >= *support_)) return false;
        if (band_) {
          long d = static_cast<long>(i) - static_cast<long>(j);
          if (d > band_->hi || -d > band_->lo) return false;
        }
      }
    }
    return true;
  }

  /// Smallest band containing the stored nonzero entries.
  Band stored_band() const {
    Band b{-static_cast<int>(dim_), -static_cast<int>(dim_)};
    bool any = false;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        if (is_zero((*this)(i, j))) continue;
        int d = static_cast<int>(i) - static_cast<int>(j);
        b.hi = any ? std::max(b.hi, d) : d;
        b.lo = any ? std::max(b.lo, -d) : -d;
        any = true;
      }
    }
    return any ? b : Band{0, 0};
  }

  OpMatrix transpose() const {
    OpMatrix t(dim_, zero_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t.a_[j * dim_ + i] = (*this)(i, j);
    t.reliable_ = reliable_;
    t.support_ = support_;
    if (band_) t.band_ = Band{band_->hi, band_->lo};
    return t;
  }

  OpMatrix& operator*=(const Rational& c) {
    for (auto& x : a_) x = x * c;
    return *this;
  }
  OpMatrix& scale(const R& c) {
    for (auto& x : a_) x = x * c;
    return *this;
  }

  OpMatrix& operator+=(const OpMatrix& o) { return accumulate(o, true); }
  OpMatrix& operator-=(const OpMatrix& o) { return accumulate(o, false); }

  friend OpMatrix operator+(OpMatrix a, const OpMatrix& b) { return a += b; }
  friend OpMatrix operator-(OpMatrix a, const OpMatrix& b) { return a -= b; }
  friend OpMatrix operator*(OpMatrix a, const Rational& c) { return a *= c; }

  /// Product with truncation bookkeeping. An entry (i, j) of the product is
  /// exact when every summation index k that can carry a nonzero term of the
  /// untruncated operators stays below min(reliable_A, reliable_B).
  friend OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) {
    if (a.dim_ != b.dim_) throw IndexOutOfRange("dimension mismatch in product");
    const std::size_t n = a.dim_;
    OpMatrix c(n, a.zero_);
    std::vector<std::vector<std::size_t>> b_rows(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (!is_zero(b(k, j))) b_rows[k].push_back(j);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const R& aik = a(i, k);
        if (b_rows[k].empty() || is_zero(aik)) continue;
        for (std::size_t j : b_rows[k]) {
          R& cij = c.a_[i * n + j];
          cij = cij + aik * b(k, j);
        }
      }
    }

    const std::size_t base = std::min(a.reliable_, b.reliable_);
    std::size_t rel = 0;
    if ((a.support_ && *a.support_ <= base) || (b.support_ && *b.support_ <= base)) {
      rel = base;
    } else if (a.band_ || b.band_) {
      // k <= j + hi_B and k <= i + lo_A
      long shift = std::numeric_limits<long>::max();
      if (b.band_) shift = std::min<long>(shift, b.band_->hi);
      if (a.band_) shift = std::min<long>(shift, a.band_->lo);
      shift = std::max<long>(shift, 0);
      rel = static_cast<long>(base) > shift ? base - static_cast<std::size_t>(shift) : 0;
    }
    c.reliable_ = rel;

    if (a.band_ && b.band_) c.band_ = Band{a.band_->lo + b.band_->lo, a.band_->hi + b.band_->hi};
    if (a.support_ && b.support_) {
      c.support_ = std::max(*a.support_, *b.support_);
    } else if (a.support_ && b.band_) {
      c.support_ = *a.support_ + static_cast<std::size_t>(std::max(b.band_->lo, 0));
    } else if (b.support_ && a.band_) {
      c.support_ = *b.support_ + static_cast<std::size_t>(std::max(a.band_->hi, 0));
    }
    if (c.support_ && !c.band_) {
      int s = static_cast<int>(*c.support_);
      c.band_ = Band{s, s};
    }
    return c;
  }

  /// Compares the leading n x n blocks.
  friend bool block_equal(const OpMatrix& a, const OpMatrix& b, std::size_t n) {
    if (n > a.dim_ || n > b.dim_) return false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!(a(i, j) == b(i, j))) return false;
    return true;
  }

 private:
  OpMatrix& accumulate(const OpMatrix& o, bool add) {
    if (o.dim_ != dim_) throw IndexOutOfRange("dimension mismatch in sum");
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (add) {
        a_[i] = a_[i] + o.a_[i];
      } else {
        a_[i] = a_[i] - o.a_[i];
      }
    }
    reliable_ = std::min(reliable_, o.reliable_);
    if (band_ && o.band_) {
      band_ = Band{std::max(band_->lo, o.band_->lo), std::max(band_->hi, o.band_->hi)};
    } else {
      band_.reset();
    }
    if (support_ && o.support_) {
      support_ = std::max(*support_, *o.support_);
    } else {
      support_.reset();
    }
    return *this;
  }

  std::size_t dim_;
  std::size_t reliable_;
  std::optional<Band> band_;
  std::optional<std::size_t> support_;
  R zero_;
  std::vector<R> a_;
};

/// Copy of a finite, fully known matrix in another dimension.
template <Scalar R>
OpMatrix<R> resize_finite(const OpMatrix<R>& m, std::size_t dim) {
  if (!m.fully_known()) throw NotFinite("only finite, fully known matrices can be resized");
  const std::size_t s = *m.support();
  if (s > dim) throw TruncationTooSmall("support " + std::to_string(s) + " exceeds dimension " + std::to_string(dim));
  OpMatrix<R> out(dim, m.zero());
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) out.at(i, j) = m(i, j);
  out.set_support(s);
  out.set_band(m.band());
  return out;
}

/// Entrywise lift of a rational matrix into the ring of `like`.
template <Scalar R>
OpMatrix<R> lift_matrix(const OpMatrix<Rational>& m, const R& like) {
  OpMatrix<R> out(m.dim(), lift(like, Rational(0)));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (!is_zero(m(i, j))) out.at(i, j) = lift(like, m(i, j));
  out.set_reliable(m.reliable());
  out.set_band(m.band());
  out.set_support(m.support());
  return out;
}

}  // namespace qdisc
