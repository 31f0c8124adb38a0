#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <ostream>
#include <tuple>
#include <utility>
#include <vector>

#include "qdisc/qscalar.hpp"

namespace qdisc {

enum class Ordering {
  kNormal,      // sum a_jk z^j z*^k
  kAntiNormal,  // sum a_jk z*^j z^k
};

/// Finitely supported polynomial in z, z* in a fixed ordering. Key (j, k) is
/// the exponent of the left factor then of the right factor.
template <Scalar R>
class OrderedElement {
 public:
  using Key = std::pair<int, int>;

  OrderedElement(Ordering ordering, R zero) : ordering_(ordering), zero_(std::move(zero)) {}

  static OrderedElement monomial(Ordering ordering, int j, int k, const R& coeff) {
    OrderedElement e(ordering, lift(coeff, Rational(0)));
    e.add(j, k, coeff);
    return e;
  }

  Ordering ordering() const { return ordering_; }
  const R& zero() const { return zero_; }
  const std::map<Key, R>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  R coeff(int j, int k) const {
    auto it = terms_.find({j, k});
    return it == terms_.end() ? zero_ : it->second;
  }

  void add(int j, int k, const R& c) {
    if (j < 0 || k < 0) throw IndexOutOfRange("negative exponent in ordered element");
    if (is_zero_value(c)) return;
    auto [it, inserted] = terms_.try_emplace({j, k}, c);
    if (!inserted) {
      it->second = it->second + c;
      if (is_zero_value(it->second)) terms_.erase(it);
    }
  }

  /// Largest exponent of either variable; -1 for the zero element.
  int max_degree() const {
    int d = -1;
    for (const auto& [key, c] : terms_) d = std::max({d, key.first, key.second});
    return d;
  }
  /// Largest |j - k|, the diagonal half-width of the matrix image.
  int max_offset() const {
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max(d, std::abs(key.first - key.second));
    return d;
  }

  OrderedElement& operator+=(const OrderedElement& o) {
    require_same_ordering(o);
    for (const auto& [key, c] : o.terms_) add(key.first, key.second, c);
    return *this;
  }
  OrderedElement& operator-=(const OrderedElement& o) {
    require_same_ordering(o);
    for (const auto& [key, c] : o.terms_) add(key.first, key.second, zero_ - c);
    return *this;
  }
  OrderedElement& operator*=(const R& c) {
    std::map<Key, R> out;
    for (const auto& [key, v] : terms_) {
      R p = v * c;
      if (!is_zero_value(p)) out.emplace(key, std::move(p));
    }
    terms_ = std::move(out);
    return *this;
  }

  friend OrderedElement operator+(OrderedElement a, const OrderedElement& b) { return a += b; }
  friend OrderedElement operator-(OrderedElement a, const OrderedElement& b) { return a -= b; }
  friend OrderedElement operator*(OrderedElement a, const R& c) { return a *= c; }

  friend bool operator==(const OrderedElement& a, const OrderedElement& b) {
    return a.ordering_ == b.ordering_ && a.terms_ == b.terms_;
  }

  friend std::ostream& operator<<(std::ostream& os, const OrderedElement& e) {
    const char* left = e.ordering_ == Ordering::kNormal ? "z" : "z*";
    const char* right = e.ordering_ == Ordering::kNormal ? "z*" : "z";
    if (e.terms_.empty()) return os << '0';
    bool first = true;
    for (const auto& [key, c] : e.terms_) {
      if (!first) os << " + ";
      os << '[' << c << "] " << left << '^' << key.first << ' ' << right << '^' << key.second;
      first = false;
    }
    return os;
  }

 private:
  static bool is_zero_value(const R& c) { return qdisc::is_zero(c); }
  void require_same_ordering(const OrderedElement& o) const {
    if (o.ordering_ != ordering_) throw OrderIncompatible("mixing normal and anti-normal elements");
  }

  Ordering ordering_;
  R zero_;
  std::map<Key, R> terms_;
};

/// Finite function sum c_{jnk} z^j f_n z*^k; f_n is the diagonal unit at n.
/// The spanning set is redundant, so equality is decided on matrices.
template <Scalar R>
struct MixedElement {
  using Key = std::tuple<int, int, int>;  // (j, n, k)
  R zero;
  std::map<Key, R> terms;

  explicit MixedElement(R z) : zero(std::move(z)) {}

  void add(int j, int n, int k, const R& c) {
    if (j < 0 || n < 0 || k < 0) throw IndexOutOfRange("negative index in finite element");
    if (qdisc::is_zero(c)) return;
    auto [it, inserted] = terms.try_emplace({j, n, k}, c);
    if (!inserted) {
      it->second = it->second + c;
      if (qdisc::is_zero(it->second)) terms.erase(it);
    }
  }

  /// Matrix support bound: entries live at (j+n, k+n).
  std::size_t support() const {
    std::size_t s = 0;
    for (const auto& [key, c] : terms) {
      auto [j, n, k] = key;
      s = std::max<std::size_t>(s, static_cast<std::size_t>(std::max(j, k) + n) + 1);
    }
    return s;
  }
};

/// Radial element sum c_n f_n (diagonal under the representation).
template <Scalar R>
struct RadialElement {
  std::vector<R> coeffs;
};

// Commutation machinery. With y x = r x y + (1 - r), one has
// y x^c = r^c x^c y + (1 - r^c) x^{c-1}, hence y^b x^c expands into terms
// x^i y^j. For (y, x) = (z*, z) r = q^2; for (y, x) = (z, z*) r = q^{-2}.
namespace detail {

inline std::map<std::pair<int, int>, Rational> reorder_word(int b, int c, const Rational& r) {
  using Map = std::map<std::pair<int, int>, Rational>;
  // table[bb] holds y^bb x^cc for cc = 0..c
  std::vector<std::vector<Map>> table(static_cast<std::size_t>(b) + 1,
                                      std::vector<Map>(static_cast<std::size_t>(c) + 1));
  for (int cc = 0; cc <= c; ++cc) table[0][cc][{cc, 0}] = 1;
  for (int bb = 1; bb <= b; ++bb) {
    table[bb][0][{0, bb}] = 1;
    for (int cc = 1; cc <= c; ++cc) {
      Map& out = table[bb][cc];
      Rational rc = ipow(r, cc);
      // y^{bb} x^{cc} = (y^{bb-1} x^{cc}) y r^{cc} ... via y^{bb-1} (y x^{cc})
      for (const auto& [key, v] : table[bb - 1][cc]) out[{key.first, key.second + 1}] += v * rc;
      Rational tail = 1 - rc;
      for (const auto& [key, v] : table[bb - 1][cc - 1]) out[{key.first, key.second}] += v * tail;
      for (auto it = out.begin(); it != out.end();) {
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
      }
    }
  }
  return table[b][c];
}

}  // namespace detail

/// Normal-ordered coefficients (i, j) of z*^b z^c = sum a_ij z^i z*^j.
inline std::map<std::pair<int, int>, Rational> swap_zbar_z(const QContext& ctx, int b, int c) {
  return detail::reorder_word(b, c, ctx.q2());
}

/// Anti-normal coefficients (i, j) of z^a z*^b = sum a_ij z*^i z^j.
inline std::map<std::pair<int, int>, Rational> swap_z_zbar(const QContext& ctx, int a, int b) {
  return detail::reorder_word(a, b, 1 / ctx.q2());
}

/// Rewrites an element in the other ordering using the commutation relation.
template <Scalar R>
OrderedElement<R> reorder(const QContext& ctx, const OrderedElement<R>& e, Ordering target) {
  if (e.ordering() == target) return e;
  OrderedElement<R> out(target, e.zero());
  for (const auto& [key, c] : e.terms()) {
    auto expansion = target == Ordering::kNormal ? swap_zbar_z(ctx, key.first, key.second)
                                                 : swap_z_zbar(ctx, key.first, key.second);
    for (const auto& [k2, v] : expansion) out.add(k2.first, k2.second, c * v);
  }
  return out;
}

/// Product of normal-ordered elements, normal-ordered.
template <Scalar R>
OrderedElement<R> multiply(const QContext& ctx, const OrderedElement<R>& a,
                           const OrderedElement<R>& b) {
  if (a.ordering() != Ordering::kNormal || b.ordering() != Ordering::kNormal) {
    throw OrderIncompatible("multiply expects normal-ordered factors");
  }
  OrderedElement<R> out(Ordering::kNormal, a.zero());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      R cab = ca * cb;
      for (const auto& [km, v] : swap_zbar_z(ctx, ka.second, kb.first)) {
        out.add(ka.first + km.first, km.second + kb.second, cab * v);
      }
    }
  }
  return out;
}

}  // namespace qdisc
