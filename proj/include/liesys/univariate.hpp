#ifndef LIESYS_UNIVARIATE_HPP
#define LIESYS_UNIVARIATE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/rational.hpp"

namespace liesys {

/// Dense univariate polynomial over the rationals, coefficients in
/// ascending degree order with no trailing zeros (zero polynomial = {}).
/// Degrees here are tiny (bounded by the Lie algebra dimension), so plain
/// rational arithmetic is entirely adequate.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly constant(Rational v) { return UniPoly({std::move(v)}); }

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const Rational& leading() const {
    if (c_.empty()) throw InputError("leading coefficient of zero polynomial");
    return c_.back();
  }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(i);
    return UniPoly(std::move(d));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r));
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return UniPoly(std::move(r));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r));
  }

  UniPoly scaled(const Rational& m) const {
    std::vector<Rational> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] * m;
    return UniPoly(std::move(r));
  }

  UniPoly monic() const {
    if (is_zero()) return UniPoly();
    return scaled(Rational(1) / leading());
  }

  /// Euclidean division: returns (quotient, remainder) with
  /// deg(remainder) < deg(divisor).
  static std::pair<UniPoly, UniPoly> divmod(const UniPoly& num, const UniPoly& den) {
    if (den.is_zero()) throw NumericalError("polynomial division by zero");
    std::vector<Rational> rem = num.c_;
    const int dd = den.degree();
    if (num.degree() < dd) return {UniPoly(), num};
    std::vector<Rational> quot(num.c_.size() - den.c_.size() + 1, Rational(0));
    for (std::size_t i = rem.size(); i-- > den.c_.size() - 1;) {
      if (static_cast<int>(i) < dd) break;
      if (rem[i] == 0) continue;
      const Rational q = rem[i] / den.leading();
      quot[i - dd] = q;
      for (std::size_t j = 0; j < den.c_.size(); ++j)
        rem[i - dd + j] -= q * den.c_[j];
    }
    return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
  }

  bool operator==(const UniPoly& o) const { return c_ == o.c_; }
  bool operator!=(const UniPoly& o) const { return !(*this == o); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

/// Monic greatest common divisor; gcd(0,0) = 0.
inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = UniPoly::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Yun's square-free decomposition: p = lc · Π factor_i ^ multiplicity_i with
/// each factor monic, square-free, and pairwise coprime.
inline std::vector<std::pair<UniPoly, unsigned>> yun_squarefree(const UniPoly& p) {
  std::vector<std::pair<UniPoly, unsigned>> out;
  if (p.degree() <= 0) return out;
  UniPoly a = p.monic();
  UniPoly da = a.derivative();
  UniPoly g = uni_gcd(a, da);
  UniPoly w = UniPoly::divmod(a, g).first;
  UniPoly y = UniPoly::divmod(da, g).first;
  UniPoly z = y - w.derivative();
  unsigned mult = 1;
  while (w.degree() > 0) {
    UniPoly f = uni_gcd(w, z);
    if (f.degree() > 0) out.emplace_back(f, mult);
    w = UniPoly::divmod(w, f).first;
    y = UniPoly::divmod(z, f).first;
    z = y - w.derivative();
    ++mult;
  }
  return out;
}

namespace detail {

inline int sign_at(const Rational& v) { return sign_of(v); }

/// Number of sign changes in a sequence, ignoring zeros.
inline unsigned sign_changes(const std::vector<int>& signs) {
  unsigned changes = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace detail

/// Sturm chain of p: p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).
inline std::vector<UniPoly> sturm_chain(const UniPoly& p) {
  std::vector<UniPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  UniPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (true) {
    const UniPoly& a = chain[chain.size() - 2];
    const UniPoly& b = chain[chain.size() - 1];
    UniPoly r = UniPoly::divmod(a, b).second;
    if (r.is_zero()) break;
    chain.push_back(r.scaled(Rational(-1)));
  }
  return chain;
}

/// Counts distinct real roots of a square-free p that are strictly positive
/// and strictly negative, via Sturm sign-change counts at -inf, 0, +inf.
/// Requires p(0) != 0 so that 0 itself is not a root.
inline std::pair<unsigned, unsigned> sturm_count_pos_neg(const UniPoly& p) {
  if (p.is_zero() || p.eval(Rational(0)) == 0)
    throw InputError("sign counting requires a nonzero value at 0");
  const std::vector<UniPoly> chain = sturm_chain(p);
  std::vector<int> at_neg_inf, at_zero, at_pos_inf;
  at_neg_inf.reserve(chain.size());
  at_zero.reserve(chain.size());
  at_pos_inf.reserve(chain.size());
  for (const UniPoly& q : chain) {
    const int lead = detail::sign_at(q.leading());
    const int deg = q.degree();
    at_pos_inf.push_back(lead);
    at_neg_inf.push_back(deg % 2 == 0 ? lead : -lead);
    at_zero.push_back(detail::sign_at(q.eval(Rational(0))));
  }
  const unsigned v_neg = detail::sign_changes(at_neg_inf);
  const unsigned v_zero = detail::sign_changes(at_zero);
  const unsigned v_pos = detail::sign_changes(at_pos_inf);
  return {v_zero - v_pos, v_neg - v_zero};
}

}  // namespace liesys

#endif  // LIESYS_UNIVARIATE_HPP
