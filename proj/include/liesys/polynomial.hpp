#ifndef LIESYS_POLYNOMIAL_HPP
#define LIESYS_POLYNOMIAL_HPP

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/rational.hpp"

namespace liesys {

/// Multivariate polynomial with exact rational coefficients over a fixed,
/// ordered variable list. Canonical form: no zero terms, unique exponent
/// keys, so structural equality is value equality.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;
  using TermMap = std::map<Exponents, Rational>;

  Polynomial() = default;

  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial constant(const std::vector<std::string>& vars, Rational c) {
    Polynomial p(vars);
    p.add_term(Exponents(vars.size(), 0), std::move(c));
    return p;
  }

  static Polynomial variable(const std::vector<std::string>& vars, std::size_t index) {
    if (index >= vars.size()) throw InputError("variable index out of range");
    Polynomial p(vars);
    Exponents e(vars.size(), 0);
    e[index] = 1;
    p.add_term(e, Rational(1));
    return p;
  }

  static Polynomial monomial(const std::vector<std::string>& vars, Exponents e,
                             Rational c) {
    Polynomial p(vars);
    if (e.size() != vars.size())
      throw InputError("exponent vector length does not match variable list");
    p.add_term(std::move(e), std::move(c));
    return p;
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
  }

  Rational constant_value() const {
    if (terms_.empty()) return Rational(0);
    return terms_.begin()->second;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (unsigned k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  /// Adds c * x^e, erasing the term if the sum cancels.
  void add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    if (e.size() != vars_.size())
      throw InputError("exponent vector length does not match variable list");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial operator-() const {
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same_variables(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same_variables(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_variables(b);
    Polynomial r(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Rational& c) const {
    Polynomial r(vars_);
    if (c == 0) return r;
    for (const auto& [e, coef] : terms_) r.terms_.emplace(e, coef * c);
    return r;
  }

  Polynomial pow(unsigned n) const {
    Polynomial acc = constant(vars_, Rational(1));
    Polynomial base = *this;
    while (n > 0) {
      if (n & 1u) acc *= base;
      base *= base;
      n >>= 1;
    }
    return acc;
  }

  /// Exact partial derivative with respect to the index-th variable.
  Polynomial derivative(std::size_t index) const {
    if (index >= vars_.size()) throw InputError("variable index out of range");
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[index] == 0) continue;
      Exponents d = e;
      d[index] -= 1;
      r.add_term(d, c * Rational(e[index]));
    }
    return r;
  }

  /// Evaluation at a point; T is double or Rational.
  template <typename T>
  T eval(const std::vector<T>& point) const {
    if (point.size() != vars_.size())
      throw InputError("evaluation point dimension does not match variable list");
    T acc = T(0);
    for (const auto& [e, c] : terms_) {
      T term = coefficient_as<T>(c);
      for (std::size_t k = 0; k < e.size(); ++k) {
        for (unsigned rep = 0; rep < e[k]; ++rep) term = term * point[k];
      }
      acc = acc + term;
    }
    return acc;
  }

  bool operator==(const Polynomial& o) const {
    return vars_ == o.vars_ && terms_ == o.terms_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  /// DSL-compatible rendering, e.g. `3*x*v + x^3` or `-1/2*x^2`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational mag = c;
      if (first) {
        if (c < 0) {
          out << "-";
          mag = -c;
        }
      } else {
        out << (c < 0 ? " - " : " + ");
        mag = c < 0 ? Rational(-c) : c;
      }
      out << term_string(e, mag);
      first = false;
    }
    return out.str();
  }

  void check_same_variables(const Polynomial& o) const {
    if (vars_ != o.vars_)
      throw VariableMismatchError("variable lists differ: [" + join(vars_) +
                                  "] vs [" + join(o.vars_) + "]");
  }

  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += v[i];
    }
    return s;
  }

 private:
  template <typename T>
  static T coefficient_as(const Rational& c) {
    return static_cast<T>(c);
  }

  std::string term_string(const Exponents& e, const Rational& mag) const {
    std::ostringstream out;
    bool has_vars = false;
    for (unsigned k : e) has_vars = has_vars || k > 0;
    bool printed = false;
    if (!has_vars || mag != 1) {
      out << liesys::to_string(mag);
      printed = true;
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (printed) out << "*";
      out << vars_[k];
      if (e[k] > 1) out << "^" << e[k];
      printed = true;
    }
    return out.str();
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

template <>
inline double Polynomial::coefficient_as<double>(const Rational& c) {
  return to_double(c);
}

}  // namespace liesys

#endif  // LIESYS_POLYNOMIAL_HPP
