#ifndef LIESYS_VECTOR_FIELD_HPP
#define LIESYS_VECTOR_FIELD_HPP

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/polynomial.hpp"
#include "liesys/rational.hpp"

namespace liesys {

/// Polynomial vector field on R^n: one Polynomial component per variable,
/// all over the same ordered variable list.
class PolyVectorField {
 public:
  PolyVectorField() = default;

  explicit PolyVectorField(std::vector<std::string> vars)
      : vars_(std::move(vars)),
        components_(vars_.size(), Polynomial(vars_)) {}

  PolyVectorField(std::vector<std::string> vars, std::vector<Polynomial> components)
      : vars_(std::move(vars)), components_(std::move(components)) {
    if (components_.size() != vars_.size())
      throw InputError("component count does not match variable list");
    for (const auto& c : components_) {
      if (c.variables() != vars_)
        throw VariableMismatchError(
            "component variable list differs from field variable list: [" +
            Polynomial::join(c.variables()) + "] vs [" + Polynomial::join(vars_) +
            "]");
    }
  }

  static PolyVectorField zero(const std::vector<std::string>& vars) {
    return PolyVectorField(vars);
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Polynomial>& components() const { return components_; }
  std::size_t dimension() const { return vars_.size(); }

  const Polynomial& component(std::size_t i) const {
    if (i >= components_.size()) throw InputError("component index out of range");
    return components_[i];
  }

  void set_component(std::size_t i, Polynomial p) {
    if (i >= components_.size()) throw InputError("component index out of range");
    if (p.variables() != vars_)
      throw VariableMismatchError(
          "component variable list differs from field variable list: [" +
          Polynomial::join(p.variables()) + "] vs [" + Polynomial::join(vars_) + "]");
    components_[i] = std::move(p);
  }

  bool is_zero() const {
    for (const auto& c : components_)
      if (!c.is_zero()) return false;
    return true;
  }

  PolyVectorField operator-() const {
    PolyVectorField r(vars_);
    for (std::size_t i = 0; i < components_.size(); ++i)
      r.components_[i] = -components_[i];
    return r;
  }

  PolyVectorField& operator+=(const PolyVectorField& o) {
    check_same_variables(o);
    for (std::size_t i = 0; i < components_.size(); ++i)
      components_[i] += o.components_[i];
    return *this;
  }

  PolyVectorField& operator-=(const PolyVectorField& o) {
    check_same_variables(o);
    for (std::size_t i = 0; i < components_.size(); ++i)
      components_[i] -= o.components_[i];
    return *this;
  }

  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) {
    return a += b;
  }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) {
    return a -= b;
  }

  PolyVectorField scaled(const Rational& c) const {
    PolyVectorField r(vars_);
    for (std::size_t i = 0; i < components_.size(); ++i)
      r.components_[i] = components_[i].scaled(c);
    return r;
  }

  bool operator==(const PolyVectorField& o) const {
    return vars_ == o.vars_ && components_ == o.components_;
  }
  bool operator!=(const PolyVectorField& o) const { return !(*this == o); }

  /// Component-wise evaluation; T is double or Rational.
  template <typename T>
  std::vector<T> eval(const std::vector<T>& point) const {
    std::vector<T> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.eval(point));
    return out;
  }

  /// Directional derivative of a scalar: X(f) = sum_i X^i * df/dx_i.
  Polynomial lie_derivative(const Polynomial& f) const {
    if (f.variables() != vars_)
      throw VariableMismatchError(
          "scalar variable list differs from field variable list: [" +
          Polynomial::join(f.variables()) + "] vs [" + Polynomial::join(vars_) + "]");
    Polynomial r(vars_);
    for (std::size_t i = 0; i < components_.size(); ++i)
      r += components_[i] * f.derivative(i);
    return r;
  }

  /// Rendering in the expression syntax accepted by the parser, e.g.
  /// `v*d/dx - x*d/dv`; the zero field renders as `0`.
  std::string to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const Polynomial& c = components_[i];
      if (c.is_zero()) continue;
      // A leading minus is factored out of the whole component so that
      // `-3xv - x^3` prints as `- (3*x*v + x^3)*d/dv`.
      std::string body = c.to_string();
      bool negated = false;
      if (!body.empty() && body[0] == '-') {
        negated = true;
        body = (-c).to_string();
      }
      bool needs_parens = body.find(" + ") != std::string::npos ||
                          body.find(" - ") != std::string::npos;
      if (first) {
        if (negated) out << "-";
      } else {
        out << (negated ? " - " : " + ");
      }
      if (needs_parens) out << "(" << body << ")";
      else if (body != "1") out << body;
      if (body != "1" || needs_parens) out << "*";
      out << "d/d" << vars_[i];
      first = false;
    }
    if (first) return "0";
    return out.str();
  }

  void check_same_variables(const PolyVectorField& o) const {
    if (vars_ != o.vars_)
      throw VariableMismatchError("variable lists differ: [" + Polynomial::join(vars_) +
                                  "] vs [" + Polynomial::join(o.vars_) + "]");
  }

 private:
  std::vector<std::string> vars_;
  std::vector<Polynomial> components_;
};

/// Lie bracket of vector fields: [A,B]^i = A(B^i) - B(A^i).
inline PolyVectorField bracket(const PolyVectorField& a, const PolyVectorField& b) {
  a.check_same_variables(b);
  PolyVectorField r(a.variables());
  for (std::size_t i = 0; i < a.dimension(); ++i)
    r.set_component(i, a.lie_derivative(b.component(i)) -
                           b.lie_derivative(a.component(i)));
  return r;
}

/// Exact linear combination sum_k coeffs[k] * fields[k].
inline PolyVectorField linear_combination(const std::vector<Rational>& coeffs,
                                          const std::vector<PolyVectorField>& fields) {
  if (coeffs.size() != fields.size())
    throw InputError("coefficient count does not match field count");
  if (fields.empty()) throw InputError("linear combination of no fields");
  PolyVectorField r = PolyVectorField::zero(fields[0].variables());
  for (std::size_t k = 0; k < fields.size(); ++k)
    r += fields[k].scaled(coeffs[k]);
  return r;
}

}  // namespace liesys

#endif  // LIESYS_VECTOR_FIELD_HPP
