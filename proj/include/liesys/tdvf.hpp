#ifndef LIESYS_TDVF_HPP
#define LIESYS_TDVF_HPP

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/field_space.hpp"
#include "liesys/time_expr.hpp"
#include "liesys/vector_field.hpp"

namespace liesys {

/// Time-dependent vector field: a finite sum of TimeExpr-coefficient times
/// constant-in-t polynomial vector field. Added terms are normalized to a
/// core form — additive coefficients are distributed over their summands and
/// rational prefactors are folded into the field — and terms with
/// structurally equal cores are merged (fields added). The normal form lets
/// one geometric field reassemble even when its pieces arrive scaled
/// differently (as push-forwards produce them); term order is
/// first-appearance order of the cores, which keeps listings deterministic.
class TDVF {
 public:
  using Term = std::pair<TimeExpr, PolyVectorField>;

  TDVF() = default;
  explicit TDVF(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t dimension() const { return vars_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const TimeExpr& coeff, const PolyVectorField& field) {
    if (field.variables() != vars_)
      throw VariableMismatchError(
          "term variable list differs from system variable list: [" +
          Polynomial::join(field.variables()) + "] vs [" + Polynomial::join(vars_) +
          "]");
    if (coeff.is_zero() || field.is_zero()) return;
    if (coeff.kind() == TimeExpr::Kind::kAdd) {
      for (const auto& part : coeff.children()) add_term(part, field);
      return;
    }
    TimeExpr core = coeff;
    PolyVectorField scaled = field;
    if (coeff.is_rational_constant()) {
      core = TimeExpr::one();
      scaled = field.scaled(coeff.constant_value());
    } else if (coeff.kind() == TimeExpr::Kind::kMul &&
               coeff.children().front().is_rational_constant()) {
      const Rational q = coeff.children().front().constant_value();
      std::vector<TimeExpr> rest(coeff.children().begin() + 1,
                                 coeff.children().end());
      core = TimeExpr::mul(std::move(rest));
      scaled = field.scaled(q);
    }
    for (auto& [c, f] : terms_) {
      if (c == core) {
        f += scaled;
        if (f.is_zero()) remove_zero_fields();
        return;
      }
    }
    terms_.emplace_back(std::move(core), std::move(scaled));
  }

  /// Right-hand side of dx/dt = X(t, x) at a concrete (t, state).
  std::vector<double> eval_rhs(double t, const std::vector<double>& state) const {
    if (state.size() != vars_.size())
      throw InputError("state dimension does not match variable list");
    std::vector<double> out(vars_.size(), 0.0);
    for (const auto& [c, f] : terms_) {
      const double ct = c.eval(t);
      if (ct == 0.0) continue;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        out[i] += ct * f.component(i).eval(state);
    }
    return out;
  }

  /// Term listing such as `(1)*(v*d/dx) + (sin(t))*(d/dv)`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (k) out << " + ";
      out << "(" << terms_[k].first.to_string() << ")*(" << terms_[k].second.to_string()
          << ")";
    }
    return out.str();
  }

 private:
  void remove_zero_fields() {
    std::vector<Term> keep;
    keep.reserve(terms_.size());
    for (auto& t : terms_)
      if (!t.second.is_zero()) keep.push_back(std::move(t));
    terms_ = std::move(keep);
  }

  std::vector<std::string> vars_;
  std::vector<Term> terms_;
};

/// Polynomial in the state variables whose coefficients are closed-form
/// functions of t; the canonical shape of SODE right-hand sides.
class MixedPoly {
 public:
  using Exponents = std::vector<unsigned>;

  MixedPoly() = default;
  explicit MixedPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  const std::vector<std::string>& variables() const { return vars_; }
  const std::map<Exponents, TimeExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const TimeExpr& coeff) {
    if (e.size() != vars_.size())
      throw InputError("exponent vector length does not match variable list");
    if (coeff.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, coeff);
    } else {
      TimeExpr sum = it->second + coeff;
      if (sum.is_zero())
        terms_.erase(it);
      else
        it->second = sum;
    }
  }

  double eval(double t, const std::vector<double>& state) const {
    if (state.size() != vars_.size())
      throw InputError("state dimension does not match variable list");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = c.eval(t);
      for (std::size_t k = 0; k < e.size(); ++k)
        for (unsigned rep = 0; rep < e[k]; ++rep) term *= state[k];
      acc += term;
    }
    return acc;
  }

  /// Rendering such as `-3*x*v - x^3 + (sin(t))*x`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      std::string coeff;
      bool negated = false;
      if (c.is_rational_constant()) {
        Rational v = c.constant_value();
        if (v < 0) {
          negated = true;
          v = -v;
        }
        coeff = liesys::to_string(v);
      } else {
        coeff = "(" + c.to_string() + ")";
      }
      if (first)
        out << (negated ? "-" : "");
      else
        out << (negated ? " - " : " + ");
      first = false;
      bool has_vars = false;
      for (unsigned k : e) has_vars = has_vars || k > 0;
      bool printed = false;
      if (!has_vars || coeff != "1") {
        out << coeff;
        printed = true;
      }
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        if (printed) out << "*";
        out << vars_[k];
        if (e[k] > 1) out << "^" << e[k];
        printed = true;
      }
    }
    return out.str();
  }

 private:
  std::vector<std::string> vars_;
  std::map<Exponents, TimeExpr> terms_;
};

/// System of second-order equations d²x^i/dt² = F^i(t, x, v) with polynomial
/// state dependence; state variables are the n positions followed by the n
/// velocities, and every right-hand side ranges over all 2n state variables.
class SODE {
 public:
  SODE(std::vector<std::string> state_vars, std::vector<MixedPoly> rhs)
      : vars_(std::move(state_vars)), rhs_(std::move(rhs)) {
    if (vars_.empty() || vars_.size() % 2 != 0)
      throw InputError("state variable list must hold positions then velocities");
    if (rhs_.size() * 2 != vars_.size())
      throw InputError("need exactly one second-derivative expression per position");
    for (const auto& p : rhs_)
      if (p.variables() != vars_)
        throw VariableMismatchError(
            "right-hand side variable list differs from state list: [" +
            Polynomial::join(p.variables()) + "] vs [" + Polynomial::join(vars_) + "]");
  }

  std::size_t positions() const { return rhs_.size(); }
  const std::vector<std::string>& state_variables() const { return vars_; }
  const MixedPoly& rhs(std::size_t i) const {
    if (i >= rhs_.size()) throw InputError("equation index out of range");
    return rhs_[i];
  }

 private:
  std::vector<std::string> vars_;
  std::vector<MixedPoly> rhs_;
};

/// First-order lift dx^i/dt = v^i, dv^i/dt = F^i(t,x,v) as a TDVF. All
/// rational-constant right-hand-side terms merge with the kinematic part
/// into a single leading field with coefficient 1; the remaining terms are
/// grouped by structurally equal t-coefficients in first-appearance order.
inline TDVF lift_sode(const SODE& s) {
  const auto& vars = s.state_variables();
  const std::size_t n = s.positions();
  TDVF out(vars);

  PolyVectorField base(vars);
  for (std::size_t i = 0; i < n; ++i)
    base.set_component(i, Polynomial::variable(vars, n + i));

  std::vector<std::pair<TimeExpr, PolyVectorField>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [e, c] : s.rhs(i).terms()) {
      if (c.is_rational_constant()) {
        Polynomial comp = base.component(n + i);
        comp.add_term(e, c.constant_value());
        base.set_component(n + i, std::move(comp));
        continue;
      }
      PolyVectorField mono(vars);
      Polynomial p(vars);
      p.add_term(e, Rational(1));
      mono.set_component(n + i, std::move(p));
      bool merged = false;
      for (auto& [gc, gf] : groups) {
        if (gc == c) {
          gf += mono;
          merged = true;
          break;
        }
      }
      if (!merged) groups.emplace_back(c, std::move(mono));
    }
  }

  out.add_term(TimeExpr::one(), base);
  for (auto& [c, f] : groups) out.add_term(c, f);
  return out;
}

/// Result of projecting a TDVF onto a basis: per-basis-element TimeExpr
/// coefficients, or the first term whose field is not in the span.
struct Decomposition {
  bool ok = false;
  std::vector<TimeExpr> coefficients;
  // Failure evidence:
  TimeExpr failed_coefficient;
  PolyVectorField failed_field;
  PolyVectorField residual;
};

inline Decomposition decompose_onto_basis(const TDVF& x, const FieldSpace& basis) {
  if (x.variables() != basis.variables())
    throw VariableMismatchError("variable lists differ: [" +
                                Polynomial::join(x.variables()) + "] vs [" +
                                Polynomial::join(basis.variables()) + "]");
  Decomposition out;
  out.coefficients.assign(basis.dimension(), TimeExpr::zero());
  for (const auto& [c, f] : x.terms()) {
    SpanResult q = basis.query(f);
    if (!q.contained) {
      out.ok = false;
      out.failed_coefficient = c;
      out.failed_field = f;
      out.residual = q.residual;
      return out;
    }
    for (std::size_t j = 0; j < basis.dimension(); ++j) {
      if (q.coordinates[j] == 0) continue;
      out.coefficients[j] =
          out.coefficients[j] + TimeExpr::constant(q.coordinates[j]) * c;
    }
  }
  out.ok = true;
  return out;
}

/// The scalar family d²x/dt² + 3x·dx/dt + x³ + g(t)(dx/dt + x²) + h(t)x + j(t) = 0,
/// as a SODE on (x, v) with everything moved to the right-hand side.
inline SODE family_ghj(const TimeExpr& g, const TimeExpr& h, const TimeExpr& j) {
  const std::vector<std::string> vars{"x", "v"};
  MixedPoly rhs(vars);
  rhs.add_term({1, 1}, TimeExpr::constant(Rational(-3)));  // -3 x v
  rhs.add_term({3, 0}, TimeExpr::constant(Rational(-1)));  // -x^3
  rhs.add_term({0, 1}, -g);                                // -g v
  rhs.add_term({2, 0}, -g);                                // -g x^2
  rhs.add_term({1, 0}, -h);                                // -h x
  rhs.add_term({0, 0}, -j);                                // -j
  return SODE(vars, {rhs});
}

/// Coefficient data of the second-order Riccati equation
/// d²x/dt² + (b0 + b1 x)·dx/dt + a0 + a1 x + a2 x² + a3 x³ = 0
/// subject to a3 > 0 on the working interval, a3(0) = 1, b1 = 3·sqrt(a3),
/// b0 = a2/sqrt(a3) − a3′/(2·a3).
struct Riccati2Spec {
  TimeExpr a0, a1, a2, a3, b0, b1;

  /// Builds the coefficient set with b0, b1 derived from the constraint
  /// formulas.
  static Riccati2Spec from_a(const TimeExpr& a0, const TimeExpr& a1,
                             const TimeExpr& a2, const TimeExpr& a3) {
    Riccati2Spec s;
    s.a0 = a0;
    s.a1 = a1;
    s.a2 = a2;
    s.a3 = a3;
    const TimeExpr root = TimeExpr::sqrt(a3);
    s.b1 = TimeExpr::constant(Rational(3)) * root;
    s.b0 = a2 / root - diff_time(a3) / (TimeExpr::constant(Rational(2)) * a3);
    return s;
  }
};

/// Validates the constraints of a Riccati2Spec on [lo, hi]; throws
/// InputError naming the violated relation and a sample t.
inline void validate_riccati2(const Riccati2Spec& s, double lo = kWorkingLo,
                              double hi = kWorkingHi) {
  const double at0 = s.a3.eval(0.0);
  if (std::abs(at0 - 1.0) > kSampleTol)
    throw InputError("constraint a3(0) = 1 violated: a3(0) = " +
                     std::to_string(at0));
  for (double t : chebyshev_points(lo, hi, kSampleCount)) {
    if (s.a3.eval(t) <= 0.0)
      throw InputError("constraint a3 > 0 violated at t = " + std::to_string(t));
  }
  const TimeExpr root = TimeExpr::sqrt(s.a3);
  const TimeExpr want_b1 = TimeExpr::constant(Rational(3)) * root;
  if (!sampled_equal(s.b1, want_b1, lo, hi))
    throw InputError("constraint b1 = 3*sqrt(a3) violated on the working interval");
  const TimeExpr want_b0 =
      s.a2 / root - diff_time(s.a3) / (TimeExpr::constant(Rational(2)) * s.a3);
  if (!sampled_equal(s.b0, want_b0, lo, hi))
    throw InputError(
        "constraint b0 = a2/sqrt(a3) - a3'/(2*a3) violated on the working interval");
}

/// The second-order Riccati equation as a SODE on (x, v):
/// dv/dt = −(b0 + b1 x)·v − a0 − a1 x − a2 x² − a3 x³.
inline SODE riccati2(const Riccati2Spec& spec, double lo = kWorkingLo,
                     double hi = kWorkingHi) {
  validate_riccati2(spec, lo, hi);
  const std::vector<std::string> vars{"x", "v"};
  MixedPoly rhs(vars);
  rhs.add_term({0, 1}, -spec.b0);  // -b0 v
  rhs.add_term({1, 1}, -spec.b1);  // -b1 x v
  rhs.add_term({0, 0}, -spec.a0);
  rhs.add_term({1, 0}, -spec.a1);
  rhs.add_term({2, 0}, -spec.a2);
  rhs.add_term({3, 0}, -spec.a3);
  return SODE(vars, {rhs});
}

/// Family parameters (g, h, j) of the image of the Riccati2 equation under
/// the solution-level scaling z = sqrt(a3)·x: with s = sqrt(a3),
///   g = a2/s − 3 s′/s,   h = a1 − s″/s + 3 s′²/s² − a2 s′/s²,   j = a0·s.
/// (Substituting x = z/s and multiplying the equation by s lands exactly on
/// the g,h,j family in z; the b0/b1 constraints make the dz/dt and z²
/// coefficients coincide.)
struct GhjCoefficients {
  TimeExpr g, h, j;
};

inline GhjCoefficients riccati2_scaled_family(const Riccati2Spec& spec) {
  const TimeExpr s = TimeExpr::sqrt(spec.a3);
  const TimeExpr ds = diff_time(s);
  const TimeExpr dds = diff_time(ds);
  const TimeExpr inv_s = TimeExpr::pow(s, -1);
  const TimeExpr inv_s2 = TimeExpr::pow(s, -2);
  GhjCoefficients out;
  out.g = spec.a2 * inv_s - TimeExpr::constant(Rational(3)) * ds * inv_s;
  out.h = spec.a1 - dds * inv_s + TimeExpr::constant(Rational(3)) * ds * ds * inv_s2 -
          spec.a2 * ds * inv_s2;
  out.j = spec.a0 * s;
  return out;
}

}  // namespace liesys

#endif  // LIESYS_TDVF_HPP
