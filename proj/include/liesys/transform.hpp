#ifndef LIESYS_TRANSFORM_HPP
#define LIESYS_TRANSFORM_HPP

#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/integrate.hpp"
#include "liesys/structure.hpp"
#include "liesys/tdvf.hpp"

namespace liesys {

/// Diagonal, position-independent time-dependent scaling of the state
/// variables: new_i = g_i(t) * old_i. The factors must be nonvanishing on
/// the interval of use (checked by dense sampling; the offending sample
/// time is reported).
class ScalingTransform {
 public:
  ScalingTransform() = default;

  ScalingTransform(std::vector<std::string> vars, std::vector<TimeExpr> factors)
      : vars_(std::move(vars)), factors_(std::move(factors)) {
    if (factors_.size() != vars_.size())
      throw InputError("need exactly one scaling factor per variable");
  }

  static ScalingTransform identity(const std::vector<std::string>& vars) {
    return ScalingTransform(vars,
                            std::vector<TimeExpr>(vars.size(), TimeExpr::one()));
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<TimeExpr>& factors() const { return factors_; }
  const TimeExpr& factor(std::size_t i) const {
    if (i >= factors_.size()) throw InputError("factor index out of range");
    return factors_[i];
  }

  ScalingTransform inverse() const {
    std::vector<TimeExpr> inv;
    inv.reserve(factors_.size());
    for (const auto& g : factors_) inv.push_back(TimeExpr::pow(g, -1));
    return ScalingTransform(vars_, std::move(inv));
  }

  /// Composition (other after this): factors multiply.
  ScalingTransform then(const ScalingTransform& other) const {
    if (other.vars_ != vars_)
      throw VariableMismatchError("composed transforms must share variables");
    std::vector<TimeExpr> prod;
    prod.reserve(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      prod.push_back(factors_[i] * other.factors_[i]);
    return ScalingTransform(vars_, std::move(prod));
  }

  /// Throws DomainError at the first sample point where a factor vanishes.
  void validate(double lo = kWorkingLo, double hi = kWorkingHi) const {
    for (double t : chebyshev_points(lo, hi, kSampleCount))
      for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].eval(t) == 0.0)
          throw DomainError("scaling factor for " + vars_[i] + " vanishes", t);
  }

  /// Maps a state at time t (new_i = g_i(t) * old_i).
  std::vector<double> apply(double t, const std::vector<double>& state) const {
    if (state.size() != vars_.size())
      throw InputError("state dimension does not match transform");
    std::vector<double> out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i)
      out[i] = factors_[i].eval(t) * state[i];
    return out;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<TimeExpr> factors_;
};

/// Push-forward of a time-dependent vector field under new_i = g_i(t)*old_i:
/// in the new coordinates the i-th component picks up the substituted and
/// rescaled old component plus the drift g_i'(t)/g_i(t) * new_i. The drift
/// quotient is computed symbolically, never numerically.
inline TDVF push_forward(const TDVF& x, const ScalingTransform& tr,
                         double lo = kWorkingLo, double hi = kWorkingHi) {
  if (x.variables() != tr.variables())
    throw VariableMismatchError("transform variable list differs from system: [" +
                                Polynomial::join(tr.variables()) + "] vs [" +
                                Polynomial::join(x.variables()) + "]");
  tr.validate(lo, hi);
  const auto& vars = x.variables();
  const std::size_t n = vars.size();
  TDVF out(vars);

  // Substituted terms: a monomial old^e on component i becomes
  // g_i * prod_j g_j^{-e_j} times new^e on component i.
  for (const auto& [c, f] : x.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [e, q] : f.component(i).terms()) {
        std::vector<TimeExpr> parts{c, tr.factor(i)};
        for (std::size_t j = 0; j < n; ++j)
          if (e[j] > 0)
            parts.push_back(
                TimeExpr::pow(tr.factor(j), -static_cast<long long>(e[j])));
        PolyVectorField mono(vars);
        Polynomial p(vars);
        p.add_term(e, q);
        mono.set_component(i, std::move(p));
        out.add_term(TimeExpr::mul(std::move(parts)), mono);
      }
    }
  }

  // Drift terms g_i'/g_i * new_i d/dnew_i.
  for (std::size_t i = 0; i < n; ++i) {
    const TimeExpr drift = diff_time(tr.factor(i)) * TimeExpr::pow(tr.factor(i), -1);
    if (drift.is_zero()) continue;
    PolyVectorField lin(vars);
    lin.set_component(i, Polynomial::variable(vars, i));
    out.add_term(drift, lin);
  }
  return out;
}

/// Evidence bundle for the quasi-Lie verdict: the original field must take
/// values in V2, (W, V2) must satisfy the scheme conditions, and the
/// transformed field must decompose on the bracket-closed target basis.
struct QuasiLieCertificate {
  bool verdict = false;
  bool values_in_v2 = false;
  SchemeReport scheme;
  TDVF transformed;
  Decomposition decomposition;
  /// Human-readable reason when verdict is false.
  std::string failure;
  /// Stage-(i) witness: the first term whose field lies outside V2.
  TimeExpr failing_coefficient;
  PolyVectorField failing_field;
};

inline QuasiLieCertificate certify_quasi_lie(const TDVF& x, const FieldSpace& w,
                                             const FieldSpace& v2,
                                             const ScalingTransform& tr,
                                             const FieldSpace& target,
                                             double lo = kWorkingLo,
                                             double hi = kWorkingHi) {
  try {
    structure_constants(target);
  } catch (const InputError&) {
    throw InputError("target basis is not bracket-closed");
  }

  QuasiLieCertificate cert;

  cert.values_in_v2 = true;
  for (const auto& [c, f] : x.terms()) {
    if (!v2.query(f).contained) {
      cert.values_in_v2 = false;
      cert.failing_coefficient = c;
      cert.failing_field = f;
      cert.failure = "system term with coefficient " + c.to_string() +
                     " lies outside V2";
      break;
    }
  }

  cert.scheme = check_scheme(w, v2);
  if (cert.values_in_v2 && !cert.scheme.is_scheme())
    cert.failure = "scheme conditions fail for (W, V2)";

  cert.transformed = push_forward(x, tr, lo, hi);
  cert.decomposition = decompose_onto_basis(cert.transformed, target);
  if (cert.values_in_v2 && cert.scheme.is_scheme() && !cert.decomposition.ok)
    cert.failure = "transformed field does not decompose on the target basis "
                   "(offending field: " +
                   cert.decomposition.failed_field.to_string() + ")";

  cert.verdict =
      cert.values_in_v2 && cert.scheme.is_scheme() && cert.decomposition.ok;
  return cert;
}

enum class TransformDirection { forward, inverse };

/// Pointwise solution mapping under a scaling transform; node derivatives
/// are re-derived from the mapped samples via the product rule with the
/// symbolic factor derivative.
inline Trajectory transform_solution(const Trajectory& traj,
                                     const ScalingTransform& tr,
                                     TransformDirection dir) {
  if (traj.variables() != tr.variables())
    throw VariableMismatchError("transform variable list differs from trajectory: [" +
                                Polynomial::join(tr.variables()) + "] vs [" +
                                Polynomial::join(traj.variables()) + "]");
  const ScalingTransform eff =
      dir == TransformDirection::forward ? tr : tr.inverse();
  eff.validate(traj.t_min(), traj.t_max());

  const std::size_t n = traj.dimension();
  std::vector<TimeExpr> dfac;
  dfac.reserve(n);
  for (std::size_t i = 0; i < n; ++i) dfac.push_back(diff_time(eff.factor(i)));

  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> derivs;
  states.reserve(traj.times().size());
  const bool with_derivs = traj.has_derivatives();
  for (std::size_t k = 0; k < traj.times().size(); ++k) {
    const double t = traj.times()[k];
    states.push_back(eff.apply(t, traj.states()[k]));
    if (!with_derivs) continue;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
      d[i] = dfac[i].eval(t) * traj.states()[k][i] +
             eff.factor(i).eval(t) * traj.derivatives()[k][i];
    derivs.push_back(std::move(d));
  }
  return Trajectory(traj.variables(), traj.times(), std::move(states),
                    std::move(derivs), traj.status(), traj.event_time());
}

}  // namespace liesys

#endif  // LIESYS_TRANSFORM_HPP
