#ifndef LIESYS_SUPERPOSE_HPP
#define LIESYS_SUPERPOSE_HPP

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/integrate.hpp"
#include "liesys/tdvf.hpp"

namespace liesys {

/// Default genericity threshold: a companion Wronskian determinant at or
/// below this magnitude marks the solution set as non-generic.
inline constexpr double kGenericityThreshold = 1e-8;

namespace detail {

/// Full-pivot Gaussian elimination for small dense systems A c = b with
/// rank detection. Rank-deficient but consistent systems get the unique
/// representative with all free variables set to zero; inconsistent systems
/// throw. Deterministic.
inline std::vector<double> solve_full_pivot(std::vector<std::vector<double>> a,
                                            std::vector<double> b,
                                            bool* degenerate = nullptr) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (double v : b) scale = std::max(scale, std::abs(v));
  const double tol = std::max(scale, 1.0) * 1e-12;

  std::vector<std::size_t> col_of_step;
  std::vector<bool> row_used(rows, false), col_used(cols, false);
  std::vector<std::size_t> row_of_step;
  for (;;) {
    // Largest remaining pivot.
    double best = tol;
    std::size_t pr = rows, pc = cols;
    for (std::size_t r = 0; r < rows; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (col_used[c]) continue;
        if (std::abs(a[r][c]) > best) {
          best = std::abs(a[r][c]);
          pr = r;
          pc = c;
        }
      }
    }
    if (pr == rows) break;
    row_used[pr] = true;
    col_used[pc] = true;
    row_of_step.push_back(pr);
    col_of_step.push_back(pc);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr || a[r][pc] == 0.0) continue;
      const double m = a[r][pc] / a[pr][pc];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] -= m * a[pr][c];
      a[r][pc] = 0.0;
      b[r] -= m * b[pr];
    }
  }
  const std::size_t rank = row_of_step.size();
  if (degenerate) *degenerate = rank < std::min(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_used[r]) continue;
    if (std::abs(b[r]) > std::max(tol, 1e-9 * std::max(scale, 1.0)))
      throw NumericalError(
          "non-generic solution set: singular fitting system with inconsistent data");
  }
  std::vector<double> c(cols, 0.0);
  for (std::size_t s = 0; s < rank; ++s) {
    const std::size_t r = row_of_step[s];
    const std::size_t col = col_of_step[s];
    double acc = b[r];
    for (std::size_t j = 0; j < cols; ++j)
      if (j != col) acc -= a[r][j] * c[j];
    c[col] = acc / a[r][col];
  }
  return c;
}

inline double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

/// Companion scalar of one particular solution: integrates w' = x(t)·w along
/// the solution and normalizes so that w(t0) = 1 (the equation is linear, so
/// normalization is an exact rescaling of the forward integration). Returns
/// the scalar trajectory on the variable list {"w"}; its stored derivative
/// is w' = x·w, and w'' is recovered pointwise as (v + x²)·w.
/// The solution must cover t0 and be pole-free on its range.
inline Trajectory companion_lift(const SODE& eq, const Trajectory& sol, double t0,
                                 const IvpConfig& cfg = {}) {
  if (sol.variables() != eq.state_variables())
    throw VariableMismatchError("solution variable list differs from equation: [" +
                                Polynomial::join(sol.variables()) + "] vs [" +
                                Polynomial::join(eq.state_variables()) + "]");
  if (eq.positions() != 1)
    throw InputError("companion linearization applies to the scalar family only");
  if (sol.status() == TrajStatus::blew_up)
    throw NumericalError("particular solution blows up at t = " +
                         std::to_string(sol.event_time()));
  if (sol.status() == TrajStatus::step_failure)
    throw NumericalError("particular solution integration failed at t = " +
                         std::to_string(sol.event_time()));
  if (t0 < sol.t_min() || t0 > sol.t_max())
    throw InputError("reference time t0 outside the solution's range");

  auto rhs = [&sol](double t, const std::vector<double>& w) {
    return std::vector<double>{sol.dense_eval(t).first[0] * w[0]};
  };
  Trajectory w = solve_ivp_fn(rhs, {"w"}, {1.0}, sol.t_min(), sol.t_max(), cfg);
  if (w.status() != TrajStatus::completed)
    throw NumericalError("companion scalar integration failed at t = " +
                         std::to_string(w.event_time()));

  const double w_at_t0 = w.dense_eval(t0).first[0];
  std::vector<std::vector<double>> states, derivs;
  states.reserve(w.times().size());
  derivs.reserve(w.times().size());
  for (std::size_t k = 0; k < w.times().size(); ++k) {
    states.push_back({w.states()[k][0] / w_at_t0});
    derivs.push_back({w.derivatives()[k][0] / w_at_t0});
  }
  return Trajectory({"w"}, w.times(), std::move(states), std::move(derivs),
                    TrajStatus::completed, 0.0);
}

/// Data of three particular solutions with their companion scalars and the
/// 3×3 matrix with rows (w_i, w_i', w_i'')(t0). The determinant magnitude is
/// the quantitative genericity proxy; a degenerate basis is recorded (and
/// rejected by the verification entry point) rather than hidden.
class CompanionBasis {
 public:
  CompanionBasis(const SODE& eq, std::vector<Trajectory> solutions, double t0,
                 const IvpConfig& cfg = {})
      : t0_(t0), solutions_(std::move(solutions)) {
    if (solutions_.size() != 3)
      throw InputError("companion basis needs exactly 3 particular solutions");
    companions_.reserve(3);
    for (const auto& s : solutions_) companions_.push_back(companion_lift(eq, s, t0, cfg));
    for (std::size_t i = 0; i < 3; ++i) wronskian_[i] = row(i, t0);
    det_ = detail::det3(wronskian_);
  }

  double t0() const { return t0_; }
  const std::vector<Trajectory>& solutions() const { return solutions_; }
  const std::vector<Trajectory>& companions() const { return companions_; }

  /// (w_i, w_i', w_i'') at time t.
  std::array<double, 3> row(std::size_t i, double t) const {
    if (i >= 3) throw InputError("companion basis index out of range");
    const auto [w, dw] = companions_[i].dense_eval(t);
    const auto xv = solutions_[i].dense_eval(t).first;
    return {w[0], dw[0], (xv[1] + xv[0] * xv[0]) * w[0]};
  }

  const std::array<std::array<double, 3>, 3>& wronskian() const { return wronskian_; }
  double wronskian_det() const { return det_; }
  bool degenerate(double threshold = kGenericityThreshold) const {
    return std::abs(det_) <= threshold;
  }

  /// Common covered time range.
  double t_lo() const {
    double lo = solutions_[0].t_min();
    for (const auto& s : solutions_) lo = std::max(lo, s.t_min());
    return lo;
  }
  double t_hi() const {
    double hi = solutions_[0].t_max();
    for (const auto& s : solutions_) hi = std::min(hi, s.t_max());
    return hi;
  }

 private:
  double t0_;
  std::vector<Trajectory> solutions_;
  std::vector<Trajectory> companions_;
  std::array<std::array<double, 3>, 3> wronskian_{};
  double det_ = 0.0;
};

/// Superposition constants: a 3-vector defined up to overall scale. The
/// normalized representative divides by the first significant entry.
struct SuperpositionConstants {
  std::array<double, 3> c{};
  /// True when the fitting system was rank-deficient (consistent singular
  /// fits still produce a valid, deterministic representative).
  bool degenerate_fit = false;

  std::array<double, 3> normalized() const {
    double big = 0.0;
    for (double v : c) big = std::max(big, std::abs(v));
    if (big == 0.0) throw NumericalError("superposition constants are all zero");
    for (double v : c) {
      if (std::abs(v) > 1e-12 * big)
        return {c[0] / v, c[1] / v, c[2] / v};
    }
    throw NumericalError("superposition constants are all zero");
  }
};

/// Solves the three fitting constraints at time tau for the curve data
/// (x_target, v_target):  sum c_i w_i(tau) = 1,  sum c_i w_i'(tau) = x,
/// sum c_i w_i''(tau) = v + x².
inline SuperpositionConstants fit_constants_at(const CompanionBasis& basis, double tau,
                                               double x_target, double v_target) {
  std::vector<std::vector<double>> a(3, std::vector<double>(3));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = basis.row(i, tau);
    for (std::size_t k = 0; k < 3; ++k) a[k][i] = r[k];
  }
  std::vector<double> b{1.0, x_target, v_target + x_target * x_target};
  SuperpositionConstants out;
  std::vector<double> c = detail::solve_full_pivot(std::move(a), std::move(b),
                                                   &out.degenerate_fit);
  out.c = {c[0], c[1], c[2]};
  return out;
}

/// Constant fitting at the basis reference time from a target initial
/// condition (x0, v0).
inline SuperpositionConstants fit_constants(const CompanionBasis& basis, double x0,
                                            double v0) {
  return fit_constants_at(basis, basis.t0(), x0, v0);
}

/// Superposed state at time t. With W = sum c_i w_i the curve is
/// x = W'/W and v = W''/W − x²; a vanishing denominator is a reported pole
/// of the superposed solution, not an error.
struct SuperposedState {
  double x = 0.0;
  double v = 0.0;
  bool pole = false;
};

inline SuperposedState superpose_eval(const CompanionBasis& basis,
                                      const SuperpositionConstants& constants,
                                      double t) {
  const std::array<double, 3> c = constants.normalized();
  double w = 0.0, dw = 0.0, ddw = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = basis.row(i, t);
    w += c[i] * r[0];
    dw += c[i] * r[1];
    ddw += c[i] * r[2];
    mag += std::abs(c[i] * r[0]);
  }
  SuperposedState out;
  if (w == 0.0 || std::abs(w) < 1e-12 * mag) {
    out.pole = true;
    return out;
  }
  out.x = dw / w;
  out.v = ddw / w - out.x * out.x;
  return out;
}

/// Independent residual of the linear companion relation
/// w''' + g w'' + h w' + j w = 0 along one basis member: the relation's
/// third derivative is taken from a separately integrated linear system
/// (never from the solution data), so agreement is non-circular. Returns
/// the max over equispaced samples.
inline double companion_residual(const TimeExpr& g, const TimeExpr& h,
                                 const TimeExpr& j, const Trajectory& sol,
                                 const Trajectory& w, std::size_t samples = 500,
                                 const IvpConfig& cfg = {}) {
  const std::vector<std::string> vars{"w0", "w1", "w2"};
  TDVF lin(vars);
  PolyVectorField kin(vars);
  kin.set_component(0, Polynomial::variable(vars, 1));
  kin.set_component(1, Polynomial::variable(vars, 2));
  PolyVectorField f0(vars), f1(vars), f2(vars);
  f0.set_component(2, Polynomial::variable(vars, 0));
  f1.set_component(2, Polynomial::variable(vars, 1));
  f2.set_component(2, Polynomial::variable(vars, 2));
  lin.add_term(TimeExpr::one(), kin);
  lin.add_term(-j, f0);
  lin.add_term(-h, f1);
  lin.add_term(-g, f2);

  const double lo = w.t_min(), hi = w.t_max();
  const auto xv0 = sol.dense_eval(lo).first;
  const std::vector<double> ic{w.states().front()[0], w.derivatives().front()[0],
                               (xv0[1] + xv0[0] * xv0[0]) * w.states().front()[0]};
  Trajectory ref = solve_ivp(lin, ic, lo, hi, cfg);
  if (ref.status() != TrajStatus::completed)
    throw NumericalError("companion reference integration failed at t = " +
                         std::to_string(ref.event_time()));

  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t =
        lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    const auto [wa, dwa] = w.dense_eval(t);
    const auto xv = sol.dense_eval(t).first;
    const double w2a = (xv[1] + xv[0] * xv[0]) * wa[0];
    const auto wb = ref.dense_eval(t).first;
    const double r = g.eval(t) * (w2a - wb[2]) + h.eval(t) * (dwa[0] - wb[1]) +
                     j.eval(t) * (wa[0] - wb[0]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// Verification outcome for one superposition run.
struct VerificationReport {
  double t0 = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  SuperpositionConstants constants;
  double wronskian_det = 0.0;
  /// Sup-norm deviation from the target trajectory over the window (both
  /// position and velocity components).
  double sup_deviation = 0.0;
  /// Finite-difference defect of the superposed curve against the family
  /// system over the window.
  double ode_residual = 0.0;
  /// Max pairwise infinity-norm distance between normalized constants
  /// refitted at the interior times.
  double constants_drift = 0.0;
  std::vector<std::array<double, 3>> refits;
};

/// Fits at t0 from the target's state, sweeps the window, and reports the
/// three verification measurements (deviation, ODE residual, constancy of
/// refitted constants). Rejects non-generic bases and superposed poles.
inline VerificationReport verify_superposition(const SODE& eq,
                                               const std::vector<Trajectory>& solutions,
                                               const Trajectory& target, double t0,
                                               double window_lo, double window_hi,
                                               const IvpConfig& cfg = {},
                                               std::size_t sweep_samples = 401) {
  if (!(window_lo < window_hi)) throw InputError("verification window is empty");
  CompanionBasis basis(eq, solutions, t0, cfg);
  if (basis.degenerate())
    throw NumericalError("non-generic solution set: companion determinant " +
                         std::to_string(basis.wronskian_det()));
  if (window_lo < basis.t_lo() || window_hi > basis.t_hi())
    throw InputError("window is not covered by the particular solutions");
  if (window_lo < target.t_min() || window_hi > target.t_max())
    throw InputError("window is not covered by the target trajectory");
  if (t0 < window_lo || t0 > window_hi)
    throw InputError("reference time t0 outside the window");

  VerificationReport rep;
  rep.t0 = t0;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.wronskian_det = basis.wronskian_det();

  const auto ic = target.dense_eval(t0).first;
  rep.constants = fit_constants(basis, ic[0], ic[1]);

  // Sup-norm deviation sweep.
  auto eval_or_throw = [&](double t) {
    SuperposedState s = superpose_eval(basis, rep.constants, t);
    if (s.pole)
      throw NumericalError("superposed solution has a pole inside the window at t = " +
                           std::to_string(t));
    return s;
  };
  for (std::size_t k = 0; k < sweep_samples; ++k) {
    const double t = window_lo + (window_hi - window_lo) * static_cast<double>(k) /
                                     static_cast<double>(sweep_samples - 1);
    const SuperposedState s = eval_or_throw(t);
    const auto tv = target.dense_eval(t).first;
    rep.sup_deviation = std::max(rep.sup_deviation, std::abs(s.x - tv[0]));
    rep.sup_deviation = std::max(rep.sup_deviation, std::abs(s.v - tv[1]));
  }

  // ODE residual of the superposed curve: five-point finite differences of
  // the superposed samples against the lifted family system.
  const TDVF sys = lift_sode(eq);
  const double delta = (window_hi - window_lo) * 2.5e-3;
  for (std::size_t k = 0; k < 201; ++k) {
    const double t = (window_lo + 2 * delta) +
                     (window_hi - window_lo - 4 * delta) * static_cast<double>(k) / 200.0;
    const SuperposedState sm2 = eval_or_throw(t - 2 * delta);
    const SuperposedState sm1 = eval_or_throw(t - delta);
    const SuperposedState sc = eval_or_throw(t);
    const SuperposedState sp1 = eval_or_throw(t + delta);
    const SuperposedState sp2 = eval_or_throw(t + 2 * delta);
    const auto rhs = sys.eval_rhs(t, {sc.x, sc.v});
    const double fdx =
        (sm2.x - 8.0 * sm1.x + 8.0 * sp1.x - sp2.x) / (12.0 * delta);
    const double fdv =
        (sm2.v - 8.0 * sm1.v + 8.0 * sp1.v - sp2.v) / (12.0 * delta);
    rep.ode_residual = std::max(rep.ode_residual, std::abs(fdx - rhs[0]));
    rep.ode_residual = std::max(rep.ode_residual, std::abs(fdv - rhs[1]));
  }

  // Constancy of refitted constants at 10 interior times.
  std::vector<std::array<double, 3>> refits;
  for (int jdx = 1; jdx <= 10; ++jdx) {
    const double tau =
        window_lo + (window_hi - window_lo) * static_cast<double>(jdx) / 11.0;
    const auto tv = target.dense_eval(tau).first;
    refits.push_back(fit_constants_at(basis, tau, tv[0], tv[1]).normalized());
  }
  for (std::size_t a = 0; a < refits.size(); ++a)
    for (std::size_t b = a + 1; b < refits.size(); ++b)
      for (std::size_t i = 0; i < 3; ++i)
        rep.constants_drift =
            std::max(rep.constants_drift, std::abs(refits[a][i] - refits[b][i]));
  rep.refits = std::move(refits);
  return rep;
}

/// Maps a solution of the second-order Riccati equation into the g,h,j
/// family coordinates z = s·x with s = sqrt(a3): states (z, dz/dt) and node
/// derivatives via the product rule (the second derivative uses the stored
/// right-hand-side value, so no numerical differentiation enters).
inline Trajectory riccati2_scale_solution(const Riccati2Spec& spec,
                                          const Trajectory& sol) {
  const TimeExpr s = TimeExpr::sqrt(spec.a3);
  const TimeExpr ds = diff_time(s);
  const TimeExpr dds = diff_time(ds);
  std::vector<std::vector<double>> states, derivs;
  states.reserve(sol.times().size());
  derivs.reserve(sol.times().size());
  for (std::size_t k = 0; k < sol.times().size(); ++k) {
    const double t = sol.times()[k];
    const double sv = s.eval(t), dsv = ds.eval(t), ddsv = dds.eval(t);
    const double x = sol.states()[k][0], v = sol.states()[k][1];
    const double f = sol.derivatives()[k][1];  // d²x/dt² along the solution
    states.push_back({sv * x, dsv * x + sv * v});
    derivs.push_back({dsv * x + sv * v, ddsv * x + 2.0 * dsv * v + sv * f});
  }
  return Trajectory(sol.variables(), sol.times(), std::move(states), std::move(derivs),
                    sol.status(), sol.event_time());
}

/// Full record of one t-dependent superposition run (constants live in the
/// scaled coordinates where the fitting happens).
struct Riccati2SuperpositionRun {
  SuperpositionConstants constants;
  double wronskian_det = 0.0;
  std::vector<SuperposedState> values;
};

/// The t-dependent superposition pipeline for the second-order Riccati
/// family: scale the particular solutions by z = sqrt(a3)·x into the g,h,j
/// family, superpose there with constants fitted at t0 from the target
/// initial condition, and map back. Returns one state per evaluation time.
inline Riccati2SuperpositionRun superpose_riccati2_run(
    const Riccati2Spec& spec, const std::vector<Trajectory>& solutions, double x0,
    double v0, double t0, const std::vector<double>& eval_times,
    const IvpConfig& cfg = {}) {
  validate_riccati2(spec);
  const GhjCoefficients fam = riccati2_scaled_family(spec);
  const SODE family_eq = family_ghj(fam.g, fam.h, fam.j);

  std::vector<Trajectory> scaled;
  scaled.reserve(solutions.size());
  for (const auto& sol : solutions) scaled.push_back(riccati2_scale_solution(spec, sol));
  CompanionBasis basis(family_eq, std::move(scaled), t0, cfg);

  const TimeExpr s = TimeExpr::sqrt(spec.a3);
  const TimeExpr ds = diff_time(s);
  const double s0 = s.eval(t0), ds0 = ds.eval(t0);
  const double z0 = s0 * x0;
  const double dz0 = ds0 * x0 + s0 * v0;

  Riccati2SuperpositionRun run;
  run.wronskian_det = basis.wronskian_det();
  run.constants = fit_constants(basis, z0, dz0);

  run.values.reserve(eval_times.size());
  for (double t : eval_times) {
    SuperposedState zs = superpose_eval(basis, run.constants, t);
    if (zs.pole) {
      run.values.push_back(zs);
      continue;
    }
    const double st = s.eval(t), dst = ds.eval(t);
    SuperposedState xs;
    xs.x = zs.x / st;
    xs.v = (zs.v - dst * zs.x / st) / st;
    run.values.push_back(xs);
  }
  return run;
}

/// Value-only form over a list of evaluation times.
inline std::vector<SuperposedState> superpose_riccati2_general(
    const Riccati2Spec& spec, const std::vector<Trajectory>& solutions, double x0,
    double v0, double t0, const std::vector<double>& eval_times,
    const IvpConfig& cfg = {}) {
  return superpose_riccati2_run(spec, solutions, x0, v0, t0, eval_times, cfg).values;
}

/// Single-time convenience form.
inline SuperposedState superpose_riccati2_general(const Riccati2Spec& spec,
                                                  const std::vector<Trajectory>& solutions,
                                                  double x0, double v0, double t0,
                                                  double t_eval,
                                                  const IvpConfig& cfg = {}) {
  return superpose_riccati2_general(spec, solutions, x0, v0, t0,
                                    std::vector<double>{t_eval}, cfg)[0];
}

}  // namespace liesys

#endif  // LIESYS_SUPERPOSE_HPP
