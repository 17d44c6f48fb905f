#ifndef LIESYS_INTEGRATE_HPP
#define LIESYS_INTEGRATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/tdvf.hpp"

namespace liesys {

/// Integration settings. A max_step of 0 selects the default cap of
/// span/400, which keeps the cubic Hermite dense output well inside the
/// 1e-6 reproduction targets used throughout.
struct IvpConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;
  double blowup_threshold = 1e6;
  std::size_t max_steps = 1000000;
};

enum class TrajStatus { completed, blew_up, step_failure };

/// Numerically integrated solution: strictly increasing time nodes, states
/// and right-hand-side derivatives at the nodes, cubic Hermite dense output
/// per step, and a termination status. Immutable once built (the only
/// mutator attaches derivatives to imported node data).
class Trajectory {
 public:
  Trajectory() = default;

  Trajectory(std::vector<std::string> vars, std::vector<double> times,
             std::vector<std::vector<double>> states,
             std::vector<std::vector<double>> derivs, TrajStatus status,
             double event_time)
      : vars_(std::move(vars)),
        times_(std::move(times)),
        states_(std::move(states)),
        derivs_(std::move(derivs)),
        status_(status),
        event_time_(event_time) {
    if (times_.empty() || times_.size() != states_.size())
      throw InputError("trajectory needs matching time and state node lists");
    if (!derivs_.empty() && derivs_.size() != times_.size())
      throw InputError("derivative node count does not match time nodes");
    for (std::size_t k = 1; k < times_.size(); ++k)
      if (!(times_[k] > times_[k - 1]))
        throw InputError("trajectory times must be strictly increasing");
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& states() const { return states_; }
  const std::vector<std::vector<double>>& derivatives() const { return derivs_; }
  TrajStatus status() const { return status_; }

  /// Blow-up or step-failure time (meaningful unless status is completed).
  double event_time() const { return event_time_; }

  double t_min() const { return times_.front(); }
  double t_max() const { return times_.back(); }
  std::size_t dimension() const { return vars_.size(); }
  bool has_derivatives() const { return !derivs_.empty(); }

  const std::vector<double>& final_state() const { return states_.back(); }

  /// Recomputes node derivatives from a system's right-hand side (used
  /// after CSV import, where only states are stored).
  void attach_derivatives(const TDVF& system) {
    if (system.variables() != vars_)
      throw VariableMismatchError("system variable list differs from trajectory: [" +
                                  Polynomial::join(system.variables()) + "] vs [" +
                                  Polynomial::join(vars_) + "]");
    derivs_.clear();
    derivs_.reserve(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k)
      derivs_.push_back(system.eval_rhs(times_[k], states_[k]));
  }

  /// Cubic Hermite value and derivative at t (node times reproduce node
  /// states exactly; node derivatives equal the stored right-hand side).
  std::pair<std::vector<double>, std::vector<double>> dense_eval(double t) const {
    if (!has_derivatives())
      throw InputError("trajectory has no derivative data for dense evaluation");
    // Absorb sub-rounding excursions past the ends before range checking.
    const double slack = (t_max() - t_min()) * 1e-12;
    if (t < t_min() && t >= t_min() - slack) t = t_min();
    if (t > t_max() && t <= t_max() + slack) t = t_max();
    if (t < t_min() || t > t_max())
      throw InputError("dense evaluation time " + std::to_string(t) +
                       " outside trajectory range [" + std::to_string(t_min()) + ", " +
                       std::to_string(t_max()) + "]");
    if (times_.size() == 1) return {states_[0], derivs_[0]};
    // Bracketing step: largest k with times_[k] <= t (last interval for t_max).
    std::size_t k =
        static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) -
                                 times_.begin());
    if (k > 0) --k;
    if (k + 1 >= times_.size()) k = times_.size() - 2;
    return hermite(times_[k], states_[k], derivs_[k], times_[k + 1], states_[k + 1],
                   derivs_[k + 1], t);
  }

  /// CSV export: header `t,<var1>,...` and one row per node.
  std::string to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "t";
    for (const auto& v : vars_) out << "," << v;
    out << "\n";
    for (std::size_t k = 0; k < times_.size(); ++k) {
      out << times_[k];
      for (double s : states_[k]) out << "," << s;
      out << "\n";
    }
    return out.str();
  }

  /// CSV import (states only; call attach_derivatives before dense_eval).
  static Trajectory from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty CSV input");
    std::vector<std::string> cols = split_csv(line);
    if (cols.empty() || cols[0] != "t")
      throw InputError("CSV header must start with column t");
    std::vector<std::string> vars(cols.begin() + 1, cols.end());
    if (vars.empty()) throw InputError("CSV header declares no state variables");
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> parts = split_csv(line);
      if (parts.size() != cols.size())
        throw InputError("CSV row " + std::to_string(lineno) + " has " +
                         std::to_string(parts.size()) + " fields, expected " +
                         std::to_string(cols.size()));
      std::vector<double> row;
      row.reserve(parts.size());
      for (const auto& p : parts) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(p, &used);
        } catch (const std::exception&) {
          throw InputError("CSV row " + std::to_string(lineno) +
                           ": not a number: " + p);
        }
        if (used != p.size())
          throw InputError("CSV row " + std::to_string(lineno) +
                           ": trailing characters in number: " + p);
        row.push_back(v);
      }
      times.push_back(row[0]);
      states.emplace_back(row.begin() + 1, row.end());
    }
    return Trajectory(std::move(vars), std::move(times), std::move(states), {},
                      TrajStatus::completed, 0.0);
  }

  /// Hermite interpolation on one step, exposed for event localization.
  static std::pair<std::vector<double>, std::vector<double>> hermite(
      double ta, const std::vector<double>& ya, const std::vector<double>& fa,
      double tb, const std::vector<double>& yb, const std::vector<double>& fb,
      double t) {
    const double h = tb - ta;
    const double s = (t - ta) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    const double d00 = 6 * s * (s - 1) / h;
    const double d10 = (3 * s - 1) * (s - 1) / h;
    const double d01 = -6 * s * (s - 1) / h;
    const double d11 = s * (3 * s - 2) / h;
    const std::size_t n = ya.size();
    std::vector<double> y(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = h00 * ya[i] + h10 * h * fa[i] + h01 * yb[i] + h11 * h * fb[i];
      d[i] = d00 * ya[i] + d10 * h * fa[i] + d01 * yb[i] + d11 * h * fb[i];
    }
    return {std::move(y), std::move(d)};
  }

 private:
  static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    return out;
  }

  std::vector<std::string> vars_;
  std::vector<double> times_;
  std::vector<std::vector<double>> states_;
  std::vector<std::vector<double>> derivs_;
  TrajStatus status_ = TrajStatus::completed;
  double event_time_ = 0.0;
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Adaptive Dormand–Prince 5(4) with PI step control and FSAL, for an
/// arbitrary right-hand-side callable (double t, const vector<double>& y) ->
/// vector<double>. Stops early with status blew_up when the state's infinity
/// norm crosses the threshold (the crossing time is localized by bisection
/// on the dense output to 1e-7 and reported from the exceeding side), or
/// with step_failure when the step size underflows / the step budget is
/// exhausted. Fully deterministic.
template <typename Rhs>
Trajectory solve_ivp_fn(const Rhs& rhs, const std::vector<std::string>& vars,
                        const std::vector<double>& ic, double t0, double t1,
                        const IvpConfig& cfg = {}) {
  if (!(t0 < t1)) throw InputError("integration span must have t0 < t1");
  if (ic.size() != vars.size())
    throw InputError("initial condition dimension does not match system");
  if (cfg.rtol <= 0 || cfg.atol <= 0)
    throw InputError("tolerances must be positive");
  if (cfg.blowup_threshold <= 1)
    throw InputError("blow-up threshold must exceed 1");

  // Dormand–Prince coefficients.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = ic.size();
  const double span = t1 - t0;
  const double max_step = cfg.max_step > 0 ? cfg.max_step : span / 400.0;

  std::vector<double> times{t0};
  std::vector<std::vector<double>> states{ic};
  std::vector<std::vector<double>> derivs{rhs(t0, ic)};

  auto finish = [&](TrajStatus st, double event) {
    return Trajectory(vars, std::move(times), std::move(states), std::move(derivs), st,
                      event);
  };

  if (detail::inf_norm(ic) > cfg.blowup_threshold) return finish(TrajStatus::blew_up, t0);

  double t = t0;
  std::vector<double> y = ic;
  std::vector<double> k1 = derivs[0];
  double h = std::min(max_step, span / 100.0);
  double err_old = 1e-4;
  static constexpr double kSafety = 0.9, kExpo = 0.17, kBeta = 0.04;
  static constexpr double kShrink = 0.2, kGrow = 5.0;

  std::vector<double> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

  for (std::size_t step = 0; step < cfg.max_steps;) {
    if (t >= t1) break;
    // Step-size underflow is judged on the controller's step before the
    // end-of-interval clamp: the clamp can legitimately produce an
    // ulp-sized closing sliver, which is not a stall.
    if (h < 1e-14 * std::max(1.0, std::abs(t))) return finish(TrajStatus::step_failure, t);
    const bool last = h >= t1 - t;
    if (last) h = t1 - t;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    k6 = rhs(t + h, ytmp);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    k7 = rhs(t + h, ynew);

    double err_sq = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc =
          cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_sq += (ei / sc) * (ei / sc);
      finite = finite && std::isfinite(ynew[i]);
    }
    double err = std::sqrt(err_sq / static_cast<double>(n));
    if (!finite || !std::isfinite(err)) err = 10.0;  // force rejection + shrink

    if (err > 1.0) {
      h *= std::max(kShrink, kSafety * std::pow(err, -kExpo));
      ++step;
      continue;
    }

    // Accepted.
    ++step;
    const double t_new = last ? t1 : t + h;
    if (detail::inf_norm(ynew) > cfg.blowup_threshold) {
      // Localize the norm crossing inside [t, t_new] on the dense output,
      // keeping the invariant that the reported time lies on or beyond the
      // crossing (so the recorded final state's norm meets the threshold).
      double lo = t, hi = t_new;
      std::vector<double> y_hi = ynew;
      while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        auto [ym, dm] = Trajectory::hermite(t, y, k1, t_new, ynew, k7, mid);
        if (detail::inf_norm(ym) >= cfg.blowup_threshold) {
          hi = mid;
          y_hi = std::move(ym);
        } else {
          lo = mid;
        }
      }
      times.push_back(hi);
      derivs.push_back(rhs(hi, y_hi));
      states.push_back(std::move(y_hi));
      return finish(TrajStatus::blew_up, hi);
    }

    times.push_back(t_new);
    states.push_back(ynew);
    derivs.push_back(k7);
    t = t_new;
    y = ynew;
    k1 = k7;

    const double err_clamped = std::max(err, 1e-10);
    double scale = kSafety * std::pow(err_clamped, -kExpo) * std::pow(err_old, kBeta);
    scale = std::min(kGrow, std::max(kShrink, scale));
    h = std::min(h * scale, max_step);
    err_old = err_clamped;
  }

  if (t < t1) return finish(TrajStatus::step_failure, t);
  return finish(TrajStatus::completed, t1);
}

/// Integrates a time-dependent polynomial system.
inline Trajectory solve_ivp(const TDVF& system, const std::vector<double>& ic,
                            double t0, double t1, const IvpConfig& cfg = {}) {
  if (ic.size() != system.dimension())
    throw InputError("initial condition dimension does not match system");
  auto rhs = [&system](double t, const std::vector<double>& y) {
    return system.eval_rhs(t, y);
  };
  return solve_ivp_fn(rhs, system.variables(), ic, t0, t1, cfg);
}

/// Sequential batch integration (deterministic; each run is independent).
inline std::vector<Trajectory> solve_ivp_batch(const TDVF& system,
                                               const std::vector<std::vector<double>>& ics,
                                               double t0, double t1,
                                               const IvpConfig& cfg = {}) {
  std::vector<Trajectory> out;
  out.reserve(ics.size());
  for (const auto& ic : ics) out.push_back(solve_ivp(system, ic, t0, t1, cfg));
  return out;
}

/// Max-norm defect of a trajectory against a system: a five-point central
/// finite difference of the dense output is compared with the system's
/// right-hand side at equispaced interior samples.
inline double residual(const Trajectory& traj, const TDVF& system,
                       std::size_t sample_count = 1000) {
  if (system.variables() != traj.variables())
    throw VariableMismatchError("system variable list differs from trajectory: [" +
                                Polynomial::join(system.variables()) + "] vs [" +
                                Polynomial::join(traj.variables()) + "]");
  if (sample_count == 0) return 0.0;
  const double lo = traj.t_min(), hi = traj.t_max();
  const double span = hi - lo;
  const double delta = span * 2.5e-3;
  double worst = 0.0;
  for (std::size_t k = 0; k < sample_count; ++k) {
    const double frac =
        sample_count == 1 ? 0.5
                          : static_cast<double>(k) / static_cast<double>(sample_count - 1);
    const double t = (lo + 2 * delta) + frac * (span - 4 * delta);
    const auto ym2 = traj.dense_eval(t - 2 * delta).first;
    const auto ym1 = traj.dense_eval(t - delta).first;
    const auto yp1 = traj.dense_eval(t + delta).first;
    const auto yp2 = traj.dense_eval(t + 2 * delta).first;
    const auto yc = traj.dense_eval(t).first;
    const auto rhs = system.eval_rhs(t, yc);
    for (std::size_t i = 0; i < yc.size(); ++i) {
      const double fd =
          (ym2[i] - 8.0 * ym1[i] + 8.0 * yp1[i] - yp2[i]) / (12.0 * delta);
      worst = std::max(worst, std::abs(fd - rhs[i]));
    }
  }
  return worst;
}

/// Small explicit linear congruential generator for reproducible test
/// families: Knuth's MMIX multiplier/increment on 64-bit state; doubles
/// take the top 53 bits. Not for cryptography — for seeded repeatability.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_;
};

}  // namespace liesys

#endif  // LIESYS_INTEGRATE_HPP
