#ifndef LIESYS_TIME_EXPR_HPP
#define LIESYS_TIME_EXPR_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/rational.hpp"

namespace liesys {

/// Closed-form scalar function of t as an immutable expression tree over
/// rational constants, the symbol t, sums, products, integer powers, sqrt,
/// exp, sin, cos. Construction applies a light canonicalization (flattening,
/// constant folding, like-term and like-factor collection, deterministic
/// child ordering) so that structural equality is a usable sufficient
/// condition for expression equality. Differentiation is exact and symbolic;
/// evaluation reports domain violations together with the offending t.
class TimeExpr {
 public:
  enum class Kind { kConst, kTime, kAdd, kMul, kPow, kSqrt, kExp, kSin, kCos };

  TimeExpr() : TimeExpr(constant(Rational(0))) {}

  // --- factories ---------------------------------------------------------

  static TimeExpr constant(Rational v) {
    return TimeExpr(std::make_shared<Node>(Node{Kind::kConst, std::move(v), {}, 0}));
  }
  static TimeExpr zero() { return constant(Rational(0)); }
  static TimeExpr one() { return constant(Rational(1)); }
  static TimeExpr time() {
    return TimeExpr(std::make_shared<Node>(Node{Kind::kTime, Rational(0), {}, 0}));
  }

  static TimeExpr add(std::vector<TimeExpr> terms) { return make_add(std::move(terms)); }
  static TimeExpr mul(std::vector<TimeExpr> factors) {
    return make_mul(std::move(factors));
  }
  static TimeExpr pow(const TimeExpr& base, long long n) { return make_pow(base, n); }
  static TimeExpr sqrt(const TimeExpr& u) { return make_sqrt(u); }
  static TimeExpr exp(const TimeExpr& u) { return make_unary(Kind::kExp, u); }
  static TimeExpr sin(const TimeExpr& u) { return make_unary(Kind::kSin, u); }
  static TimeExpr cos(const TimeExpr& u) { return make_unary(Kind::kCos, u); }

  friend TimeExpr operator+(const TimeExpr& a, const TimeExpr& b) {
    return make_add({a, b});
  }
  friend TimeExpr operator-(const TimeExpr& a, const TimeExpr& b) {
    return make_add({a, make_mul({constant(Rational(-1)), b})});
  }
  friend TimeExpr operator*(const TimeExpr& a, const TimeExpr& b) {
    return make_mul({a, b});
  }
  friend TimeExpr operator/(const TimeExpr& a, const TimeExpr& b) {
    return make_mul({a, make_pow(b, -1)});
  }
  TimeExpr operator-() const { return make_mul({constant(Rational(-1)), *this}); }

  // --- inspection --------------------------------------------------------

  Kind kind() const { return node_->kind; }

  /// Rational value of a constant leaf.
  const Rational& constant_value() const {
    if (node_->kind != Kind::kConst)
      throw InputError("constant_value on a non-constant expression");
    return node_->value;
  }

  bool is_rational_constant() const { return node_->kind == Kind::kConst; }
  bool is_zero() const {
    return node_->kind == Kind::kConst && node_->value == 0;
  }
  bool is_one() const { return node_->kind == Kind::kConst && node_->value == 1; }

  /// Children: all summands / factors for kAdd / kMul, the single operand
  /// for kPow and the unary functions, empty for leaves.
  const std::vector<TimeExpr>& children() const { return node_->kids; }
  long long exponent() const {
    if (node_->kind != Kind::kPow) throw InputError("exponent on a non-power node");
    return node_->expo;
  }

  /// True iff the symbol t does not occur (the value may still be an exact
  /// transcendental constant such as exp(1)).
  bool is_time_free() const {
    if (node_->kind == Kind::kTime) return false;
    for (const auto& k : node_->kids)
      if (!k.is_time_free()) return false;
    return true;
  }

  // --- ordering & equality -----------------------------------------------

  /// Deterministic structural total order; the basis of canonical child
  /// ordering and of using TimeExpr as a map key.
  static int compare(const TimeExpr& a, const TimeExpr& b) {
    if (a.node_ == b.node_) return 0;
    if (a.node_->kind != b.node_->kind)
      return a.node_->kind < b.node_->kind ? -1 : 1;
    switch (a.node_->kind) {
      case Kind::kConst:
        if (a.node_->value == b.node_->value) return 0;
        return a.node_->value < b.node_->value ? -1 : 1;
      case Kind::kTime:
        return 0;
      case Kind::kPow:
        if (int c = compare(a.node_->kids[0], b.node_->kids[0]); c != 0) return c;
        if (a.node_->expo == b.node_->expo) return 0;
        return a.node_->expo < b.node_->expo ? -1 : 1;
      default: {
        const auto& ka = a.node_->kids;
        const auto& kb = b.node_->kids;
        const std::size_t n = std::min(ka.size(), kb.size());
        for (std::size_t i = 0; i < n; ++i)
          if (int c = compare(ka[i], kb[i]); c != 0) return c;
        if (ka.size() == kb.size()) return 0;
        return ka.size() < kb.size() ? -1 : 1;
      }
    }
  }

  bool operator==(const TimeExpr& o) const { return compare(*this, o) == 0; }
  bool operator!=(const TimeExpr& o) const { return compare(*this, o) != 0; }
  bool operator<(const TimeExpr& o) const { return compare(*this, o) < 0; }

  // --- evaluation ---------------------------------------------------------

  double eval(double t) const {
    switch (node_->kind) {
      case Kind::kConst:
        return to_double(node_->value);
      case Kind::kTime:
        return t;
      case Kind::kAdd: {
        double s = 0.0;
        for (const auto& k : node_->kids) s += k.eval(t);
        return s;
      }
      case Kind::kMul: {
        double p = 1.0;
        for (const auto& k : node_->kids) p *= k.eval(t);
        return p;
      }
      case Kind::kPow: {
        const double b = node_->kids[0].eval(t);
        if (b == 0.0 && node_->expo < 0)
          throw DomainError("division by zero in integer power", t);
        return std::pow(b, static_cast<double>(node_->expo));
      }
      case Kind::kSqrt: {
        const double u = node_->kids[0].eval(t);
        if (u < 0.0) throw DomainError("square root of a negative value", t);
        return std::sqrt(u);
      }
      case Kind::kExp:
        return std::exp(node_->kids[0].eval(t));
      case Kind::kSin:
        return std::sin(node_->kids[0].eval(t));
      case Kind::kCos:
        return std::cos(node_->kids[0].eval(t));
    }
    throw NumericalError("unreachable expression kind");
  }

  // --- differentiation -----------------------------------------------------

  /// Exact symbolic d/dt.
  TimeExpr diff() const {
    switch (node_->kind) {
      case Kind::kConst:
        return zero();
      case Kind::kTime:
        return one();
      case Kind::kAdd: {
        std::vector<TimeExpr> parts;
        parts.reserve(node_->kids.size());
        for (const auto& k : node_->kids) parts.push_back(k.diff());
        return make_add(std::move(parts));
      }
      case Kind::kMul: {
        std::vector<TimeExpr> parts;
        for (std::size_t i = 0; i < node_->kids.size(); ++i) {
          std::vector<TimeExpr> fs;
          fs.reserve(node_->kids.size());
          for (std::size_t j = 0; j < node_->kids.size(); ++j)
            fs.push_back(i == j ? node_->kids[j].diff() : node_->kids[j]);
          parts.push_back(make_mul(std::move(fs)));
        }
        return make_add(std::move(parts));
      }
      case Kind::kPow: {
        const TimeExpr& u = node_->kids[0];
        return make_mul({constant(Rational(node_->expo)),
                         make_pow(u, node_->expo - 1), u.diff()});
      }
      case Kind::kSqrt: {
        const TimeExpr& u = node_->kids[0];
        return make_mul({constant(Rational(1, 2)), u.diff(),
                         make_pow(make_sqrt(u), -1)});
      }
      case Kind::kExp:
        return make_mul({node_->kids[0].diff(), exp(node_->kids[0])});
      case Kind::kSin:
        return make_mul({node_->kids[0].diff(), cos(node_->kids[0])});
      case Kind::kCos:
        return make_mul({constant(Rational(-1)), node_->kids[0].diff(),
                         sin(node_->kids[0])});
    }
    throw NumericalError("unreachable expression kind");
  }

  // --- printing -----------------------------------------------------------

  /// Textual form accepted back by the time-expression parser, e.g.
  /// `1/2*t^2 + sin(t)*exp(2*t)`.
  std::string to_string() const { return render(PREC_ADD); }

 private:
  struct Node {
    Kind kind;
    Rational value;              // kConst
    std::vector<TimeExpr> kids;  // operands
    long long expo;              // kPow
  };

  explicit TimeExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static TimeExpr make_node(Kind k, std::vector<TimeExpr> kids, long long expo = 0) {
    return TimeExpr(
        std::make_shared<Node>(Node{k, Rational(0), std::move(kids), expo}));
  }

  /// Splits a canonical term into (rational coefficient, remaining factor).
  static std::pair<Rational, TimeExpr> split_coeff(const TimeExpr& e) {
    if (e.node_->kind == Kind::kConst) return {e.node_->value, one()};
    if (e.node_->kind == Kind::kMul && !e.node_->kids.empty() &&
        e.node_->kids[0].node_->kind == Kind::kConst) {
      std::vector<TimeExpr> rest(e.node_->kids.begin() + 1, e.node_->kids.end());
      if (rest.size() == 1) return {e.node_->kids[0].node_->value, rest[0]};
      return {e.node_->kids[0].node_->value,
              make_node(Kind::kMul, std::move(rest))};
    }
    return {Rational(1), e};
  }

  /// Splits a canonical factor into (base, integer exponent).
  static std::pair<TimeExpr, long long> split_pow(const TimeExpr& e) {
    if (e.node_->kind == Kind::kPow) return {e.node_->kids[0], e.node_->expo};
    return {e, 1};
  }

  static TimeExpr make_add(std::vector<TimeExpr> terms) {
    std::vector<TimeExpr> flat;
    for (auto& t : terms) {
      if (t.node_->kind == Kind::kAdd)
        flat.insert(flat.end(), t.node_->kids.begin(), t.node_->kids.end());
      else
        flat.push_back(std::move(t));
    }
    Rational const_total(0);
    std::map<TimeExpr, Rational> collected;
    for (const auto& t : flat) {
      auto [coeff, rest] = split_coeff(t);
      if (rest.is_one()) {
        const_total += coeff;
      } else {
        collected[rest] += coeff;
      }
    }
    std::vector<TimeExpr> rebuilt;
    if (const_total != 0) rebuilt.push_back(constant(const_total));
    for (const auto& [rest, coeff] : collected) {
      if (coeff == 0) continue;
      if (coeff == 1)
        rebuilt.push_back(rest);
      else
        rebuilt.push_back(make_mul({constant(coeff), rest}));
    }
    if (rebuilt.empty()) return zero();
    if (rebuilt.size() == 1) return rebuilt[0];
    std::sort(rebuilt.begin(), rebuilt.end());
    return make_node(Kind::kAdd, std::move(rebuilt));
  }

  static TimeExpr make_mul(std::vector<TimeExpr> factors) {
    std::vector<TimeExpr> flat;
    for (auto& f : factors) {
      if (f.node_->kind == Kind::kMul)
        flat.insert(flat.end(), f.node_->kids.begin(), f.node_->kids.end());
      else
        flat.push_back(std::move(f));
    }
    Rational coeff(1);
    std::map<TimeExpr, long long> powers;
    std::vector<TimeExpr> exp_args;
    for (const auto& f : flat) {
      if (f.node_->kind == Kind::kConst) {
        coeff *= f.node_->value;
        continue;
      }
      if (f.node_->kind == Kind::kExp) {
        // exp(a)*exp(b) = exp(a+b); a power never wraps an exponential (see
        // make_pow), so collecting bare kExp factors catches them all.
        exp_args.push_back(f.node_->kids[0]);
        continue;
      }
      auto [base, e] = split_pow(f);
      powers[base] += e;
    }
    if (!exp_args.empty()) {
      TimeExpr merged = make_unary(Kind::kExp, make_add(std::move(exp_args)));
      if (merged.node_->kind == Kind::kConst)
        coeff *= merged.node_->value;
      else
        powers[merged] += 1;
    }
    if (coeff == 0) return zero();
    std::vector<TimeExpr> rebuilt;
    for (const auto& [base, e] : powers) {
      if (e == 0) continue;
      TimeExpr f = make_pow(base, e);
      // Exponent merging may fold to a constant (e.g. sqrt(u)*sqrt(u) with
      // constant u); absorb it into the coefficient.
      if (f.node_->kind == Kind::kConst)
        coeff *= f.node_->value;
      else
        rebuilt.push_back(std::move(f));
    }
    if (coeff == 0) return zero();
    if (rebuilt.empty()) return constant(coeff);
    std::sort(rebuilt.begin(), rebuilt.end());
    if (coeff != 1)
      rebuilt.insert(rebuilt.begin(), constant(coeff));
    if (rebuilt.size() == 1) return rebuilt[0];
    return make_node(Kind::kMul, std::move(rebuilt));
  }

  static TimeExpr make_pow(const TimeExpr& base, long long n) {
    if (n == 0) return one();
    if (n == 1) return base;
    switch (base.node_->kind) {
      case Kind::kConst: {
        if (base.node_->value == 0 && n < 0)
          throw NumericalError("zero raised to a negative power");
        return constant(rational_pow(base.node_->value, n));
      }
      case Kind::kPow:
        return make_pow(base.node_->kids[0], base.node_->expo * n);
      case Kind::kMul: {
        std::vector<TimeExpr> parts;
        parts.reserve(base.node_->kids.size());
        for (const auto& k : base.node_->kids) parts.push_back(make_pow(k, n));
        return make_mul(std::move(parts));
      }
      case Kind::kSqrt:
        if (n % 2 == 0) return make_pow(base.node_->kids[0], n / 2);
        break;
      case Kind::kExp:
        // exp(u)^n = exp(n*u); keeps all exponential factors in one shape.
        return exp(make_mul({constant(Rational(n)), base.node_->kids[0]}));
      default:
        break;
    }
    return make_node(Kind::kPow, {base}, n);
  }

  static TimeExpr make_sqrt(const TimeExpr& u) {
    if (u.node_->kind == Kind::kConst) {
      Rational root;
      if (u.node_->value >= 0 && exact_sqrt(u.node_->value, root))
        return constant(root);
    }
    // sqrt(exp(w)) = exp(w/2) unconditionally (exp is positive).
    if (u.node_->kind == Kind::kExp)
      return exp(make_mul({constant(Rational(1, 2)), u.node_->kids[0]}));
    return make_node(Kind::kSqrt, {u});
  }

  static TimeExpr make_unary(Kind k, const TimeExpr& u) {
    if (u.is_zero()) {
      if (k == Kind::kSin) return zero();
      if (k == Kind::kCos || k == Kind::kExp) return one();
    }
    return make_node(k, {u});
  }

  // Rendering precedence levels.
  static constexpr int PREC_ADD = 1;
  static constexpr int PREC_MUL = 2;
  static constexpr int PREC_POW = 3;

  std::string render(int parent_prec) const {
    switch (node_->kind) {
      case Kind::kConst: {
        std::string s = liesys::to_string(node_->value);
        const bool needs_parens =
            (parent_prec >= PREC_MUL && s.front() == '-') ||
            (parent_prec >= PREC_POW && s.find('/') != std::string::npos);
        return needs_parens ? "(" + s + ")" : s;
      }
      case Kind::kTime:
        return "t";
      case Kind::kAdd: {
        std::string s;
        for (std::size_t i = 0; i < node_->kids.size(); ++i) {
          std::string part = node_->kids[i].render(PREC_ADD);
          if (i == 0) {
            s = std::move(part);
          } else if (part.front() == '-') {
            s += " - " + part.substr(1);
          } else {
            s += " + " + part;
          }
        }
        return parent_prec > PREC_ADD ? "(" + s + ")" : s;
      }
      case Kind::kMul: {
        std::string s;
        for (std::size_t i = 0; i < node_->kids.size(); ++i) {
          if (i) s += "*";
          if (i == 0 && node_->kids[0].node_->kind == Kind::kConst) {
            // A leading -1 coefficient renders as a bare sign; any other
            // leading constant prints unparenthesized (unary minus and the
            // `p/q` form both bind as expected in the grammar).
            if (node_->kids[0].node_->value == -1 && node_->kids.size() > 1) {
              s += "-";
              continue;
            }
            s += node_->kids[0].render(PREC_ADD);
            continue;
          }
          s += node_->kids[i].render(PREC_MUL);
        }
        // Drop the artifact of "-*x" from the sign shortcut.
        if (s.rfind("-*", 0) == 0) s = "-" + s.substr(2);
        return parent_prec > PREC_MUL || (parent_prec == PREC_MUL && s.front() == '-')
                   ? "(" + s + ")"
                   : s;
      }
      case Kind::kPow: {
        std::string b = node_->kids[0].render(PREC_POW);
        std::string e = std::to_string(node_->expo);
        if (node_->expo < 0) e = "(" + e + ")";
        return b + "^" + e;
      }
      case Kind::kSqrt:
        return "sqrt(" + node_->kids[0].render(PREC_ADD) + ")";
      case Kind::kExp:
        return "exp(" + node_->kids[0].render(PREC_ADD) + ")";
      case Kind::kSin:
        return "sin(" + node_->kids[0].render(PREC_ADD) + ")";
      case Kind::kCos:
        return "cos(" + node_->kids[0].render(PREC_ADD) + ")";
    }
    throw NumericalError("unreachable expression kind");
  }

  std::shared_ptr<const Node> node_;
};

/// Free-function spellings used throughout the library.
inline double eval_time(const TimeExpr& e, double t) { return e.eval(t); }
inline TimeExpr diff_time(const TimeExpr& e) { return e.diff(); }

/// Default working interval for all t-dependent checks; [0, 2] because the
/// second-order Riccati family is anchored by its constraint at t = 0.
inline constexpr double kWorkingLo = 0.0;
inline constexpr double kWorkingHi = 2.0;
/// Sample count and tolerance for dense numerical equality checks.
inline constexpr int kSampleCount = 257;
inline constexpr double kSampleTol = 1e-12;

/// Chebyshev–Lobatto points on [lo, hi] (endpoints included), ascending.
inline std::vector<double> chebyshev_points(double lo, double hi, int n) {
  if (n < 2) throw InputError("need at least two sample points");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] =
        lo + (hi - lo) * 0.5 * (1.0 - std::cos(pi * k / (n - 1)));
  return out;
}

/// Expression equality test: structural equality first (sufficient), then
/// dense sampling on [lo, hi] within an absolute tolerance.
inline bool sampled_equal(const TimeExpr& a, const TimeExpr& b,
                          double lo = kWorkingLo, double hi = kWorkingHi,
                          int n = kSampleCount, double tol = kSampleTol) {
  if (a == b) return true;
  for (double t : chebyshev_points(lo, hi, n))
    if (std::abs(a.eval(t) - b.eval(t)) > tol) return false;
  return true;
}

}  // namespace liesys

#endif  // LIESYS_TIME_EXPR_HPP
