#ifndef LIESYS_PARSE_HPP
#define LIESYS_PARSE_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/polynomial.hpp"
#include "liesys/rational.hpp"
#include "liesys/tdvf.hpp"
#include "liesys/time_expr.hpp"
#include "liesys/vector_field.hpp"

namespace liesys {

/// Parsing limits: the exponent-vector representation is dense per variable
/// list, so inputs are bounded to keep memory proportional to the text.
inline constexpr std::size_t kMaxVariables = 8;
inline constexpr unsigned kMaxDegree = 16;

namespace parser_detail {

enum class Tok {
  kNumber,
  kIdent,
  kDeriv,  // the three characters `d/d` immediately before an identifier
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kCaret,
  kLParen,
  kRParen,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  bool is_float = false;
  std::size_t line = 1;
  std::size_t col = 1;
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.col = col;
    // Derivative marker `d/d<ident>`; wins over reading `d` as an identifier.
    if (c == 'd' && i + 3 < src.size() && src[i + 1] == '/' && src[i + 2] == 'd' &&
        ident_start(src[i + 3])) {
      tok.kind = Tok::kDeriv;
      tok.text = "d/d";
      advance(3);
      out.push_back(tok);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      tok.kind = Tok::kIdent;
      tok.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(tok);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      bool is_float = false;
      if (j < src.size() && src[j] == '.') {
        if (j + 1 >= src.size() || !std::isdigit(static_cast<unsigned char>(src[j + 1])))
          throw ParseError("digits required after decimal point", line, col);
        is_float = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      tok.kind = Tok::kNumber;
      tok.text = src.substr(i, j - i);
      tok.is_float = is_float;
      advance(j - i);
      out.push_back(tok);
      continue;
    }
    switch (c) {
      case '+': tok.kind = Tok::kPlus; break;
      case '-': tok.kind = Tok::kMinus; break;
      case '*': tok.kind = Tok::kStar; break;
      case '/': tok.kind = Tok::kSlash; break;
      case '^': tok.kind = Tok::kCaret; break;
      case '(': tok.kind = Tok::kLParen; break;
      case ')': tok.kind = Tok::kRParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    tok.text = std::string(1, c);
    advance(1);
    out.push_back(tok);
  }
  Token end;
  end.kind = Tok::kEnd;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

/// Expression values during parsing: a polynomial in the declared state
/// variables whose coefficients are closed-form functions of t. Pure time
/// expressions and pure rational polynomials are the state-free and
/// time-free special cases.
using Terms = std::map<std::vector<unsigned>, TimeExpr>;

struct Value {
  Terms terms;  // empty map = zero
};

inline void value_add_term(Value& v, const std::vector<unsigned>& e,
                           const TimeExpr& c) {
  if (c.is_zero()) return;
  auto it = v.terms.find(e);
  if (it == v.terms.end()) {
    v.terms.emplace(e, c);
    return;
  }
  TimeExpr sum = it->second + c;
  if (sum.is_zero())
    v.terms.erase(it);
  else
    it->second = sum;
}

inline Value value_neg(const Value& v) {
  Value out;
  for (const auto& [e, c] : v.terms) out.terms.emplace(e, -c);
  return out;
}

inline Value value_add(const Value& a, const Value& b) {
  Value out = a;
  for (const auto& [e, c] : b.terms) value_add_term(out, e, c);
  return out;
}

inline bool value_state_free(const Value& v) {
  for (const auto& [e, c] : v.terms)
    for (unsigned k : e)
      if (k > 0) return false;
  return true;
}

inline TimeExpr value_as_time(const Value& v) {
  if (v.terms.empty()) return TimeExpr::zero();
  return v.terms.begin()->second;
}

}  // namespace parser_detail

/// Recursive-descent parser over the shared expression grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := primary ['^' exponent]
///   primary:= NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
///   exponent := INT | '(' ['-'] INT ')'
/// Rational literals are written p/q (plain division of integers). Function
/// application (sqrt, exp, sin, cos) and the time variable t are available
/// only where time dependence is allowed; decimal literals are converted to
/// exact rationals where allowed and rejected in field definitions.
class ExpressionParser {
 public:
  ExpressionParser(const std::string& src, std::vector<std::string> variables,
                   bool allow_time, bool allow_float)
      : vars_(std::move(variables)),
        allow_time_(allow_time),
        allow_float_(allow_float),
        toks_(parser_detail::lex(src)) {
    if (vars_.size() > kMaxVariables)
      throw InputError("too many variables (limit " + std::to_string(kMaxVariables) +
                       ")");
  }

  /// Parses a full expression and requires the input to be fully consumed.
  parser_detail::Value parse_expression_all() {
    parser_detail::Value v = parse_expr();
    expect_end();
    return v;
  }

  /// Parses a vector field `term (('+'|'-') term)*` where each term is
  /// `[polyexpr '*'] d/d<ident>`.
  PolyVectorField parse_field_all() {
    PolyVectorField out(vars_);
    // The zero field prints as `0`; accept that spelling back.
    if (peek().kind == parser_detail::Tok::kNumber && peek().text == "0" &&
        !peek().is_float && toks_[pos_ + 1].kind == parser_detail::Tok::kEnd) {
      ++pos_;
      expect_end();
      return out;
    }
    bool negate = false;
    if (peek().kind == parser_detail::Tok::kMinus) {
      negate = true;
      ++pos_;
    } else if (peek().kind == parser_detail::Tok::kPlus) {
      ++pos_;
    }
    parse_field_term(out, negate);
    while (peek().kind == parser_detail::Tok::kPlus ||
           peek().kind == parser_detail::Tok::kMinus) {
      const bool neg = peek().kind == parser_detail::Tok::kMinus;
      ++pos_;
      parse_field_term(out, neg);
    }
    expect_end();
    return out;
  }

 private:
  using Tok = parser_detail::Tok;
  using Token = parser_detail::Token;
  using Value = parser_detail::Value;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ParseError(msg, at.line, at.col);
  }

  void expect_end() {
    if (peek().kind != Tok::kEnd)
      fail(peek(), "unexpected trailing input starting at '" + peek().text + "'");
  }

  std::size_t variable_index(const Token& tok) const {
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (vars_[k] == tok.text) return k;
    fail(tok, "unknown identifier '" + tok.text + "' (declared variables: " +
                  Polynomial::join(vars_) + ")");
  }

  // One additive field term ending in a derivative marker.
  void parse_field_term(PolyVectorField& out, bool negate) {
    Value coeff;
    parser_detail::value_add_term(coeff, std::vector<unsigned>(vars_.size(), 0),
                                  TimeExpr::one());
    if (peek().kind != Tok::kDeriv) {
      coeff = parse_term_until_deriv();
      if (peek().kind != Tok::kDeriv)
        fail(peek(), "expected d/d<variable> to close the field term");
    }
    ++pos_;  // consume the derivative marker
    if (peek().kind != Tok::kIdent)
      fail(peek(), "expected a variable name after d/d");
    const std::size_t idx = variable_index(peek());
    ++pos_;
    Polynomial p = to_polynomial(coeff);
    if (negate) p = p.scaled(Rational(-1));
    Polynomial comp = out.component(idx);
    comp += p;
    out.set_component(idx, std::move(comp));
  }

  // Multiplicative chain that stops when `* d/d` begins the derivative part.
  Value parse_term_until_deriv() {
    Value acc = parse_factor();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      if (peek().kind == Tok::kStar && peek(1).kind == Tok::kDeriv) {
        ++pos_;  // consume '*': caller sees the derivative marker next
        return acc;
      }
      const bool division = peek().kind == Tok::kSlash;
      const Token op = peek();
      ++pos_;
      Value rhs = parse_factor();
      acc = division ? value_div(acc, rhs, op) : value_mul(acc, rhs, op);
    }
    return acc;
  }

  Value parse_expr() {
    bool negate = false;
    if (peek().kind == Tok::kMinus) {
      negate = true;
      ++pos_;
    } else if (peek().kind == Tok::kPlus) {
      ++pos_;
    }
    Value acc = parse_term();
    if (negate) acc = parser_detail::value_neg(acc);
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      const bool neg = peek().kind == Tok::kMinus;
      ++pos_;
      Value rhs = parse_term();
      acc = parser_detail::value_add(acc, neg ? parser_detail::value_neg(rhs) : rhs);
    }
    return acc;
  }

  Value parse_term() {
    Value acc = parse_factor();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      const bool division = peek().kind == Tok::kSlash;
      const Token op = peek();
      ++pos_;
      Value rhs = parse_factor();
      acc = division ? value_div(acc, rhs, op) : value_mul(acc, rhs, op);
    }
    return acc;
  }

  Value parse_factor() {
    Value base = parse_primary();
    if (peek().kind != Tok::kCaret) return base;
    const Token caret = peek();
    ++pos_;
    const long long n = parse_exponent();
    return value_pow(base, n, caret);
  }

  long long parse_exponent() {
    bool neg = false;
    bool parens = false;
    if (peek().kind == Tok::kLParen) {
      parens = true;
      ++pos_;
      if (peek().kind == Tok::kMinus) {
        neg = true;
        ++pos_;
      }
    }
    if (peek().kind != Tok::kNumber || peek().is_float)
      fail(peek(), "exponent must be an integer");
    long long n = 0;
    for (char c : peek().text) {
      n = n * 10 + (c - '0');
      if (n > 1000000) fail(peek(), "exponent too large");
    }
    ++pos_;
    if (parens) {
      if (peek().kind != Tok::kRParen) fail(peek(), "expected ')' after exponent");
      ++pos_;
    }
    return neg ? -n : n;
  }

  Value parse_primary() {
    const Token tok = peek();
    switch (tok.kind) {
      case Tok::kNumber: {
        ++pos_;
        Value v;
        parser_detail::value_add_term(v, std::vector<unsigned>(vars_.size(), 0),
                                      TimeExpr::constant(number_to_rational(tok)));
        return v;
      }
      case Tok::kLParen: {
        ++pos_;
        Value v = parse_expr();
        if (peek().kind != Tok::kRParen) fail(peek(), "expected ')'");
        ++pos_;
        return v;
      }
      case Tok::kIdent: {
        // Function application.
        if (peek(1).kind == Tok::kLParen &&
            (tok.text == "sqrt" || tok.text == "exp" || tok.text == "sin" ||
             tok.text == "cos")) {
          if (!allow_time_)
            fail(tok, "function '" + tok.text + "' is not allowed in field definitions");
          pos_ += 2;
          Value arg = parse_expr();
          if (peek().kind != Tok::kRParen) fail(peek(), "expected ')'");
          ++pos_;
          if (!parser_detail::value_state_free(arg))
            fail(tok, "function '" + tok.text +
                          "' requires a time-only argument, not state variables");
          const TimeExpr a = parser_detail::value_as_time(arg);
          TimeExpr r = TimeExpr::zero();
          if (tok.text == "sqrt") r = TimeExpr::sqrt(a);
          if (tok.text == "exp") r = TimeExpr::exp(a);
          if (tok.text == "sin") r = TimeExpr::sin(a);
          if (tok.text == "cos") r = TimeExpr::cos(a);
          Value v;
          parser_detail::value_add_term(v, std::vector<unsigned>(vars_.size(), 0), r);
          return v;
        }
        if (tok.text == "t") {
          if (!allow_time_)
            fail(tok, "unknown identifier 't' (declared variables: " +
                          Polynomial::join(vars_) + ")");
          ++pos_;
          Value v;
          parser_detail::value_add_term(v, std::vector<unsigned>(vars_.size(), 0),
                                        TimeExpr::time());
          return v;
        }
        const std::size_t idx = variable_index(tok);
        ++pos_;
        Value v;
        std::vector<unsigned> e(vars_.size(), 0);
        e[idx] = 1;
        parser_detail::value_add_term(v, e, TimeExpr::one());
        return v;
      }
      case Tok::kDeriv:
        fail(tok, "derivative marker d/d is not valid inside an expression");
      default:
        fail(tok, "expected a number, variable, or '(' but found '" +
                      (tok.kind == Tok::kEnd ? std::string("end of input") : tok.text) +
                      "'");
    }
  }

  Rational number_to_rational(const Token& tok) const {
    if (tok.is_float && !allow_float_)
      fail(tok,
           "decimal literals are not allowed in field definitions; use p/q rationals");
    // BigInt's string constructor treats a leading '0' as an octal prefix,
    // so digit strings must be normalized before conversion.
    const auto as_decimal = [](std::string digits) {
      const std::size_t nz = digits.find_first_not_of('0');
      if (nz == std::string::npos) return BigInt(0);
      return BigInt(digits.substr(nz));
    };
    const std::string& s = tok.text;
    const std::size_t dot = s.find('.');
    if (dot == std::string::npos) return Rational(as_decimal(s));
    const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    BigInt den = 1;
    for (std::size_t k = 0; k < s.size() - dot - 1; ++k) den *= 10;
    return Rational(as_decimal(digits), den);
  }

  Value value_mul(const Value& a, const Value& b, const Token& at) {
    Value out;
    for (const auto& [ea, ca] : a.terms) {
      for (const auto& [eb, cb] : b.terms) {
        std::vector<unsigned> e(vars_.size(), 0);
        unsigned total = 0;
        for (std::size_t k = 0; k < e.size(); ++k) {
          e[k] = ea[k] + eb[k];
          total += e[k];
        }
        if (total > kMaxDegree)
          fail(at, "term degree exceeds the limit of " + std::to_string(kMaxDegree));
        parser_detail::value_add_term(out, e, ca * cb);
      }
    }
    return out;
  }

  Value value_div(const Value& a, const Value& b, const Token& at) {
    if (!parser_detail::value_state_free(b))
      fail(at, "division by an expression containing state variables");
    if (b.terms.empty()) fail(at, "division by zero");
    const TimeExpr d = parser_detail::value_as_time(b);
    if (!allow_time_ && !d.is_rational_constant())
      fail(at, "division must be by a rational constant here");
    Value out;
    for (const auto& [e, c] : a.terms) parser_detail::value_add_term(out, e, c / d);
    return out;
  }

  Value value_pow(const Value& base, long long n, const Token& at) {
    Value out;
    if (n == 0) {
      parser_detail::value_add_term(out, std::vector<unsigned>(vars_.size(), 0),
                                    TimeExpr::one());
      return out;
    }
    if (n < 0) {
      if (!parser_detail::value_state_free(base))
        fail(at, "negative powers of state variables are not allowed");
      if (base.terms.empty()) fail(at, "zero raised to a negative power");
      const TimeExpr b = parser_detail::value_as_time(base);
      if (!allow_time_ && !b.is_rational_constant())
        fail(at, "negative powers must apply to rational constants here");
      parser_detail::value_add_term(out, std::vector<unsigned>(vars_.size(), 0),
                                    TimeExpr::pow(b, n));
      return out;
    }
    out = base;
    Value acc;
    parser_detail::value_add_term(acc, std::vector<unsigned>(vars_.size(), 0),
                                  TimeExpr::one());
    Value sq = base;
    long long m = n;
    // Binary exponentiation keeps intermediate degrees within the limit check.
    while (m > 0) {
      if (m & 1) acc = value_mul(acc, sq, at);
      m >>= 1;
      if (m > 0) sq = value_mul(sq, sq, at);
    }
    return acc;
  }

  Polynomial to_polynomial(const Value& v) const {
    Polynomial p(vars_);
    for (const auto& [e, c] : v.terms) {
      // With time and functions disallowed every coefficient is rational.
      p.add_term(e, c.constant_value());
    }
    return p;
  }

  std::vector<std::string> vars_;
  bool allow_time_;
  bool allow_float_;
  std::vector<parser_detail::Token> toks_;
  std::size_t pos_ = 0;
};

/// Parses a vector field in derivative notation, e.g.
/// `v*d/dx - (3*x*v + x^3)*d/dv`, with exact rational coefficients.
inline PolyVectorField parse_field(const std::string& src,
                                   const std::vector<std::string>& variables) {
  ExpressionParser p(src, variables, /*allow_time=*/false, /*allow_float=*/false);
  return p.parse_field_all();
}

/// Parses a closed-form expression of t (functions sqrt/exp/sin/cos, integer
/// powers, rationals; decimal literals become exact rationals).
inline TimeExpr parse_time_expr(const std::string& src) {
  ExpressionParser p(src, {}, /*allow_time=*/true, /*allow_float=*/true);
  parser_detail::Value v = p.parse_expression_all();
  return parser_detail::value_as_time(v);
}

/// Parses a polynomial in the state variables with t-dependent closed-form
/// coefficients (the shape of second-order right-hand sides).
inline MixedPoly parse_mixed(const std::string& src,
                             const std::vector<std::string>& variables) {
  ExpressionParser p(src, variables, /*allow_time=*/true, /*allow_float=*/true);
  parser_detail::Value v = p.parse_expression_all();
  MixedPoly out(variables);
  for (const auto& [e, c] : v.terms) out.add_term(e, c);
  return out;
}

}  // namespace liesys

#endif  // LIESYS_PARSE_HPP
