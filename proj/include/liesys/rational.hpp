#ifndef LIESYS_RATIONAL_HPP
#define LIESYS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "liesys/errors.hpp"

namespace liesys {

/// Exact arbitrary-precision rational. All span-membership and
/// bracket-closure decisions run on these, never on floats.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline int sign_of(const Rational& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

/// Prints `p` or `p/q`, matching the DSL literal syntax.
inline std::string to_string(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  std::string s = num.str();
  if (den != 1) s += "/" + den.str();
  return s;
}

/// If r = (p/q)^2 for a rational p/q, returns p/q (non-negative root).
inline bool exact_sqrt(const Rational& r, Rational& out) {
  if (r < 0) return false;
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  const BigInt sn = boost::multiprecision::sqrt(num);
  const BigInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return false;
  out = Rational(sn, sd);
  return true;
}

/// r^n for integer n; n < 0 requires r != 0.
inline Rational rational_pow(const Rational& base, long long n) {
  if (n == 0) return Rational(1);
  if (base == 0 && n < 0) throw NumericalError("zero raised to a negative power");
  Rational b = base;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n)
                               : static_cast<unsigned long long>(n);
  Rational acc(1);
  while (e > 0) {
    if (e & 1ULL) acc *= b;
    b *= b;
    e >>= 1;
  }
  if (n < 0) return Rational(1) / acc;
  return acc;
}

}  // namespace liesys

#endif  // LIESYS_RATIONAL_HPP
