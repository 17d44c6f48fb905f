#ifndef LIESYS_CATALOG_HPP
#define LIESYS_CATALOG_HPP

#include <string>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/vector_field.hpp"

namespace liesys {

namespace detail {

/// Builder for fields on the phase-plane variables (x, v): monomials are
/// given as (coefficient, x-exponent, v-exponent) triples per component.
struct XvTerm {
  long long coeff;
  unsigned ex;
  unsigned ev;
};

inline PolyVectorField xv_field(std::initializer_list<XvTerm> dx,
                                std::initializer_list<XvTerm> dv) {
  const std::vector<std::string> vars{"x", "v"};
  Polynomial px(vars), pv(vars);
  for (const auto& t : dx) px.add_term({t.ex, t.ev}, Rational(t.coeff));
  for (const auto& t : dv) pv.add_term({t.ex, t.ev}, Rational(t.coeff));
  return PolyVectorField(vars, {px, pv});
}

}  // namespace detail

/// Built-in bases on the phase plane (x, v).
///
///   sl3_realization     — the eight fields whose span is bracket-closed of
///                         dimension 8 (Killing signature (5,3,0));
///   riccati2_scheme_V2  — the eight-field span V2 used by the second-order
///                         Riccati scheme (not bracket-closed);
///   riccati2_scheme_W   — the two-field Abelian subspace W = <v d/dv, x d/dx>.
inline std::vector<PolyVectorField> catalog(const std::string& name) {
  using detail::xv_field;
  if (name == "sl3_realization") {
    return {
        // X1 = v d/dx - (3xv + x^3) d/dv
        xv_field({{1, 0, 1}}, {{-3, 1, 1}, {-1, 3, 0}}),
        // X2 = d/dv
        xv_field({}, {{1, 0, 0}}),
        // X3 = -d/dx + 3x d/dv
        xv_field({{-1, 0, 0}}, {{3, 1, 0}}),
        // X4 = x d/dx - 2x^2 d/dv
        xv_field({{1, 1, 0}}, {{-2, 2, 0}}),
        // X5 = (v + 2x^2) d/dx - (xv + 3x^3) d/dv
        xv_field({{1, 0, 1}, {2, 2, 0}}, {{-1, 1, 1}, {-3, 3, 0}}),
        // X6 = (2xv + 2x^3) d/dx + (2v^2 - 2x^4) d/dv
        xv_field({{2, 1, 1}, {2, 3, 0}}, {{2, 0, 2}, {-2, 4, 0}}),
        // X7 = d/dx - x d/dv
        xv_field({{1, 0, 0}}, {{-1, 1, 0}}),
        // X8 = 2x d/dx + 4v d/dv
        xv_field({{2, 1, 0}}, {{4, 0, 1}}),
    };
  }
  if (name == "riccati2_scheme_V2") {
    return {
        xv_field({{1, 0, 1}}, {}),  // Y1 = v d/dx
        xv_field({}, {{1, 0, 1}}),  // Y2 = v d/dv
        xv_field({}, {{1, 1, 1}}),  // Y3 = xv d/dv
        xv_field({}, {{1, 0, 0}}),  // Y4 = d/dv
        xv_field({}, {{1, 1, 0}}),  // Y5 = x d/dv
        xv_field({}, {{1, 2, 0}}),  // Y6 = x^2 d/dv
        xv_field({}, {{1, 3, 0}}),  // Y7 = x^3 d/dv
        xv_field({{1, 1, 0}}, {}),  // Y8 = x d/dx
    };
  }
  if (name == "riccati2_scheme_W") {
    return {
        xv_field({}, {{1, 0, 1}}),  // Y2 = v d/dv
        xv_field({{1, 1, 0}}, {}),  // Y8 = x d/dx
    };
  }
  throw InputError("unknown catalog name: " + name +
                   " (expected sl3_realization, riccati2_scheme_V2, or "
                   "riccati2_scheme_W)");
}

}  // namespace liesys

#endif  // LIESYS_CATALOG_HPP
