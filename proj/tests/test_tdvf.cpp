#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "liesys/catalog.hpp"
#include "liesys/tdvf.hpp"

using liesys::catalog;
using liesys::decompose_onto_basis;
using liesys::Decomposition;
using liesys::family_ghj;
using liesys::FieldSpace;
using liesys::GhjCoefficients;
using liesys::lift_sode;
using liesys::MixedPoly;
using liesys::PolyVectorField;
using liesys::Rational;
using liesys::riccati2;
using liesys::Riccati2Spec;
using liesys::riccati2_scaled_family;
using liesys::sampled_equal;
using liesys::SODE;
using liesys::TDVF;
using liesys::TimeExpr;
using liesys::validate_riccati2;

namespace {

const TimeExpr t = TimeExpr::time();
const std::vector<std::string> kXV = {"x", "v"};

TimeExpr c(long long p, long long q = 1) { return TimeExpr::constant(Rational(p, q)); }

PolyVectorField mono_field(std::size_t component, const std::vector<unsigned>& exps,
                           const Rational& coeff = Rational(1)) {
  PolyVectorField f(kXV);
  liesys::Polynomial p(kXV);
  p.add_term(exps, coeff);
  f.set_component(component, p);
  return f;
}

}  // namespace

TEST_CASE("term bookkeeping in time-dependent fields") {
  TDVF x(kXV);
  REQUIRE(x.is_zero());
  x.add_term(TimeExpr::sin(t), mono_field(1, {0, 0}));
  x.add_term(TimeExpr::sin(t), mono_field(1, {1, 0}, Rational(2)));
  REQUIRE(x.terms().size() == 1);  // equal coefficients merge
  x.add_term(c(0), mono_field(0, {0, 1}));
  x.add_term(TimeExpr::cos(t), PolyVectorField(kXV));
  REQUIRE(x.terms().size() == 1);  // zero coefficient / zero field dropped
  x.add_term(TimeExpr::sin(t), mono_field(1, {0, 0}, Rational(-1)));
  REQUIRE(x.terms().size() == 1);
  REQUIRE(x.to_string() == "(sin(t))*(2*x*d/dv)");
  x.add_term(TimeExpr::sin(t), mono_field(1, {1, 0}, Rational(-2)));
  REQUIRE(x.is_zero());
  REQUIRE(x.to_string() == "0");

  REQUIRE_THROWS_AS(x.add_term(c(1), PolyVectorField({"x", "y"})),
                    liesys::VariableMismatchError);
  REQUIRE_THROWS_AS(x.eval_rhs(0.0, {1.0}), liesys::InputError);
}

TEST_CASE("mixed polynomials evaluate and print") {
  MixedPoly p(kXV);
  p.add_term({0, 0}, TimeExpr::sin(t));
  p.add_term({1, 1}, c(-3));
  p.add_term({3, 0}, c(-1));
  REQUIRE(p.to_string() == "(sin(t)) - 3*x*v - x^3");
  const double val = p.eval(0.5, {2.0, -1.0});
  REQUIRE(val == Catch::Approx(std::sin(0.5) + 6.0 - 8.0).margin(1e-14));

  MixedPoly q(kXV);
  q.add_term({0, 1}, t);
  q.add_term({0, 1}, -t);
  REQUIRE(q.is_zero());
  REQUIRE_THROWS_AS(q.add_term({0}, c(1)), liesys::InputError);
  REQUIRE_THROWS_AS(q.eval(0.0, {1.0, 2.0, 3.0}), liesys::InputError);
}

TEST_CASE("second-order systems validate their shape") {
  MixedPoly rhs(kXV);
  rhs.add_term({0, 0}, c(1));
  REQUIRE_NOTHROW(SODE(kXV, {rhs}));
  REQUIRE_THROWS_AS(SODE({"x"}, {rhs}), liesys::InputError);
  REQUIRE_THROWS_AS(SODE(kXV, {rhs, rhs}), liesys::InputError);
  MixedPoly wrong({"x", "y"});
  REQUIRE_THROWS_AS(SODE(kXV, {wrong}), liesys::VariableMismatchError);
  const SODE s(kXV, {rhs});
  REQUIRE(s.positions() == 1);
  REQUIRE_THROWS_AS(s.rhs(1), liesys::InputError);
}

TEST_CASE("forced oscillator family lifts onto two catalog fields") {
  // d^2x/dt^2 + 3 x dx/dt + x^3 = sin(t): the driving term enters with a
  // bare time coefficient while the autonomous part folds into one field.
  const SODE eq = family_ghj(c(0), c(0), -TimeExpr::sin(t));
  const TDVF lift = lift_sode(eq);
  const auto x_basis = catalog("sl3_realization");

  REQUIRE(lift.terms().size() == 2);
  REQUIRE(lift.terms()[0].first == TimeExpr::one());
  REQUIRE(lift.terms()[0].second == x_basis[0]);
  REQUIRE(lift.terms()[1].first == TimeExpr::sin(t));
  REQUIRE(lift.terms()[1].second == x_basis[1]);

  const Decomposition d = decompose_onto_basis(lift, FieldSpace::span(x_basis));
  REQUIRE(d.ok);
  REQUIRE(d.coefficients.size() == 8);
  REQUIRE(d.coefficients[0] == TimeExpr::one());
  REQUIRE(d.coefficients[1] == TimeExpr::sin(t));
  for (std::size_t k = 2; k < 8; ++k) REQUIRE(d.coefficients[k].is_zero());
}

TEST_CASE("lift groups right-hand-side terms by time coefficient") {
  MixedPoly rhs(kXV);
  rhs.add_term({0, 1}, TimeExpr::sin(t));
  rhs.add_term({2, 0}, TimeExpr::sin(t));
  const TDVF lift = lift_sode(SODE(kXV, {rhs}));
  REQUIRE(lift.terms().size() == 2);
  REQUIRE(lift.terms()[0].second == mono_field(0, {0, 1}));  // kinematic v d/dx
  REQUIRE(lift.terms()[1].first == TimeExpr::sin(t));
  REQUIRE(lift.terms()[1].second ==
          mono_field(1, {0, 1}) + mono_field(1, {2, 0}));
}

TEST_CASE("family decomposition has the closed-form coefficient profile") {
  const TimeExpr g = TimeExpr::exp(t);
  const TimeExpr h = t;
  const TimeExpr j = TimeExpr::cos(t);
  const FieldSpace basis = FieldSpace::span(catalog("sl3_realization"));

  const Decomposition d = decompose_onto_basis(lift_sode(family_ghj(g, h, j)), basis);
  REQUIRE(d.ok);
  REQUIRE(sampled_equal(d.coefficients[0], c(1)));
  REQUIRE(sampled_equal(d.coefficients[1], -j));
  REQUIRE(sampled_equal(d.coefficients[2], -h * c(1, 2)));
  REQUIRE(sampled_equal(d.coefficients[3], g * c(1, 2)));
  REQUIRE(d.coefficients[4].is_zero());
  REQUIRE(d.coefficients[5].is_zero());
  REQUIRE(sampled_equal(d.coefficients[6], -h * c(1, 2)));
  REQUIRE(sampled_equal(d.coefficients[7], -g * c(1, 4)));

  // A rational g folds into the autonomous field but the projected
  // coefficients are unchanged as functions.
  const Decomposition dr =
      decompose_onto_basis(lift_sode(family_ghj(c(1), h, j)), basis);
  REQUIRE(dr.ok);
  REQUIRE(sampled_equal(dr.coefficients[3], c(1, 2)));
  REQUIRE(sampled_equal(dr.coefficients[7], c(-1, 4)));
  REQUIRE(sampled_equal(dr.coefficients[2], -h * c(1, 2)));
}

TEST_CASE("lifted right-hand sides match the defining equations numerically") {
  const TimeExpr g = TimeExpr::exp(t);
  const TimeExpr h = t;
  const TimeExpr j = TimeExpr::cos(t);
  const TDVF lift = lift_sode(family_ghj(g, h, j));
  for (int k = 0; k < 100; ++k) {
    const double tau = 0.02 * k;
    const double x = -1.3 + 0.027 * k;
    const double v = 0.8 - 0.019 * k;
    const auto rhs = lift.eval_rhs(tau, {x, v});
    const double want_dv = -3.0 * x * v - x * x * x -
                           std::exp(tau) * (v + x * x) - tau * x - std::cos(tau);
    REQUIRE(rhs[0] == Catch::Approx(v).margin(1e-12));
    REQUIRE(rhs[1] == Catch::Approx(want_dv).margin(1e-12));
  }
}

TEST_CASE("decomposition failure carries usable evidence") {
  const FieldSpace basis = FieldSpace::span(catalog("sl3_realization"));

  SECTION("a hand-built escaping term is reported verbatim") {
    TDVF x(kXV);
    x.add_term(c(1), catalog("sl3_realization")[1]);
    x.add_term(t, mono_field(1, {1, 1}));  // x v d/dv escapes
    const Decomposition d = decompose_onto_basis(x, basis);
    REQUIRE_FALSE(d.ok);
    REQUIRE(d.failed_coefficient == t);
    REQUIRE(d.failed_field == mono_field(1, {1, 1}));
    REQUIRE_FALSE(d.residual.is_zero());
  }

  SECTION("the cubic-damped equation with generic coefficients escapes") {
    const Riccati2Spec spec = Riccati2Spec::from_a(
        c(1), t, TimeExpr::sin(t), TimeExpr::exp(c(2) * t));
    const Decomposition d = decompose_onto_basis(lift_sode(riccati2(spec)), basis);
    REQUIRE_FALSE(d.ok);
    REQUIRE_FALSE(d.failed_field.is_zero());
    REQUIRE_FALSE(basis.query(d.failed_field).contained);
    REQUIRE(basis.query(d.failed_field).residual == d.residual);
  }

  SECTION("variable mismatch is rejected") {
    REQUIRE_THROWS_AS(decompose_onto_basis(TDVF({"x", "y"}), basis),
                      liesys::VariableMismatchError);
  }
}

TEST_CASE("derived damping coefficients") {
  SECTION("exponential leading coefficient") {
    const Riccati2Spec s =
        Riccati2Spec::from_a(c(1), c(0), c(0), TimeExpr::exp(c(2) * t));
    REQUIRE(s.b1 == c(3) * TimeExpr::exp(t));
    REQUIRE(s.b0 == c(-1));
    REQUIRE_NOTHROW(validate_riccati2(s));
  }

  SECTION("constant leading coefficient reduces to the driven family") {
    const Riccati2Spec s = Riccati2Spec::from_a(TimeExpr::cos(t), t, c(0), c(1));
    REQUIRE(s.b1 == c(3));
    REQUIRE(s.b0.is_zero());
    const SODE via_spec = riccati2(s);
    const SODE via_family = family_ghj(c(0), t, TimeExpr::cos(t));
    REQUIRE(via_spec.rhs(0).to_string() == via_family.rhs(0).to_string());
  }
}

TEST_CASE("constraint validation names the violated relation") {
  SECTION("anchor at zero") {
    const Riccati2Spec s = Riccati2Spec::from_a(c(0), c(0), c(0), c(2));
    REQUIRE_THROWS_MATCHES(validate_riccati2(s), liesys::InputError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("a3(0) = 1")));
  }

  SECTION("positivity on the working interval") {
    const Riccati2Spec s = Riccati2Spec::from_a(c(0), c(0), c(0), c(1) - t);
    REQUIRE_THROWS_MATCHES(validate_riccati2(s), liesys::InputError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("a3 > 0")));
  }

  SECTION("tampered damping relations") {
    Riccati2Spec s = Riccati2Spec::from_a(c(1), t, c(0), c(1));
    s.b1 = c(1);
    REQUIRE_THROWS_MATCHES(
        validate_riccati2(s), liesys::InputError,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("b1 = 3*sqrt(a3)")));
    s = Riccati2Spec::from_a(c(1), t, c(0), c(1));
    s.b0 = c(5);
    REQUIRE_THROWS_MATCHES(
        validate_riccati2(s), liesys::InputError,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("b0 = a2/sqrt(a3)")));
  }
}

TEST_CASE("scaling the cubic-damped equation lands on the reduced family") {
  const Riccati2Spec spec =
      Riccati2Spec::from_a(c(1), t, TimeExpr::sin(t), TimeExpr::exp(c(2) * t));
  const GhjCoefficients ghj = riccati2_scaled_family(spec);
  const TimeExpr inv_exp = TimeExpr::exp(-t);
  REQUIRE(sampled_equal(ghj.g, TimeExpr::sin(t) * inv_exp - c(3)));
  REQUIRE(sampled_equal(ghj.h, t + c(2) - TimeExpr::sin(t) * inv_exp));
  REQUIRE(sampled_equal(ghj.j, TimeExpr::exp(t)));
}
