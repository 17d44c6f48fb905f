#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "liesys/catalog.hpp"
#include "liesys/structure.hpp"

using liesys::BracketWitness;
using liesys::catalog;
using liesys::check_scheme;
using liesys::close_under_bracket;
using liesys::ClosureResult;
using liesys::FieldSpace;
using liesys::killing_signature;
using liesys::linear_combination;
using liesys::PolyVectorField;
using liesys::Rational;
using liesys::Signature;
using liesys::structure_constants;

namespace {

PolyVectorField simple_field(const std::vector<std::string>& vars,
                             std::size_t component,
                             const std::vector<unsigned>& exps,
                             const Rational& coeff = Rational(1)) {
  PolyVectorField f(vars);
  liesys::Polynomial p(vars);
  p.add_term(exps, coeff);
  f.set_component(component, p);
  return f;
}

}  // namespace

TEST_CASE("two generators close to the full eight-dimensional algebra") {
  const auto x_basis = catalog("sl3_realization");
  const ClosureResult res = close_under_bracket({x_basis[0], x_basis[1]});
  REQUIRE(res.closed);
  REQUIRE(res.space.dimension() == 8);
  REQUIRE(res.space.same_span(FieldSpace::span(x_basis)));
  REQUIRE(res.constants.has_value());
  // Six escapes were adjoined on the way from two generators to dimension 8.
  REQUIRE(res.escapes.size() == 6);
  REQUIRE(killing_signature(*res.constants) == Signature{5, 3, 0});
}

TEST_CASE("closure is idempotent on a closed basis") {
  const auto x_basis = catalog("sl3_realization");
  const ClosureResult res = close_under_bracket(x_basis);
  REQUIRE(res.closed);
  REQUIRE(res.escapes.empty());
  REQUIRE(res.space.dimension() == 8);
}

TEST_CASE("closure reports failure when the cap is reached") {
  const auto y_basis = catalog("riccati2_scheme_V2");
  const ClosureResult res = close_under_bracket(y_basis, 12);
  REQUIRE_FALSE(res.closed);
  REQUIRE(res.space.dimension() == 12);
  REQUIRE_FALSE(res.escapes.empty());
  REQUIRE_FALSE(res.constants.has_value());
  // Every recorded escape really did escape the span as it stood, hence in
  // particular none of them is the zero field.
  for (const BracketWitness& w : res.escapes) {
    REQUIRE(w.i < w.j);
    REQUIRE_FALSE(w.value.is_zero());
  }
}

TEST_CASE("closure argument validation") {
  REQUIRE_THROWS_AS(close_under_bracket({}), liesys::InputError);
  const auto x_basis = catalog("sl3_realization");
  REQUIRE_THROWS_AS(close_under_bracket(x_basis, 4), liesys::InputError);
}

TEST_CASE("structure constants reproduce all pairwise brackets") {
  const FieldSpace space = FieldSpace::span(catalog("sl3_realization"));
  const auto sc = structure_constants(space);
  REQUIRE(sc.dimension() == 8);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      const PolyVectorField lhs = bracket(space.basis_field(a), space.basis_field(b));
      const PolyVectorField rhs =
          linear_combination(sc.bracket_coords(a, b), space.basis());
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("structure constants require a closed space") {
  const auto y_basis = catalog("riccati2_scheme_V2");
  REQUIRE_THROWS_MATCHES(
      structure_constants(FieldSpace::span(y_basis)), liesys::InputError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("not bracket-closed")));
}

TEST_CASE("killing signature of small algebras") {
  const std::vector<std::string> xv = {"x", "v"};

  SECTION("affine line: one positive, one zero direction") {
    const PolyVectorField ddx = simple_field(xv, 0, {0, 0});
    const PolyVectorField xddx = simple_field(xv, 0, {1, 0});
    const ClosureResult res = close_under_bracket({ddx, xddx});
    REQUIRE(res.closed);
    REQUIRE(res.space.dimension() == 2);
    REQUIRE(killing_signature(*res.constants) == Signature{1, 0, 1});
  }

  SECTION("abelian algebras have identically zero Killing form") {
    const PolyVectorField ddx = simple_field(xv, 0, {0, 0});
    const PolyVectorField ddv = simple_field(xv, 1, {0, 0});
    const ClosureResult res = close_under_bracket({ddx, ddv});
    REQUIRE(res.closed);
    REQUIRE(killing_signature(*res.constants) == Signature{0, 0, 2});

    const FieldSpace w = FieldSpace::span(catalog("riccati2_scheme_W"));
    REQUIRE(killing_signature(structure_constants(w)) == Signature{0, 0, 2});
  }
}

TEST_CASE("killing signature does not depend on the generating set") {
  const auto x_basis = catalog("sl3_realization");
  std::vector<PolyVectorField> mixed;
  mixed.push_back(x_basis[6] + x_basis[3].scaled(Rational(2, 7)));
  mixed.push_back(x_basis[5] - x_basis[0]);
  mixed.push_back(x_basis[4].scaled(Rational(-3)));
  for (std::size_t k = 0; k < 8; ++k) mixed.push_back(x_basis[7 - k]);

  const ClosureResult res = close_under_bracket(mixed);
  REQUIRE(res.closed);
  REQUIRE(res.space.dimension() == 8);
  REQUIRE(killing_signature(*res.constants) == Signature{5, 3, 0});
}

TEST_CASE("eigenvalue sign counting on explicit matrices") {
  using Matrix = std::vector<std::vector<Rational>>;

  SECTION("diagonal") {
    const Matrix m = {{Rational(2), Rational(0)}, {Rational(0), Rational(-3)}};
    REQUIRE(liesys::eigenvalue_signs(m) == Signature{1, 1, 0});
  }

  SECTION("off-diagonal coupling") {
    const Matrix m = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    REQUIRE(liesys::eigenvalue_signs(m) == Signature{1, 1, 0});
  }

  SECTION("repeated eigenvalues are counted with multiplicity") {
    Matrix m(3, std::vector<Rational>(3, Rational(0)));
    m[0][0] = m[1][1] = Rational(5);
    m[2][2] = Rational(-1, 4);
    REQUIRE(liesys::eigenvalue_signs(m) == Signature{2, 1, 0});
  }

  SECTION("asymmetric input is rejected") {
    const Matrix m = {{Rational(0), Rational(1)}, {Rational(2), Rational(0)}};
    REQUIRE_THROWS_AS(liesys::eigenvalue_signs(m), liesys::InputError);
  }

  SECTION("characteristic polynomial of a 2x2 example") {
    const Matrix m = {{Rational(2), Rational(1)}, {Rational(1), Rational(2)}};
    const liesys::UniPoly p = liesys::characteristic_polynomial(m);
    // lambda^2 - 4 lambda + 3, ascending coefficients.
    REQUIRE(p.coeffs() ==
            std::vector<Rational>{Rational(3), Rational(-4), Rational(1)});
  }
}

TEST_CASE("scheme conditions for the catalog pair") {
  const FieldSpace w = FieldSpace::span(catalog("riccati2_scheme_W"));
  const FieldSpace v2 = FieldSpace::span(catalog("riccati2_scheme_V2"));
  REQUIRE(w.dimension() == 2);
  REQUIRE(v2.dimension() == 8);

  const auto rep = check_scheme(w, v2);
  REQUIRE(rep.w_closed);
  REQUIRE(rep.action_ok);
  REQUIRE(rep.is_scheme());
  REQUIRE(rep.w_witnesses.empty());
  REQUIRE(rep.action_witnesses.empty());

  // The big space is not a Lie algebra on its own, and the pair
  // (v d/dx, x^3 d/dv) is among the failures.
  REQUIRE_FALSE(rep.v2_closed);
  const bool has_pair =
      std::any_of(rep.v2_witnesses.begin(), rep.v2_witnesses.end(),
                  [](const BracketWitness& wit) { return wit.i == 0 && wit.j == 6; });
  REQUIRE(has_pair);
  for (const BracketWitness& wit : rep.v2_witnesses)
    REQUIRE_FALSE(v2.query(wit.value).contained);
}

TEST_CASE("scheme check requires the small space to sit inside the big one") {
  // X7 = d/dx - x d/dv has a constant d/dx component, which no combination of
  // the V2 generators (their d/dx parts are only v d/dx and x d/dx) can match.
  const auto x_basis = catalog("sl3_realization");
  const FieldSpace w = FieldSpace::span({x_basis[6]});
  const FieldSpace v2 = FieldSpace::span(catalog("riccati2_scheme_V2"));
  REQUIRE_FALSE(v2.query(x_basis[6]).contained);
  REQUIRE_THROWS_AS(check_scheme(w, v2), liesys::InputError);
}
