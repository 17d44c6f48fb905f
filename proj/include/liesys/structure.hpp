#ifndef LIESYS_STRUCTURE_HPP
#define LIESYS_STRUCTURE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/field_space.hpp"
#include "liesys/univariate.hpp"
#include "liesys/vector_field.hpp"

namespace liesys {

/// Structure constants of a bracket-closed basis:
/// [X_alpha, X_beta] = sum_gamma c(alpha,beta,gamma) X_gamma.
class StructureConstants {
 public:
  StructureConstants() = default;

  explicit StructureConstants(std::size_t dim)
      : dim_(dim), c_(dim * dim * dim, Rational(0)) {}

  std::size_t dimension() const { return dim_; }

  const Rational& c(std::size_t a, std::size_t b, std::size_t g) const {
    return c_[index(a, b, g)];
  }

  void set(std::size_t a, std::size_t b, std::size_t g, Rational v) {
    c_[index(a, b, g)] = std::move(v);
  }

  /// Coefficients of [X_a, X_b] as a vector over the basis.
  std::vector<Rational> bracket_coords(std::size_t a, std::size_t b) const {
    std::vector<Rational> out(dim_);
    for (std::size_t g = 0; g < dim_; ++g) out[g] = c(a, b, g);
    return out;
  }

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t g) const {
    if (a >= dim_ || b >= dim_ || g >= dim_)
      throw InputError("structure constant index out of range");
    return (a * dim_ + b) * dim_ + g;
  }

  std::size_t dim_ = 0;
  std::vector<Rational> c_;
};

/// A bracket that left the space under test: indices into the basis at the
/// time the pair was processed, plus the bracket value itself.
struct BracketWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  PolyVectorField value;
};

/// Result of iterated bracket closure.
struct ClosureResult {
  FieldSpace space;
  bool closed = false;
  /// Present iff closed: constants in the final basis order.
  std::optional<StructureConstants> constants;
  /// Pairs whose bracket escaped the span at processing time (each caused
  /// either a basis extension or, for the last one when the cap is hit, the
  /// closed=false outcome).
  std::vector<BracketWitness> escapes;
};

/// Structure constants of an already bracket-closed space; throws if some
/// pairwise bracket leaves the span.
inline StructureConstants structure_constants(const FieldSpace& space) {
  const std::size_t n = space.dimension();
  StructureConstants sc(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      PolyVectorField br = bracket(space.basis_field(a), space.basis_field(b));
      auto coords = span_contains(space, br);
      if (!coords)
        throw InputError("space is not bracket-closed: bracket of basis pair (" +
                         std::to_string(a) + "," + std::to_string(b) +
                         ") escapes the span");
      for (std::size_t g = 0; g < n; ++g) {
        sc.set(a, b, g, (*coords)[g]);
        sc.set(b, a, g, -(*coords)[g]);
      }
    }
  }
  return sc;
}

/// Iteratively adjoins pairwise brackets until the span is bracket-closed or
/// its dimension would exceed max_dim. Deterministic: element k is bracketed
/// against all earlier elements i < k in ascending i, with k ascending, and
/// every escaping bracket is appended immediately (so newly created elements
/// are themselves processed later in the same sweep).
inline ClosureResult close_under_bracket(const std::vector<PolyVectorField>& generators,
                                         std::size_t max_dim = 64) {
  if (generators.empty()) throw InputError("closure of an empty generator list");
  ClosureResult res;
  res.space = FieldSpace::span(generators);
  if (max_dim < res.space.dimension())
    throw InputError("max_dim is smaller than the number of independent generators");

  for (std::size_t k = 1; k < res.space.dimension(); ++k) {
    for (std::size_t i = 0; i < k; ++i) {
      PolyVectorField br = bracket(res.space.basis_field(i), res.space.basis_field(k));
      if (res.space.query(br).contained) continue;
      res.escapes.push_back(BracketWitness{i, k, br});
      if (res.space.dimension() >= max_dim) {
        res.closed = false;
        return res;
      }
      res.space.try_insert(br);
    }
  }
  res.closed = true;
  res.constants = structure_constants(res.space);
  return res;
}

/// Killing matrix K(a,b) = sum_{g,d} c(a,g,d) c(b,d,g), exact.
inline std::vector<std::vector<Rational>> killing_matrix(const StructureConstants& sc) {
  const std::size_t n = sc.dimension();
  std::vector<std::vector<Rational>> k(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t d = 0; d < n; ++d) k[a][b] += sc.c(a, g, d) * sc.c(b, d, g);
  return k;
}

/// Counts of positive, negative, and zero eigenvalues.
struct Signature {
  unsigned n_plus = 0;
  unsigned n_minus = 0;
  unsigned n_zero = 0;

  bool operator==(const Signature& o) const {
    return n_plus == o.n_plus && n_minus == o.n_minus && n_zero == o.n_zero;
  }
  bool operator!=(const Signature& o) const { return !(*this == o); }
};

/// Characteristic polynomial det(lambda I - K) by the Faddeev–LeVerrier
/// recurrence, exact over the rationals.
inline UniPoly characteristic_polynomial(const std::vector<std::vector<Rational>>& k) {
  const std::size_t n = k.size();
  for (const auto& row : k)
    if (row.size() != n) throw InputError("characteristic polynomial needs a square matrix");
  std::vector<Rational> coeffs(n + 1, Rational(0));
  coeffs[n] = Rational(1);
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Rational(1);  // M_0 = I
  Rational c(0);
  for (std::size_t step = 1; step <= n; ++step) {
    // M_step = K (M_{step-1} + c I); c = -tr(M_step)/step.
    std::vector<std::vector<Rational>> km(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] += c;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) km[i][j] += k[i][l] * m[l][j];
    m = std::move(km);
    Rational tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += m[i][i];
    c = -tr / Rational(step);
    coeffs[n - step] = c;
  }
  return UniPoly(std::move(coeffs));
}

/// Eigenvalue sign counts of a symmetric rational matrix, fully exact:
/// zero eigenvalues are read off as the multiplicity of the root 0 of the
/// characteristic polynomial; the remaining real roots (symmetric matrices
/// have only real eigenvalues) are counted by Sturm chains on each
/// square-free factor, weighted by multiplicity.
inline Signature eigenvalue_signs(const std::vector<std::vector<Rational>>& k) {
  const std::size_t n = k.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (k[a][b] != k[b][a])
        throw InputError("eigenvalue sign counting requires a symmetric matrix");
  Signature sig;
  if (n == 0) return sig;
  const UniPoly p = characteristic_polynomial(k);
  const std::vector<Rational>& c = p.coeffs();
  std::size_t zero_mult = 0;
  while (zero_mult < c.size() && c[zero_mult] == 0) ++zero_mult;
  sig.n_zero = static_cast<unsigned>(zero_mult);
  std::vector<Rational> reduced(c.begin() + static_cast<std::ptrdiff_t>(zero_mult),
                                c.end());
  const UniPoly q(std::move(reduced));
  for (const auto& [factor, mult] : yun_squarefree(q)) {
    const auto [pos, neg] = sturm_count_pos_neg(factor);
    sig.n_plus += pos * mult;
    sig.n_minus += neg * mult;
  }
  if (sig.n_plus + sig.n_minus + sig.n_zero != n)
    throw NumericalError("eigenvalue sign counts do not sum to the dimension");
  return sig;
}

/// Killing-form signature (n_plus, n_minus, n_zero) of a Lie algebra given
/// by structure constants.
inline Signature killing_signature(const StructureConstants& sc) {
  return eigenvalue_signs(killing_matrix(sc));
}

/// Verdicts for the three bracket conditions of a candidate scheme, with
/// every failing bracket recorded as a witness.
struct SchemeReport {
  bool w_closed = false;   // [W,W] subset of W
  bool action_ok = false;  // [W,V2] subset of V2
  bool v2_closed = false;  // [V2,V2] subset of V2 (false for a proper scheme)
  std::vector<BracketWitness> w_witnesses;
  std::vector<BracketWitness> action_witnesses;
  std::vector<BracketWitness> v2_witnesses;

  /// The scheme conditions proper (V2 closure is reported but not required).
  bool is_scheme() const { return w_closed && action_ok; }
};

/// Checks [W,W] in W, [W,V2] in V2, and [V2,V2] in V2 exactly. W must be a
/// subspace of V2 (precondition of a scheme).
inline SchemeReport check_scheme(const FieldSpace& w, const FieldSpace& v2) {
  if (!v2.contains_space(w))
    throw InputError("candidate W is not a subspace of V2");
  SchemeReport rep;
  const std::size_t nw = w.dimension();
  const std::size_t nv = v2.dimension();
  for (std::size_t i = 0; i < nw; ++i)
    for (std::size_t j = i + 1; j < nw; ++j) {
      PolyVectorField br = bracket(w.basis_field(i), w.basis_field(j));
      if (!w.query(br).contained) rep.w_witnesses.push_back({i, j, std::move(br)});
    }
  for (std::size_t i = 0; i < nw; ++i)
    for (std::size_t j = 0; j < nv; ++j) {
      PolyVectorField br = bracket(w.basis_field(i), v2.basis_field(j));
      if (!v2.query(br).contained) rep.action_witnesses.push_back({i, j, std::move(br)});
    }
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j) {
      PolyVectorField br = bracket(v2.basis_field(i), v2.basis_field(j));
      if (!v2.query(br).contained) rep.v2_witnesses.push_back({i, j, std::move(br)});
    }
  rep.w_closed = rep.w_witnesses.empty();
  rep.action_ok = rep.action_witnesses.empty();
  rep.v2_closed = rep.v2_witnesses.empty();
  return rep;
}

}  // namespace liesys

#endif  // LIESYS_STRUCTURE_HPP
