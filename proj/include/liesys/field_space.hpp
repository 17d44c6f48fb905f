#ifndef LIESYS_FIELD_SPACE_HPP
#define LIESYS_FIELD_SPACE_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "liesys/errors.hpp"
#include "liesys/vector_field.hpp"

namespace liesys {

/// Outcome of a span-membership query: exact coordinates on the space's
/// basis when the field is a member, otherwise the nonzero residual left
/// after reduction.
struct SpanResult {
  bool contained = false;
  std::vector<Rational> coordinates;  // valid iff contained
  PolyVectorField residual;           // zero field iff contained
};

/// Finite-dimensional span of polynomial vector fields. Internally keeps a
/// reduced row echelon form over monomial slots (component index, exponent
/// vector), together with the change-of-basis rows expressing each echelon
/// row in terms of the stored basis fields. All arithmetic is exact, so
/// membership and independence are decided without tolerances.
class FieldSpace {
 public:
  /// Monomial slot: which component, which monomial.
  using Slot = std::pair<std::size_t, std::vector<unsigned>>;
  using Row = std::map<Slot, Rational>;

  FieldSpace() = default;

  explicit FieldSpace(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  /// Builds the span of the given generators; dependent generators are
  /// dropped, so the stored basis is the first maximal independent subset.
  static FieldSpace span(const std::vector<PolyVectorField>& generators) {
    if (generators.empty()) throw InputError("span of an empty generator list");
    FieldSpace s(generators[0].variables());
    for (const auto& g : generators) s.try_insert(g);
    return s;
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<PolyVectorField>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }

  const PolyVectorField& basis_field(std::size_t i) const {
    if (i >= basis_.size()) throw InputError("basis index out of range");
    return basis_[i];
  }

  /// Inserts A into the span if independent of the current basis.
  /// Returns true iff the dimension grew.
  bool try_insert(const PolyVectorField& a) {
    check_variables(a);
    Row r = flatten(a);
    std::vector<Rational> used(rows_.size(), Rational(0));
    reduce(r, used);
    if (r.empty()) return false;

    // Independent: normalize the remainder and record how it is expressed
    // in terms of the (about to be extended) basis field list.
    const Slot pivot = r.begin()->first;
    const Rational lead = r.begin()->second;
    for (auto& [slot, c] : r) c /= lead;

    std::vector<Rational> trow(basis_.size() + 1, Rational(0));
    trow.back() = Rational(1) / lead;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (used[k] == 0) continue;
      const Rational scale = used[k] / lead;
      for (std::size_t j = 0; j < transform_[k].size(); ++j)
        trow[j] -= scale * transform_[k][j];
    }
    for (auto& row : transform_) row.push_back(Rational(0));

    // Eliminate the new pivot from all existing rows to stay fully reduced.
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      auto it = rows_[k].find(pivot);
      if (it == rows_[k].end()) continue;
      const Rational m = it->second;
      subtract_scaled(rows_[k], r, m);
      for (std::size_t j = 0; j < trow.size(); ++j)
        transform_[k][j] -= m * trow[j];
    }

    // Keep rows ordered by pivot slot so reduction can scan them in order.
    std::size_t pos = 0;
    while (pos < rows_.size() && rows_[pos].begin()->first < pivot) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    transform_.insert(transform_.begin() + static_cast<std::ptrdiff_t>(pos),
                      std::move(trow));
    basis_.push_back(a);
    return true;
  }

  /// Exact membership test with coordinates or residual.
  SpanResult query(const PolyVectorField& a) const {
    check_variables(a);
    Row r = flatten(a);
    std::vector<Rational> used(rows_.size(), Rational(0));
    reduce(r, used);
    SpanResult out;
    out.residual = unflatten(r);
    if (!r.empty()) return out;
    out.contained = true;
    out.coordinates.assign(basis_.size(), Rational(0));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (used[k] == 0) continue;
      for (std::size_t j = 0; j < transform_[k].size(); ++j)
        out.coordinates[j] += used[k] * transform_[k][j];
    }
    return out;
  }

  /// True iff the two spaces contain exactly the same fields.
  bool same_span(const FieldSpace& o) const {
    if (dimension() != o.dimension()) return false;
    for (const auto& f : o.basis_)
      if (!query(f).contained) return false;
    return true;
  }

  /// True iff every field of o lies in this span.
  bool contains_space(const FieldSpace& o) const {
    for (const auto& f : o.basis_)
      if (!query(f).contained) return false;
    return true;
  }

 private:
  void check_variables(const PolyVectorField& a) const {
    if (a.variables() != vars_)
      throw VariableMismatchError("variable lists differ: [" +
                                  Polynomial::join(a.variables()) + "] vs [" +
                                  Polynomial::join(vars_) + "]");
  }

  static void subtract_scaled(Row& target, const Row& src, const Rational& m) {
    if (m == 0) return;
    for (const auto& [slot, c] : src) {
      auto it = target.find(slot);
      if (it == target.end()) {
        Rational v = -m * c;
        if (v != 0) target.emplace(slot, std::move(v));
      } else {
        it->second -= m * c;
        if (it->second == 0) target.erase(it);
      }
    }
  }

  /// Reduces r against the echelon rows (ascending pivot order), recording
  /// the multiplier applied for each row.
  void reduce(Row& r, std::vector<Rational>& used) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (r.empty()) break;
      const Slot& pivot = rows_[k].begin()->first;
      auto it = r.find(pivot);
      if (it == r.end()) continue;
      const Rational m = it->second;  // row pivots are normalized to 1
      subtract_scaled(r, rows_[k], m);
      used[k] = m;
    }
  }

  Row flatten(const PolyVectorField& a) const {
    Row r;
    for (std::size_t i = 0; i < a.dimension(); ++i)
      for (const auto& [e, c] : a.component(i).terms())
        r.emplace(Slot{i, e}, c);
    return r;
  }

  PolyVectorField unflatten(const Row& r) const {
    PolyVectorField f(vars_);
    for (const auto& [slot, c] : r) {
      Polynomial p = f.component(slot.first);
      p.add_term(slot.second, c);
      f.set_component(slot.first, std::move(p));
    }
    return f;
  }

  std::vector<std::string> vars_;
  std::vector<PolyVectorField> basis_;
  std::vector<Row> rows_;                         // RREF, sorted by pivot slot
  std::vector<std::vector<Rational>> transform_;  // rows_[k] = Σ_j T[k][j]·basis_[j]
};

/// Convenience wrapper matching the common "is it in the span, and with
/// which coordinates" usage.
inline std::optional<std::vector<Rational>> span_contains(const FieldSpace& s,
                                                          const PolyVectorField& a) {
  SpanResult r = s.query(a);
  if (!r.contained) return std::nullopt;
  return std::move(r.coordinates);
}

}  // namespace liesys

#endif  // LIESYS_FIELD_SPACE_HPP
