#pragma once

// Elements of the two-dimensional local field F_q((s))((t)) restricted to the
// exact monomial-times-unit form s^a * t^b * U(s,t) / V(s,t), where U and V
// are polynomials with nonzero constant term. The outer (t-adic) valuation is
// b; the first residue is s^a * U(s,0) / V(s,0) in F_q((s)).

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parshin/laurent.hpp"

namespace parshin {

// Bivariate polynomial: (i, j) -> coefficient of s^i t^j, no zero entries.
struct BiPoly {
  std::map<std::pair<int, int>, FqElem> terms;

  bool is_zero() const { return terms.empty(); }
  FqElem constant_term() const;
  friend bool operator==(const BiPoly&, const BiPoly&) = default;
};

namespace bipoly {
BiPoly one(const FiniteField& F);
BiPoly mul(const FiniteField& F, const BiPoly& a, const BiPoly& b);
BiPoly add(const FiniteField& F, const BiPoly& a, const BiPoly& b);
BiPoly swap_vars(const BiPoly& a);
// U(s, 0) as a univariate polynomial in s.
Poly at_t_zero(const BiPoly& a);
std::string format(const FiniteField& F, const BiPoly& a);
}  // namespace bipoly

class BiLaurent {
 public:
  // UNIT_CONSTANT_REQUIRED unless U(0,0) and V(0,0) are nonzero.
  BiLaurent(FieldPtr field, int a, int b, BiPoly U, BiPoly V);
  BiLaurent(FieldPtr field, int a, int b, BiPoly U);

  static BiLaurent one(FieldPtr field);
  static BiLaurent constant(FieldPtr field, FqElem c);
  static BiLaurent s(FieldPtr field);
  static BiLaurent t(FieldPtr field);
  // Random exact form with |a|,|b| <= max_exp and U, V of total degree <= max_deg.
  static BiLaurent random(FieldPtr field, Rng& rng, int max_exp, int max_deg, bool with_denominator = true);

  const FiniteField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  int s_exponent() const { return a_; }
  int t_exponent() const { return b_; }
  const BiPoly& numerator() const { return U_; }
  const BiPoly& denominator() const { return V_; }

  BiLaurent operator*(const BiLaurent& o) const;
  BiLaurent operator/(const BiLaurent& o) const { return *this * o.inv(); }
  BiLaurent inv() const;
  BiLaurent pow(long long k) const;
  BiLaurent scale(FqElem c) const;
  // Exchange the roles of s and t.
  BiLaurent swapped() const;

  struct Tower {
    int v_t;           // outer valuation
    Laurent residue;   // first residue s^a U(s,0)/V(s,0) in F_q((s))
    int v_s;           // valuation of the first residue
    FqElem leading;    // U(0,0)/V(0,0)
  };
  Tower residue_tower(int precision = kDefaultPrecision) const;

  // Outer Laurent series in t: entry j is the coefficient of t^(b+j), known
  // modulo s^(a+n_s); nullopt when no coefficient below that bound is nonzero.
  std::vector<std::optional<Laurent>> expand(int n_t, int n_s) const;

  // Equality as elements of the field (cross-multiplied).
  friend bool operator==(const BiLaurent& x, const BiLaurent& y);

  std::string format() const;
  static BiLaurent parse(FieldPtr field, std::string_view text);

 private:
  FieldPtr field_;
  int a_ = 0;
  int b_ = 0;
  BiPoly U_;
  BiPoly V_;
};

}  // namespace parshin
