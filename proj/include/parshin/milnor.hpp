#pragma once

// Milnor K-symbols over the field tower: formal sums of symbols, the tame
// residue symbol, specialization, and explicit coordinates on K_r/n.
//
// Residue convention (t a uniformizer, u a unit, ubar its residue):
//   d{t, u_2, ..., u_r} = {ubar_2, ..., ubar_r},   d{u_1, ..., u_r} = 0,
// which in degree 2 reads d{f, g} = (-1)^(v(f)v(g)) * g^v(f) / f^v(g) mod t.
//
// For a discretely valued K with residue field k and n prime to char k,
// x -> (s_t x, d x) identifies K_r(K)/n with K_r(k)/n + K_{r-1}(k)/n, where
// s_t{t^a1 u_1, ...} = {ubar_1, ...}. Applying this down to F_q (where
// K_0 = Z, K_1 = F_q^x via discrete log, K_r = 0 for r >= 2) gives exact
// coordinates, which serve as canonical forms.

#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parshin/abgroup.hpp"
#include "parshin/error.hpp"
#include "parshin/tower.hpp"

namespace parshin::milnor {

template <class E>
struct Symbol {
  std::vector<E> entries;
};

template <class E>
struct SymbolSum {
  std::size_t degree = 0;
  std::vector<std::pair<long long, Symbol<E>>> terms;

  SymbolSum() = default;
  explicit SymbolSum(std::size_t r) : degree(r) {}

  static SymbolSum single(std::vector<E> entries, long long coeff = 1) {
    SymbolSum s(entries.size());
    s.terms.push_back({coeff, Symbol<E>{std::move(entries)}});
    return s;
  }

  SymbolSum& add(long long coeff, Symbol<E> sym) {
    if (sym.entries.size() != degree) fail(ErrorCode::InvalidInput, "symbol degree mismatch");
    if (coeff != 0) terms.push_back({coeff, std::move(sym)});
    return *this;
  }

  SymbolSum operator+(const SymbolSum& o) const {
    if (o.degree != degree) fail(ErrorCode::InvalidInput, "adding symbol sums of different degree");
    SymbolSum r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r;
  }

  SymbolSum scaled(long long c) const {
    SymbolSum r(degree);
    if (c == 0) return r;
    for (const auto& [k, s] : terms) r.terms.push_back({k * c, s});
    return r;
  }

  SymbolSum operator-() const { return scaled(-1); }
  SymbolSum operator-(const SymbolSum& o) const { return *this + (-o); }
};

enum class ResidueRoute { Expansion, Formula };

// Tame residue symbol K_r(K) -> K_{r-1}(k). The formula route covers r <= 2
// and raises DEGREE_OUT_OF_RANGE above that.
template <class K>
SymbolSum<typename K::Residue::Elem> residue_symbol(const K& field, const SymbolSum<typename K::Elem>& x,
                                                    ResidueRoute route = ResidueRoute::Expansion) {
  using R = typename K::Residue::Elem;
  const auto k = field.residue_field();
  if (x.degree == 0) fail(ErrorCode::DegreeOutOfRange, "no residue in degree 0");
  SymbolSum<R> out(x.degree - 1);
  const std::size_t r = x.degree;

  if (route == ResidueRoute::Formula) {
    if (r > 2) fail(ErrorCode::DegreeOutOfRange, "formula route is defined for degree <= 2");
    for (const auto& [c, sym] : x.terms) {
      if (r == 1) {
        out.add(c * field.valuation(sym.entries[0]), Symbol<R>{});
        continue;
      }
      const auto& f = sym.entries[0];
      const auto& g = sym.entries[1];
      long long vf = field.valuation(f), vg = field.valuation(g);
      auto h = field.mul(field.pow(g, vf), field.pow(f, -vg));
      if ((vf * vg) % 2 != 0) h = field.mul(h, field.minus_one());
      if (field.valuation(h) != 0) fail(ErrorCode::InvalidInput, "tame symbol is not a unit");
      out.add(c, Symbol<R>{{field.unit_residue(h)}});
    }
    return out;
  }

  for (const auto& [c, sym] : x.terms) {
    std::vector<long long> a(r);
    std::vector<R> ubar;
    ubar.reserve(r);
    for (std::size_t i = 0; i < r; ++i) {
      a[i] = field.valuation(sym.entries[i]);
      ubar.push_back(field.unit_residue(sym.entries[i]));
    }
    // Multilinear expansion over the set S of slots contributing t.
    for (std::size_t mask = 1; mask < (std::size_t{1} << r); ++mask) {
      long long coeff = c;
      int inversions = 0, seen_units = 0, k_count = 0;
      std::vector<R> rest;
      for (std::size_t i = 0; i < r; ++i) {
        if (mask >> i & 1) {
          coeff *= a[i];
          inversions += seen_units;
          ++k_count;
        } else {
          ++seen_units;
          rest.push_back(ubar[i]);
        }
      }
      if (coeff == 0) continue;
      // {t, t, ..., t} with k copies equals eps_k {t, -1, ..., -1}.
      long long kk = k_count;
      bool negate = (inversions % 2 != 0) != (((kk - 1) * (kk - 2) / 2) % 2 != 0);
      std::vector<R> entries(static_cast<std::size_t>(k_count - 1), k.minus_one());
      entries.insert(entries.end(), rest.begin(), rest.end());
      out.add(negate ? -coeff : coeff, Symbol<R>{std::move(entries)});
    }
  }
  return out;
}

// Specialization s_t{x_1, ..., x_r} = {ubar_1, ..., ubar_r}.
template <class K>
SymbolSum<typename K::Residue::Elem> specialize(const K& field, const SymbolSum<typename K::Elem>& x) {
  using R = typename K::Residue::Elem;
  SymbolSum<R> out(x.degree);
  for (const auto& [c, sym] : x.terms) {
    std::vector<R> e;
    e.reserve(sym.entries.size());
    for (const auto& v : sym.entries) e.push_back(field.unit_residue(v));
    out.add(c, Symbol<R>{std::move(e)});
  }
  return out;
}

inline Integer gcd_integer(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer mod_floor(const Integer& a, const Integer& n) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Orders of the cyclic coordinates of K_r(K)/n (trivial factors omitted).
template <class K>
std::vector<Integer> coordinate_moduli(const K& field, std::size_t r, const Integer& n) {
  if constexpr (K::level == 0) {
    if (r == 0) return n > 1 ? std::vector<Integer>{n} : std::vector<Integer>{};
    if (r == 1) {
      Integer g = gcd_integer(n, Integer(field.base().order() - 1));
      return g > 1 ? std::vector<Integer>{g} : std::vector<Integer>{};
    }
    return {};
  } else {
    auto k = field.residue_field();
    auto out = coordinate_moduli(k, r, n);
    if (r >= 1) {
      auto lower = coordinate_moduli(k, r - 1, n);
      out.insert(out.end(), lower.begin(), lower.end());
    }
    return out;
  }
}

template <class K>
std::vector<Integer> coordinates(const K& field, const SymbolSum<typename K::Elem>& x, const Integer& n) {
  if constexpr (K::level == 0) {
    const std::size_t r = x.degree;
    if (r >= 2) return {};
    Integer m = r == 0 ? n : gcd_integer(n, Integer(field.base().order() - 1));
    if (m <= 1) return {};
    Integer acc = 0;
    for (const auto& [c, sym] : x.terms) {
      if (r == 0) acc += Integer(static_cast<long>(c));
      else acc += Integer(static_cast<long>(c)) * Integer(static_cast<unsigned long>(field.base().dlog(sym.entries[0])));
    }
    return {mod_floor(acc, m)};
  } else {
    auto k = field.residue_field();
    auto out = coordinates(k, specialize(field, x), n);
    if (x.degree >= 1) {
      auto lower = coordinates(k, residue_symbol(field, x), n);
      out.insert(out.end(), lower.begin(), lower.end());
    }
    return out;
  }
}

// Symbols realizing the coordinate basis, in coordinate order.
template <class K>
std::vector<Symbol<typename K::Elem>> basis_symbols(const K& field, std::size_t r, const Integer& n) {
  using E = typename K::Elem;
  if constexpr (K::level == 0) {
    if (coordinate_moduli(field, r, n).empty()) return {};
    if (r == 0) return {Symbol<E>{}};
    return {Symbol<E>{{field.generator()}}};
  } else {
    auto k = field.residue_field();
    std::vector<Symbol<E>> out;
    for (const auto& s : basis_symbols(k, r, n)) {
      Symbol<E> lifted;
      for (const auto& e : s.entries) lifted.entries.push_back(field.lift(e));
      out.push_back(std::move(lifted));
    }
    if (r >= 1) {
      for (const auto& s : basis_symbols(k, r - 1, n)) {
        Symbol<E> lifted{{field.uniformizer()}};
        for (const auto& e : s.entries) lifted.entries.push_back(field.lift(e));
        out.push_back(std::move(lifted));
      }
    }
    return out;
  }
}

template <class K>
bool equal_mod(const K& field, const SymbolSum<typename K::Elem>& x, const SymbolSum<typename K::Elem>& y,
               const Integer& n) {
  return coordinates(field, x, n) == coordinates(field, y, n);
}

// Canonical representative sum c_i * b_i over the basis symbols with
// 0 < c_i < m_i. Idempotent, and additive up to normalization.
template <class K>
SymbolSum<typename K::Elem> steinberg_normalize(const K& field, const SymbolSum<typename K::Elem>& x,
                                                const Integer& n) {
  auto coords = coordinates(field, x, n);
  auto basis = basis_symbols(field, x.degree, n);
  SymbolSum<typename K::Elem> out(x.degree);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] != 0) out.add(coords[i].get_si(), basis[i]);
  }
  return out;
}

// The product of entries (degree 1) or the sum of coefficients (degree 0);
// used for exact comparison of low-degree symbol sums.
template <class K>
typename K::Elem collapse_degree1(const K& field, const SymbolSum<typename K::Elem>& x) {
  if (x.degree != 1) fail(ErrorCode::DegreeOutOfRange, "collapse needs degree 1");
  auto acc = field.one();
  for (const auto& [c, sym] : x.terms) acc = field.mul(acc, field.pow(sym.entries[0], c));
  return acc;
}

template <class E>
long long collapse_degree0(const SymbolSum<E>& x) {
  if (x.degree != 0) fail(ErrorCode::DegreeOutOfRange, "collapse needs degree 0");
  long long acc = 0;
  for (const auto& [c, sym] : x.terms) acc += c;
  return acc;
}

template <class K>
std::string format_symbol(const K& field, const Symbol<typename K::Elem>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.entries.size(); ++i) out += (i ? ", " : "") + field.format(s.entries[i]);
  return out + "}";
}

template <class K>
std::string format_sum(const K& field, const SymbolSum<typename K::Elem>& x) {
  if (x.degree == 0) return std::to_string(collapse_degree0(x));
  if (x.terms.empty()) return "0";
  std::string out;
  for (const auto& [c, s] : x.terms) {
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    long long a = c < 0 ? -c : c;
    if (a != 1) out += std::to_string(a) + "*";
    out += format_symbol(field, s);
  }
  return out;
}

namespace detail {
std::vector<std::pair<long long, std::vector<std::string>>> split_symbol_sum(std::string_view text);
}

// Parses "{a, b} - 2*{c, d}"; a bare integer is a degree-0 sum.
template <class K>
SymbolSum<typename K::Elem> parse_sum(const K& field, std::string_view text) {
  auto parts = detail::split_symbol_sum(text);
  if (parts.empty()) fail(ErrorCode::ParseError, "empty symbol sum");
  SymbolSum<typename K::Elem> out(parts.front().second.size());
  for (auto& [c, entries] : parts) {
    Symbol<typename K::Elem> s;
    for (const auto& e : entries) s.entries.push_back(field.parse(e));
    out.add(c, std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presentations of K_r/n.

struct KGroup {
  PresentedGroup group;
  std::string method;  // "closure", "structural" or "tame-split"
  std::vector<std::string> generators;
  // closure: order agrees with the structural answer and the coordinate map
  // kills every relation; tame-split: coordinates of the basis symbols are
  // the unit vectors.
  bool cross_validated = false;
  std::size_t closure_generators = 0;
  std::size_t closure_relations = 0;
};

enum class ClosureMode { Auto, Closure, Structural };

// The relation matrix of the brute-force symbol closure (see kernels.hpp).
kernels::ClosureSpec closure_spec(const FiniteField& F, std::size_t r, std::uint32_t n);
// Tuple index of a symbol of units in the closure's generator order.
std::size_t closure_index(const FiniteField& F, const std::vector<FqElem>& entries);

KGroup km_mod_n(const FiniteFieldK& field, std::size_t r, const Integer& n, ClosureMode mode = ClosureMode::Auto);
KGroup km_mod_n(const LocalFieldK& field, std::size_t r, const Integer& n);
KGroup km_mod_n(const TwoLocalFieldK& field, std::size_t r, const Integer& n);

// Whether x lies in the span of the brute-force closure relations (q <= 9).
bool closure_contains(const FiniteFieldK& field, const SymbolSum<FqElem>& x, std::uint32_t n);

struct FiltrationImage {
  PresentedGroup image;  // presented on the sampled generating symbols
  std::size_t sampled_units = 0;
  bool hensel_certified = false;  // every sampled principal unit had an n-th root
};

// Image of U^i K_r(K) = {1 + m^i, K^x, ..., K^x} in K_r(K)/n.
FiltrationImage unit_filtration(const LocalFieldK& field, std::size_t r, int level, const Integer& n);

}  // namespace parshin::milnor
