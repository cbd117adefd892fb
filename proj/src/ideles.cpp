#include "parshin/ideles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "parshin/error.hpp"
#include "parshin/milnor.hpp"
#include "parshin/parse.hpp"
#include "parshin/tower.hpp"

namespace parshin::ideles {

using chains::Place;
using chains::SchemeModel;
using chains::SurfacePrime;

namespace {

Poly one_poly(const FiniteField& F) { return poly::constant(F, F.one()); }

int ord_poly(const FiniteField& F, Poly a, const Poly& P, Poly* rest = nullptr) {
  int k = 0;
  for (;;) {
    auto [q, r] = poly::divmod(F, a, P);
    if (!r.empty()) break;
    a = std::move(q);
    ++k;
  }
  if (rest) *rest = std::move(a);
  return k;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string trim_copy(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string paren(const std::string& s) {
  return s.find_first_of("+-*") == std::string::npos ? s : "(" + s + ")";
}

std::string place_name(const SchemeModel& model, const Place& v) { return model.format(v); }
std::string prime_name(const SchemeModel& model, const SurfacePrime& p) { return "(" + model.format(p) + ")"; }

void require_tame(const FiniteField& F, const Integer& n) {
  if (n < 2) fail(ErrorCode::InvalidInput, "n must be at least 2");
  if (n % F.characteristic() == 0) fail(ErrorCode::WildCoefficients, "n must be prime to the characteristic");
}

// Units of O_v / m_v^m for a place of P^1, with u = 1/t at infinity.
// Coordinates: gamma (Teichmueller lift of a generator of k(v)^x, order
// q^d - 1), then 1 + b * P^j for j in [1, m) and b in an F_p-basis of k(v).
struct CurveLocal {
  const FiniteField* F = nullptr;
  Place place;
  int d = 1;
  int m = 1;
  Poly P, Pm;
  std::uint64_t Q = 0;  // q^d
  std::vector<std::int64_t> dlog;
  Poly teich, teich_inv;
  struct U1 {
    int j, i, l;
    Poly gen, gen_inv;
  };
  std::vector<U1> u1;

  std::uint64_t code(const Poly& r) const {
    std::uint64_t c = 0, w = 1;
    for (const auto& x : r) {
      c += w * x.code;
      w *= F->order();
    }
    return c;
  }

  Poly decode(std::uint64_t c) const {
    Poly r;
    for (int i = 0; i < d; ++i) {
      r.push_back(FqElem{static_cast<std::uint32_t>(c % F->order())});
      c /= F->order();
    }
    poly::trim(r);
    return r;
  }

  CurveLocal(const FiniteField& field, const Place& v, int mult) : F(&field), place(v), d(v.degree()), m(mult) {
    P = v.infinity ? poly::variable(field) : v.poly;
    Pm = poly::pow(field, P, static_cast<unsigned>(m));
    Q = ipow(field.order(), static_cast<unsigned>(d));
    if (Q > (1u << 22)) fail(ErrorCode::InvalidInput, "residue field too large");
    auto ps = prime_divisors(Q - 1);
    Poly gbar;
    for (std::uint64_t c = 1; c < Q; ++c) {
      Poly x = decode(c);
      bool primitive = true;
      for (auto l : ps) {
        if (poly::powmod(field, x, (Q - 1) / l, P) == one_poly(field)) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        gbar = x;
        break;
      }
    }
    dlog.assign(Q, -1);
    Poly x = one_poly(field);
    for (std::uint64_t k = 0; k + 1 < Q; ++k) {
      dlog[code(x)] = static_cast<std::int64_t>(k);
      x = poly::mulmod(field, x, gbar, P);
    }
    // gbar^(Q^k) with Q^k >= m is the Teichmueller lift mod P^m.
    std::uint64_t e = Q;
    while (e < static_cast<std::uint64_t>(m)) e *= Q;
    teich = poly::powmod(field, gbar, e, Pm);
    teich_inv = poly::invmod(field, teich, Pm);
    const std::uint32_t p = field.characteristic();
    for (int j = 1; j < m; ++j) {
      Poly Pj = poly::pow(field, P, static_cast<unsigned>(j));
      for (int i = 0; i < d; ++i) {
        for (std::uint32_t l = 0; l < field.degree(); ++l) {
          Poly b = poly::monomial(field, FqElem{static_cast<std::uint32_t>(ipow(p, l))}, i);
          Poly g = poly::add(field, one_poly(field), poly::mul(field, b, Pj));
          u1.push_back({j, i, static_cast<int>(l), g, poly::invmod(field, g, Pm)});
        }
      }
    }
  }

  std::size_t size() const { return 2 + u1.size(); }

  std::vector<std::string> roles() const {
    std::vector<std::string> r = {"pi", "gamma"};
    for (const auto& g : u1) r.push_back("u1:" + std::to_string(g.j) + "." + std::to_string(g.i) + "." + std::to_string(g.l));
    return r;
  }

  // [gamma, u1...] for a unit w mod P^m.
  std::vector<std::int64_t> unit_coords(Poly w) const {
    const FiniteField& f = *F;
    w = poly::mod(f, w, Pm);
    Poly r = poly::mod(f, w, P);
    if (r.empty()) fail(ErrorCode::InvalidInput, "not a unit at the place");
    std::vector<std::int64_t> out(1 + u1.size(), 0);
    const std::int64_t c = dlog[code(r)];
    out[0] = c;
    w = poly::mulmod(f, w, poly::powmod(f, teich_inv, static_cast<unsigned long long>(c), Pm), Pm);
    std::size_t idx = 0;
    for (int j = 1; j < m; ++j) {
      Poly Pj = poly::pow(f, P, static_cast<unsigned>(j));
      auto [quot, rem] = poly::divmod(f, poly::sub(f, w, one_poly(f)), Pj);
      if (!rem.empty()) fail(ErrorCode::InvalidInput, "internal: unit filtration step failed");
      Poly digit = poly::mod(f, quot, P);
      for (int i = 0; i < d; ++i) {
        FqElem coef = i < static_cast<int>(digit.size()) ? digit[i] : f.zero();
        auto dg = f.digits(coef);
        for (std::uint32_t l = 0; l < f.degree(); ++l, ++idx) {
          out[1 + idx] = dg[l];
          if (dg[l]) w = poly::mulmod(f, w, poly::powmod(f, u1[idx].gen_inv, dg[l], Pm), Pm);
        }
      }
    }
    if (poly::mod(f, w, Pm) != one_poly(f)) fail(ErrorCode::InvalidInput, "internal: unit coordinates incomplete");
    return out;
  }

  // [pi, gamma, u1...] for f in F_q(t)^x.
  std::vector<std::int64_t> element_coords(const RationalFunction& fn) const {
    const FiniteField& f = *F;
    int val = 0;
    Poly unit;
    if (place.infinity) {
      val = poly::degree(fn.den) - poly::degree(fn.num);
      Poly rn = poly::reverse(fn.num, poly::degree(fn.num));
      Poly rd = poly::reverse(fn.den, poly::degree(fn.den));
      unit = poly::mulmod(f, rn, poly::invmod(f, poly::mod(f, rd, Pm), Pm), Pm);
    } else {
      Poly n1, d1;
      int vn = ord_poly(f, fn.num, P, &n1);
      int vd = ord_poly(f, fn.den, P, &d1);
      val = vn - vd;
      unit = poly::mulmod(f, n1, poly::invmod(f, poly::mod(f, d1, Pm), Pm), Pm);
    }
    auto u = unit_coords(unit);
    std::vector<std::int64_t> out = {val};
    out.insert(out.end(), u.begin(), u.end());
    return out;
  }

  // Relations of the unit group: (q^d - 1) gamma and p * g = g^p.
  std::vector<std::vector<std::int64_t>> relations() const {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> r(size(), 0);
    r[1] = static_cast<std::int64_t>(Q - 1);
    out.push_back(r);
    const std::uint32_t p = F->characteristic();
    for (std::size_t k = 0; k < u1.size(); ++k) {
      auto c = unit_coords(poly::powmod(*F, u1[k].gen, p, Pm));
      std::vector<std::int64_t> rel(size(), 0);
      for (std::size_t i = 0; i < c.size(); ++i) rel[1 + i] = -c[i];
      rel[2 + k] += p;
      out.push_back(rel);
    }
    return out;
  }
};

IntMatrix matrix_from(std::size_t rows, const std::vector<std::vector<std::int64_t>>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = Integer(static_cast<long>(cols[j][i]));
  }
  return m;
}

// ---------------------------------------------------------------- P^1

struct CurveLayout {
  const SchemeModel* model;
  std::vector<CurveLocal> locals;
  std::vector<std::size_t> offsets;
  std::map<Poly, std::size_t> u_index;  // finite U-places
  std::optional<std::size_t> inf_index;
  std::vector<Generator> gens;

  CurveLayout(const SchemeModel& m, const chains::DivisorData& D, int bound) : model(&m) {
    const FiniteField& F = m.field();
    for (const auto& c : D.components) {
      if (!c.point.place) fail(ErrorCode::UnsupportedPrime, "curve divisors are supported on places");
      locals.emplace_back(F, *c.point.place, c.mult);
      offsets.push_back(gens.size());
      for (const auto& r : locals.back().roles()) gens.push_back({place_name(m, *c.point.place), r});
    }
    for (const auto& v : m.places_up_to(bound)) {
      bool in_d = std::any_of(locals.begin(), locals.end(), [&](const CurveLocal& l) { return l.place == v; });
      if (in_d) continue;
      if (v.infinity) inf_index = gens.size();
      else u_index[v.poly] = gens.size();
      gens.push_back({place_name(m, v), "ord"});
    }
  }

  std::vector<std::int64_t> q_coords(const RationalFunction& f) const {
    const FiniteField& F = model->field();
    std::vector<std::int64_t> out(gens.size(), 0);
    for (std::size_t k = 0; k < locals.size(); ++k) {
      auto c = locals[k].element_coords(f);
      for (std::size_t i = 0; i < c.size(); ++i) out[offsets[k] + i] = c[i];
    }
    for (int side = 0; side < 2; ++side) {
      const Poly& a = side == 0 ? f.num : f.den;
      if (poly::degree(a) <= 0) continue;
      for (const auto& [P, e] : poly::factor(F, a).factors) {
        bool in_d = std::any_of(locals.begin(), locals.end(),
                                [&](const CurveLocal& l) { return !l.place.infinity && l.place.poly == P; });
        if (in_d) continue;
        auto it = u_index.find(P);
        if (it == u_index.end()) fail(ErrorCode::InvalidInput, "function has support beyond the degree bound");
        out[it->second] += side == 0 ? e : -e;
      }
    }
    if (inf_index) out[*inf_index] += poly::degree(f.den) - poly::degree(f.num);
    return out;
  }
};

ClassGroupPresentation curve_presentation(const ClassGroupJob& job, int bound) {
  const FiniteField& F = job.model.field();
  CurveLayout L(job.model, job.D, bound);
  std::vector<std::vector<std::int64_t>> cols;
  for (std::size_t k = 0; k < L.locals.size(); ++k) {
    for (const auto& r : L.locals[k].relations()) {
      std::vector<std::int64_t> col(L.gens.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) col[L.offsets[k] + i] = r[i];
      cols.push_back(col);
    }
  }
  cols.push_back(L.q_coords(make_rational(F, poly::constant(F, F.generator()), one_poly(F))));
  for (const auto& v : job.model.places_up_to(bound)) {
    if (!v.infinity) cols.push_back(L.q_coords(make_rational(F, v.poly, one_poly(F))));
  }
  ClassGroupPresentation out;
  out.bound = bound;
  out.generators = L.gens;
  out.group = PresentedGroup(L.gens.size(), matrix_from(L.gens.size(), cols), job.n);
  return out;
}

// ---------------------------------------------------------- local surface

struct Atom {
  std::optional<SurfacePrime> prime;  // nullopt: the constant
  FqElem constant{1};
};

struct Approx {
  int i = 0;  // exponent of the residue variable
  int j = 0;  // exponent of the uniformizer
  FqElem c{1};
};

std::vector<std::tuple<FqElem, int, int>> prime_terms(const FiniteField& F, const SurfacePrime& p) {
  using K = SurfacePrime::Kind;
  switch (p.kind) {
    case K::S: return {{F.one(), 1, 0}};
    case K::T: return {{F.one(), 0, 1}};
    case K::Graph:
      if (p.y == 't') return {{F.one(), 0, 1}, {F.neg(p.c), p.k, 0}};
      return {{F.one(), 1, 0}, {F.neg(p.c), 0, p.k}};
  }
  return {};
}

// Restriction of the prime h to the curve p as a polynomial in the residue
// variable of p: (lowest degree, coefficient).
std::pair<int, FqElem> restrict_lowest(const FiniteField& F, const SurfacePrime& h, const SurfacePrime& p) {
  using K = SurfacePrime::Kind;
  std::map<int, FqElem> acc;
  for (const auto& [c, i, j] : prime_terms(F, h)) {
    int deg = 0;
    FqElem coef = c;
    switch (p.kind) {
      case K::S:
        if (i != 0) continue;
        deg = j;
        break;
      case K::T:
        if (j != 0) continue;
        deg = i;
        break;
      case K::Graph:
        if (p.y == 't') {
          coef = F.mul(c, F.pow(p.c, j));
          deg = i + p.k * j;
        } else {
          coef = F.mul(c, F.pow(p.c, i));
          deg = j + p.k * i;
        }
        break;
    }
    auto it = acc.find(deg);
    if (it == acc.end()) acc[deg] = coef;
    else it->second = F.add(it->second, coef);
  }
  for (const auto& [deg, c] : acc) {
    if (!c.is_zero()) return {deg, c};
  }
  fail(ErrorCode::InvalidInput, "internal: prime restricts to zero on a different prime");
}

// Exact restriction as a polynomial in the residue variable.
Poly restrict_poly(const FiniteField& F, const SurfacePrime& h, const SurfacePrime& p) {
  using K = SurfacePrime::Kind;
  Poly out;
  for (const auto& [c, i, j] : prime_terms(F, h)) {
    int deg = 0;
    FqElem coef = c;
    if (p.kind == K::S) {
      if (i != 0) continue;
      deg = j;
    } else if (p.kind == K::T) {
      if (j != 0) continue;
      deg = i;
    } else if (p.y == 't') {
      coef = F.mul(c, F.pow(p.c, j));
      deg = i + p.k * j;
    } else {
      coef = F.mul(c, F.pow(p.c, i));
      deg = j + p.k * i;
    }
    out = poly::add(F, out, poly::monomial(F, coef, deg));
  }
  return out;
}

Approx approx_at(const FiniteField& F, const Atom& a, const SurfacePrime& p) {
  if (!a.prime) return {0, 0, a.constant};
  if (*a.prime == p) return {0, 1, F.one()};
  auto [deg, c] = restrict_lowest(F, *a.prime, p);
  return {deg, 0, c};
}

BiLaurent bilaurent_of(const FieldPtr& fp, const Approx& x) {
  BiPoly U;
  U.terms[{0, 0}] = x.c;
  return BiLaurent(fp, x.i, x.j, U);
}

struct SurfaceLayout {
  const SchemeModel* model;
  std::vector<SurfacePrime> d_primes;
  std::vector<SurfacePrime> u_primes;
  std::vector<std::size_t> d_offsets, u_offsets;
  std::vector<Integer> moduli;
  std::vector<Generator> gens;
  Integer n;
  TwoLocalFieldK K2;
  LocalFieldK K1;

  SurfaceLayout(const SchemeModel& m, const chains::DivisorData& D, int bound, const Integer& n_)
      : model(&m), n(n_), K2(m.field_ptr(), 8), K1(m.field_ptr(), 8, "s") {
    auto m2 = milnor::coordinate_moduli(K2, 2, n);
    auto m1 = milnor::coordinate_moduli(K1, 1, n);
    for (const auto& c : D.components) {
      if (!c.point.prime) fail(ErrorCode::UnsupportedPrime, "surface divisors are supported on height-one primes");
      d_primes.push_back(*c.point.prime);
      d_offsets.push_back(gens.size());
      for (std::size_t i = 0; i < m2.size(); ++i) {
        gens.push_back({prime_name(m, *c.point.prime), "K2:" + std::to_string(i)});
        moduli.push_back(m2[i]);
      }
    }
    for (const auto& p : m.primes_up_to(bound)) {
      if (std::find(d_primes.begin(), d_primes.end(), p) != d_primes.end()) continue;
      u_primes.push_back(p);
      u_offsets.push_back(gens.size());
      for (std::size_t i = 0; i < m1.size(); ++i) {
        gens.push_back({prime_name(m, p), "K1:" + std::to_string(i)});
        moduli.push_back(m1[i]);
      }
    }
  }

  std::vector<Integer> symbol_coords(const Atom& a, const Atom& b) const {
    const FiniteField& F = model->field();
    const FieldPtr& fp = model->field_ptr();
    std::vector<Integer> out(gens.size(), Integer(0));
    for (std::size_t k = 0; k < d_primes.size(); ++k) {
      auto A = bilaurent_of(fp, approx_at(F, a, d_primes[k]));
      auto B = bilaurent_of(fp, approx_at(F, b, d_primes[k]));
      auto c = milnor::coordinates(K2, milnor::SymbolSum<BiLaurent>::single({A, B}), n);
      for (std::size_t i = 0; i < c.size(); ++i) out[d_offsets[k] + i] = c[i];
    }
    for (std::size_t k = 0; k < u_primes.size(); ++k) {
      const auto& p = u_primes[k];
      bool touches = (a.prime && *a.prime == p) || (b.prime && *b.prime == p);
      if (!touches) continue;
      auto A = bilaurent_of(fp, approx_at(F, a, p));
      auto B = bilaurent_of(fp, approx_at(F, b, p));
      auto res = milnor::residue_symbol(K2, milnor::SymbolSum<BiLaurent>::single({A, B}));
      auto c = milnor::coordinates(K1, res, n);
      for (std::size_t i = 0; i < c.size(); ++i) out[u_offsets[k] + i] = c[i];
    }
    return out;
  }
};

ClassGroupPresentation surface_presentation(const ClassGroupJob& job, int bound) {
  const FiniteField& F = job.model.field();
  SurfaceLayout L(job.model, job.D, bound, job.n);
  std::vector<Atom> atoms;
  atoms.push_back(Atom{std::nullopt, F.generator()});
  for (const auto& p : job.model.primes_up_to(bound)) atoms.push_back(Atom{p, F.one()});
  std::vector<std::vector<Integer>> cols;
  for (std::size_t i = 0; i < L.gens.size(); ++i) {
    std::vector<Integer> col(L.gens.size(), Integer(0));
    col[i] = L.moduli[i];
    cols.push_back(col);
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i; j < atoms.size(); ++j) cols.push_back(L.symbol_coords(atoms[i], atoms[j]));
  }
  ClassGroupPresentation out;
  out.bound = bound;
  out.generators = L.gens;
  out.group = PresentedGroup(L.gens.size(), IntMatrix::from_columns(L.gens.size(), cols), job.n);
  return out;
}

int divisor_degree_bound(const chains::DivisorData& D) {
  int b = 1;
  for (const auto& c : D.components) {
    if (c.point.place) b = std::max(b, c.point.place->degree());
    if (c.point.prime) b = std::max(b, c.point.prime->degree());
  }
  return b;
}

std::vector<std::int64_t> to_int64(const std::vector<Integer>& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

}  // namespace

// ------------------------------------------------------------ rationals

RationalFunction make_rational(const FiniteField& F, Poly num, Poly den) {
  poly::trim(num);
  poly::trim(den);
  if (den.empty()) fail(ErrorCode::DivisionByZero, "zero denominator");
  if (num.empty()) fail(ErrorCode::ZeroElement, "the zero function has no divisor");
  Poly g = poly::gcd(F, num, den);
  num = poly::divmod(F, num, g).first;
  den = poly::divmod(F, den, g).first;
  FqElem c = F.inv(poly::leading(den));
  return {poly::scale(F, num, c), poly::scale(F, den, c)};
}

RationalFunction parse_rational(const FiniteField& F, std::string_view text) {
  int depth = 0;
  std::optional<std::size_t> slash;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == '/' && depth == 0) {
      if (slash) fail(ErrorCode::ParseError, "more than one '/' in rational function");
      slash = i;
    }
  }
  if (!slash) return make_rational(F, poly::parse(F, text), one_poly(F));
  return make_rational(F, poly::parse(F, text.substr(0, *slash)), poly::parse(F, text.substr(*slash + 1)));
}

std::string format_rational(const FiniteField& F, const RationalFunction& f) {
  std::string n = poly::format(F, f.num);
  if (f.den == one_poly(F)) return n;
  return paren(n) + "/" + paren(poly::format(F, f.den));
}

int order_at(const FiniteField& F, const RationalFunction& f, const Place& v) {
  if (v.infinity) return poly::degree(f.den) - poly::degree(f.num);
  return ord_poly(F, f.num, v.poly) - ord_poly(F, f.den, v.poly);
}

// ------------------------------------------------------- surface elements

SurfaceElement parse_surface_element(const SchemeModel& model, std::string_view text) {
  if (model.kind() != chains::ModelKind::LocalSurface) fail(ErrorCode::InvalidInput, "not a local surface");
  const FiniteField& F = model.field();
  SurfaceElement out;
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '*' && depth == 0) {
      parts.push_back(trim_copy(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(trim_copy(cur));
  for (auto part : parts) {
    if (part.empty()) fail(ErrorCode::ParseError, "empty factor");
    int e = 1;
    // exponent at top level
    depth = 0;
    std::optional<std::size_t> caret;
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i] == '(') ++depth;
      if (part[i] == ')') --depth;
      if (part[i] == '^' && depth == 0) caret = i;
    }
    if (caret) {
      std::string ex = trim_copy(std::string_view(part).substr(*caret + 1));
      if (ex.size() > 2 && ex.front() == '(' && ex.back() == ')') ex = ex.substr(1, ex.size() - 2);
      try {
        std::size_t used = 0;
        e = std::stoi(ex, &used);
        if (used != ex.size()) throw std::invalid_argument(ex);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad exponent: " + ex);
      }
      part = trim_copy(std::string_view(part).substr(0, *caret));
    }
    std::string inner = part;
    if (inner.size() > 2 && inner.front() == '(' && inner.back() == ')') inner = inner.substr(1, inner.size() - 2);
    bool constant = inner.find('s') == std::string::npos && inner.find('t') == std::string::npos;
    if (constant) {
      FqElem c = F.parse(inner);
      if (c.is_zero()) fail(ErrorCode::ZeroElement, "zero factor");
      out.unit = F.mul(out.unit, F.pow(c, e));
      continue;
    }
    SurfacePrime p = model.parse_prime(inner);
    // parse_prime normalizes up to a unit; keep that unit exactly.
    auto expr = text::parse_expression(inner, F, {"s", "t"});
    FqElem lead{1};
    for (const auto& [c, i, j] : prime_terms(F, p)) {
      std::vector<int> key = {i, j};
      auto it = expr.terms.find(key);
      if (it != expr.terms.end()) {
        lead = F.div(it->second, c);
        break;
      }
    }
    out.unit = F.mul(out.unit, F.pow(lead, e));
    bool merged = false;
    for (auto& [q, k] : out.factors) {
      if (q == p) {
        k += e;
        merged = true;
      }
    }
    if (!merged) out.factors.push_back({p, e});
  }
  std::erase_if(out.factors, [](const auto& f) { return f.second == 0; });
  return out;
}

std::string format_surface_element(const SchemeModel& model, const SurfaceElement& x) {
  const FiniteField& F = model.field();
  std::string out;
  if (x.unit != F.one() || x.factors.empty()) out = paren(F.format(x.unit));
  for (const auto& [p, e] : x.factors) {
    if (!out.empty()) out += "*";
    std::string name = model.format(p);
    out += name.size() > 1 ? "(" + name + ")" : name;
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------------- Q map

IdeleElement q_map_image(const SchemeModel& model, const chains::DivisorData& D, const RationalFunction& f) {
  if (model.kind() != chains::ModelKind::P1) fail(ErrorCode::InvalidInput, "function-field Q map needs the P1 model");
  const FiniteField& F = model.field();
  using T = chains::SchemePoint::Type;
  const chains::SchemePoint eta{T::Generic, {}, {}};
  IdeleElement out;
  const bool trivial = f.num == one_poly(F) && f.den == one_poly(F);
  std::vector<Place> support;
  for (const Poly* a : {&f.num, &f.den}) {
    if (poly::degree(*a) <= 0) continue;
    for (const auto& [P, e] : poly::factor(F, *a).factors) support.push_back(Place{false, P});
  }
  if (order_at(F, f, Place{true, {}}) != 0) support.push_back(Place{true, {}});
  std::sort(support.begin(), support.end(), [](const Place& a, const Place& b) {
    if (a.infinity != b.infinity) return a.infinity;
    return poly::less(a.poly, b.poly);
  });
  for (const auto& v : support) {
    chains::SchemePoint x{T::Closed, v, {}};
    if (D.multiplicity(x) > 0) continue;
    int o = order_at(F, f, v);
    if (o != 0) out.components.push_back({chains::ChainRecord{{x}, chains::ChainKind::ParshinOnPair, false}, o, ""});
  }
  if (!trivial) {
    for (const auto& c : D.components) {
      out.components.push_back(
          {chains::ChainRecord{{c.point, eta}, chains::ChainKind::ParshinOnPair, false}, 0, format_rational(F, f)});
    }
  }
  return out;
}

IdeleElement q_map_image(const SchemeModel& model, const chains::DivisorData& D, const SurfaceElement& f,
                         const SurfaceElement& g) {
  if (model.kind() != chains::ModelKind::LocalSurface) fail(ErrorCode::InvalidInput, "symbol Q map needs the local surface");
  const FiniteField& F = model.field();
  const FieldPtr& fp = model.field_ptr();
  using T = chains::SchemePoint::Type;
  const chains::SchemePoint eta{T::Generic, {}, {}};
  const chains::SchemePoint m{T::Closed, {}, {}};
  IdeleElement out;
  std::vector<SurfacePrime> support;
  for (const auto& x : {f, g}) {
    for (const auto& [p, e] : x.factors) {
      if (std::find(support.begin(), support.end(), p) == support.end()) support.push_back(p);
    }
  }
  for (const auto& p : support) {
    chains::SchemePoint x{T::HeightOne, {}, p};
    if (D.multiplicity(x) > 0) continue;
    // d_p{f, g} = (-1)^(ab) gbar^a / fbar^b with exact residues.
    int a = 0, b = 0;
    for (const auto& [q, e] : f.factors) a += q == p ? e : 0;
    for (const auto& [q, e] : g.factors) b += q == p ? e : 0;
    auto residue = [&](const SurfaceElement& x) {
      Laurent acc = Laurent::constant(fp, x.unit, 16, "s");
      for (const auto& [q, e] : x.factors) {
        if (q == p) continue;
        Poly r = restrict_poly(F, q, p);
        int v = 0;
        while (r[v].is_zero()) ++v;
        std::vector<FqElem> unit(r.begin() + v, r.end());
        unit.resize(16, F.zero());
        acc = acc * Laurent(fp, v, unit, "s").pow(e);
      }
      return acc;
    };
    Laurent value = residue(g).pow(a) / residue(f).pow(b);
    if ((static_cast<long long>(a) * b) % 2 != 0) value = value.scale(F.neg(F.one()));
    if (a == 0 && b == 0) continue;
    std::string text = value.format();
    char x_var = p.residue_var();
    if (x_var != 's') std::replace(text.begin(), text.end(), 's', x_var);
    out.components.push_back({chains::ChainRecord{{m, x}, chains::ChainKind::ParshinOnPair, false}, 0, text});
  }
  for (const auto& c : D.components) {
    out.components.push_back({chains::ChainRecord{{m, c.point, eta}, chains::ChainKind::ParshinOnPair, false}, 0,
                              "{" + format_surface_element(model, f) + ", " + format_surface_element(model, g) + "}"});
  }
  return out;
}

// ---------------------------------------------------------- class groups

ClassGroupPresentation class_group_presentation(const ClassGroupJob& job, int bound) {
  require_tame(job.model.field(), job.n);
  if (bound < 1) fail(ErrorCode::InvalidInput, "degree bound must be at least 1");
  if (job.model.kind() == chains::ModelKind::P1) return curve_presentation(job, bound);
  return surface_presentation(job, bound);
}

ClassGroupResult class_group(const ClassGroupJob& job) {
  require_tame(job.model.field(), job.n);
  const int b0 = divisor_degree_bound(job.D);
  ClassGroupResult out;
  for (int B = b0; B <= job.max_bound; ++B) {
    auto pres = class_group_presentation(job, B);
    auto inv = pres.group.invariants();
    bool stable = !out.history.empty() && out.history.back().invariants == inv;
    out.history.push_back({B, inv});
    if (stable) {
      out.presentation = std::move(pres);
      out.invariants = inv;
      out.certified_bound = B;
      return out;
    }
  }
  fail(ErrorCode::NotStabilized, "class group invariants still changing at degree bound " + std::to_string(job.max_bound));
}

// -------------------------------------------------------- ray class oracle

ClassGroupResult ray_class_oracle(const SchemeModel& p1, const chains::DivisorData& D, const Integer& n,
                                  int max_bound) {
  if (p1.kind() != chains::ModelKind::P1) fail(ErrorCode::InvalidInput, "the ray class oracle lives on P1");
  if (n < 1 || n > Integer(1u << 30)) fail(ErrorCode::InvalidInput, "modulus out of range");
  const FiniteField& F = p1.field();
  const std::uint32_t nn = static_cast<std::uint32_t>(n.get_ui());
  int m_inf = 0;
  Poly d_fin = one_poly(F);
  std::vector<Poly> d_places;
  for (const auto& c : D.components) {
    if (!c.point.place) fail(ErrorCode::UnsupportedPrime, "curve divisors are supported on places");
    if (c.point.place->infinity) {
      m_inf = c.mult;
    } else {
      d_places.push_back(c.point.place->poly);
      d_fin = poly::mul(F, d_fin, poly::pow(F, c.point.place->poly, static_cast<unsigned>(c.mult)));
    }
  }
  const bool inf_in_u = m_inf == 0;
  const int dfin_deg = poly::degree(d_fin);

  using Sparse = std::map<std::size_t, std::int64_t>;
  auto axpy = [&](Sparse& acc, const Sparse& x, std::int64_t k) {
    for (const auto& [i, v] : x) {
      auto& slot = acc[i];
      slot = ((slot + k * v) % nn + nn) % nn;
      if (slot == 0) acc.erase(i);
    }
  };

  std::vector<Generator> survivors;
  ModLattice lat(nn, 0);
  if (inf_in_u) {
    survivors.push_back({"inf", "ord"});
    lat.grow(1);
  }
  std::map<Poly, Sparse> expr;
  std::map<std::vector<std::uint32_t>, Sparse> rep;

  auto key_of = [&](const Poly& a) {
    std::vector<std::uint32_t> best;
    for (std::uint32_t cc = 1; cc < F.order(); ++cc) {
      Poly ca = poly::scale(F, a, FqElem{cc});
      std::vector<std::uint32_t> k;
      if (!inf_in_u) {
        k.push_back(static_cast<std::uint32_t>(poly::degree(a)));
        Poly r = poly::reverse(ca, poly::degree(ca));
        for (int i = 0; i < m_inf; ++i) k.push_back(i < static_cast<int>(r.size()) ? r[i].code : 0);
      }
      Poly red = poly::mod(F, ca, d_fin);
      for (int i = 0; i < dfin_deg; ++i) k.push_back(i < static_cast<int>(red.size()) ? red[i].code : 0);
      if (best.empty() || k < best) best = k;
    }
    return best;
  };

  auto dense = [&](const Sparse& s) {
    std::vector<std::uint32_t> v(survivors.size(), 0);
    for (const auto& [i, x] : s) v[i] = static_cast<std::uint32_t>(x);
    return v;
  };

  auto process = [&](const Poly& a) {
    for (const auto& P : d_places) {
      if (poly::mod(F, a, P).empty()) return;
    }
    auto key = key_of(a);
    Sparse rest;  // div(a) without a new irreducible factor
    std::optional<Poly> fresh;
    if (poly::degree(a) > 0) {
      auto fac = poly::factor(F, a);
      for (const auto& [P, e] : fac.factors) {
        auto it = expr.find(P);
        if (it == expr.end()) {
          fresh = P;  // only possible when a = P is irreducible
          continue;
        }
        axpy(rest, it->second, e);
      }
    }
    if (inf_in_u) axpy(rest, Sparse{{0, 1}}, -poly::degree(a));
    auto it = rep.find(key);
    if (it == rep.end()) {
      Sparse full = rest;
      if (fresh) {
        std::size_t idx = survivors.size();
        survivors.push_back({poly::degree(*fresh) == 1 ? F.format(F.neg((*fresh)[0])) : poly::format(F, *fresh), "ord"});
        lat.grow(survivors.size());
        expr[*fresh] = Sparse{{idx, 1}};
        axpy(full, expr[*fresh], 1);
      }
      rep.emplace(key, std::move(full));
      return;
    }
    if (fresh) {
      Sparse e = it->second;
      axpy(e, rest, -1);
      expr[*fresh] = std::move(e);
      return;
    }
    Sparse rel = rest;
    axpy(rel, it->second, -1);
    if (!rel.empty()) lat.insert(dense(rel));
  };

  // Compare B-1 with B only once B-1 >= deg D: below that, most residue
  // classes mod D have no representative yet and the invariants can
  // plateau before any relation has appeared.
  int deg_d = 0;
  for (const auto& c : D.components) deg_d += c.mult * c.point.place->degree();
  const int b0 = std::max(1, deg_d);
  ClassGroupResult out;
  process(one_poly(F));
  for (int B = 1; B <= max_bound; ++B) {
    for (const auto& a : poly::monic_polys(F, B)) process(a);
    if (B < b0) continue;
    auto group = lat.quotient();
    auto inv = group.invariants();
    bool stable = !out.history.empty() && out.history.back().invariants == inv;
    out.history.push_back({B, inv});
    if (stable) {
      ClassGroupPresentation pres;
      pres.bound = B;
      for (auto i : lat.quotient_generators()) pres.generators.push_back(survivors[i]);
      pres.group = std::move(group);
      out.presentation = std::move(pres);
      out.invariants = inv;
      out.certified_bound = B;
      return out;
    }
  }
  fail(ErrorCode::NotStabilized, "ray class group still changing at degree bound " + std::to_string(max_bound));
}

// ------------------------------------------------------------ group maps

GroupMap transition_map(const ClassGroupPresentation& from, const ClassGroupPresentation& to) {
  const auto& S = from.generators;
  const auto& T = to.generators;
  IntMatrix M(T.size(), S.size());
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < T.size(); ++i) where[T[i].label()] = i;
  auto count_role = [](const std::vector<Generator>& g, const std::string& point, const std::string& prefix) {
    return static_cast<int>(std::count_if(g.begin(), g.end(), [&](const Generator& x) {
      return x.point == point && x.role.rfind(prefix, 0) == 0;
    }));
  };
  for (std::size_t j = 0; j < S.size(); ++j) {
    const auto& g = S[j];
    if (auto it = where.find(g.label()); it != where.end()) {
      M(it->second, j) = 1;
      continue;
    }
    if (g.role == "pi") {
      if (auto it = where.find(g.point + ":ord"); it != where.end()) M(it->second, j) = 1;
      continue;
    }
    if (g.role.rfind("K2:", 0) == 0) {
      const int k2 = count_role(S, g.point, "K2:");
      const int k1 = count_role(T, g.point, "K1:");
      const int i = std::stoi(g.role.substr(3)) - (k2 - k1);
      if (k1 > 0 && i >= 0) {
        if (auto it = where.find(g.point + ":K1:" + std::to_string(i)); it != where.end()) M(it->second, j) = 1;
      }
    }
  }
  return GroupMap(from.group, to.group, std::move(M));
}

GroupMap degree_map(const SchemeModel& p1, const ClassGroupPresentation& c, const Integer& n) {
  if (p1.kind() != chains::ModelKind::P1) fail(ErrorCode::InvalidInput, "degree map needs the P1 model");
  const FiniteField& F = p1.field();
  IntMatrix M(1, c.generators.size());
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    const auto& g = c.generators[j];
    if (g.role != "ord" && g.role != "pi") continue;
    Place v = p1.parse_place(g.point);
    M(0, j) = v.degree();
  }
  (void)F;
  return GroupMap(c.group, PresentedGroup(1, IntMatrix(1, 0), n), std::move(M));
}

// ------------------------------------------------------------ reciprocity

ReciprocityReport weil_reciprocity(const FiniteField& F, const RationalFunction& f, const RationalFunction& g) {
  std::vector<Place> places;
  for (const RationalFunction* h : {&f, &g}) {
    for (const Poly* a : {&h->num, &h->den}) {
      if (poly::degree(*a) <= 0) continue;
      for (const auto& [P, e] : poly::factor(F, *a).factors) {
        if (std::find_if(places.begin(), places.end(), [&](const Place& v) { return v.poly == P; }) == places.end()) {
          places.push_back(Place{false, P});
        }
      }
    }
  }
  std::sort(places.begin(), places.end(), [](const Place& a, const Place& b) { return poly::less(a.poly, b.poly); });
  places.insert(places.begin(), Place{true, {}});
  ReciprocityReport rep;
  FqElem product = F.one();
  auto model = SchemeModel::p1(finite_field(F.order()));
  for (const auto& v : places) {
    const int a = order_at(F, f, v), b = order_at(F, g, v);
    FqElem norm;
    if (v.infinity) {
      FqElem uf = F.div(poly::leading(f.num), poly::leading(f.den));
      FqElem ug = F.div(poly::leading(g.num), poly::leading(g.den));
      norm = F.div(F.pow(ug, a), F.pow(uf, b));
    } else {
      const Poly& P = v.poly;
      auto unit_residue = [&](const RationalFunction& h) {
        Poly n1, d1;
        ord_poly(F, h.num, P, &n1);
        ord_poly(F, h.den, P, &d1);
        return poly::mulmod(F, n1, poly::invmod(F, poly::mod(F, d1, P), P), P);
      };
      auto power = [&](const Poly& x, int e) {
        Poly base = e < 0 ? poly::invmod(F, x, P) : x;
        return poly::powmod(F, base, static_cast<unsigned long long>(std::abs(e)), P);
      };
      Poly val = poly::mulmod(F, power(unit_residue(g), a), power(unit_residue(f), -b), P);
      const int d = poly::degree(P);
      const std::uint64_t Q = ipow(F.order(), static_cast<unsigned>(d));
      Poly nm = poly::powmod(F, val, (Q - 1) / (F.order() - 1), P);
      if (poly::degree(nm) > 0) fail(ErrorCode::InvalidInput, "internal: norm not in the base field");
      norm = nm.empty() ? F.zero() : nm[0];
    }
    if ((static_cast<long long>(a) * b) % 2 != 0) norm = F.mul(norm, F.pow(F.neg(F.one()), v.degree()));
    product = F.mul(product, norm);
    rep.contributions.push_back({model.format(v), F.format(norm)});
  }
  rep.holds = product == F.one();
  return rep;
}

bool weil_reciprocity_check(const FiniteField& F, const RationalFunction& f, const RationalFunction& g) {
  return weil_reciprocity(F, f, g).holds;
}

ReciprocityReport local_surface_reciprocity(const BiLaurent& f, const BiLaurent& g) {
  const FieldPtr& fp = f.field_ptr();
  TwoLocalFieldK K2(fp, 16);
  ReciprocityReport rep;
  long long total = 0;
  for (int side = 0; side < 2; ++side) {
    const BiLaurent x = side == 0 ? f : f.swapped();
    const BiLaurent y = side == 0 ? g : g.swapped();
    auto res = milnor::residue_symbol(K2, milnor::SymbolSum<BiLaurent>::single({x, y}));
    Laurent r = milnor::collapse_degree1(K2.residue_field(), res);
    const int v = r.valuation();
    total += v;
    rep.contributions.push_back({side == 0 ? "(t)" : "(s)", std::to_string(v)});
  }
  rep.holds = total == 0;
  return rep;
}

bool local_surface_reciprocity_check(const BiLaurent& f, const BiLaurent& g) {
  return local_surface_reciprocity(f, g).holds;
}

ReciprocityReport local_surface_reciprocity(const SchemeModel& model, const SurfaceElement& f, const SurfaceElement& g) {
  const FiniteField& F = model.field();
  std::vector<SurfacePrime> support;
  for (const auto& x : {f, g}) {
    for (const auto& [p, e] : x.factors) {
      if (std::find(support.begin(), support.end(), p) == support.end()) support.push_back(p);
    }
  }
  ReciprocityReport rep;
  long long total = 0;
  for (const auto& p : support) {
    auto v_p = [&](const SurfaceElement& x) {
      int a = 0;
      for (const auto& [q, e] : x.factors) a += q == p ? e : 0;
      return a;
    };
    auto v_res = [&](const SurfaceElement& x) {
      long long v = 0;
      for (const auto& [q, e] : x.factors) {
        if (q != p) v += static_cast<long long>(e) * restrict_lowest(F, q, p).first;
      }
      return v;
    };
    const long long a = v_p(f), b = v_p(g);
    const long long v = a * v_res(g) - b * v_res(f);
    total += v;
    rep.contributions.push_back({prime_name(model, p), std::to_string(v)});
  }
  rep.holds = total == 0;
  return rep;
}

}  // namespace parshin::ideles
