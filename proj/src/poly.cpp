#include "parshin/poly.hpp"

#include <algorithm>

#include "parshin/error.hpp"
#include "parshin/parse.hpp"

namespace parshin::poly {

void trim(Poly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

FqElem leading(const Poly& a) { return a.empty() ? FqElem{0} : a.back(); }

Poly constant(const FiniteField&, FqElem c) {
  if (c.is_zero()) return {};
  return {c};
}

Poly monomial(const FiniteField& F, FqElem c, int k) {
  if (c.is_zero()) return {};
  Poly a(static_cast<std::size_t>(k) + 1, F.zero());
  a.back() = c;
  return a;
}

Poly variable(const FiniteField& F) { return monomial(F, F.one(), 1); }

Poly add(const FiniteField& F, const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < c.size(); ++i) {
    FqElem x = i < a.size() ? a[i] : F.zero();
    FqElem y = i < b.size() ? b[i] : F.zero();
    c[i] = F.add(x, y);
  }
  trim(c);
  return c;
}

Poly neg(const FiniteField& F, const Poly& a) {
  Poly c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = F.neg(a[i]);
  return c;
}

Poly sub(const FiniteField& F, const Poly& a, const Poly& b) { return add(F, a, neg(F, b)); }

Poly scale(const FiniteField& F, const Poly& a, FqElem c) {
  if (c.is_zero()) return {};
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  return r;
}

Poly mul(const FiniteField& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
  }
  trim(c);
  return c;
}

Poly pow(const FiniteField& F, const Poly& a, unsigned k) {
  Poly r = {F.one()};
  Poly base = a;
  while (k) {
    if (k & 1) r = mul(F, r, base);
    k >>= 1;
    if (k) base = mul(F, base, base);
  }
  return r;
}

std::pair<Poly, Poly> divmod(const FiniteField& F, const Poly& a, const Poly& b) {
  if (b.empty()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  Poly q(r.size() - b.size() + 1, F.zero());
  FqElem lead_inv = F.inv(b.back());
  while (r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    FqElem f = F.mul(r.back(), lead_inv);
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = F.sub(r[shift + i], F.mul(f, b[i]));
    trim(r);
  }
  trim(q);
  return {q, r};
}

Poly mod(const FiniteField& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

Poly monic(const FiniteField& F, const Poly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

Poly gcd(const FiniteField& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

Poly mulmod(const FiniteField& F, const Poly& a, const Poly& b, const Poly& m) { return mod(F, mul(F, a, b), m); }

Poly powmod(const FiniteField& F, Poly a, unsigned long long k, const Poly& m) {
  Poly r = mod(F, {F.one()}, m);
  a = mod(F, a, m);
  while (k) {
    if (k & 1) r = mulmod(F, r, a, m);
    k >>= 1;
    if (k) a = mulmod(F, a, a, m);
  }
  return r;
}

Poly invmod(const FiniteField& F, const Poly& a, const Poly& m) {
  // Extended Euclid tracking the coefficient of a.
  Poly r0 = m, r1 = mod(F, a, m);
  Poly s0 = {}, s1 = {F.one()};
  while (!r1.empty()) {
    auto [q, r] = divmod(F, r0, r1);
    Poly s = sub(F, s0, mul(F, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (degree(r0) != 0) fail(ErrorCode::DivisionByZero, "polynomial not invertible modulo " + format(F, m));
  return mod(F, scale(F, s0, F.inv(r0[0])), m);
}

FqElem eval(const FiniteField& F, const Poly& a, FqElem x) {
  FqElem r = F.zero();
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

Poly reverse(const Poly& a, int len) {
  Poly r(static_cast<std::size_t>(len) + 1, FqElem{0});
  for (std::size_t i = 0; i < a.size(); ++i) r[static_cast<std::size_t>(len) - i] = a[i];
  trim(r);
  return r;
}

bool is_irreducible(const FiniteField& F, const Poly& f) {
  int d = degree(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  Poly x = variable(F);
  Poly h = x;
  const unsigned long long q = F.order();
  for (int i = 1; i <= d / 2; ++i) {
    h = powmod(F, h, q, f);
    if (degree(gcd(F, sub(F, h, x), f)) != 0) return false;
  }
  return true;
}

std::vector<Poly> monic_polys(const FiniteField& F, int d) {
  std::vector<Poly> out;
  if (d < 0) return out;
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= F.order();
  out.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Poly a(static_cast<std::size_t>(d) + 1);
    std::size_t x = idx;
    for (int i = 0; i < d; ++i) {
      a[static_cast<std::size_t>(i)] = FqElem{static_cast<std::uint32_t>(x % F.order())};
      x /= F.order();
    }
    a[static_cast<std::size_t>(d)] = F.one();
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Poly> monic_irreducibles(const FiniteField& F, int d) {
  std::vector<Poly> out;
  for (auto& f : monic_polys(F, d)) {
    if (is_irreducible(F, f)) out.push_back(std::move(f));
  }
  return out;
}

Factorization factor(const FiniteField& F, const Poly& a0) {
  Poly a = a0;
  trim(a);
  if (a.empty()) fail(ErrorCode::ZeroElement, "factorization of zero");
  Factorization out{a.back(), {}};
  a = monic(F, a);
  for (int d = 1; degree(a) > 0; ++d) {
    if (2 * d > degree(a)) {
      out.factors.push_back({a, 1});
      break;
    }
    for (const auto& p : monic_irreducibles(F, d)) {
      int mult = 0;
      for (;;) {
        auto [q, r] = divmod(F, a, p);
        if (!r.empty()) break;
        a = std::move(q);
        ++mult;
      }
      if (mult) out.factors.push_back({p, mult});
    }
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) { return less(x.first, y.first); });
  return out;
}

bool less(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i].code != b[i].code) return a[i].code < b[i].code;
  }
  return false;
}

namespace {

// Coefficients print bare when they are plain integers, parenthesised otherwise.
std::string coeff_text(const FiniteField& F, FqElem c) {
  std::string s = F.format(c);
  if (s.find_first_of("+g") != std::string::npos) return "(" + s + ")";
  return s;
}

}  // namespace

std::string format(const FiniteField& F, const Poly& a, const std::string& var) {
  if (a.empty()) return "0";
  std::string out;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i].is_zero()) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += coeff_text(F, a[i]);
      continue;
    }
    if (a[i] != F.one()) out += coeff_text(F, a[i]) + "*";
    out += var;
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

Poly parse(const FiniteField& F, std::string_view text, const std::string& var) {
  auto expr = text::parse_expression(text, F, {var});
  if (expr.big_o) fail(ErrorCode::ParseError, "unexpected O-term in polynomial");
  Poly a;
  for (const auto& [exp, c] : expr.terms) {
    if (exp[0] < 0) fail(ErrorCode::ParseError, "negative exponent in polynomial");
    std::size_t k = static_cast<std::size_t>(exp[0]);
    if (a.size() <= k) a.resize(k + 1, F.zero());
    a[k] = c;
  }
  trim(a);
  return a;
}

}  // namespace parshin::poly
