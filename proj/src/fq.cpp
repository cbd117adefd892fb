#include "parshin/fq.hpp"

#include <map>
#include <mutex>

#include "parshin/error.hpp"
#include "parshin/parse.hpp"

namespace parshin {
namespace {

using Poly = std::vector<std::uint32_t>;  // low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  std::uint64_t lead_inv = 1;
  {
    std::uint64_t base = m.back() % p, e = p - 2;
    while (e) {
      if (e & 1) lead_inv = lead_inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
  }
  while (a.size() > dm) {
    std::size_t shift = a.size() - 1 - dm;
    std::uint64_t factor = a.back() * lead_inv % p;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - factor * m[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
  }
  return poly_mod(std::move(c), m, p);
}

Poly decode(std::uint32_t code, std::uint32_t p, std::uint32_t len) {
  Poly a(len, 0);
  for (std::uint32_t i = 0; i < len; ++i) {
    a[i] = code % p;
    code /= p;
  }
  trim(a);
  return a;
}

std::uint32_t encode(const Poly& a, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
    std::uint32_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint32_t low = 0; low < count; ++low) {
      Poly g = decode(low, p, d);
      g.resize(d + 1, 0);
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint32_t q) {
  if (q < 2 || q > (1u << 16)) fail(ErrorCode::UnsupportedField, "field order out of range: " + std::to_string(q));
  std::uint32_t p = 2;
  while (q % p != 0) ++p;
  std::uint32_t e = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) fail(ErrorCode::UnsupportedField, std::to_string(q) + " is not a prime power");
  return {p, e};
}

FiniteField::FiniteField(std::uint32_t p, std::uint32_t e) : p_(p), e_(e), q_(1) {
  if (!is_prime(p) || e == 0) fail(ErrorCode::UnsupportedField, "invalid field parameters");
  for (std::uint32_t i = 0; i < e; ++i) {
    q_ *= p;
    if (q_ > (1u << 16)) fail(ErrorCode::UnsupportedField, "field too large");
  }
  // The modulus is the least monic irreducible whose root is primitive, so
  // the generator g is also the base of discrete logarithms. For e = 1 the
  // modulus is g - c with c the least primitive root mod p.
  std::vector<std::uint32_t> table;
  auto try_power_table = [&](const Poly& g, const Poly& m) {
    table.assign(q_ - 1, 0);
    std::vector<char> seen(q_, 0);
    Poly cur = {1};
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      std::uint32_t code = encode(cur, p_);
      if (seen[code]) return false;
      seen[code] = 1;
      table[k] = code;
      cur = poly_mulmod(cur, g, m, p_);
    }
    return true;
  };
  bool found = false;
  if (e_ == 1) {
    for (std::uint32_t c = 1; c < p_ && !found; ++c) {
      if (try_power_table(Poly{c}, Poly{0, 1})) {
        modulus_ = {(p_ - c) % p_, 1};
        found = true;
      }
    }
  } else {
    std::uint32_t count = q_;
    for (std::uint32_t low = 0; low < count && !found; ++low) {
      Poly f = decode(low, p_, e_);
      f.resize(e_ + 1, 0);
      f[e_] = 1;
      if (f[0] == 0 || !is_irreducible(f, p_)) continue;
      if (try_power_table(Poly{0, 1}, f)) {
        modulus_ = f;
        found = true;
      }
    }
  }
  if (!found) fail(ErrorCode::UnsupportedField, "no primitive modulus found");
  exp_ = std::move(table);
  log_.assign(q_, 0);
  for (std::uint32_t k = 0; k < q_ - 1; ++k) log_[exp_[k]] = k;
}

FqElem FiniteField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return FqElem{static_cast<std::uint32_t>(r)};
}

FqElem FiniteField::generator() const { return FqElem{exp_[1 % (q_ - 1)]}; }

FqElem FiniteField::element(std::uint32_t code) const {
  if (code >= q_) fail(ErrorCode::InvalidInput, "element code out of range");
  return FqElem{code};
}

FqElem FiniteField::add(FqElem a, FqElem b) const {
  if (e_ == 1) return FqElem{(a.code + b.code) % p_};
  if (p_ == 2) return FqElem{a.code ^ b.code};
  std::uint32_t out = 0, scale = 1, x = a.code, y = b.code;
  for (std::uint32_t i = 0; i < e_; ++i) {
    out += ((x % p_ + y % p_) % p_) * scale;
    x /= p_;
    y /= p_;
    scale *= p_;
  }
  return FqElem{out};
}

FqElem FiniteField::neg(FqElem a) const {
  if (e_ == 1) return FqElem{(p_ - a.code) % p_};
  if (p_ == 2) return a;
  std::uint32_t out = 0, scale = 1, x = a.code;
  for (std::uint32_t i = 0; i < e_; ++i) {
    out += ((p_ - x % p_) % p_) * scale;
    x /= p_;
    scale *= p_;
  }
  return FqElem{out};
}

FqElem FiniteField::sub(FqElem a, FqElem b) const { return add(a, neg(b)); }

FqElem FiniteField::mul(FqElem a, FqElem b) const {
  if (a.is_zero() || b.is_zero()) return zero();
  std::uint32_t k = log_[a.code] + log_[b.code];
  if (k >= q_ - 1) k -= q_ - 1;
  return FqElem{exp_[k]};
}

FqElem FiniteField::inv(FqElem a) const {
  if (a.is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero in F_" + std::to_string(q_));
  std::uint32_t k = log_[a.code];
  return FqElem{exp_[k == 0 ? 0 : q_ - 1 - k]};
}

FqElem FiniteField::div(FqElem a, FqElem b) const { return mul(a, inv(b)); }

FqElem FiniteField::pow(FqElem a, std::int64_t k) const {
  if (a.is_zero()) {
    if (k < 0) fail(ErrorCode::DivisionByZero, "negative power of zero");
    return k == 0 ? one() : zero();
  }
  std::int64_t m = static_cast<std::int64_t>(q_ - 1);
  std::int64_t r = (static_cast<std::int64_t>(log_[a.code]) * (k % m)) % m;
  if (r < 0) r += m;
  return FqElem{exp_[static_cast<std::size_t>(r)]};
}

std::uint32_t FiniteField::dlog(FqElem a) const {
  if (a.is_zero()) fail(ErrorCode::ZeroElement, "discrete log of zero");
  return log_[a.code];
}

FqElem FiniteField::exp(std::int64_t k) const {
  std::int64_t m = static_cast<std::int64_t>(q_ - 1);
  std::int64_t r = k % m;
  if (r < 0) r += m;
  return FqElem{exp_[static_cast<std::size_t>(r)]};
}

std::vector<std::uint32_t> FiniteField::digits(FqElem a) const {
  std::vector<std::uint32_t> d(e_);
  std::uint32_t x = a.code;
  for (std::uint32_t i = 0; i < e_; ++i) {
    d[i] = x % p_;
    x /= p_;
  }
  return d;
}

FqElem FiniteField::from_digits(const std::vector<std::int64_t>& coeffs) const {
  Poly a(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::int64_t r = coeffs[i] % static_cast<std::int64_t>(p_);
    a[i] = static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  return FqElem{encode(poly_mod(a, modulus_, p_), p_)};
}

std::string FiniteField::format(FqElem a) const {
  if (a.is_zero()) return "0";
  auto d = digits(a);
  std::string out;
  for (std::size_t i = d.size(); i-- > 0;) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(d[i]);
      continue;
    }
    if (d[i] != 1) out += std::to_string(d[i]) + "*";
    out += "g";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

FqElem FiniteField::parse(std::string_view text) const {
  auto expr = text::parse_expression(text, *this, {});
  if (expr.big_o) fail(ErrorCode::ParseError, "unexpected O-term in field element");
  if (expr.terms.empty()) return zero();
  return expr.terms.begin()->second;
}

FieldPtr finite_field(std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::uint32_t, FieldPtr> registry;
  auto [p, e] = prime_power(q);
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(q);
  if (it != registry.end()) return it->second;
  auto field = std::make_shared<const FiniteField>(p, e);
  registry.emplace(q, field);
  return field;
}

}  // namespace parshin
