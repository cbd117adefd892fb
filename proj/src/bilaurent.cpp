#include "parshin/bilaurent.hpp"

#include <climits>
#include <tuple>

#include "parshin/error.hpp"
#include "parshin/parse.hpp"

namespace parshin {

FqElem BiPoly::constant_term() const {
  auto it = terms.find({0, 0});
  return it == terms.end() ? FqElem{0} : it->second;
}

namespace bipoly {

BiPoly one(const FiniteField& F) {
  BiPoly p;
  p.terms[{0, 0}] = F.one();
  return p;
}

BiPoly add(const FiniteField& F, const BiPoly& a, const BiPoly& b) {
  BiPoly out = a;
  for (const auto& [k, c] : b.terms) {
    auto it = out.terms.find(k);
    FqElem next = it == out.terms.end() ? c : F.add(it->second, c);
    if (next.is_zero()) out.terms.erase(k);
    else out.terms[k] = next;
  }
  return out;
}

BiPoly mul(const FiniteField& F, const BiPoly& a, const BiPoly& b) {
  BiPoly out;
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      std::pair<int, int> k{ka.first + kb.first, ka.second + kb.second};
      auto it = out.terms.find(k);
      FqElem prod = F.mul(ca, cb);
      FqElem next = it == out.terms.end() ? prod : F.add(it->second, prod);
      if (next.is_zero()) out.terms.erase(k);
      else out.terms[k] = next;
    }
  }
  return out;
}

BiPoly swap_vars(const BiPoly& a) {
  BiPoly out;
  for (const auto& [k, c] : a.terms) out.terms[{k.second, k.first}] = c;
  return out;
}

Poly at_t_zero(const BiPoly& a) {
  Poly p;
  for (const auto& [k, c] : a.terms) {
    if (k.second != 0) continue;
    if (p.size() <= static_cast<std::size_t>(k.first)) p.resize(static_cast<std::size_t>(k.first) + 1, FqElem{0});
    p[static_cast<std::size_t>(k.first)] = c;
  }
  poly::trim(p);
  return p;
}

namespace {

std::string power_text(const char* var, int e) {
  if (e == 1) return var;
  return std::string(var) + "^" + std::to_string(e);
}

}  // namespace

std::string format(const FiniteField& F, const BiPoly& a) {
  if (a.is_zero()) return "0";
  // Ordered by t-degree, then s-degree.
  std::map<std::pair<int, int>, FqElem> ordered;
  for (const auto& [k, c] : a.terms) ordered[{k.second, k.first}] = c;
  std::string out;
  for (const auto& [k, c] : ordered) {
    int j = k.first, i = k.second;
    std::vector<std::string> parts;
    std::string cs = F.format(c);
    bool compound = cs.find_first_of("+g") != std::string::npos;
    if (c != F.one() || (i == 0 && j == 0)) parts.push_back(compound ? "(" + cs + ")" : cs);
    if (i != 0) parts.push_back(power_text("s", i));
    if (j != 0) parts.push_back(power_text("t", j));
    if (!out.empty()) out += " + ";
    for (std::size_t p = 0; p < parts.size(); ++p) out += (p ? "*" : "") + parts[p];
  }
  return out;
}

}  // namespace bipoly

BiLaurent::BiLaurent(FieldPtr field, int a, int b, BiPoly U, BiPoly V)
    : field_(std::move(field)), a_(a), b_(b), U_(std::move(U)), V_(std::move(V)) {
  if (U_.constant_term().is_zero() || V_.constant_term().is_zero()) {
    fail(ErrorCode::UnitConstantRequired, "unit factor must have nonzero constant term");
  }
  for (const auto* p : {&U_, &V_}) {
    for (const auto& [k, c] : p->terms) {
      if (k.first < 0 || k.second < 0) fail(ErrorCode::InvalidInput, "unit factor must be a polynomial");
    }
  }
}

BiLaurent::BiLaurent(FieldPtr field, int a, int b, BiPoly U)
    : BiLaurent(field, a, b, std::move(U), bipoly::one(*field)) {}

BiLaurent BiLaurent::one(FieldPtr field) { return constant(std::move(field), FqElem{1}); }

BiLaurent BiLaurent::constant(FieldPtr field, FqElem c) {
  BiPoly U;
  if (!c.is_zero()) U.terms[{0, 0}] = c;
  return BiLaurent(std::move(field), 0, 0, std::move(U));
}

BiLaurent BiLaurent::s(FieldPtr field) {
  BiPoly U = bipoly::one(*field);
  return BiLaurent(std::move(field), 1, 0, std::move(U));
}

BiLaurent BiLaurent::t(FieldPtr field) {
  BiPoly U = bipoly::one(*field);
  return BiLaurent(std::move(field), 0, 1, std::move(U));
}

BiLaurent BiLaurent::random(FieldPtr field, Rng& rng, int max_exp, int max_deg, bool with_denominator) {
  const FiniteField& F = *field;
  auto random_unit = [&]() {
    BiPoly p;
    p.terms[{0, 0}] = FqElem{static_cast<std::uint32_t>(1 + rng.below(F.order() - 1))};
    for (int i = 0; i <= max_deg; ++i) {
      for (int j = 0; i + j <= max_deg; ++j) {
        if (i == 0 && j == 0) continue;
        FqElem c{static_cast<std::uint32_t>(rng.below(F.order()))};
        if (!c.is_zero()) p.terms[{i, j}] = c;
      }
    }
    return p;
  };
  int a = static_cast<int>(rng.range(-max_exp, max_exp));
  int b = static_cast<int>(rng.range(-max_exp, max_exp));
  BiPoly U = random_unit();
  BiPoly V = with_denominator && rng.coin() ? random_unit() : bipoly::one(F);
  return BiLaurent(std::move(field), a, b, std::move(U), std::move(V));
}

BiLaurent BiLaurent::operator*(const BiLaurent& o) const {
  if (!(*field_ == *o.field_)) fail(ErrorCode::InvalidInput, "operands from different fields");
  const FiniteField& F = *field_;
  BiPoly V = V_ == bipoly::one(F) ? o.V_ : (o.V_ == bipoly::one(F) ? V_ : bipoly::mul(F, V_, o.V_));
  return BiLaurent(field_, a_ + o.a_, b_ + o.b_, bipoly::mul(F, U_, o.U_), std::move(V));
}

BiLaurent BiLaurent::inv() const { return BiLaurent(field_, -a_, -b_, V_, U_); }

BiLaurent BiLaurent::pow(long long k) const {
  BiLaurent base = k < 0 ? inv() : *this;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  BiLaurent r = one(field_);
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

BiLaurent BiLaurent::scale(FqElem c) const { return *this * constant(field_, c); }

BiLaurent BiLaurent::swapped() const {
  return BiLaurent(field_, b_, a_, bipoly::swap_vars(U_), bipoly::swap_vars(V_));
}

BiLaurent::Tower BiLaurent::residue_tower(int precision) const {
  const FiniteField& F = *field_;
  Poly u0 = bipoly::at_t_zero(U_);
  Poly v0 = bipoly::at_t_zero(V_);
  Laurent res = Laurent::from_rational(field_, u0, v0, a_, precision, "s");
  return Tower{b_, res, a_, F.div(U_.constant_term(), V_.constant_term())};
}

std::vector<std::optional<Laurent>> BiLaurent::expand(int n_t, int n_s) const {
  const FiniteField& F = *field_;
  // W = U / V as a power series truncated at t^n_t and s^n_s (both units in F_q[[s,t]]).
  auto coeff = [](const BiPoly& p, int i, int j) {
    auto it = p.terms.find({i, j});
    return it == p.terms.end() ? FqElem{0} : it->second;
  };
  std::vector<std::vector<FqElem>> W(static_cast<std::size_t>(n_t), std::vector<FqElem>(static_cast<std::size_t>(n_s), F.zero()));
  FqElem v00inv = F.inv(V_.constant_term());
  for (int j = 0; j < n_t; ++j) {
    for (int i = 0; i < n_s; ++i) {
      FqElem acc = coeff(U_, i, j);
      for (const auto& [k, c] : V_.terms) {
        if (k == std::pair<int, int>{0, 0} || k.first > i || k.second > j) continue;
        acc = F.sub(acc, F.mul(c, W[static_cast<std::size_t>(j - k.second)][static_cast<std::size_t>(i - k.first)]));
      }
      W[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = F.mul(acc, v00inv);
    }
  }
  std::vector<std::optional<Laurent>> out;
  for (int j = 0; j < n_t; ++j) {
    const auto& row = W[static_cast<std::size_t>(j)];
    int first = 0;
    while (first < n_s && row[static_cast<std::size_t>(first)].is_zero()) ++first;
    if (first == n_s) {
      out.push_back(std::nullopt);
      continue;
    }
    std::vector<FqElem> u(row.begin() + first, row.end());
    out.push_back(Laurent(field_, a_ + first, std::move(u), "s"));
  }
  return out;
}

bool operator==(const BiLaurent& x, const BiLaurent& y) {
  if (!(*x.field_ == *y.field_) || x.a_ != y.a_ || x.b_ != y.b_) return false;
  const FiniteField& F = *x.field_;
  return bipoly::mul(F, x.U_, y.V_) == bipoly::mul(F, y.U_, x.V_);
}

std::string BiLaurent::format() const {
  const FiniteField& F = *field_;
  std::string out;
  if (a_ != 0) out += a_ == 1 ? "s*" : "s^" + std::to_string(a_) + "*";
  if (b_ != 0) out += b_ == 1 ? "t*" : "t^" + std::to_string(b_) + "*";
  out += "(" + bipoly::format(F, U_) + ")";
  if (!(V_ == bipoly::one(F))) out += "/(" + bipoly::format(F, V_) + ")";
  return out;
}

namespace {

// Splits a Laurent polynomial in s, t into s^a t^b * P with P a polynomial.
std::tuple<int, int, BiPoly> monomial_part(const text::Expression& e) {
  if (e.terms.empty()) fail(ErrorCode::ZeroElement, "zero is not in the multiplicative group");
  int a = INT32_MAX, b = INT32_MAX;
  for (const auto& [k, c] : e.terms) {
    a = std::min(a, k[0]);
    b = std::min(b, k[1]);
  }
  BiPoly p;
  for (const auto& [k, c] : e.terms) p.terms[{k[0] - a, k[1] - b}] = c;
  return {a, b, p};
}

}  // namespace

BiLaurent BiLaurent::parse(FieldPtr field, std::string_view text) {
  int depth = 0;
  std::size_t slash = std::string_view::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == '/' && depth == 0) {
      if (slash != std::string_view::npos) fail(ErrorCode::ParseError, "more than one '/'");
      slash = i;
    }
  }
  std::vector<std::string> vars = {"s", "t"};
  auto num = text::parse_expression(text.substr(0, slash), *field, vars);
  if (num.big_o) fail(ErrorCode::ExactFormRequired, "two-dimensional elements must be exact");
  auto [a, b, U] = monomial_part(num);
  BiPoly V = bipoly::one(*field);
  if (slash != std::string_view::npos) {
    auto den = text::parse_expression(text.substr(slash + 1), *field, vars);
    if (den.big_o) fail(ErrorCode::ExactFormRequired, "two-dimensional elements must be exact");
    auto [da, db, Vp] = monomial_part(den);
    a -= da;
    b -= db;
    V = std::move(Vp);
  }
  return BiLaurent(std::move(field), a, b, std::move(U), std::move(V));
}

}  // namespace parshin
