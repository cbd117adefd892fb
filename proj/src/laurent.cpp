#include "parshin/laurent.hpp"

#include <algorithm>
#include <limits>

#include "parshin/error.hpp"
#include "parshin/parse.hpp"

namespace parshin {

Laurent::Laurent(FieldPtr field, std::string var) : field_(std::move(field)), var_(std::move(var)) {}

Laurent::Laurent(FieldPtr field, int valuation, std::vector<FqElem> unit, std::string var)
    : field_(std::move(field)), var_(std::move(var)), zero_(false), val_(valuation), unit_(std::move(unit)) {
  if (unit_.empty()) fail(ErrorCode::InvalidInput, "Laurent element needs positive precision");
  if (unit_[0].is_zero()) fail(ErrorCode::InvalidInput, "leading unit coefficient must be nonzero");
}

Laurent Laurent::constant(FieldPtr field, FqElem c, int precision, std::string var) {
  return monomial(std::move(field), c, 0, precision, std::move(var));
}

Laurent Laurent::monomial(FieldPtr field, FqElem c, int k, int precision, std::string var) {
  if (c.is_zero()) return Laurent(std::move(field), std::move(var));
  std::vector<FqElem> u(static_cast<std::size_t>(precision), field->zero());
  u[0] = c;
  return Laurent(std::move(field), k, std::move(u), std::move(var));
}

Laurent Laurent::from_rational(FieldPtr field, const Poly& num0, const Poly& den0, int shift, int precision,
                               std::string var) {
  const FiniteField& F = *field;
  Poly num = num0, den = den0;
  poly::trim(num);
  poly::trim(den);
  if (den.empty()) fail(ErrorCode::DivisionByZero, "rational function with zero denominator");
  if (num.empty()) return Laurent(std::move(field), std::move(var));
  int vn = 0, vd = 0;
  while (num[static_cast<std::size_t>(vn)].is_zero()) ++vn;
  while (den[static_cast<std::size_t>(vd)].is_zero()) ++vd;
  // Power series division of the shifted numerator and denominator.
  std::size_t N = static_cast<std::size_t>(precision);
  std::vector<FqElem> u(N, F.zero());
  FqElem d0inv = F.inv(den[static_cast<std::size_t>(vd)]);
  auto dcoef = [&](std::size_t k) {
    std::size_t i = k + static_cast<std::size_t>(vd);
    return i < den.size() ? den[i] : F.zero();
  };
  auto ncoef = [&](std::size_t k) {
    std::size_t i = k + static_cast<std::size_t>(vn);
    return i < num.size() ? num[i] : F.zero();
  };
  for (std::size_t k = 0; k < N; ++k) {
    FqElem acc = ncoef(k);
    for (std::size_t j = 0; j < k; ++j) acc = F.sub(acc, F.mul(u[j], dcoef(k - j)));
    u[k] = F.mul(acc, d0inv);
  }
  return Laurent(std::move(field), shift + vn - vd, std::move(u), std::move(var));
}

Laurent Laurent::random(FieldPtr field, Rng& rng, int min_val, int max_val, int precision, std::string var) {
  const FiniteField& F = *field;
  std::vector<FqElem> u(static_cast<std::size_t>(precision));
  u[0] = FqElem{static_cast<std::uint32_t>(1 + rng.below(F.order() - 1))};
  for (std::size_t i = 1; i < u.size(); ++i) u[i] = FqElem{static_cast<std::uint32_t>(rng.below(F.order()))};
  int v = static_cast<int>(rng.range(min_val, max_val));
  return Laurent(std::move(field), v, std::move(u), std::move(var));
}

int Laurent::valuation() const {
  if (zero_) fail(ErrorCode::ZeroElement, "valuation of zero");
  return val_;
}

int Laurent::precision() const {
  if (zero_) return std::numeric_limits<int>::max();
  return static_cast<int>(unit_.size());
}

FqElem Laurent::leading() const {
  if (zero_) fail(ErrorCode::ZeroElement, "leading coefficient of zero");
  return unit_[0];
}

FqElem Laurent::coeff(int k) const {
  if (zero_) return field_->zero();
  if (k < val_) return field_->zero();
  if (k >= val_ + precision()) fail(ErrorCode::PrecisionExhausted, "coefficient beyond tracked precision");
  return unit_[static_cast<std::size_t>(k - val_)];
}

std::pair<int, Laurent> Laurent::unit_decompose() const {
  if (zero_) fail(ErrorCode::ZeroElement, "unit decomposition of zero");
  return {val_, Laurent(field_, 0, unit_, var_)};
}

Laurent Laurent::truncate(int precision) const {
  if (zero_ || precision >= this->precision()) return *this;
  if (precision <= 0) fail(ErrorCode::InvalidInput, "precision must be positive");
  return Laurent(field_, val_, std::vector<FqElem>(unit_.begin(), unit_.begin() + precision), var_);
}

void Laurent::check_compatible(const Laurent& b) const {
  if (!(*field_ == *b.field_) || var_ != b.var_) fail(ErrorCode::InvalidInput, "Laurent operands from different fields");
}

Laurent Laurent::operator+(const Laurent& b) const {
  check_compatible(b);
  if (zero_) return b;
  if (b.zero_) return *this;
  const FiniteField& F = *field_;
  int lo = std::min(val_, b.val_);
  int abs_prec = std::min(absolute_precision(), b.absolute_precision());
  int first = abs_prec;
  std::vector<FqElem> sum;
  for (int k = lo; k < abs_prec; ++k) {
    FqElem c = F.add(coeff(k), b.coeff(k));
    if (first == abs_prec) {
      if (c.is_zero()) continue;
      first = k;
    }
    sum.push_back(c);
  }
  if (sum.empty()) fail(ErrorCode::PrecisionExhausted, "sum cancels to within tracked precision");
  return Laurent(field_, first, std::move(sum), var_);
}

Laurent Laurent::operator-() const {
  if (zero_) return *this;
  std::vector<FqElem> u(unit_.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = field_->neg(unit_[i]);
  return Laurent(field_, val_, std::move(u), var_);
}

Laurent Laurent::operator-(const Laurent& b) const { return *this + (-b); }

Laurent Laurent::operator*(const Laurent& b) const {
  check_compatible(b);
  if (zero_) return *this;
  if (b.zero_) return b;
  const FiniteField& F = *field_;
  std::size_t N = std::min(unit_.size(), b.unit_.size());
  std::vector<FqElem> u(N, F.zero());
  for (std::size_t i = 0; i < N; ++i) {
    if (unit_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < N; ++j) u[i + j] = F.add(u[i + j], F.mul(unit_[i], b.unit_[j]));
  }
  return Laurent(field_, val_ + b.val_, std::move(u), var_);
}

Laurent Laurent::inv() const {
  if (zero_) fail(ErrorCode::DivisionByZero, "inverse of zero Laurent element");
  const FiniteField& F = *field_;
  std::size_t N = unit_.size();
  std::vector<FqElem> w(N, F.zero());
  FqElem u0inv = F.inv(unit_[0]);
  w[0] = u0inv;
  for (std::size_t k = 1; k < N; ++k) {
    FqElem acc = F.zero();
    for (std::size_t j = 1; j <= k; ++j) acc = F.add(acc, F.mul(unit_[j], w[k - j]));
    w[k] = F.neg(F.mul(acc, u0inv));
  }
  return Laurent(field_, -val_, std::move(w), var_);
}

Laurent Laurent::operator/(const Laurent& b) const { return *this * b.inv(); }

Laurent Laurent::pow(long long k) const {
  if (zero_) {
    if (k < 0) fail(ErrorCode::DivisionByZero, "negative power of zero");
    if (k == 0) return constant(field_, field_->one(), kDefaultPrecision, var_);
    return *this;
  }
  Laurent base = k < 0 ? inv() : *this;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Laurent r = constant(field_, field_->one(), precision(), var_);
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

Laurent Laurent::scale(FqElem c) const {
  if (c.is_zero()) return zero(field_, var_);
  if (zero_) return *this;
  std::vector<FqElem> u(unit_.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = field_->mul(unit_[i], c);
  return Laurent(field_, val_, std::move(u), var_);
}

Laurent Laurent::nth_root_principal(long long n) const {
  const FiniteField& F = *field_;
  if (zero_ || val_ != 0 || unit_[0] != F.one()) fail(ErrorCode::InvalidInput, "n-th root needs a principal unit");
  if (n <= 0) fail(ErrorCode::InvalidInput, "root index must be positive");
  FqElem nn = F.from_int(n % static_cast<long long>(F.characteristic()));
  if (nn.is_zero()) fail(ErrorCode::WildCoefficients, "root index divisible by the characteristic");
  FqElem ninv = F.inv(nn);
  std::size_t N = unit_.size();
  std::vector<FqElem> w(N, F.zero());
  w[0] = F.one();
  // w_k is determined by the x^k coefficient of w^n, which is n*w_k plus
  // terms involving only w_0..w_{k-1}.
  for (std::size_t k = 1; k < N; ++k) {
    Laurent partial(field_, 0, std::vector<FqElem>(w.begin(), w.begin() + static_cast<long>(k + 1)), var_);
    FqElem ck = partial.pow(n).unit_[k];
    w[k] = F.mul(F.sub(unit_[k], ck), ninv);
  }
  return Laurent(field_, 0, std::move(w), var_);
}

std::string Laurent::format() const {
  if (zero_) return "0";
  const FiniteField& F = *field_;
  std::string body;
  for (std::size_t i = 0; i < unit_.size(); ++i) {
    if (unit_[i].is_zero()) continue;
    std::string c = F.format(unit_[i]);
    bool compound = c.find_first_of("+g") != std::string::npos;
    std::string term;
    if (i == 0) {
      term = compound ? "(" + c + ")" : c;
    } else {
      if (unit_[i] != F.one()) term = (compound ? "(" + c + ")" : c) + "*";
      term += var_;
      if (i > 1) term += "^" + std::to_string(i);
    }
    body += term + " + ";
  }
  body += "O(" + var_ + "^" + std::to_string(unit_.size()) + ")";
  if (val_ == 0) return body;
  std::string prefix = val_ == 1 ? var_ : var_ + "^" + std::to_string(val_);
  return prefix + "*(" + body + ")";
}

Laurent Laurent::parse(FieldPtr field, std::string_view text, std::string var, int default_precision) {
  auto expr = text::parse_expression(text, *field, {var});
  if (expr.terms.empty()) {
    if (expr.big_o) fail(ErrorCode::PrecisionExhausted, "element has no certified nonzero coefficient");
    return Laurent(std::move(field), std::move(var));
  }
  int v = expr.terms.begin()->first[0];
  int top = expr.terms.rbegin()->first[0];
  int abs_prec = expr.big_o ? *expr.big_o : v + std::max(default_precision, top - v + 1);
  if (v >= abs_prec) fail(ErrorCode::PrecisionExhausted, "element has no certified nonzero coefficient");
  std::vector<FqElem> u(static_cast<std::size_t>(abs_prec - v), field->zero());
  for (const auto& [exp, c] : expr.terms) {
    if (exp[0] < abs_prec) u[static_cast<std::size_t>(exp[0] - v)] = c;
  }
  return Laurent(std::move(field), v, std::move(u), std::move(var));
}

bool operator==(const Laurent& a, const Laurent& b) {
  if (!(*a.field_ == *b.field_) || a.var_ != b.var_ || a.zero_ != b.zero_) return false;
  if (a.zero_) return true;
  return a.val_ == b.val_ && a.unit_ == b.unit_;
}

bool Laurent::agrees_with(const Laurent& b) const {
  if (zero_ || b.zero_) return zero_ == b.zero_;
  if (val_ != b.val_) return false;
  std::size_t N = std::min(unit_.size(), b.unit_.size());
  return std::equal(unit_.begin(), unit_.begin() + static_cast<long>(N), b.unit_.begin());
}

}  // namespace parshin
