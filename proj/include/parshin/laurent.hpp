#pragma once

// Truncated Laurent series over F_q in one variable. A nonzero element is
// x^v * (u_0 + u_1 x + ... + u_{N-1} x^{N-1} + O(x^N)) with u_0 != 0; the
// exact zero is a separate flagged value.
//
// Precision rules (N is always relative to the valuation):
//   product, quotient, inverse: min of the operand precisions
//   sum: the absolute precision is the min of the operands' absolute
//        precisions; leading cancellation lowers N accordingly, and a sum with
//        no certified nonzero coefficient raises PRECISION_EXHAUSTED.

#include <string>
#include <string_view>
#include <vector>

#include "parshin/fq.hpp"
#include "parshin/poly.hpp"
#include "parshin/rng.hpp"

namespace parshin {

inline constexpr int kDefaultPrecision = 32;

class Laurent {
 public:
  // Exact zero.
  Laurent(FieldPtr field, std::string var = "t");
  // x^v * unit, where unit[0] != 0 and N = unit.size().
  Laurent(FieldPtr field, int valuation, std::vector<FqElem> unit, std::string var = "t");

  static Laurent zero(FieldPtr field, std::string var = "t") { return Laurent(std::move(field), std::move(var)); }
  static Laurent constant(FieldPtr field, FqElem c, int precision = kDefaultPrecision, std::string var = "t");
  static Laurent monomial(FieldPtr field, FqElem c, int k, int precision = kDefaultPrecision, std::string var = "t");
  // Series of x^shift * num / den (den != 0).
  static Laurent from_rational(FieldPtr field, const Poly& num, const Poly& den, int shift = 0,
                               int precision = kDefaultPrecision, std::string var = "t");
  static Laurent random(FieldPtr field, Rng& rng, int min_val, int max_val, int precision, std::string var = "t");

  const FiniteField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const std::string& var() const { return var_; }
  bool is_zero() const { return zero_; }
  // ZERO_ELEMENT for the exact zero.
  int valuation() const;
  int precision() const;
  int absolute_precision() const { return valuation() + precision(); }
  const std::vector<FqElem>& unit_coeffs() const { return unit_; }
  FqElem leading() const;
  // Coefficient of x^k; PRECISION_EXHAUSTED beyond the absolute precision.
  FqElem coeff(int k) const;

  // (v, u) with *this = x^v * u and val(u) = 0.
  std::pair<int, Laurent> unit_decompose() const;
  Laurent truncate(int precision) const;

  Laurent operator+(const Laurent& b) const;
  Laurent operator-(const Laurent& b) const;
  Laurent operator-() const;
  Laurent operator*(const Laurent& b) const;
  Laurent operator/(const Laurent& b) const;
  Laurent inv() const;
  Laurent pow(long long k) const;
  Laurent scale(FqElem c) const;

  // The n-th root w of a principal unit (1 + O(x)) with w = 1 + O(x), for n
  // prime to the characteristic, to the element's precision.
  Laurent nth_root_principal(long long n) const;

  std::string format() const;
  static Laurent parse(FieldPtr field, std::string_view text, std::string var = "t",
                       int default_precision = kDefaultPrecision);

  // Structural equality: same value, valuation and precision.
  friend bool operator==(const Laurent& a, const Laurent& b);
  // Equality of the overlapping coefficient windows.
  bool agrees_with(const Laurent& b) const;

 private:
  void check_compatible(const Laurent& b) const;

  FieldPtr field_;
  std::string var_;
  bool zero_ = true;
  int val_ = 0;
  std::vector<FqElem> unit_;
};

}  // namespace parshin
