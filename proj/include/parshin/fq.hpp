#pragma once

// Finite fields F_q = F_p[g]/(m(g)), where m is the least monic irreducible
// of degree e (coefficients compared from the top down) whose root g
// generates F_q^x. Elements are encoded as integers sum c_i p^i for the
// polynomial sum c_i g^i. For e = 1, g is the least primitive root mod p.

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace parshin {

struct FqElem {
  std::uint32_t code = 0;

  bool is_zero() const { return code == 0; }
  friend auto operator<=>(const FqElem&, const FqElem&) = default;
};

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

class FiniteField {
 public:
  // q = p^e with p prime and q <= 2^16.
  FiniteField(std::uint32_t p, std::uint32_t e);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return e_; }
  std::uint32_t order() const { return q_; }
  // Coefficients of the modulus, low degree first, monic of degree e.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FqElem zero() const { return {0}; }
  FqElem one() const { return {1}; }
  FqElem from_int(std::int64_t v) const;
  // The fixed generator g; it generates F_q^x and is the base of dlog.
  FqElem generator() const;
  FqElem primitive() const { return generator(); }
  FqElem element(std::uint32_t code) const;

  FqElem add(FqElem a, FqElem b) const;
  FqElem sub(FqElem a, FqElem b) const;
  FqElem neg(FqElem a) const;
  FqElem mul(FqElem a, FqElem b) const;
  FqElem inv(FqElem a) const;  // DIVISION_BY_ZERO on 0
  FqElem div(FqElem a, FqElem b) const;
  FqElem pow(FqElem a, std::int64_t k) const;

  // Exponent k in [0, q-1) with primitive()^k = a; a != 0.
  std::uint32_t dlog(FqElem a) const;
  FqElem exp(std::int64_t k) const;

  std::vector<std::uint32_t> digits(FqElem a) const;
  FqElem from_digits(const std::vector<std::int64_t>& coeffs) const;

  // Canonical text form: polynomial in g, highest power first ("2*g^2+g+1").
  std::string format(FqElem a) const;
  FqElem parse(std::string_view text) const;

  friend bool operator==(const FiniteField& a, const FiniteField& b) { return a.p_ == b.p_ && a.e_ == b.e_; }

 private:
  std::uint32_t p_;
  std::uint32_t e_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;  // length q-1
  std::vector<std::uint32_t> log_;  // indexed by code, log_[0] unused
};

// Shared, immutable field instance for q (prime power <= 2^16).
FieldPtr finite_field(std::uint32_t q);

bool is_prime(std::uint64_t n);
// (p, e) with q = p^e, or throws UNSUPPORTED_FIELD.
std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint32_t q);

}  // namespace parshin
