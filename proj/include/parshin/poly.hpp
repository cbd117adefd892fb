#pragma once

// Dense univariate polynomials over F_q, stored low degree first with no
// trailing zeros (the zero polynomial is empty).

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parshin/fq.hpp"

namespace parshin {

using Poly = std::vector<FqElem>;

namespace poly {

void trim(Poly& a);
int degree(const Poly& a);  // -1 for zero
FqElem leading(const Poly& a);
Poly constant(const FiniteField& F, FqElem c);
Poly monomial(const FiniteField& F, FqElem c, int k);
Poly variable(const FiniteField& F);

Poly add(const FiniteField& F, const Poly& a, const Poly& b);
Poly sub(const FiniteField& F, const Poly& a, const Poly& b);
Poly neg(const FiniteField& F, const Poly& a);
Poly scale(const FiniteField& F, const Poly& a, FqElem c);
Poly mul(const FiniteField& F, const Poly& a, const Poly& b);
Poly pow(const FiniteField& F, const Poly& a, unsigned k);
// Quotient and remainder; DIVISION_BY_ZERO for b = 0.
std::pair<Poly, Poly> divmod(const FiniteField& F, const Poly& a, const Poly& b);
Poly mod(const FiniteField& F, const Poly& a, const Poly& b);
Poly monic(const FiniteField& F, const Poly& a);
Poly gcd(const FiniteField& F, Poly a, Poly b);  // monic (or zero)
Poly mulmod(const FiniteField& F, const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const FiniteField& F, Poly a, unsigned long long k, const Poly& m);
// Inverse of a modulo m, which must be coprime to it.
Poly invmod(const FiniteField& F, const Poly& a, const Poly& m);
FqElem eval(const FiniteField& F, const Poly& a, FqElem x);
// t^len * a(1/t) truncated to the given length (len >= deg a).
Poly reverse(const Poly& a, int len);

bool is_irreducible(const FiniteField& F, const Poly& f);
// All monic polynomials of exact degree d in canonical order.
std::vector<Poly> monic_polys(const FiniteField& F, int d);
// Monic irreducibles of exact degree d in canonical order.
std::vector<Poly> monic_irreducibles(const FiniteField& F, int d);

struct Factorization {
  FqElem unit;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, multiplicity
};
Factorization factor(const FiniteField& F, const Poly& a);

// Canonical order: degree, then coefficients from the top down by code.
bool less(const Poly& a, const Poly& b);

std::string format(const FiniteField& F, const Poly& a, const std::string& var = "t");
Poly parse(const FiniteField& F, std::string_view text, const std::string& var = "t");

}  // namespace poly
}  // namespace parshin
