#include "parshin/tower.hpp"

#include "parshin/error.hpp"

namespace parshin {

FiniteFieldK::Elem FiniteFieldK::one_minus(Elem a) const {
  Elem r = field_->sub(field_->one(), a);
  if (r.is_zero()) fail(ErrorCode::ZeroElement, "1 - a vanishes for a = 1");
  return r;
}

FiniteFieldK::Elem FiniteFieldK::parse(std::string_view text) const {
  Elem a = field_->parse(text);
  if (a.is_zero()) fail(ErrorCode::ZeroElement, "symbol entries must be nonzero");
  return a;
}

LocalFieldK::Elem LocalFieldK::parse(std::string_view text) const {
  Elem a = Laurent::parse(field_, text, var_, precision_);
  if (a.is_zero()) fail(ErrorCode::ZeroElement, "symbol entries must be nonzero");
  return a;
}

TwoLocalFieldK::Elem TwoLocalFieldK::one_minus(const Elem& a) const {
  const FiniteField& F = *field_;
  int sa = a.s_exponent(), tb = a.t_exponent();
  const BiPoly& U = a.numerator();
  const BiPoly& V = a.denominator();
  auto negated = [&](const BiPoly& p) {
    BiPoly out;
    for (const auto& [k, c] : p.terms) out.terms[k] = F.neg(c);
    return out;
  };
  auto shifted = [&](const BiPoly& p, int ds, int dt) {
    BiPoly out;
    for (const auto& [k, c] : p.terms) out.terms[{k.first + ds, k.second + dt}] = c;
    return out;
  };
  bool positive = tb > 0 || (tb == 0 && sa > 0);
  bool negative = tb < 0 || (tb == 0 && sa < 0);
  if (positive && sa >= 0) {
    // (V - s^a t^b U) / V
    BiPoly num = bipoly::add(F, V, negated(shifted(U, sa, tb)));
    return BiLaurent(field_, 0, 0, std::move(num), V);
  }
  if (negative && sa <= 0) {
    // s^a t^b (s^-a t^-b V - U) / V
    BiPoly num = bipoly::add(F, shifted(V, -sa, -tb), negated(U));
    return BiLaurent(field_, sa, tb, std::move(num), V);
  }
  if (tb == 0 && sa == 0) {
    BiPoly num = bipoly::add(F, V, negated(U));
    if (!num.constant_term().is_zero()) return BiLaurent(field_, 0, 0, std::move(num), V);
  }
  fail(ErrorCode::UnsupportedElementForm, "1 - x is not of monomial-unit form for x = " + a.format());
}

TwoLocalFieldK::Elem TwoLocalFieldK::lift(const Residue::Elem& a) const {
  const auto& u = a.unit_coeffs();
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (!u[i].is_zero()) fail(ErrorCode::ExactFormRequired, "only s^a * c lifts exactly");
  }
  BiPoly U;
  U.terms[{0, 0}] = u[0];
  return BiLaurent(field_, a.valuation(), 0, std::move(U));
}

}  // namespace parshin
