#pragma once

// Field contexts for the tower F_q -> F_q((t)) -> F_q((s))((t)). Each
// discretely valued level exposes its valuation, the residue of the unit part
// of an element (relative to the fixed uniformizer) and its residue field.

#include <string>
#include <string_view>

#include "parshin/bilaurent.hpp"
#include "parshin/fq.hpp"
#include "parshin/laurent.hpp"

namespace parshin {

class FiniteFieldK {
 public:
  using Elem = FqElem;
  static constexpr int level = 0;

  explicit FiniteFieldK(FieldPtr field) : field_(std::move(field)) {}

  const FiniteField& base() const { return *field_; }
  const FieldPtr& base_ptr() const { return field_; }
  std::string name() const { return "F_" + std::to_string(field_->order()); }

  Elem one() const { return field_->one(); }
  Elem minus_one() const { return field_->neg(field_->one()); }
  Elem generator() const { return field_->generator(); }
  Elem mul(Elem a, Elem b) const { return field_->mul(a, b); }
  Elem inv(Elem a) const { return field_->inv(a); }
  Elem pow(Elem a, long long k) const { return field_->pow(a, k); }
  // ZERO_ELEMENT when a = 1.
  Elem one_minus(Elem a) const;
  bool equal(Elem a, Elem b) const { return a == b; }
  bool is_nonzero(Elem a) const { return !a.is_zero(); }
  std::string format(Elem a) const { return field_->format(a); }
  Elem parse(std::string_view text) const;

 private:
  FieldPtr field_;
};

class LocalFieldK {
 public:
  using Elem = Laurent;
  using Residue = FiniteFieldK;
  static constexpr int level = 1;

  explicit LocalFieldK(FieldPtr field, int precision = kDefaultPrecision, std::string var = "t")
      : field_(std::move(field)), precision_(precision), var_(std::move(var)) {}

  const FiniteField& base() const { return *field_; }
  const FieldPtr& base_ptr() const { return field_; }
  int precision() const { return precision_; }
  const std::string& var() const { return var_; }
  std::string name() const { return "F_" + std::to_string(field_->order()) + "((" + var_ + "))"; }
  Residue residue_field() const { return Residue(field_); }

  Elem one() const { return Laurent::constant(field_, field_->one(), precision_, var_); }
  Elem minus_one() const { return Laurent::constant(field_, field_->neg(field_->one()), precision_, var_); }
  Elem uniformizer() const { return Laurent::monomial(field_, field_->one(), 1, precision_, var_); }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const { return a.inv(); }
  Elem pow(const Elem& a, long long k) const { return a.pow(k); }
  Elem one_minus(const Elem& a) const { return one() - a; }
  bool equal(const Elem& a, const Elem& b) const { return a.agrees_with(b); }
  bool is_nonzero(const Elem& a) const { return !a.is_zero(); }
  std::string format(const Elem& a) const { return a.format(); }
  Elem parse(std::string_view text) const;

  int valuation(const Elem& a) const { return a.valuation(); }
  Residue::Elem unit_residue(const Elem& a) const { return a.leading(); }
  Elem lift(const Residue::Elem& a) const { return Laurent::constant(field_, a, precision_, var_); }

 private:
  FieldPtr field_;
  int precision_;
  std::string var_;
};

// F_q((s))((t)) with t the outer uniformizer; residue field F_q((s)).
class TwoLocalFieldK {
 public:
  using Elem = BiLaurent;
  using Residue = LocalFieldK;
  static constexpr int level = 2;

  explicit TwoLocalFieldK(FieldPtr field, int precision = kDefaultPrecision)
      : field_(std::move(field)), precision_(precision) {}

  const FiniteField& base() const { return *field_; }
  const FieldPtr& base_ptr() const { return field_; }
  int precision() const { return precision_; }
  std::string name() const { return "F_" + std::to_string(field_->order()) + "((s))((t))"; }
  Residue residue_field() const { return Residue(field_, precision_, "s"); }

  Elem one() const { return BiLaurent::one(field_); }
  Elem minus_one() const { return BiLaurent::constant(field_, field_->neg(field_->one())); }
  Elem uniformizer() const { return BiLaurent::t(field_); }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const { return a.inv(); }
  Elem pow(const Elem& a, long long k) const { return a.pow(k); }
  // UNSUPPORTED_ELEMENT_FORM when 1 - a leaves the monomial-unit form.
  Elem one_minus(const Elem& a) const;
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  bool is_nonzero(const Elem&) const { return true; }
  std::string format(const Elem& a) const { return a.format(); }
  Elem parse(std::string_view text) const { return BiLaurent::parse(field_, text); }

  int valuation(const Elem& a) const { return a.t_exponent(); }
  Residue::Elem unit_residue(const Elem& a) const { return a.residue_tower(precision_).residue; }
  // Exact lift of s^a * c; EXACT_FORM_REQUIRED for anything else.
  Elem lift(const Residue::Elem& a) const;

 private:
  FieldPtr field_;
  int precision_;
};

}  // namespace parshin
