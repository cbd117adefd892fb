#pragma once

// Small recursive-descent reader for the textual element syntax: sums and
// products of integers, the field generator g, named variables with integer
// (possibly negative) exponents, parentheses, and an optional O(x^N) term.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parshin/fq.hpp"

namespace parshin::text {

// Laurent polynomial: exponent vector (one entry per variable) -> coefficient.
using Monomials = std::map<std::vector<int>, FqElem>;

struct Expression {
  Monomials terms;
  // Absolute order of an O(x^N) term; only meaningful for one variable.
  std::optional<int> big_o;
};

Expression parse_expression(std::string_view text, const FiniteField& field, const std::vector<std::string>& variables);

}  // namespace parshin::text
