#include "parshin/milnor.hpp"

#include <cctype>

namespace parshin::milnor {

namespace detail {

std::vector<std::pair<long long, std::vector<std::string>>> split_symbol_sum(std::string_view text) {
  std::vector<std::pair<long long, std::vector<std::string>>> out;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  bool first = true;
  for (;;) {
    skip();
    if (pos >= text.size()) break;
    long long sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      fail(ErrorCode::ParseError, "expected '+' or '-' between symbols");
    }
    first = false;
    long long coeff = 1;
    bool have_number = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos - start > 15) fail(ErrorCode::ParseError, "coefficient too large");
      coeff = std::stoll(std::string(text.substr(start, pos - start)));
      have_number = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      } else {
        out.push_back({sign * coeff, {}});
        continue;
      }
    }
    if (pos >= text.size() || text[pos] != '{') {
      fail(ErrorCode::ParseError, have_number ? "expected '{' after '*'" : "expected '{'");
    }
    ++pos;
    std::vector<std::string> entries;
    std::string cur;
    int depth = 0;
    for (;;) {
      if (pos >= text.size()) fail(ErrorCode::ParseError, "unterminated symbol");
      char ch = text[pos++];
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth == 0 && (ch == ',' || ch == '}')) {
        std::string trimmed = cur;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
        if (!trimmed.empty()) entries.push_back(trimmed);
        else if (ch == ',' || !entries.empty()) fail(ErrorCode::ParseError, "empty symbol entry");
        cur.clear();
        if (ch == '}') break;
        continue;
      }
      cur += ch;
    }
    out.push_back({sign * coeff, std::move(entries)});
  }
  for (const auto& p : out) {
    if (p.second.size() != out.front().second.size()) fail(ErrorCode::ParseError, "symbols of mixed degree");
  }
  return out;
}

}  // namespace detail

namespace {

std::uint32_t small_modulus(const Integer& n) {
  if (n < 1 || n > 1 << 30) fail(ErrorCode::InvalidInput, "modulus out of range");
  return static_cast<std::uint32_t>(n.get_ui());
}

PresentedGroup structural_group(const std::vector<Integer>& moduli, const Integer& n) {
  return PresentedGroup::from_factors(moduli, 0, n);
}

template <class K>
std::vector<std::string> basis_names(const K& field, std::size_t r, const Integer& n) {
  std::vector<std::string> out;
  for (const auto& s : basis_symbols(field, r, n)) out.push_back(format_symbol(field, s));
  return out;
}

template <class K>
KGroup tame_split(const K& field, std::size_t r, const Integer& n) {
  const auto& F = field.base();
  if (n % F.characteristic() == 0) {
    fail(ErrorCode::WildCoefficients, "n must be prime to the characteristic for the tame split");
  }
  auto k = field.residue_field();
  KGroup lower = km_mod_n(k, r, n);
  PresentedGroup group = lower.group;
  if (r >= 1) group = direct_sum(group, km_mod_n(k, r - 1, n).group);

  KGroup out{group, "tame-split", basis_names(field, r, n), false, 0, 0};
  auto moduli = coordinate_moduli(field, r, n);
  auto basis = basis_symbols(field, r, n);
  bool ok = group.invariants() == structural_group(moduli, n).invariants() && basis.size() == moduli.size();
  for (std::size_t i = 0; ok && i < basis.size(); ++i) {
    auto c = coordinates(field, SymbolSum<typename K::Elem>::single(basis[i].entries), n);
    for (std::size_t j = 0; j < c.size(); ++j) ok = ok && c[j] == (i == j ? 1 : 0);
  }
  out.cross_validated = ok;
  return out;
}

}  // namespace

kernels::ClosureSpec closure_spec(const FiniteField& F, std::size_t r, std::uint32_t n) {
  kernels::ClosureSpec spec;
  const std::uint32_t u = F.order() - 1;
  spec.units = u;
  spec.degree = static_cast<std::uint32_t>(r);
  spec.modulus = n;
  spec.mul.resize(std::size_t(u) * u);
  for (std::uint32_t a = 0; a < u; ++a) {
    for (std::uint32_t b = 0; b < u; ++b) spec.mul[std::size_t(a) * u + b] = F.mul(FqElem{a + 1}, FqElem{b + 1}).code - 1;
  }
  spec.one_minus.resize(u);
  for (std::uint32_t a = 0; a < u; ++a) {
    FqElem c = F.sub(F.one(), FqElem{a + 1});
    spec.one_minus[a] = c.is_zero() ? -1 : static_cast<std::int32_t>(c.code - 1);
  }
  spec.generator_index = F.generator().code - 1;
  std::size_t size = 1;
  for (std::size_t i = 0; i <= r; ++i) size *= u;
  spec.all_pairs = size <= 8192;
  return spec;
}

std::size_t closure_index(const FiniteField& F, const std::vector<FqElem>& entries) {
  std::size_t idx = 0, weight = 1;
  for (const auto& e : entries) {
    if (e.is_zero()) fail(ErrorCode::ZeroElement, "symbol entries must be nonzero");
    idx += std::size_t(e.code - 1) * weight;
    weight *= F.order() - 1;
  }
  return idx;
}

KGroup km_mod_n(const FiniteFieldK& field, std::size_t r, const Integer& n, ClosureMode mode) {
  const FiniteField& F = field.base();
  const std::uint32_t nn = small_modulus(n);
  auto moduli = coordinate_moduli(field, r, n);
  PresentedGroup structural = structural_group(moduli, n);
  bool small = F.order() <= 9 && r <= 3;
  if (mode == ClosureMode::Structural || (mode == ClosureMode::Auto && !small)) {
    return KGroup{structural, "structural", basis_names(field, r, n), false, 0, 0};
  }
  if (!small) fail(ErrorCode::UnsupportedField, "brute-force closure is limited to q <= 9 and r <= 3");

  kernels::ClosureSpec spec = closure_spec(F, r, nn);
  kernels::ModMatrix rel = kernels::assemble_closure_parallel(spec);

  // Coordinates of every generator tuple, then check each relation maps to 0.
  std::vector<std::vector<Integer>> gen_coords(rel.rows);
  const std::uint32_t u = F.order() - 1;
  for (std::size_t idx = 0; idx < rel.rows; ++idx) {
    std::vector<FqElem> entries(r);
    std::size_t x = idx;
    for (std::size_t k = 0; k < r; ++k) {
      entries[k] = FqElem{static_cast<std::uint32_t>(x % u + 1)};
      x /= u;
    }
    gen_coords[idx] = coordinates(field, SymbolSum<FqElem>::single(entries), n);
  }
  bool kills = true;
  for (std::size_t j = 0; j < rel.cols && kills; ++j) {
    std::vector<Integer> acc(moduli.size(), 0);
    for (std::size_t i = 0; i < rel.rows; ++i) {
      std::uint32_t c = rel.at(i, j);
      if (c == 0) continue;
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += Integer(c) * gen_coords[i][k];
    }
    for (std::size_t k = 0; k < acc.size(); ++k) kills = kills && mod_floor(acc[k], moduli[k]) == 0;
  }

  KGroup out;
  out.closure_generators = rel.rows;
  out.closure_relations = rel.cols;
  out.group = reduced_presentation(std::move(rel));
  out.method = "closure";
  out.generators = basis_names(field, r, n);
  out.cross_validated = kills && out.group.invariants() == structural.invariants();
  return out;
}

KGroup km_mod_n(const LocalFieldK& field, std::size_t r, const Integer& n) { return tame_split(field, r, n); }

KGroup km_mod_n(const TwoLocalFieldK& field, std::size_t r, const Integer& n) { return tame_split(field, r, n); }

bool closure_contains(const FiniteFieldK& field, const SymbolSum<FqElem>& x, std::uint32_t n) {
  const FiniteField& F = field.base();
  if (F.order() > 9 || x.degree > 3) fail(ErrorCode::UnsupportedField, "closure membership is limited to q <= 9, r <= 3");
  kernels::ModMatrix rel = kernels::assemble_closure_parallel(closure_spec(F, x.degree, n));
  kernels::ModMatrix ext(n, rel.rows, rel.cols + 1);
  std::copy(rel.data.begin(), rel.data.end(), ext.data.begin());
  for (const auto& [c, sym] : x.terms) {
    std::size_t i = closure_index(F, sym.entries);
    long long v = (static_cast<long long>(ext.at(i, rel.cols)) + c) % n;
    ext.at(i, rel.cols) = static_cast<std::uint32_t>(v < 0 ? v + n : v);
  }
  Integer before = reduced_presentation(std::move(rel)).invariants().torsion_order();
  Integer after = reduced_presentation(std::move(ext)).invariants().torsion_order();
  return before == after;
}

FiltrationImage unit_filtration(const LocalFieldK& field, std::size_t r, int level, const Integer& n) {
  const FiniteField& F = field.base();
  if (level < 0) fail(ErrorCode::InvalidInput, "filtration level must be non-negative");
  auto moduli = coordinate_moduli(field, r, n);
  FiltrationImage out;
  std::vector<std::vector<Integer>> vectors;
  if (level == 0) {
    for (const auto& b : basis_symbols(field, r, n)) vectors.push_back(coordinates(field, SymbolSum<Laurent>::single(b.entries), n));
    out.image = image_subgroup(vectors, moduli);
    out.hensel_certified = true;
    return out;
  }
  if (r == 0) fail(ErrorCode::DegreeOutOfRange, "the filtration starts in degree 1");
  if (n % F.characteristic() == 0) fail(ErrorCode::WildCoefficients, "n must be prime to the characteristic");

  // Principal units 1 + c t^j, completed by every choice of {t, g} in the other slots.
  std::vector<Laurent> others = {field.uniformizer(), field.lift(F.generator())};
  bool certified = true;
  const long long nn = n.get_si();
  for (int j = level; j < level + 3; ++j) {
    for (std::uint32_t c = 1; c < F.order(); ++c) {
      Laurent u = field.one() + Laurent::monomial(field.base_ptr(), FqElem{c}, j, field.precision());
      Laurent w = u.nth_root_principal(nn);
      certified = certified && w.pow(nn) == u;
      ++out.sampled_units;
      std::size_t combos = std::size_t{1} << (r - 1);
      for (std::size_t mask = 0; mask < combos; ++mask) {
        std::vector<Laurent> entries = {u};
        for (std::size_t k = 0; k + 1 < r; ++k) entries.push_back(others[mask >> k & 1]);
        vectors.push_back(coordinates(field, SymbolSum<Laurent>::single(entries), n));
      }
    }
  }
  out.image = image_subgroup(vectors, moduli);
  out.hensel_certified = certified;
  return out;
}

}  // namespace parshin::milnor
