#include <doctest.h>

#include <chrono>

#include "parshin/kernels.hpp"
#include "parshin/milnor.hpp"
#include "parshin/rng.hpp"

using namespace parshin;
using namespace parshin::milnor;

namespace {

const std::vector<std::uint32_t> kSmallFields = {2, 3, 4, 5, 7, 8, 9};

Integer I(long v) { return Integer(v); }

FqElem random_unit(const FiniteField& F, Rng& rng) { return FqElem{static_cast<std::uint32_t>(1 + rng.below(F.order() - 1))}; }

}  // namespace

TEST_CASE("K_r of finite fields by brute-force closure") {
  FiniteFieldK F4(finite_field(4));
  KGroup k = km_mod_n(F4, 2, I(3));
  CHECK(k.method == "closure");
  CHECK(k.closure_generators == 9);
  CHECK(k.group.invariants().is_trivial());
  CHECK(k.cross_validated);

  for (std::uint32_t q : kSmallFields) {
    FiniteFieldK K(finite_field(q));
    for (long n : {2, 3, 4, 5, 6}) {
      KGroup k2 = km_mod_n(K, 2, I(n), ClosureMode::Closure);
      CHECK_MESSAGE(k2.group.invariants().is_trivial(), "q=", q, " n=", n);
      CHECK(k2.cross_validated);
      KGroup k1 = km_mod_n(K, 1, I(n), ClosureMode::Closure);
      Integer g = gcd_integer(I(n), I(q - 1));
      CHECK(k1.group.invariants().torsion_order() == g);
      CHECK(k1.cross_validated);
      CHECK(km_mod_n(K, 0, I(n)).group.invariants().torsion_order() == n);
    }
  }
}

TEST_CASE("degree 3 closure agrees with the structural answer") {
  for (std::uint32_t q : kSmallFields) {
    FiniteFieldK K(finite_field(q));
    for (long n : {2, 3, 4}) {
      KGroup k3 = km_mod_n(K, 3, I(n), ClosureMode::Closure);
      CHECK(k3.group.invariants().is_trivial());
      CHECK(k3.cross_validated);
    }
  }
  FiniteFieldK K11(finite_field(11));
  CHECK(km_mod_n(K11, 2, I(5)).method == "structural");
}

TEST_CASE("closure assembly kernels agree") {
  for (std::uint32_t q : {3u, 4u, 5u, 9u}) {
    auto F = finite_field(q);
    for (std::size_t r : {1u, 2u, 3u}) {
      auto spec = closure_spec(*F, r, 4);
      auto a = kernels::assemble_closure_serial(spec);
      auto b = kernels::assemble_closure_parallel(spec);
      CHECK(a == b);
      CHECK(a.cols == kernels::closure_relation_count(spec));
    }
  }
}

TEST_CASE("Steinberg consequences in the brute-force closure of F_5 mod 4") {
  FiniteFieldK K(finite_field(5));
  const auto& F = K.base();
  for (std::uint32_t a = 1; a < 5; ++a) {
    FqElem A{a};
    if (A != F.one()) CHECK(closure_contains(K, SymbolSum<FqElem>::single({A, K.one_minus(A)}), 4));
    CHECK(closure_contains(K, SymbolSum<FqElem>::single({A, F.neg(A)}), 4));
    for (std::uint32_t b = 1; b < 5; ++b) {
      FqElem B{b};
      auto s = SymbolSum<FqElem>::single({A, B}) + SymbolSum<FqElem>::single({B, A});
      CHECK(closure_contains(K, s, 4));
    }
  }
  // In degree 1 the closure is a genuine constraint: {g} is not in the relations.
  CHECK_FALSE(closure_contains(K, SymbolSum<FqElem>::single({F.generator()}), 4));
  CHECK(closure_contains(K, SymbolSum<FqElem>::single({F.generator()}, 4), 4));
}

TEST_CASE("Steinberg suite normalizes to zero for q <= 9") {
  for (std::uint32_t q : kSmallFields) {
    FiniteFieldK K(finite_field(q));
    const auto& F = K.base();
    for (long n : {2, 3, 4}) {
      for (std::uint32_t a = 1; a < q; ++a) {
        FqElem A{a};
        if (A != F.one()) CHECK(steinberg_normalize(K, SymbolSum<FqElem>::single({A, K.one_minus(A)}), I(n)).terms.empty());
        CHECK(steinberg_normalize(K, SymbolSum<FqElem>::single({A, F.neg(A)}), I(n)).terms.empty());
        for (std::uint32_t b = 1; b < q; ++b) {
          FqElem B{b};
          auto s = SymbolSum<FqElem>::single({A, B}) + SymbolSum<FqElem>::single({B, A});
          CHECK(steinberg_normalize(K, s, I(n)).terms.empty());
        }
      }
    }
  }
}

TEST_CASE("Steinberg relations hold in K_2 of local fields") {
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 9u}) {
    LocalFieldK K(finite_field(q), 16);
    Integer n = I(q - 1);
    Rng rng(q * 7);
    for (int i = 0; i < 100; ++i) {
      Laurent a = Laurent::random(K.base_ptr(), rng, -3, 3, 16);
      Laurent b = Laurent::random(K.base_ptr(), rng, -3, 3, 16);
      if (!(a.valuation() == 0 && a.leading() == K.base().one())) {
        CHECK(steinberg_normalize(K, SymbolSum<Laurent>::single({a, K.one_minus(a)}), n).terms.empty());
      }
      CHECK(steinberg_normalize(K, SymbolSum<Laurent>::single({a, K.mul(a, K.minus_one())}), n).terms.empty());
      auto s = SymbolSum<Laurent>::single({a, b}) + SymbolSum<Laurent>::single({b, a});
      CHECK(steinberg_normalize(K, s, n).terms.empty());
    }
  }
}

TEST_CASE("tame symbol examples") {
  LocalFieldK K(finite_field(5));
  auto F = K.base_ptr();
  Laurent t = K.uniformizer();
  Laurent u = Laurent::parse(F, "3 + t + 2*t^2");
  Laurent v = Laurent::parse(F, "2 + 4*t");
  auto d1 = residue_symbol(K, SymbolSum<Laurent>::single({t, u}));
  CHECK(collapse_degree1(K.residue_field(), d1) == F->from_int(3));
  auto d2 = residue_symbol(K, SymbolSum<Laurent>::single({u, v}));
  CHECK(collapse_degree1(K.residue_field(), d2) == F->one());

  Laurent f = Laurent::parse(F, "t*(1+t)");
  Laurent g = Laurent::parse(F, "4*t");
  auto x = SymbolSum<Laurent>::single({f, g});
  auto formula = residue_symbol(K, x, ResidueRoute::Formula);
  auto expansion = residue_symbol(K, x, ResidueRoute::Expansion);
  CHECK(collapse_degree1(K.residue_field(), formula) == F->one());
  CHECK(collapse_degree1(K.residue_field(), expansion) == F->one());
  // d{t, t} = -1
  CHECK(collapse_degree1(K.residue_field(), residue_symbol(K, SymbolSum<Laurent>::single({t, t}))) == F->from_int(-1));
  CHECK_THROWS_AS(residue_symbol(K, SymbolSum<Laurent>::single({t, t, t}), ResidueRoute::Formula), Error);
}

TEST_CASE("tame symbol laws on random inputs") {
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    LocalFieldK K(finite_field(q), 16);
    auto k = K.residue_field();
    Rng rng(1000 + q);
    for (int i = 0; i < 500; ++i) {
      Laurent a = Laurent::random(K.base_ptr(), rng, -4, 4, 16);
      Laurent b = Laurent::random(K.base_ptr(), rng, -4, 4, 16);
      Laurent c = Laurent::random(K.base_ptr(), rng, -4, 4, 16);
      auto lhs = residue_symbol(K, SymbolSum<Laurent>::single({K.mul(a, b), c}));
      auto rhs = residue_symbol(K, SymbolSum<Laurent>::single({a, c}) + SymbolSum<Laurent>::single({b, c}));
      CHECK(collapse_degree1(k, lhs) == collapse_degree1(k, rhs));
      auto x = SymbolSum<Laurent>::single({a, b});
      CHECK(collapse_degree1(k, residue_symbol(K, x, ResidueRoute::Formula)) ==
            collapse_degree1(k, residue_symbol(K, x, ResidueRoute::Expansion)));
      Laurent ua = a.unit_decompose().second, ub = b.unit_decompose().second;
      CHECK(collapse_degree1(k, residue_symbol(K, SymbolSum<Laurent>::single({ua, ub}))) == K.base().one());
      CHECK(collapse_degree0(residue_symbol(K, SymbolSum<Laurent>::single({ua}))) == 0);
    }
  }
}

TEST_CASE("K_2 of F_5((t)) mod 4") {
  LocalFieldK K(finite_field(5));
  KGroup k = km_mod_n(K, 2, I(4));
  CHECK(k.method == "tame-split");
  CHECK(k.group.invariants().to_string() == "Z/4");
  CHECK(k.cross_validated);
  REQUIRE(k.generators.size() == 1);
  CHECK(k.generators[0] == "{t*(1 + O(t^32)), 2 + O(t^32)}");
  CHECK_THROWS_AS(km_mod_n(K, 2, I(5)), Error);
  CHECK(km_mod_n(K, 1, I(4)).group.invariants().to_string() == "Z/4 + Z/4");
}

TEST_CASE("K_2 of F_q((s))((t)) mod n") {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    TwoLocalFieldK K(finite_field(q));
    Integer n = I(q - 1);
    KGroup k = km_mod_n(K, 2, n);
    CHECK(k.cross_validated);
    CHECK(k.group.invariants().factors == std::vector<Integer>{n, n, n});
    auto F = K.base_ptr();
    auto s = BiLaurent::s(F), t = BiLaurent::t(F), g = BiLaurent::constant(F, F->generator());
    CHECK(coordinates(K, SymbolSum<BiLaurent>::single({s, t}), n) == std::vector<Integer>{0, 0, n - 1});
    CHECK(coordinates(K, SymbolSum<BiLaurent>::single({t, g}), n) == std::vector<Integer>{0, 1, 0});
    CHECK(coordinates(K, SymbolSum<BiLaurent>::single({s, g}), n) == std::vector<Integer>{1, 0, 0});
  }
}

TEST_CASE("two-local residue routes and Steinberg") {
  for (std::uint32_t q : {3u, 5u}) {
    TwoLocalFieldK K(finite_field(q), 16);
    auto k = K.residue_field();
    Rng rng(77 + q);
    Integer n = I(q - 1);
    for (int i = 0; i < 200; ++i) {
      BiLaurent a = BiLaurent::random(K.base_ptr(), rng, 3, 2);
      BiLaurent b = BiLaurent::random(K.base_ptr(), rng, 3, 2);
      auto x = SymbolSum<BiLaurent>::single({a, b});
      CHECK(k.equal(collapse_degree1(k, residue_symbol(K, x, ResidueRoute::Formula)),
                    collapse_degree1(k, residue_symbol(K, x, ResidueRoute::Expansion))));
      CHECK(steinberg_normalize(K, x + SymbolSum<BiLaurent>::single({b, a}), n).terms.empty());
      try {
        auto st = SymbolSum<BiLaurent>::single({a, K.one_minus(a)});
        CHECK(steinberg_normalize(K, st, n).terms.empty());
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedElementForm);
      }
    }
  }
}

TEST_CASE("normalization is idempotent and additive") {
  LocalFieldK K(finite_field(7), 16);
  Rng rng(3);
  Integer n = I(6);
  for (int i = 0; i < 100; ++i) {
    auto x = SymbolSum<Laurent>::single({Laurent::random(K.base_ptr(), rng, -3, 3, 16), Laurent::random(K.base_ptr(), rng, -3, 3, 16)});
    auto y = SymbolSum<Laurent>::single({Laurent::random(K.base_ptr(), rng, -3, 3, 16), Laurent::random(K.base_ptr(), rng, -3, 3, 16)});
    auto nx = steinberg_normalize(K, x, n);
    CHECK(format_sum(K, steinberg_normalize(K, nx, n)) == format_sum(K, nx));
    CHECK(format_sum(K, steinberg_normalize(K, x + y, n)) ==
          format_sum(K, steinberg_normalize(K, nx + steinberg_normalize(K, y, n), n)));
  }
}

TEST_CASE("unit filtration") {
  LocalFieldK K(finite_field(5));
  auto full = unit_filtration(K, 2, 0, I(4));
  CHECK(full.image.invariants().to_string() == "Z/4");
  for (std::size_t r : {1u, 2u, 3u}) {
    auto f = unit_filtration(K, r, 1, I(4));
    CHECK(f.image.invariants().is_trivial());
    CHECK(f.hensel_certified);
  }
  LocalFieldK K7(finite_field(7), 24);
  auto f = unit_filtration(K7, 2, 2, I(3));
  CHECK(f.image.invariants().is_trivial());
  CHECK(f.hensel_certified);
  CHECK_THROWS_AS(unit_filtration(K, 2, 1, I(5)), Error);
}

TEST_CASE("symbol sum parsing") {
  LocalFieldK K(finite_field(5));
  auto x = parse_sum(K, "{t, 2} - 3*{t^-1*(1+t), 4}");
  CHECK(x.degree == 2);
  CHECK(x.terms.size() == 2);
  CHECK(x.terms[1].first == -3);
  CHECK(parse_sum(K, "7").degree == 0);
  CHECK_THROWS_AS(parse_sum(K, "{t} + {t, t}"), Error);
  CHECK_THROWS_AS(parse_sum(K, "{t, 0}"), Error);
  FiniteFieldK F9(finite_field(9));
  CHECK(format_sum(F9, parse_sum(F9, "{g, g+1}")) == "{g, g+1}");
}
