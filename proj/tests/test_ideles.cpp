#include <doctest.h>

#include <optional>

#include "parshin/error.hpp"
#include "parshin/ideles.hpp"
#include "parshin/rng.hpp"

using namespace parshin;
using namespace parshin::ideles;
using chains::parse_divisor;
using chains::SchemeModel;

namespace {

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

InvariantFactors inv_of(const SchemeModel& m, const std::string& d, int n, int bound = 6) {
  return class_group({m, parse_divisor(m, d), Integer(n), bound}).invariants;
}

std::string cg(const SchemeModel& m, const std::string& d, int n) { return inv_of(m, d, n).to_string(); }

Poly random_poly(const FiniteField& F, Rng& rng, int max_deg) {
  Poly a;
  do {
    const int d = static_cast<int>(rng.range(0, max_deg));
    a.assign(static_cast<std::size_t>(d) + 1, F.zero());
    for (auto& c : a) c = F.element(static_cast<std::uint32_t>(rng.below(F.order())));
    poly::trim(a);
  } while (a.empty());
  return a;
}

}  // namespace

TEST_CASE("rational functions parse, format and have orders") {
  auto m = SchemeModel::p1(finite_field(3));
  const auto& F = m.field();
  auto f = parse_rational(F, "(t+1)/(t^2+2)");
  // t^2+2 = (t-1)(t+1) over F_3, so the common factor cancels.
  CHECK(format_rational(F, f) == "1/(t+2)");
  CHECK(format_rational(F, parse_rational(F, "(t+1)/(t^2+1)")) == "(t+1)/(t^2+1)");
  auto h = parse_rational(F, "2/t");
  CHECK(order_at(F, h, m.parse_place("0")) == -1);
  CHECK(order_at(F, h, m.parse_place("inf")) == 1);
  CHECK(order_at(F, h, m.parse_place("1")) == 0);
  CHECK(code_of([&] { parse_rational(F, "0"); }) == ErrorCode::ZeroElement);
}

TEST_CASE("Q map on P1") {
  auto m = SchemeModel::p1(finite_field(3));
  auto D = parse_divisor(m, "[0]+[inf]");
  const auto& F = m.field();

  // div(t) is supported in D: only the diagonal components.
  auto x = q_map_image(m, D, parse_rational(F, "t"));
  REQUIRE(x.components.size() == 2);
  for (const auto& c : x.components) {
    CHECK(c.chain.points.size() == 2);
    CHECK(c.value == "t");
    CHECK(c.ord == 0);
  }

  auto y = q_map_image(m, D, parse_rational(F, "t-1"));
  REQUIRE(y.components.size() == 3);
  CHECK(y.components[0].ord == 1);
  CHECK(label(m, y.components[0].chain.points[0]) == "1");
  CHECK(y.components[1].value == "t+2");

  CHECK(q_map_image(m, D, parse_rational(F, "1")).is_zero());
}

TEST_CASE("class groups of P1: worked values") {
  auto m3 = SchemeModel::p1(finite_field(3));
  CHECK(cg(m3, "", 2) == "Z/2");
  CHECK(cg(m3, "[0]+[inf]", 2) == "Z/2 + Z/2");
  CHECK(cg(m3, "2[0]+[inf]", 2) == "Z/2 + Z/2");
  CHECK(cg(m3, "2[0]+[inf]", 2) == cg(m3, "[0]+[inf]", 2));
  CHECK(code_of([&] { inv_of(m3, "[0]", 3); }) == ErrorCode::WildCoefficients);
}

TEST_CASE("stabilization certificate is reproducible") {
  auto m = SchemeModel::p1(finite_field(5));
  ClassGroupJob job{m, parse_divisor(m, "2[0]+[1]"), Integer(4), 6};
  auto r = class_group(job);
  REQUIRE(r.history.size() >= 2);
  CHECK(r.history.back().bound == r.certified_bound);
  CHECK(r.history[r.history.size() - 2].invariants == r.invariants);
  CHECK(class_group_presentation(job, r.certified_bound + 1).group.invariants() == r.invariants);
  CHECK(code_of([&] { class_group({m, job.D, Integer(4), 1}); }) == ErrorCode::NotStabilized);
}

TEST_CASE("ray class oracle") {
  auto m3 = SchemeModel::p1(finite_field(3));
  auto m2 = SchemeModel::p1(finite_field(2));
  auto m5 = SchemeModel::p1(finite_field(5));
  CHECK(ray_class_oracle(m3, parse_divisor(m3, "[0]+[inf]"), Integer(2)).invariants.to_string() == "Z/2 + Z/2");
  CHECK(ray_class_oracle(m2, parse_divisor(m2, ""), Integer(3)).invariants.to_string() == "Z/3");
  auto D = parse_divisor(m5, "2[0]");
  CHECK(ray_class_oracle(m5, D, Integer(4)).invariants == class_group({m5, D, Integer(4), 6}).invariants);

  // A few moduli with a place of degree 2 and small q.
  for (const char* d : {"[t^2+1]", "[0]+[t^2+1]", "2[inf]+[1]", "[0]+[1]+[inf]"}) {
    auto Dd = parse_divisor(m3, d);
    for (int n : {2, 4}) {
      INFO(d << " n=" << n);
      CHECK(ray_class_oracle(m3, Dd, Integer(n)).invariants == class_group({m3, Dd, Integer(n), 6}).invariants);
    }
  }

  // Too small a bound must be reported, not silently truncated.
  CHECK(code_of([&] { ray_class_oracle(m2, parse_divisor(m2, "3[0]+3[inf]"), Integer(3), 6); }) ==
        ErrorCode::NotStabilized);
}

TEST_CASE("transition maps are surjective and D_red invariance holds") {
  auto m = SchemeModel::p1(finite_field(3));
  const int B = 5;
  const std::pair<const char*, const char*> pairs[] = {
      {"2[0]+[inf]", "[0]+[inf]"}, {"3[0]+2[inf]", "[0]"}, {"[0]+[inf]", ""}, {"2[t^2+1]", "[t^2+1]"}};
  for (int n : {2, 4}) {
    for (auto [big, small] : pairs) {
      INFO(big << " -> " << small << " n=" << n);
      auto from = class_group_presentation({m, parse_divisor(m, big), Integer(n), B}, B);
      auto to = class_group_presentation({m, parse_divisor(m, small), Integer(n), B}, B);
      auto f = transition_map(from, to);
      CHECK(cokernel(f).invariants().is_trivial());
    }
    for (const char* d : {"3[0]+2[inf]", "2[t^2+1]+[1]"}) {
      auto D = parse_divisor(m, d);
      CHECK(inv_of(m, d, n) == class_group({m, D.reduced(), Integer(n), 6}).invariants);
    }
  }
}

TEST_CASE("degree map") {
  auto m = SchemeModel::p1(finite_field(3));
  for (const char* d : {"", "[0]+[inf]", "[t^2+1]"}) {
    auto p = class_group_presentation({m, parse_divisor(m, d), Integer(4), 4}, 4);
    auto deg = degree_map(m, p, Integer(4));
    CHECK(cokernel(deg).invariants().is_trivial());
  }
  // With D empty the degree map is an isomorphism onto Z/n.
  auto p = class_group_presentation({m, parse_divisor(m, ""), Integer(4), 4}, 4);
  CHECK(p.group.invariants().to_string() == "Z/4");
  CHECK(cokernel(degree_map(m, p, Integer(4))).invariants().is_trivial());
}

TEST_CASE("Weil reciprocity") {
  auto F3 = finite_field(3);
  CHECK(weil_reciprocity_check(*F3, parse_rational(*F3, "t"), parse_rational(*F3, "1-t")));
  auto rep = weil_reciprocity(*F3, parse_rational(*F3, "t"), parse_rational(*F3, "t"));
  CHECK(rep.holds);
  REQUIRE(rep.contributions.size() == 2);
  CHECK(rep.contributions[0] == std::pair<std::string, std::string>{"inf", "2"});
  CHECK(rep.contributions[1] == std::pair<std::string, std::string>{"0", "2"});

  Rng rng(42);
  int trials = 0;
  for (std::uint64_t q : {2, 3, 5}) {
    auto F = finite_field(q);
    for (int i = 0; i < 200; ++i) {
      auto f = make_rational(*F, random_poly(*F, rng, 4), random_poly(*F, rng, 4));
      auto g = make_rational(*F, random_poly(*F, rng, 4), random_poly(*F, rng, 4));
      INFO(format_rational(*F, f) << " , " << format_rational(*F, g));
      CHECK(weil_reciprocity_check(*F, f, g));
      ++trials;
    }
  }
  CHECK(trials == 600);

  // Over F_5 both local symbols of {t, t} are -1 as well.
  auto F5 = finite_field(5);
  auto r5 = weil_reciprocity(*F5, parse_rational(*F5, "t"), parse_rational(*F5, "t"));
  CHECK(r5.contributions[0].second == "4");
  CHECK(r5.contributions[1].second == "4");
}

TEST_CASE("local surface reciprocity") {
  auto F = finite_field(3);
  auto s = BiLaurent::s(F), t = BiLaurent::t(F);
  auto rep = local_surface_reciprocity(s, t);
  CHECK(rep.holds);
  REQUIRE(rep.contributions.size() == 2);
  CHECK(rep.contributions[0].second == "-1");
  CHECK(rep.contributions[1].second == "1");

  auto U = BiLaurent::parse(F, "(1+s+t)");
  CHECK(local_surface_reciprocity_check(U, U));

  Rng rng(7);
  for (std::uint64_t q : {3, 5}) {
    auto Fq = finite_field(q);
    for (int i = 0; i < 100; ++i) {
      Rng r = rng.split(q * 1000 + i);
      auto f = BiLaurent::random(Fq, r, 3, 2);
      auto g = BiLaurent::random(Fq, r, 3, 2);
      INFO(f.format() << " , " << g.format());
      CHECK(local_surface_reciprocity_check(f, g));
    }
  }

  auto m = SchemeModel::local_surface(finite_field(5));
  auto x = parse_surface_element(m, "2*s^2*(t-s)^-1");
  auto y = parse_surface_element(m, "t*(t-s^2)");
  CHECK(format_surface_element(m, x) == "2*s^2*(t-s)^-1");
  CHECK(local_surface_reciprocity(m, x, y).holds);
  CHECK(local_surface_reciprocity(m, parse_surface_element(m, "s"), parse_surface_element(m, "t")).holds);
}

TEST_CASE("local surface class groups") {
  for (std::uint64_t q : {3, 5}) {
    auto m = SchemeModel::local_surface(finite_field(q));
    const int n = 2;
    CHECK(inv_of(m, "", n, 4).to_string() == "Z/2");
    CHECK(inv_of(m, "(t)", n, 4).to_string() == "Z/2 + Z/2");
    CHECK(inv_of(m, "(s)+(t)", n, 4).to_string() == "Z/2 + Z/2 + Z/2");
    CHECK(inv_of(m, "2(s)+(t)", n, 4) == inv_of(m, "(s)+(t)", n, 4));
  }
  auto m5 = SchemeModel::local_surface(finite_field(5));
  CHECK(inv_of(m5, "(s)", 4, 4).to_string() == "Z/4 + Z/4");
  // n prime to p but not dividing q-1: the D-part is Z/gcd(n, q-1).
  CHECK(inv_of(m5, "(s)", 3, 4).to_string() == "Z/3");

  auto D = parse_divisor(m5, "(s)+(t)");
  auto x = q_map_image(m5, D, parse_surface_element(m5, "t-s"), parse_surface_element(m5, "s"));
  REQUIRE(!x.is_zero());
  CHECK(x.components.front().chain.points.size() == 2);
}
