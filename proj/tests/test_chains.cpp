#include <doctest.h>

#include <algorithm>
#include <optional>
#include <set>

#include "parshin/chains.hpp"
#include "parshin/error.hpp"

using namespace parshin;
using namespace parshin::chains;

namespace {

std::vector<std::string> labels(const SchemeModel& m, const std::vector<ChainRecord>& cs, ChainKind k) {
  std::vector<std::string> out;
  for (const auto& c : cs) {
    if (c.kind == k) out.push_back(format_chain(m, c));
  }
  return out;
}

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// All sequences of distinct poset indices of length <= max_len.
void sequences(std::size_t n, std::size_t max_len, std::vector<std::size_t>& cur,
               std::vector<std::vector<std::size_t>>& out) {
  if (!cur.empty()) out.push_back(cur);
  if (cur.size() == max_len) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(cur.begin(), cur.end(), i) != cur.end()) continue;
    cur.push_back(i);
    sequences(n, max_len, cur, out);
    cur.pop_back();
  }
}

// The enumerated templates must be exactly the sequences on the model poset
// passing the independent predicates.
void check_against_predicates(const SchemeModel& model, const DivisorData& d) {
  auto mp = model_poset(model, d);
  std::vector<std::vector<std::size_t>> all;
  std::vector<std::size_t> cur;
  sequences(mp.poset.size(), static_cast<std::size_t>(model.dimension()) + 1, cur, all);
  std::set<std::vector<std::size_t>> on_pair, q_chains;
  for (const auto& c : all) {
    if (is_parshin_on_pair(mp.poset, c)) on_pair.insert(c);
    if (is_q_chain(mp.poset, c)) q_chains.insert(c);
  }
  std::set<std::vector<std::size_t>> got_pair, got_q;
  for (const auto& rec : enumerate_chain_types(model, d)) {
    std::vector<std::size_t> idx;
    for (const auto& p : rec.points) {
      auto it = std::find(mp.points.begin(), mp.points.end(), p);
      REQUIRE(it != mp.points.end());
      idx.push_back(static_cast<std::size_t>(it - mp.points.begin()));
    }
    auto kinds = classify(mp.poset, idx);
    CHECK(std::find(kinds.begin(), kinds.end(), rec.kind) != kinds.end());
    if (rec.kind == ChainKind::ParshinOnPair) got_pair.insert(idx);
    else got_q.insert(idx);
  }
  CHECK(got_pair == on_pair);
  CHECK(got_q == q_chains);
}

}  // namespace

TEST_CASE("places and primes") {
  auto P1 = SchemeModel::p1(finite_field(3));
  auto places = P1.places_up_to(2);
  REQUIRE(places.size() == 1 + 3 + 3);
  CHECK(places[0].infinity);
  CHECK(P1.format(places[1]) == "0");
  CHECK(P1.format(P1.parse_place("t^2+1")) == "t^2+1");
  CHECK(P1.parse_place("2") == Place{false, {FqElem{1}, FqElem{1}}});
  CHECK(code_of([&] { P1.parse_place("t^2-1"); }) == ErrorCode::UnsupportedPrime);

  auto S = SchemeModel::local_surface(finite_field(3));
  auto primes = S.primes_up_to(2);
  // (s), (t), t - c s (2), t - c s^2 (2), s - c t^2 (2)
  CHECK(primes.size() == 8);
  for (const auto& p : primes) CHECK(S.parse_prime(S.format(p)) == p);
  CHECK(S.parse_prime("2*s").kind == SurfacePrime::Kind::S);
  auto g = S.parse_prime("s - t");
  CHECK(g.y == 't');
  CHECK(S.format(g) == "t-s");
  auto e = S.parse_prime("t^3 - s");  // Eisenstein in t
  CHECK(e.y == 's');
  CHECK(e.k == 3);
  CHECK(code_of([&] { S.parse_prime("s*t+s+t"); }) == ErrorCode::AnalyticSplittingUnsupported);
  CHECK(code_of([&] { S.parse_prime("t^2-s^2"); }) == ErrorCode::AnalyticSplittingUnsupported);
  CHECK(code_of([&] { S.parse_prime("1+s"); }) == ErrorCode::UnsupportedPrime);
  CHECK(code_of([&] { S.parse_prime("s*t"); }) == ErrorCode::UnsupportedPrime);
}

TEST_CASE("divisors") {
  auto P1 = SchemeModel::p1(finite_field(3));
  auto D = parse_divisor(P1, "[0] + 2[inf] + [t^2+1] + [0]");
  CHECK(format_divisor(P1, D) == "2[inf]+2[0]+[t^2+1]");
  CHECK(format_divisor(P1, parse_divisor(P1, format_divisor(P1, D))) == format_divisor(P1, D));
  CHECK(D.dominates(D.reduced()));
  CHECK_FALSE(D.reduced().dominates(D));
  CHECK(parse_divisor(P1, "").empty());
  CHECK(code_of([&] { parse_divisor(P1, "[0]+"); }) == ErrorCode::ParseError);

  auto S = SchemeModel::local_surface(finite_field(3));
  auto E = parse_divisor(S, "(t) + 3(s)");
  CHECK(format_divisor(S, E) == "3(s)+(t)");
}

TEST_CASE("chain templates on curves") {
  auto P1 = SchemeModel::p1(finite_field(3));
  auto D = parse_divisor(P1, "[0]+[inf]");
  auto cs = enumerate_chain_types(P1, D);
  CHECK(labels(P1, cs, ChainKind::ParshinOnPair) == std::vector<std::string>{"(x)", "(inf, eta)", "(0, eta)"});
  CHECK(labels(P1, cs, ChainKind::QChain) == std::vector<std::string>{"(eta)"});
  CHECK(cs[0].family);
  check_against_predicates(P1, D);

  auto empty = enumerate_chain_types(P1, DivisorData{});
  CHECK(labels(P1, empty, ChainKind::ParshinOnPair) == std::vector<std::string>{"(x)"});
  CHECK(labels(P1, empty, ChainKind::QChain) == std::vector<std::string>{"(eta)"});
  check_against_predicates(P1, DivisorData{});

  // Z-part at U-points (dimension 0), local units at D-points (dimension 1).
  for (const auto& c : cs) {
    if (c.kind != ChainKind::ParshinOnPair) continue;
    bool through_d = c.points.size() == 2;
    CHECK(c.dimension(P1) == (through_d ? 1 : 0));
    if (through_d) CHECK(in_support(P1, D, c.points[0]));
    else CHECK_FALSE(in_support(P1, D, c.points[0]));
  }
}

TEST_CASE("chain templates on the local surface") {
  auto S = SchemeModel::local_surface(finite_field(3));
  auto D = parse_divisor(S, "(s)+(t)");
  auto cs = enumerate_chain_types(S, D);
  CHECK(labels(S, cs, ChainKind::ParshinOnPair) ==
        std::vector<std::string>{"(m, (f))", "(m, (s), eta)", "(m, (t), eta)"});
  CHECK(labels(S, cs, ChainKind::QChain) == std::vector<std::string>{"((f))"});
  CHECK(labels(S, cs, ChainKind::QoChain) == std::vector<std::string>{"(m, eta)"});
  check_against_predicates(S, D);

  auto none = enumerate_chain_types(S, DivisorData{});
  CHECK(labels(S, none, ChainKind::ParshinOnPair) == std::vector<std::string>{"(m)"});
  CHECK(labels(S, none, ChainKind::QoChain).empty());
  check_against_predicates(S, DivisorData{});
  check_against_predicates(S, parse_divisor(S, "2(t-s^2)"));
}

TEST_CASE("dimension function drops by one along codimension-one specializations") {
  for (auto model : {SchemeModel::p1(finite_field(2)), SchemeModel::local_surface(finite_field(2))}) {
    DivisorData D = model.kind() == ModelKind::P1 ? parse_divisor(model, "[0]") : parse_divisor(model, "(s)");
    auto mp = model_poset(model, D);
    const auto& P = mp.poset;
    for (std::size_t x = 0; x < P.size(); ++x) {
      for (std::size_t y = 0; y < P.size(); ++y) {
        if (x == y || !P.specializes(x, y)) continue;
        CHECK(P.point(x).dim > P.point(y).dim);
        // codimension one: nothing strictly in between
        bool between = false;
        for (std::size_t z = 0; z < P.size(); ++z) {
          if (z != x && z != y && P.specializes(x, z) && P.specializes(z, y)) between = true;
        }
        if (!between) CHECK(P.point(x).dim == P.point(y).dim + 1);
      }
    }
    CHECK(P.min_dim() == 0);
  }
}

TEST_CASE("Q-circle chains on a toy arithmetic surface") {
  // Regular arithmetic surface over a DVR: generic point, special fibre X_s,
  // a horizontal curve H, a closed point x on both.
  ChainPoset P({{"eta", 2, false}, {"X_s", 1, true}, {"H", 1, false}, {"x", 0, true}});
  for (std::size_t i = 1; i < 4; ++i) P.add_specialization(0, i);
  P.add_specialization(1, 3);
  P.add_specialization(2, 3);
  CHECK(is_parshin_on_pair(P, {3, 1, 0}));
  CHECK(is_parshin(P, {3, 1, 0}));
  CHECK(is_parshin_on_pair(P, {3, 2}));
  CHECK(is_q_chain(P, {3, 0}));
  CHECK(is_qo_chain(P, {3, 0}));
  CHECK(is_q_chain(P, {2}));
  CHECK_FALSE(is_qo_chain(P, {2}));
  CHECK_FALSE(is_q_chain(P, {1}));  // X_s lies in D
  CHECK_FALSE(is_chain(P, {0, 3}));  // wrong direction
}

TEST_CASE("residue rings") {
  auto P2 = SchemeModel::p1(finite_field(2));
  SchemePoint eta{SchemePoint::Type::Generic, {}, {}};
  SchemePoint v{SchemePoint::Type::Closed, P2.parse_place("t^2+t+1"), {}};
  CHECK(residue_ring_at(P2, ChainRecord{{v, eta}, ChainKind::ParshinOnPair, false}).description == "F_4((pi))");
  auto rv = residue_ring_at(P2, ChainRecord{{v}, ChainKind::ParshinOnPair, false});
  CHECK(rv.level == 0);
  CHECK(rv.residue_order == 4);
  SchemePoint inf{SchemePoint::Type::Closed, Place{true, {}}, {}};
  CHECK(residue_ring_at(P2, ChainRecord{{inf, eta}, ChainKind::ParshinOnPair, false}).description == "F_2((1/t))");

  auto S = SchemeModel::local_surface(finite_field(3));
  SchemePoint m{SchemePoint::Type::Closed, {}, {}};
  SchemePoint pt{SchemePoint::Type::HeightOne, {}, S.parse_prime("t")};
  SchemePoint ps{SchemePoint::Type::HeightOne, {}, S.parse_prime("s")};
  auto r = residue_ring_at(S, ChainRecord{{m, pt, eta}, ChainKind::ParshinOnPair, false});
  CHECK(r.description == "F_3((s))((t))");
  CHECK(r.level == 2);
  CHECK(residue_ring_at(S, ChainRecord{{m, ps, eta}, ChainKind::ParshinOnPair, false}).description == "F_3((t))((s))");
  CHECK(residue_ring_at(S, ChainRecord{{m, pt}, ChainKind::ParshinOnPair, false}).description == "F_3((s))");
  CHECK(code_of([&] { S.parse_prime("s*t+s+t"); }) == ErrorCode::AnalyticSplittingUnsupported);
}

TEST_CASE("multiplicity at maximal chains") {
  auto P1 = SchemeModel::p1(finite_field(3));
  auto D = parse_divisor(P1, "2[0]+[inf]");
  SchemePoint eta{SchemePoint::Type::Generic, {}, {}};
  SchemePoint zero{SchemePoint::Type::Closed, P1.parse_place("0"), {}};
  SchemePoint inf{SchemePoint::Type::Closed, Place{true, {}}, {}};
  CHECK(multiplicity_D(P1, ChainRecord{{zero, eta}, ChainKind::ParshinOnPair, false}, D) == 2);
  CHECK(multiplicity_D(P1, ChainRecord{{inf, eta}, ChainKind::ParshinOnPair, false}, D) == 1);
  CHECK(code_of([&] { multiplicity_D(P1, ChainRecord{{eta}, ChainKind::QChain, false}, D); }) ==
        ErrorCode::NotMaximalChain);

  auto S = SchemeModel::local_surface(finite_field(3));
  auto E = parse_divisor(S, "3(s)");
  SchemePoint m{SchemePoint::Type::Closed, {}, {}};
  SchemePoint ps{SchemePoint::Type::HeightOne, {}, S.parse_prime("s")};
  CHECK(multiplicity_D(S, ChainRecord{{m, ps, eta}, ChainKind::ParshinOnPair, false}, E) == 3);

  // every emitted maximal template through D reads off its multiplicity
  for (const auto& c : enumerate_chain_types(P1, D)) {
    if (c.kind == ChainKind::ParshinOnPair && c.points.size() == 2) {
      CHECK(multiplicity_D(P1, c, D) == D.multiplicity(c.points[0]));
    }
  }
}
