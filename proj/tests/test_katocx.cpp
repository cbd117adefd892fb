#include <doctest.h>

#include <functional>
#include <numeric>
#include <optional>
#include <set>

#include "parshin/error.hpp"
#include "parshin/katocx.hpp"

using namespace parshin;
using namespace parshin::katocx;

namespace {

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::string H(const SNCConfig& c, int n, int a) { return homology(build_nerve_complex(c, Integer(n)), a).invariants().to_string(); }

SNCConfig triangle() { return SNCConfig::graph(3, {{{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 1}}); }

// Connected components of the incidence graph, by union-find.
int graph_components(int v, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(v) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int c = v;
  for (auto [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --c;
    }
  }
  return c;
}

std::string power(int n, long k) {
  if (k == 0) return "0";
  std::string out;
  for (long i = 0; i < k; ++i) out += (i ? " + Z/" : "Z/") + std::to_string(n);
  return out;
}

// |ker d_{a-1}| / |im d_a| by enumerating (Z/n)^c; only for tiny complexes.
long brute_force_order(const NerveComplex& cx, int a) {
  const long n = cx.n.get_si();
  auto apply = [&](const IntMatrix& m, const std::vector<long>& x) {
    std::vector<long> y(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j).get_si() * x[j];
      y[i] = ((y[i] % n) + n) % n;
    }
    return y;
  };
  auto for_all = [&](std::size_t dim, auto&& fn) {
    std::vector<long> x(dim, 0);
    while (true) {
      fn(x);
      std::size_t i = 0;
      while (i < dim && ++x[i] == n) x[i++] = 0;
      if (i == dim) break;
    }
  };
  const std::size_t ca = cx.rank(a);
  long kernel = 0;
  for_all(ca, [&](const std::vector<long>& x) {
    if (a == 0) {
      ++kernel;
      return;
    }
    auto y = apply(cx.d[static_cast<std::size_t>(a) - 1], x);
    if (std::all_of(y.begin(), y.end(), [](long v) { return v == 0; })) ++kernel;
  });
  std::set<std::vector<long>> image;
  if (a < cx.top) {
    for_all(cx.rank(a + 1), [&](const std::vector<long>& x) { image.insert(apply(cx.d[static_cast<std::size_t>(a)], x)); });
  } else {
    image.insert(std::vector<long>(ca, 0));
  }
  return kernel / static_cast<long>(image.size());
}

}  // namespace

TEST_CASE("worked configurations") {
  auto one = SNCConfig::create(1, {});
  auto cx = build_nerve_complex(one, Integer(5));
  CHECK(cx.top == 0);
  CHECK(cx.rank(0) == 1);
  CHECK(H(one, 5, 0) == "Z/5");
  CHECK(code_of([&] { homology(cx, 1); }) == ErrorCode::DegreeOutOfRange);
  CHECK(code_of([&] { homology(cx, -1); }) == ErrorCode::DegreeOutOfRange);

  auto two = SNCConfig::graph(2, {{{1, 2}, 1}});
  auto c2 = build_nerve_complex(two, Integer(3));
  REQUIRE(c2.d.size() == 1);
  CHECK(c2.d[0] == IntMatrix{{-1}, {1}});

  auto tri = triangle();
  auto c3 = build_nerve_complex(tri, Integer(4));
  CHECK(c3.rank(0) == 3);
  CHECK(c3.rank(1) == 3);
  CHECK(c3.rank(2) == 0);
  for (int n : {2, 3, 4}) {
    CHECK(H(tri, n, 0) == "Z/" + std::to_string(n));
    CHECK(H(tri, n, 1) == "Z/" + std::to_string(n));
    CHECK(H(tri, n, 2) == "0");
  }

  // A-B-C: a tree.
  auto chain = SNCConfig::graph(3, {{{1, 2}, 1}, {{2, 3}, 1}});
  CHECK(H(chain, 4, 0) == "Z/4");
  CHECK(H(chain, 4, 1) == "0");

  // Filling the triangle with a triple point kills the loop.
  auto filled = SNCConfig::create(3, {{{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 1}, {{1, 2, 3}, 1}});
  CHECK(H(filled, 4, 1) == "0");
  CHECK(H(filled, 4, 2) == "0");

  // Two lines meeting twice: a circle again.
  CHECK(H(SNCConfig::graph(2, {{{1, 2}, 2}}), 3, 1) == "Z/3");
}

TEST_CASE("obstruction reports") {
  auto good = obstruction_report(SNCConfig::create(1, {}), Integer(4));
  CHECK(good.h1.is_trivial());
  CHECK(good.h2.is_trivial());
  CHECK(good.statement.find("isomorphism") != std::string::npos);

  auto tri = obstruction_report(triangle(), Integer(2));
  CHECK(tri.h1.to_string() == "Z/2");
  CHECK(tri.h2.is_trivial());
  CHECK(tri.statement.find("cokernel Z/2") != std::string::npos);

  auto disjoint = SNCConfig::create(2, {});
  CHECK(H(disjoint, 3, 0) == "Z/3 + Z/3");
  auto rep = obstruction_report(disjoint, Integer(3));
  CHECK(rep.h1.is_trivial());
  CHECK(rep.h2.is_trivial());
}

TEST_CASE("face data is validated") {
  // Triple point but Y_1 n Y_2 empty.
  CHECK(code_of([] { SNCConfig::create(3, {{{1, 3}, 1}, {{2, 3}, 1}, {{1, 2, 3}, 1}}); }) ==
        ErrorCode::FaceMapIncompatible);
  // Disconnected target without an explicit map.
  CHECK(code_of([] { SNCConfig::create(3, {{{1, 2}, 2}, {{1, 3}, 1}, {{2, 3}, 1}, {{1, 2, 3}, 1}}); }) ==
        ErrorCode::FaceMapIncompatible);
  // Map of the wrong length, and a map leaving the target.
  CHECK(code_of([] {
          SNCConfig::create(3, {{{1, 2}, 2}, {{1, 3}, 1}, {{2, 3}, 1}, {{1, 2, 3}, 1}}, {{{1, 2, 3}, 3, {0, 1}}});
        }) == ErrorCode::FaceMapIncompatible);
  CHECK(code_of([] {
          SNCConfig::create(3, {{{1, 2}, 2}, {{1, 3}, 1}, {{2, 3}, 1}, {{1, 2, 3}, 1}}, {{{1, 2, 3}, 3, {2}}});
        }) == ErrorCode::FaceMapIncompatible);
  CHECK_NOTHROW(SNCConfig::create(3, {{{1, 2}, 2}, {{1, 3}, 1}, {{2, 3}, 1}, {{1, 2, 3}, 1}}, {{{1, 2, 3}, 3, {1}}}));

  // The two routes Y_1234 -> Y_12 disagree.
  std::map<Subset, int> pi0;
  for (Subset s : std::vector<Subset>{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4},
                                      {2, 3, 4}, {1, 2, 3, 4}}) {
    pi0[s] = 1;
  }
  pi0[{1, 2}] = 2;
  CHECK(code_of([&] { SNCConfig::create(4, pi0, {{{1, 2, 3}, 3, {0}}, {{1, 2, 4}, 3, {1}}}); }) ==
        ErrorCode::FaceMapIncompatible);
  CHECK_NOTHROW(SNCConfig::create(4, pi0, {{{1, 2, 3}, 3, {1}}, {{1, 2, 4}, 3, {1}}}));
}

TEST_CASE("JSON configurations") {
  auto tri = triangle();
  auto back = parse_snc_config(tri.to_json());
  CHECK(back.to_json() == tri.to_json());
  CHECK(H(back, 4, 1) == "Z/4");

  auto cfg = parse_snc_config(
      R"({"components": 3, "intersections": [{"subset": [1,2], "pi0": 2}, {"subset": [1,3], "pi0": 1},
          {"subset": [2,3], "pi0": 1}, {"subset": [1,2,3], "pi0": 1}],
          "faces": [{"subset": [1,2,3], "nu": 3, "map": [1]}]})");
  CHECK(cfg.pi0({1, 2}) == 2);
  CHECK(cfg.face({1, 2, 3}, 3, 0) == 1);
  CHECK(parse_snc_config(cfg.to_json()).to_json() == cfg.to_json());
  CHECK(code_of([] { parse_snc_config("{"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_snc_config(R"({"intersections": []})"); }) == ErrorCode::ParseError);
}

TEST_CASE("property: random closed configurations have d o d = 0") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int N = static_cast<int>(rng.range(2, 5));
    // Random downward-closed family of strata, each connected.
    std::map<Subset, int> pi0;
    for (unsigned mask = 1; mask < (1u << N); ++mask) {
      Subset s;
      for (int i = 0; i < N; ++i) {
        if (mask & (1u << i)) s.push_back(i + 1);
      }
      if (s.size() < 2) continue;
      bool faces_ok = true;
      for (std::size_t k = 0; k < s.size() && s.size() > 2; ++k) {
        Subset t = s;
        t.erase(t.begin() + static_cast<long>(k));
        faces_ok = faces_ok && pi0.count(t) > 0;
      }
      if (faces_ok && rng.below(3) != 0) pi0[s] = 1;
    }
    auto cfg = SNCConfig::create(N, pi0);
    auto cx = build_nerve_complex(cfg, Integer(6));
    for (std::size_t s = 0; s + 1 < cx.d.size(); ++s) {
      if (cx.d[s].cols() == 0 || cx.d[s + 1].cols() == 0 || cx.d[s].rows() == 0) continue;
      CHECK((cx.d[s] * cx.d[s + 1]).is_zero());
    }
    // Euler characteristic for prime n.
    long chi_cells = 0, chi_h = 0;
    auto c5 = build_nerve_complex(cfg, Integer(5));
    for (int a = 0; a <= c5.top; ++a) {
      const long sign = a % 2 == 0 ? 1 : -1;
      chi_cells += sign * static_cast<long>(c5.rank(a));
      const auto inv = homology(c5, a).invariants();
      chi_h += sign * static_cast<long>(inv.factors.size() + inv.free_rank);
    }
    CHECK(chi_cells == chi_h);
  }
}

TEST_CASE("oracle: graph homology and brute-force orders") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Rng r = rng.split(static_cast<std::uint64_t>(trial));
    auto cfg = random_graph_config(r, 6, 2);
    const int V = cfg.components();
    std::vector<std::pair<int, int>> edges;
    long E = 0;
    for (const auto& s : cfg.strata(2)) {
      for (int k = 0; k < cfg.pi0(s); ++k) edges.push_back({s[0], s[1]});
      E += cfg.pi0(s);
    }
    const int C = graph_components(V, edges);
    for (int n : {2, 3, 4}) {
      INFO("trial " << trial << " n=" << n << " " << cfg.to_json());
      CHECK(H(cfg, n, 0) == power(n, C));
      if (V >= 2) CHECK(H(cfg, n, 1) == power(n, E - V + C));
    }
  }

  // Direct kernel/image counting on small complexes, including 2-cells.
  Rng r2(9);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::map<Subset, int> pi0;
    for (Subset s : std::vector<Subset>{{1, 2}, {1, 3}, {2, 3}}) pi0[s] = r2.below(3) == 0 ? 0 : 1;
    if (pi0[{1, 2}] && pi0[{1, 3}] && pi0[{2, 3}] && r2.coin()) pi0[{1, 2, 3}] = 1;
    auto cfg = SNCConfig::create(3, pi0);
    for (int n : {2, 4, 6}) {
      auto cx = build_nerve_complex(cfg, Integer(n));
      for (int a = 0; a <= cx.top; ++a) {
        CHECK(homology(cx, a).invariants().torsion_order() == brute_force_order(cx, a));
        ++checked;
      }
    }
  }
  CHECK(checked == 360);
}
