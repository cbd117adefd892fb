#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "parshin/abgroup.hpp"
#include "parshin/error.hpp"
#include "parshin/kernels.hpp"
#include "parshin/rng.hpp"

using namespace parshin;

namespace {

std::vector<Integer> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.range(-bound, bound);
  return m;
}

// Brute-force order of Z^g / (col(R) + n Z^g): enumerate (Z/n)^g and count
// orbits under translation by the relation columns (closure from 0).
std::size_t brute_force_order(const IntMatrix& rel, std::size_t g, long n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < g; ++i) total *= static_cast<std::size_t>(n);
  auto encode = [&](const std::vector<long>& v) {
    std::size_t code = 0;
    for (std::size_t i = g; i-- > 0;) code = code * static_cast<std::size_t>(n) + static_cast<std::size_t>(v[i]);
    return code;
  };
  std::vector<char> seen(total, 0);
  std::vector<std::vector<long>> frontier{std::vector<long>(g, 0)};
  seen[0] = 1;
  std::size_t subgroup = 1;
  while (!frontier.empty()) {
    auto v = frontier.back();
    frontier.pop_back();
    for (std::size_t j = 0; j < rel.cols(); ++j) {
      for (int sgn : {1, -1}) {
        std::vector<long> w = v;
        for (std::size_t i = 0; i < g; ++i) {
          long r = rel(i, j).get_si() % n;
          w[i] = ((w[i] + sgn * r) % n + n) % n;
        }
        std::size_t c = encode(w);
        if (!seen[c]) {
          seen[c] = 1;
          ++subgroup;
          frontier.push_back(w);
        }
      }
    }
  }
  return total / subgroup;
}

}  // namespace

TEST_CASE("smith normal form of [[2,4],[6,8]]") {
  IntMatrix m{{2, 4}, {6, 8}};
  SmithForm snf = smith_normal_form(m);
  CHECK(verify_smith_form(m, snf, true));
  CHECK(snf.diagonal == IntMatrix{{2, 0}, {0, 4}});
  // d_1 = gcd of entries, d_1 * d_2 = |det M|.
  CHECK(snf.diagonal(0, 0) == 2);
  CHECK(snf.diagonal(0, 0) * snf.diagonal(1, 1) == abs(determinant(m)));
}

TEST_CASE("smith normal form of identity and zero") {
  auto id = IntMatrix::identity(3);
  CHECK(smith_normal_form(id).diagonal == id);
  IntMatrix zero(2, 3);
  SmithForm z = smith_normal_form(zero);
  CHECK(z.diagonal.is_zero());
  CHECK(verify_smith_form(zero, z, true));
}

TEST_CASE("smith normal form of empty shapes") {
  IntMatrix a(0, 3), b(3, 0);
  CHECK(verify_smith_form(a, smith_normal_form(a), true));
  CHECK(verify_smith_form(b, smith_normal_form(b), true));
}

TEST_CASE("verify_smith_form rejects a wrong diagonal") {
  IntMatrix m{{2, 4}, {6, 8}};
  SmithForm snf = smith_normal_form(m);
  snf.diagonal(1, 1) = 8;
  CHECK_FALSE(verify_smith_form(m, snf));
}

TEST_CASE("invariant factors examples") {
  SUBCASE("Z/2 + Z") {
    PresentedGroup g(2, IntMatrix{{2}, {0}});
    CHECK(g.invariants().factors == ints({2}));
    CHECK(g.invariants().free_rank == 1);
  }
  SUBCASE("Z/6 via modulus") {
    PresentedGroup g(1, IntMatrix(1, 0), Integer(6));
    CHECK(g.invariants().factors == ints({6}));
    CHECK(g.invariants().free_rank == 0);
  }
  SUBCASE("coker [[2,4],[6,8]]") {
    PresentedGroup g(2, IntMatrix{{2, 4}, {6, 8}});
    CHECK(g.invariants().factors == ints({2, 4}));
    CHECK(g.invariants().free_rank == 0);
  }
  SUBCASE("modulus forces free rank zero") {
    PresentedGroup g(3, IntMatrix{{2}, {0}, {0}}, Integer(4));
    CHECK(g.invariants().factors == ints({2, 4, 4}));
    CHECK(g.invariants().free_rank == 0);
  }
}

TEST_CASE("is_isomorphic") {
  auto z2z4 = PresentedGroup::from_factors(ints({2, 4}));
  auto z8 = PresentedGroup::from_factors(ints({8}));
  auto z2z2 = PresentedGroup::from_factors(ints({2, 2}));
  CHECK_FALSE(is_isomorphic(z2z4, z8));
  CHECK(is_isomorphic(z2z2, PresentedGroup::from_factors(ints({2, 2}))));
  CHECK(is_isomorphic(PresentedGroup(2, IntMatrix{{2, 4}, {6, 8}}), z2z4));
  // Z/2 + Z/3 is cyclic of order 6.
  CHECK(is_isomorphic(PresentedGroup::from_factors(ints({2, 3})), PresentedGroup::from_factors(ints({6}))));

  auto with_mod = PresentedGroup(1, IntMatrix(1, 0), Integer(2));
  try {
    (void)is_isomorphic(with_mod, z2z2);
    FAIL("expected MIXED_MODULUS");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MixedModulus);
  }
}

TEST_CASE("cokernel examples") {
  auto z = PresentedGroup::free(1);
  auto z2 = PresentedGroup::free(2);
  SUBCASE("zero map gives the target") {
    GroupMap f(z, z2, IntMatrix(2, 1));
    CHECK(cokernel(f).invariants() == z2.invariants());
  }
  SUBCASE("identity gives the trivial group") {
    GroupMap f(z2, z2, IntMatrix::identity(2));
    CHECK(cokernel(f).invariants().is_trivial());
  }
  SUBCASE("x -> (2x, 0)") {
    GroupMap f(z, z2, IntMatrix{{2}, {0}});
    auto c = cokernel(f).invariants();
    CHECK(c.factors == ints({2}));
    CHECK(c.free_rank == 1);
  }
  SUBCASE("modulus inherited from target") {
    PresentedGroup target(2, IntMatrix(2, 0), Integer(4));
    GroupMap f(z, target, IntMatrix{{2}, {0}});
    auto c = cokernel(f);
    REQUIRE(c.modulus());
    CHECK(c.invariants().factors == ints({2, 4}));
  }
}

TEST_CASE("group maps must respect relations") {
  auto z2 = PresentedGroup::cyclic(2);
  auto z = PresentedGroup::free(1);
  auto z4 = PresentedGroup::cyclic(4);
  CHECK_NOTHROW(GroupMap(z2, z4, IntMatrix{{2}}));
  try {
    GroupMap(z2, z, IntMatrix{{1}});
    FAIL("expected NOT_A_HOMOMORPHISM");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAHomomorphism);
  }
  CHECK_THROWS_AS(GroupMap(z2, z4, IntMatrix{{1}}), Error);
}

TEST_CASE("lattice membership") {
  PresentedGroup g(2, IntMatrix{{2, 0}, {0, 3}});
  CHECK(lattice_contains(g, ints({4, 3})));
  CHECK_FALSE(lattice_contains(g, ints({1, 0})));
  PresentedGroup gm(2, IntMatrix{{1}, {1}}, Integer(5));
  CHECK(lattice_contains(gm, ints({3, 3})));
  CHECK(lattice_contains(gm, ints({5, 0})));
  CHECK_FALSE(lattice_contains(gm, ints({1, 0})));
}

TEST_CASE("integer kernel and image subgroups") {
  IntMatrix m{{1, 2, 3}};
  IntMatrix k = integer_kernel(m);
  CHECK(k.cols() == 2);
  CHECK((m * k).is_zero());

  // <(1,1)> inside Z/2 + Z/4 has order 4.
  auto moduli = ints({2, 4});
  auto h = image_subgroup({ints({1, 1})}, moduli);
  CHECK(h.invariants().factors == ints({4}));
  // <(1,0),(0,2)> is (Z/2)^2.
  auto h2 = image_subgroup({ints({1, 0}), ints({0, 2})}, moduli);
  CHECK(h2.invariants().factors == ints({2, 2}));
  CHECK(image_subgroup({}, moduli).invariants().is_trivial());
}

TEST_CASE("property: random SNF soundness") {
  Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    Rng r = rng.split(static_cast<std::uint64_t>(trial));
    auto rows = static_cast<std::size_t>(r.range(1, 6));
    auto cols = static_cast<std::size_t>(r.range(1, 6));
    IntMatrix m = random_matrix(r, rows, cols, 20);
    SmithForm snf = smith_normal_form(m);
    REQUIRE(verify_smith_form(m, snf, true));
  }
}

TEST_CASE("property: invariants are stable under permutation and zero relations") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Rng r = rng.split(static_cast<std::uint64_t>(trial));
    auto g = static_cast<std::size_t>(r.range(1, 5));
    auto c = static_cast<std::size_t>(r.range(1, 5));
    IntMatrix m = random_matrix(r, g, c, 9);
    auto base = PresentedGroup(g, m).invariants();

    IntMatrix permuted = m;
    for (std::size_t i = g; i > 1; --i) permuted.swap_rows(i - 1, static_cast<std::size_t>(r.below(i)));
    for (std::size_t j = c; j > 1; --j) permuted.swap_cols(j - 1, static_cast<std::size_t>(r.below(j)));
    CHECK(PresentedGroup(g, permuted).invariants() == base);
    CHECK(PresentedGroup(g, m.concat(IntMatrix(g, 2))).invariants() == base);
  }
}

TEST_CASE("property: cokernel order matches brute-force enumeration") {
  Rng rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    Rng r = rng.split(static_cast<std::uint64_t>(trial));
    const long n = r.range(2, 6);
    auto g = static_cast<std::size_t>(r.range(1, 3));
    std::size_t total = 1;
    for (std::size_t i = 0; i < g; ++i) total *= static_cast<std::size_t>(n);
    if (total > 200) continue;
    IntMatrix m = random_matrix(r, g, static_cast<std::size_t>(r.range(0, 3)), 7);
    PresentedGroup grp(g, m, Integer(n));
    CHECK(grp.invariants().torsion_order() == Integer(static_cast<unsigned long>(brute_force_order(m, g, n))));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("mod-n pre-reduction agrees with plain SNF of [R | nI]") {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    Rng r = rng.split(static_cast<std::uint64_t>(trial));
    const long n = r.range(2, 12);
    auto g = static_cast<std::size_t>(r.range(1, 6));
    auto c = static_cast<std::size_t>(r.range(0, 8));
    IntMatrix m = random_matrix(r, g, c, 15);
    PresentedGroup grp(g, m, Integer(n));
    IntMatrix full = grp.full_relations();
    SmithForm snf = smith_normal_form(full);
    CHECK(grp.invariants() == invariant_factors_from_diagonal(snf.diagonal, g));
  }
}

TEST_CASE("Tietze kernel: serial and OpenMP versions agree") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Rng r = rng.split(static_cast<std::uint64_t>(trial));
    const auto n = static_cast<std::uint32_t>(r.range(2, 30));
    kernels::ModMatrix m(n, static_cast<std::size_t>(r.range(1, 40)), static_cast<std::size_t>(r.range(1, 80)));
    for (auto& v : m.data) v = r.below(4) == 0 ? static_cast<std::uint32_t>(r.below(n)) : 0;
    CHECK(kernels::tietze_reduce_serial(m) == kernels::tietze_reduce_parallel(m));
  }
}

TEST_CASE("shared presentations cache invariants once") {
  PresentedGroup g(2, IntMatrix{{2, 4}, {6, 8}});
  PresentedGroup copy = g;
  CHECK(&g.invariants() == &copy.invariants());
}

TEST_CASE("ModLattice quotient agrees with the presented group") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t n = static_cast<std::uint32_t>(rng.range(2, 12));
    const std::size_t dim0 = static_cast<std::size_t>(rng.range(1, 4));
    const std::size_t dim = dim0 + static_cast<std::size_t>(rng.range(0, 3));
    const int k = static_cast<int>(rng.range(0, 7));
    ModLattice L(n, dim0);
    std::vector<std::vector<Integer>> cols;
    for (int j = 0; j < k; ++j) {
      // Grow half-way through, so early vectors are shorter.
      if (j == k / 2) L.grow(dim);
      const std::size_t len = j < k / 2 ? dim0 : dim;
      std::vector<std::uint32_t> v(len);
      std::vector<Integer> c(dim, Integer(0));
      for (std::size_t i = 0; i < len; ++i) {
        v[i] = static_cast<std::uint32_t>(rng.below(n));
        // Sparse vectors exercise non-unit pivots.
        if (rng.below(3) == 0) v[i] = 0;
        c[i] = v[i];
      }
      L.insert(v);
      cols.push_back(c);
    }
    L.grow(dim);
    PresentedGroup G(dim, IntMatrix::from_columns(dim, cols), Integer(n));
    auto Q = L.quotient();
    INFO("trial " << trial << " n=" << n);
    CHECK(Q.invariants() == G.invariants());
    CHECK(L.quotient_generators().size() == Q.generators());
  }
}
