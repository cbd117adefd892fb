#include "parshin/kernels.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parshin::kernels {
namespace {

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(n), new_r = static_cast<std::int64_t>(a % n);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(t);
}

bool is_unit(std::uint32_t a, std::uint32_t n) { return a != 0 && std::gcd(a, n) == 1; }

// col_k -= f * col_j over all rows.
inline void axpy_column(ModMatrix& m, std::size_t k, std::size_t j, std::uint64_t f) {
  const std::uint64_t n = m.modulus;
  std::uint32_t* dst = m.data.data() + k * m.rows;
  const std::uint32_t* src = m.data.data() + j * m.rows;
  const std::uint64_t neg = (n - f % n) % n;
  for (std::size_t l = 0; l < m.rows; ++l) {
    if (src[l] != 0) dst[l] = static_cast<std::uint32_t>((dst[l] + neg * src[l]) % n);
  }
}

template <bool Parallel>
TietzeResult tietze_reduce(ModMatrix m) {
  const std::uint32_t n = m.modulus;
  std::vector<char> row_alive(m.rows, 1), col_alive(m.cols, 1);
  TietzeResult out;

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (!col_alive[j]) continue;
      std::size_t pivot_row = m.rows;
      for (std::size_t i = 0; i < m.rows; ++i) {
        if (row_alive[i] && is_unit(m.at(i, j), n)) {
          pivot_row = i;
          break;
        }
      }
      if (pivot_row == m.rows) continue;

      const std::uint64_t u_inv = inverse_mod(m.at(pivot_row, j), n);
      std::vector<std::size_t> targets;
      for (std::size_t k = 0; k < m.cols; ++k) {
        if (k != j && col_alive[k] && m.at(pivot_row, k) != 0) targets.push_back(k);
      }
      const auto count = static_cast<std::ptrdiff_t>(targets.size());
      if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t t = 0; t < count; ++t) {
          const std::size_t k = targets[static_cast<std::size_t>(t)];
          axpy_column(m, k, j, (m.at(pivot_row, k) * u_inv) % n);
        }
      } else {
        for (std::ptrdiff_t t = 0; t < count; ++t) {
          const std::size_t k = targets[static_cast<std::size_t>(t)];
          axpy_column(m, k, j, (m.at(pivot_row, k) * u_inv) % n);
        }
      }
      row_alive[pivot_row] = 0;
      col_alive[j] = 0;
      ++out.eliminated;
      progress = true;
    }
  }

  for (std::size_t i = 0; i < m.rows; ++i) {
    if (row_alive[i]) out.surviving_generators.push_back(i);
  }
  std::vector<std::vector<std::uint32_t>> columns;
  for (std::size_t j = 0; j < m.cols; ++j) {
    if (!col_alive[j]) continue;
    std::vector<std::uint32_t> c;
    c.reserve(out.surviving_generators.size());
    bool nonzero = false;
    for (std::size_t i : out.surviving_generators) {
      c.push_back(m.at(i, j));
      nonzero = nonzero || c.back() != 0;
    }
    if (nonzero) columns.push_back(std::move(c));
  }
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

  out.residual = ModMatrix(n, out.surviving_generators.size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    std::copy(columns[j].begin(), columns[j].end(), out.residual.data.begin() + static_cast<std::ptrdiff_t>(j * out.residual.rows));
  }
  return out;
}

std::size_t ipow(std::size_t base, std::uint32_t e) {
  std::size_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

struct ClosureLayout {
  std::size_t u, r, contexts_ml, pairs, ml_cols, steinberg_units, contexts_st, st_cols;
};

ClosureLayout closure_layout(const ClosureSpec& spec) {
  ClosureLayout L{};
  L.u = spec.units;
  L.r = spec.degree;
  L.contexts_ml = L.r ? ipow(L.u, spec.degree - 1) : 0;
  L.pairs = spec.all_pairs ? L.u * (L.u + 1) / 2 : L.u;
  L.ml_cols = L.r * L.contexts_ml * L.pairs;
  L.steinberg_units = 0;
  for (auto v : spec.one_minus) L.steinberg_units += v >= 0 ? 1 : 0;
  L.contexts_st = L.r >= 2 ? ipow(L.u, spec.degree - 2) : 0;
  L.st_cols = L.r >= 2 ? (L.r - 1) * L.contexts_st * L.steinberg_units : 0;
  return L;
}

// Index of the tuple whose slots other than `skip` (and `skip + 1` when
// two_slots) are read from the mixed-radix context, with the given values.
std::size_t place(std::size_t ctx, std::size_t u, std::size_t r, std::size_t slot, std::size_t a, bool two_slots,
                  std::size_t b) {
  std::size_t index = 0, weight = 1;
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t digit;
    if (k == slot) {
      digit = a;
    } else if (two_slots && k == slot + 1) {
      digit = b;
    } else {
      digit = ctx % u;
      ctx /= u;
    }
    index += digit * weight;
    weight *= u;
  }
  return index;
}

void fill_closure_column(const ClosureSpec& spec, const ClosureLayout& L, const std::vector<std::uint32_t>& pair_a,
                         const std::vector<std::uint32_t>& pair_b, const std::vector<std::uint32_t>& st_units,
                         ModMatrix& m, std::size_t col) {
  const std::uint32_t n = spec.modulus;
  auto bump = [&](std::size_t row, std::uint32_t delta) {
    std::uint32_t& cell = m.at(row, col);
    cell = static_cast<std::uint32_t>((std::uint64_t(cell) + delta) % n);
  };
  if (col < L.ml_cols) {
    std::size_t pair = col % L.pairs;
    std::size_t rest = col / L.pairs;
    std::size_t ctx = rest % L.contexts_ml;
    std::size_t slot = rest / L.contexts_ml;
    std::uint32_t a = pair_a[pair], b = pair_b[pair];
    std::uint32_t ab = spec.mul[std::size_t(a) * L.u + b];
    bump(place(ctx, L.u, L.r, slot, a, false, 0), 1 % n);
    bump(place(ctx, L.u, L.r, slot, b, false, 0), 1 % n);
    bump(place(ctx, L.u, L.r, slot, ab, false, 0), (n - 1 % n) % n);
    return;
  }
  std::size_t c = col - L.ml_cols;
  std::size_t which = c % L.steinberg_units;
  std::size_t rest = c / L.steinberg_units;
  std::size_t ctx = rest % L.contexts_st;
  std::size_t slot = rest / L.contexts_st;
  std::uint32_t a = st_units[which];
  std::uint32_t b = static_cast<std::uint32_t>(spec.one_minus[a]);
  bump(place(ctx, L.u, L.r, slot, a, true, b), 1 % n);
}

template <bool Parallel>
ModMatrix assemble_closure(const ClosureSpec& spec) {
  const ClosureLayout L = closure_layout(spec);
  std::vector<std::uint32_t> pair_a, pair_b, st_units;
  for (std::uint32_t a = 0; a < L.u; ++a) {
    if (spec.all_pairs) {
      for (std::uint32_t b = a; b < L.u; ++b) {
        pair_a.push_back(a);
        pair_b.push_back(b);
      }
    } else {
      pair_a.push_back(a);
      pair_b.push_back(spec.generator_index);
    }
    if (spec.one_minus[a] >= 0) st_units.push_back(a);
  }
  ModMatrix m(spec.modulus, ipow(L.u, spec.degree), L.ml_cols + L.st_cols);
  const auto cols = static_cast<std::ptrdiff_t>(m.cols);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < cols; ++j) fill_closure_column(spec, L, pair_a, pair_b, st_units, m, static_cast<std::size_t>(j));
  } else {
    for (std::ptrdiff_t j = 0; j < cols; ++j) fill_closure_column(spec, L, pair_a, pair_b, st_units, m, static_cast<std::size_t>(j));
  }
  return m;
}

}  // namespace

std::size_t closure_relation_count(const ClosureSpec& spec) {
  ClosureLayout L = closure_layout(spec);
  return L.ml_cols + L.st_cols;
}

ModMatrix assemble_closure_serial(const ClosureSpec& spec) { return assemble_closure<false>(spec); }
ModMatrix assemble_closure_parallel(const ClosureSpec& spec) { return assemble_closure<true>(spec); }

TietzeResult tietze_reduce_serial(ModMatrix m) { return tietze_reduce<false>(std::move(m)); }
TietzeResult tietze_reduce_parallel(ModMatrix m) { return tietze_reduce<true>(std::move(m)); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace parshin::kernels
