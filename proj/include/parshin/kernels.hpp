#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version; the
// OpenMP version must produce bit-identical output.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace parshin::kernels {

// Dense column-major matrix over Z/n, entries in [0, n).
struct ModMatrix {
  std::uint32_t modulus = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> data;

  ModMatrix() = default;
  ModMatrix(std::uint32_t n, std::size_t r, std::size_t c) : modulus(n), rows(r), cols(c), data(r * c, 0) {}

  std::uint32_t& at(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  std::uint32_t at(std::size_t i, std::size_t j) const { return data[j * rows + i]; }

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;
};

struct TietzeResult {
  std::size_t eliminated = 0;
  std::vector<std::size_t> surviving_generators;
  // Rows = surviving generators; columns = surviving relations with zero
  // and duplicate columns removed (sorted, so the result is canonical).
  ModMatrix residual;

  friend bool operator==(const TietzeResult&, const TietzeResult&) = default;
};

// Repeatedly picks a relation with a unit entry at generator i, solves it for
// e_i and substitutes into every other relation. The cokernel of
// (M | n*I) is unchanged; only non-unit entries survive.
TietzeResult tietze_reduce_serial(ModMatrix m);
TietzeResult tietze_reduce_parallel(ModMatrix m);

// Relation matrix of the symbol closure for K_r of a finite field mod n.
// Generators are all r-tuples of units (tuple index sum_k a_k * u^k over unit
// indices a_k < u); columns are, in order:
//   multilinearity in slot i: e(.., a, ..) + e(.., b, ..) - e(.., ab, ..),
//     for every pair a <= b (all_pairs) or for b = generator_index only;
//   Steinberg at slots (i, i+1): e(.., a, 1-a, ..) for every a with 1-a a unit.
struct ClosureSpec {
  std::uint32_t units = 0;            // u = q - 1
  std::uint32_t degree = 0;           // r
  std::uint32_t modulus = 1;          // n
  std::vector<std::uint32_t> mul;     // u*u table of unit indices
  std::vector<std::int32_t> one_minus;  // index of 1 - a, or -1 when a = 1
  std::uint32_t generator_index = 0;
  bool all_pairs = true;
};

std::size_t closure_relation_count(const ClosureSpec& spec);
ModMatrix assemble_closure_serial(const ClosureSpec& spec);
ModMatrix assemble_closure_parallel(const ClosureSpec& spec);

int max_threads();

}  // namespace parshin::kernels
