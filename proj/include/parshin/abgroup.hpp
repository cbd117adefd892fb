#pragma once

// Finitely generated abelian groups given by relation matrices.
//
// Relations are stored as columns: a group with g generators and relation
// matrix R (g x r) is Z^g / R Z^r, optionally tensored with Z/n.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parshin/kernels.hpp"

namespace parshin {

using Integer = mpz_class;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Integer> column(std::size_t j) const;
  bool is_zero() const;
  bool is_diagonal() const;

  // Horizontal concatenation [this | other]; row counts must agree.
  IntMatrix concat(const IntMatrix& other) const;
  IntMatrix transpose() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t i);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& m);

struct SmithForm {
  IntMatrix left;      // U, unimodular, rows x rows
  IntMatrix diagonal;  // S = U * M * V
  IntMatrix right;     // V, unimodular, cols x cols
};

// Smith normal form with transforms. Pivots on the smallest nonzero absolute
// value; diagonal entries are non-negative and satisfy d_1 | d_2 | ...
SmithForm smith_normal_form(const IntMatrix& m);

// Checks U*M*V = S, S diagonal with the divisibility chain. With
// check_unimodular also checks |det U| = |det V| = 1 (cubic, test use).
bool verify_smith_form(const IntMatrix& m, const SmithForm& snf, bool check_unimodular = false);

struct InvariantFactors {
  std::vector<Integer> factors;  // d_1 | d_2 | ..., each > 1
  std::size_t free_rank = 0;

  bool is_trivial() const { return factors.empty() && free_rank == 0; }
  // Order of the torsion part; the group is infinite when free_rank > 0.
  Integer torsion_order() const;
  std::string to_string() const;

  friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;
};

InvariantFactors invariant_factors_from_diagonal(const IntMatrix& diagonal, std::size_t generators);

class PresentedGroup {
 public:
  PresentedGroup() : PresentedGroup(0, IntMatrix(0, 0)) {}
  PresentedGroup(std::size_t generators, IntMatrix relations, std::optional<Integer> modulus = std::nullopt);

  static PresentedGroup free(std::size_t rank);
  static PresentedGroup cyclic(const Integer& order);
  static PresentedGroup from_factors(std::span<const Integer> factors, std::size_t free_rank = 0,
                                     std::optional<Integer> modulus = std::nullopt);

  std::size_t generators() const { return generators_; }
  const IntMatrix& relations() const { return relations_; }
  const std::optional<Integer>& modulus() const { return modulus_; }

  // Relations with n*e_i appended when a modulus is set.
  IntMatrix full_relations() const;

  // Canonical decomposition; computed once, after the Smith form is verified.
  const InvariantFactors& invariants() const;

 private:
  struct Cache;

  std::size_t generators_ = 0;
  IntMatrix relations_;
  std::optional<Integer> modulus_;
  std::shared_ptr<Cache> cache_;
};

InvariantFactors invariant_factors(const PresentedGroup& g);

// Throws MIXED_MODULUS when exactly one of the groups carries a modulus.
bool is_isomorphic(const PresentedGroup& a, const PresentedGroup& b);

// Whether v lies in the column lattice of relations (+ n Z^g when modulus set).
bool lattice_contains(const PresentedGroup& g, std::span<const Integer> v);

class GroupMap {
 public:
  // matrix is target.generators() x source.generators(); throws
  // NOT_A_HOMOMORPHISM unless every source relation maps into the target
  // relation lattice.
  GroupMap(PresentedGroup source, PresentedGroup target, IntMatrix matrix);

  const PresentedGroup& source() const { return source_; }
  const PresentedGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

 private:
  PresentedGroup source_;
  PresentedGroup target_;
  IntMatrix matrix_;
};

PresentedGroup cokernel(const GroupMap& f);

// Integer kernel basis of M (columns of the returned matrix span ker M).
IntMatrix integer_kernel(const IntMatrix& m);

// Subgroup of the finite group with the given cyclic moduli spanned by the
// given coordinate vectors, presented on those vectors.
PresentedGroup image_subgroup(const std::vector<std::vector<Integer>>& vectors, std::span<const Integer> moduli);

// Group (Z/n)^rows / columns for a relation matrix over Z/n, returned as the
// smaller isomorphic presentation left after unit-pivot elimination.
PresentedGroup reduced_presentation(kernels::ModMatrix m);

// Block-diagonal sum; MIXED_MODULUS unless both moduli agree.
PresentedGroup direct_sum(const PresentedGroup& a, const PresentedGroup& b);

// Incrementally maintained span of vectors in (Z/n)^dim, kept in echelon
// form by unimodular row operations. The dimension may grow between inserts.
class ModLattice {
 public:
  ModLattice(std::uint32_t n, std::size_t dim);

  std::uint32_t modulus() const { return n_; }
  std::size_t dimension() const { return rows_.size(); }
  std::size_t rank() const;
  void grow(std::size_t dim);
  // Entries are reduced mod n; shorter vectors are zero-padded.
  void insert(std::vector<std::uint32_t> v);
  // (Z/n)^dim modulo the span, with unit pivots already eliminated.
  PresentedGroup quotient() const;
  // Coordinates surviving in quotient(), in order.
  std::vector<std::size_t> quotient_generators() const;

 private:
  std::uint32_t n_;
  std::vector<std::vector<std::uint32_t>> rows_;  // rows_[i]: row with pivot i, or empty
};

}  // namespace parshin
