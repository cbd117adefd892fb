#include "parshin/abgroup.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <sstream>

#include "parshin/error.hpp"
#include "parshin/kernels.hpp"

namespace parshin {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::InvalidInput, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) fail(ErrorCode::InvalidInput, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

std::vector<Integer> IntMatrix::column(std::size_t j) const {
  std::vector<Integer> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j && (*this)(i, j) != 0) return false;
    }
  }
  return true;
}

IntMatrix IntMatrix::concat(const IntMatrix& other) const {
  if (other.rows_ != rows_) fail(ErrorCode::InvalidInput, "concat: row count mismatch");
  IntMatrix out(rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j) out(i, cols_ + j) = other(i, j);
  }
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) {
    const Integer& s = (*this)(src, j);
    if (s != 0) (*this)(dst, j) += factor * s;
  }
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) {
    const Integer& s = (*this)(i, src);
    if (s != 0) (*this)(i, dst) += factor * s;
  }
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) fail(ErrorCode::InvalidInput, "matrix product: dimension mismatch");
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Integer& bkj = b(k, j);
        if (bkj != 0) out(i, j) += aik * bkj;
      }
    }
  }
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidInput, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && a(swap_with, k) == 0) ++swap_with;
      if (swap_with == n) return 0;
      a.swap_rows(k, swap_with);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithForm out{IntMatrix::identity(rows), m, IntMatrix::identity(cols)};
  IntMatrix& a = out.diagonal;
  IntMatrix& u = out.left;
  IntMatrix& v = out.right;
  Integer q;

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero |entry| in the trailing block.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a(i, j) == 0) continue;
          if (pi == rows || mpz_cmpabs(a(i, j).get_mpz_t(), a(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) return out;

      a.swap_rows(t, pi);
      u.swap_rows(t, pi);
      a.swap_cols(t, pj);
      v.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        q = -q;
        a.add_row_multiple(i, t, q);
        u.add_row_multiple(i, t, q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        q = -q;
        a.add_col_multiple(j, t, q);
        v.add_col_multiple(j, t, q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce d_t | every trailing entry.
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a(i, j) != 0 && !mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad_row = i;
            break;
          }
        }
      }
      if (bad_row == rows) break;
      a.add_row_multiple(t, bad_row, 1);
      u.add_row_multiple(t, bad_row, 1);
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
  }
  return out;
}

bool verify_smith_form(const IntMatrix& m, const SmithForm& snf, bool check_unimodular) {
  const IntMatrix& s = snf.diagonal;
  if (s.rows() != m.rows() || s.cols() != m.cols()) return false;
  if (snf.left.rows() != m.rows() || snf.right.cols() != m.cols()) return false;
  if (!s.is_diagonal()) return false;
  const std::size_t k = std::min(s.rows(), s.cols());
  for (std::size_t i = 0; i < k; ++i) {
    if (s(i, i) < 0) return false;
    if (i + 1 < k) {
      const Integer& d = s(i, i);
      const Integer& next = s(i + 1, i + 1);
      if (d == 0 && next != 0) return false;
      if (d != 0 && !mpz_divisible_p(next.get_mpz_t(), d.get_mpz_t())) return false;
    }
  }
  if (!(snf.left * m * snf.right == s)) return false;
  if (check_unimodular) {
    if (abs(determinant(snf.left)) != 1) return false;
    if (abs(determinant(snf.right)) != 1) return false;
  }
  return true;
}

Integer InvariantFactors::torsion_order() const {
  Integer order = 1;
  for (const auto& d : factors) order *= d;
  return order;
}

std::string InvariantFactors::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : factors) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  if (free_rank > 0) {
    os << (first ? "" : " + ") << "Z";
    if (free_rank > 1) os << '^' << free_rank;
  }
  return os.str();
}

InvariantFactors invariant_factors_from_diagonal(const IntMatrix& diagonal, std::size_t generators) {
  InvariantFactors out;
  std::size_t nonzero = 0;
  const std::size_t k = std::min(diagonal.rows(), diagonal.cols());
  for (std::size_t i = 0; i < k; ++i) {
    const Integer& d = diagonal(i, i);
    if (d == 0) continue;
    ++nonzero;
    if (d != 1) out.factors.push_back(d);
  }
  out.free_rank = generators - nonzero;
  return out;
}

namespace {

IntMatrix with_modulus_columns(const IntMatrix& relations, std::size_t generators, const Integer& n) {
  IntMatrix diag(generators, generators);
  for (std::size_t i = 0; i < generators; ++i) diag(i, i) = n;
  return relations.concat(diag);
}

InvariantFactors verified_factors(const IntMatrix& relations, std::size_t generators) {
  SmithForm snf = smith_normal_form(relations);
  if (!verify_smith_form(relations, snf)) {
    // Not reachable for a correct elimination; refuse to cache an unverified answer.
    fail(ErrorCode::InvalidInput, "Smith normal form failed verification");
  }
  return invariant_factors_from_diagonal(snf.diagonal, generators);
}

InvariantFactors compute_invariants(std::size_t generators, const IntMatrix& relations,
                                    const std::optional<Integer>& modulus) {
  if (!modulus) return verified_factors(relations, generators);

  const Integer& n = *modulus;
  if (n == 1 || generators == 0) return {};
  if (n > std::numeric_limits<std::int32_t>::max()) {
    return verified_factors(with_modulus_columns(relations, generators, n), generators);
  }

  const auto nn = static_cast<std::uint32_t>(n.get_ui());
  kernels::ModMatrix mm(nn, generators, relations.cols());
  Integer r;
  for (std::size_t j = 0; j < relations.cols(); ++j) {
    for (std::size_t i = 0; i < generators; ++i) {
      mpz_fdiv_r(r.get_mpz_t(), relations(i, j).get_mpz_t(), n.get_mpz_t());
      mm.at(i, j) = static_cast<std::uint32_t>(r.get_ui());
    }
  }
  kernels::TietzeResult reduced = kernels::tietze_reduce_parallel(std::move(mm));
  const std::size_t g = reduced.residual.rows;
  IntMatrix residual(g, reduced.residual.cols);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < residual.cols(); ++j) residual(i, j) = reduced.residual.at(i, j);
  }
  return verified_factors(with_modulus_columns(residual, g, n), g);
}

}  // namespace

struct PresentedGroup::Cache {
  std::once_flag once;
  InvariantFactors value;
};

PresentedGroup::PresentedGroup(std::size_t generators, IntMatrix relations, std::optional<Integer> modulus)
    : generators_(generators), relations_(std::move(relations)), modulus_(std::move(modulus)),
      cache_(std::make_shared<Cache>()) {
  if (relations_.cols() == 0 && relations_.rows() != generators_) relations_ = IntMatrix(generators_, 0);
  if (relations_.rows() != generators_) {
    fail(ErrorCode::InvalidInput, "relation matrix must have one row per generator");
  }
  if (modulus_ && *modulus_ <= 0) fail(ErrorCode::InvalidInput, "modulus must be positive");
}

PresentedGroup PresentedGroup::free(std::size_t rank) { return PresentedGroup(rank, IntMatrix(rank, 0)); }

PresentedGroup PresentedGroup::cyclic(const Integer& order) {
  IntMatrix rel(1, 1);
  rel(0, 0) = order;
  return PresentedGroup(1, rel);
}

PresentedGroup PresentedGroup::from_factors(std::span<const Integer> factors, std::size_t free_rank,
                                            std::optional<Integer> modulus) {
  const std::size_t g = factors.size() + free_rank;
  IntMatrix rel(g, factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) rel(i, i) = factors[i];
  return PresentedGroup(g, rel, std::move(modulus));
}

IntMatrix PresentedGroup::full_relations() const {
  if (!modulus_) return relations_;
  return with_modulus_columns(relations_, generators_, *modulus_);
}

const InvariantFactors& PresentedGroup::invariants() const {
  std::call_once(cache_->once, [this] { cache_->value = compute_invariants(generators_, relations_, modulus_); });
  return cache_->value;
}

InvariantFactors invariant_factors(const PresentedGroup& g) { return g.invariants(); }

bool is_isomorphic(const PresentedGroup& a, const PresentedGroup& b) {
  if (a.modulus().has_value() != b.modulus().has_value()) {
    fail(ErrorCode::MixedModulus, "cannot compare a group with modulus against one without");
  }
  return a.invariants() == b.invariants();
}

namespace {

// L ⊆ L' are equal iff the quotients have the same free rank and torsion order.
bool relations_absorb(const PresentedGroup& g, const std::vector<std::vector<Integer>>& extra) {
  if (extra.empty()) return true;
  IntMatrix ext = g.relations().concat(IntMatrix::from_columns(g.generators(), extra));
  PresentedGroup bigger(g.generators(), std::move(ext), g.modulus());
  const auto& before = g.invariants();
  const auto& after = bigger.invariants();
  return before.free_rank == after.free_rank && before.torsion_order() == after.torsion_order();
}

}  // namespace

bool lattice_contains(const PresentedGroup& g, std::span<const Integer> v) {
  if (v.size() != g.generators()) fail(ErrorCode::InvalidInput, "vector length must equal generator count");
  return relations_absorb(g, {std::vector<Integer>(v.begin(), v.end())});
}

GroupMap::GroupMap(PresentedGroup source, PresentedGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.generators() || matrix_.cols() != source_.generators()) {
    fail(ErrorCode::InvalidInput, "map matrix has wrong shape");
  }
  IntMatrix images = matrix_ * source_.full_relations();
  std::vector<std::vector<Integer>> cols;
  cols.reserve(images.cols());
  for (std::size_t j = 0; j < images.cols(); ++j) cols.push_back(images.column(j));
  if (!relations_absorb(target_, cols)) {
    fail(ErrorCode::NotAHomomorphism, "a source relation does not map into the target relation lattice");
  }
}

PresentedGroup cokernel(const GroupMap& f) {
  const PresentedGroup& t = f.target();
  return PresentedGroup(t.generators(), t.relations().concat(f.matrix()), t.modulus());
}

IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm snf = smith_normal_form(m);
  std::size_t rank = 0;
  const std::size_t k = std::min(m.rows(), m.cols());
  while (rank < k && snf.diagonal(rank, rank) != 0) ++rank;
  IntMatrix out(m.cols(), m.cols() - rank);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = rank; j < m.cols(); ++j) out(i, j - rank) = snf.right(i, j);
  }
  return out;
}

PresentedGroup image_subgroup(const std::vector<std::vector<Integer>>& vectors, std::span<const Integer> moduli) {
  const std::size_t k = moduli.size();
  const std::size_t count = vectors.size();
  if (count == 0) return PresentedGroup::free(0);
  IntMatrix m(k, count + k);
  for (std::size_t j = 0; j < count; ++j) {
    if (vectors[j].size() != k) fail(ErrorCode::InvalidInput, "coordinate vector length mismatch");
    for (std::size_t i = 0; i < k; ++i) m(i, j) = vectors[j][i];
  }
  for (std::size_t i = 0; i < k; ++i) m(i, count + i) = moduli[i];
  IntMatrix ker = integer_kernel(m);
  IntMatrix rel(count, ker.cols());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < ker.cols(); ++j) rel(i, j) = ker(i, j);
  }
  return PresentedGroup(count, rel);
}

PresentedGroup reduced_presentation(kernels::ModMatrix m) {
  const Integer n(m.modulus);
  kernels::TietzeResult reduced = kernels::tietze_reduce_parallel(std::move(m));
  IntMatrix residual(reduced.residual.rows, reduced.residual.cols);
  for (std::size_t i = 0; i < residual.rows(); ++i) {
    for (std::size_t j = 0; j < residual.cols(); ++j) residual(i, j) = reduced.residual.at(i, j);
  }
  return PresentedGroup(residual.rows(), std::move(residual), n);
}

PresentedGroup direct_sum(const PresentedGroup& a, const PresentedGroup& b) {
  if (a.modulus() != b.modulus()) fail(ErrorCode::MixedModulus, "direct sum needs equal moduli");
  const std::size_t ga = a.generators(), gb = b.generators();
  const IntMatrix& ra = a.relations();
  const IntMatrix& rb = b.relations();
  IntMatrix rel(ga + gb, ra.cols() + rb.cols());
  for (std::size_t i = 0; i < ga; ++i) {
    for (std::size_t j = 0; j < ra.cols(); ++j) rel(i, j) = ra(i, j);
  }
  for (std::size_t i = 0; i < gb; ++i) {
    for (std::size_t j = 0; j < rb.cols(); ++j) rel(ga + i, ra.cols() + j) = rb(i, j);
  }
  return PresentedGroup(ga + gb, std::move(rel), a.modulus());
}

}  // namespace parshin


namespace parshin {

namespace {

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1 = 0, y1 = 0;
  std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

std::uint32_t mod_n(std::int64_t v, std::uint32_t n) {
  std::int64_t r = v % static_cast<std::int64_t>(n);
  return static_cast<std::uint32_t>(r < 0 ? r + n : r);
}

}  // namespace

ModLattice::ModLattice(std::uint32_t n, std::size_t dim) : n_(n), rows_(dim) {
  if (n < 1) fail(ErrorCode::InvalidInput, "lattice modulus must be positive");
}

std::size_t ModLattice::rank() const {
  std::size_t r = 0;
  for (const auto& row : rows_) r += row.empty() ? 0 : 1;
  return r;
}

void ModLattice::grow(std::size_t dim) {
  if (dim > rows_.size()) rows_.resize(dim);
}

void ModLattice::insert(std::vector<std::uint32_t> v) {
  const std::size_t dim = rows_.size();
  if (v.size() > dim) fail(ErrorCode::InvalidInput, "vector longer than lattice dimension");
  v.resize(dim, 0);
  for (auto& x : v) x %= n_;
  const std::int64_t n = n_;
  for (std::size_t i = 0; i < dim; ++i) {
    if (v[i] == 0) continue;
    auto& r = rows_[i];
    if (r.empty()) {
      r = std::move(v);
      return;
    }
    r.resize(dim, 0);
    const std::int64_t ri = r[i], vi = v[i];
    if (vi % ri == 0) {
      const std::int64_t k = vi / ri;
      for (std::size_t j = i; j < dim; ++j) v[j] = mod_n(static_cast<std::int64_t>(v[j]) - k * r[j], n_);
      continue;
    }
    std::int64_t a = 0, b = 0;
    const std::int64_t g = ext_gcd(ri, vi, a, b);
    // [r; v] <- [[a, b], [-vi/g, ri/g]] [r; v], determinant 1.
    const std::int64_t c = -vi / g, d = ri / g;
    for (std::size_t j = i; j < dim; ++j) {
      const std::int64_t rj = r[j], vj = v[j];
      r[j] = mod_n((a % n) * rj + (b % n) * vj, n_);
      v[j] = mod_n((c % n) * rj + (d % n) * vj, n_);
    }
  }
}

std::vector<std::size_t> ModLattice::quotient_generators() const {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::int64_t x = 0, y = 0;
    if (rows_[i].empty() || ext_gcd(rows_[i][i], n_, x, y) != 1) keep.push_back(i);
  }
  return keep;
}

PresentedGroup ModLattice::quotient() const {
  const std::size_t dim = rows_.size();
  std::vector<bool> unit(dim, false);
  std::vector<std::int64_t> inv(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    if (rows_[i].empty()) continue;
    std::int64_t x = 0, y = 0;
    if (ext_gcd(rows_[i][i], n_, x, y) == 1) {
      unit[i] = true;
      inv[i] = x;
    }
  }
  std::vector<std::size_t> keep;
  std::vector<std::size_t> where(dim, SIZE_MAX);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!unit[i]) {
      where[i] = keep.size();
      keep.push_back(i);
    }
  }
  std::vector<std::vector<Integer>> cols;
  for (std::size_t p = 0; p < dim; ++p) {
    if (rows_[p].empty() || unit[p]) continue;
    std::vector<std::int64_t> v(dim, 0);
    for (std::size_t j = 0; j < rows_[p].size(); ++j) v[j] = rows_[p][j];
    for (std::size_t i = p + 1; i < dim; ++i) {
      if (v[i] == 0 || !unit[i]) continue;
      const auto& u = rows_[i];
      const std::int64_t k = mod_n(v[i] * inv[i], n_);
      for (std::size_t j = i; j < u.size(); ++j) v[j] = mod_n(v[j] - k * u[j], n_);
    }
    std::vector<Integer> col(keep.size());
    for (std::size_t j = 0; j < dim; ++j) {
      if (where[j] != SIZE_MAX) col[where[j]] = Integer(static_cast<long>(v[j]));
    }
    cols.push_back(std::move(col));
  }
  return PresentedGroup(keep.size(), IntMatrix::from_columns(keep.size(), cols), Integer(n_));
}

}  // namespace parshin
