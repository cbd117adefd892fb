#pragma once

// Scheme models (P^1 over F_q and Spec F_q[[s,t]]), their points with the
// dimension function d(x) = dim of the closure, divisors, and chains of
// points with their kinds and residue rings.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parshin/fq.hpp"
#include "parshin/poly.hpp"

namespace parshin::chains {

enum class ModelKind { P1, LocalSurface };

// A closed point of P^1: a monic irreducible polynomial in t, or infinity.
struct Place {
  bool infinity = false;
  Poly poly;

  int degree() const { return infinity ? 1 : poly::degree(poly); }
  friend bool operator==(const Place&, const Place&) = default;
};

// Supported height-one primes of F_q[[s,t]]: (s), (t), and graphs
// (y - c*x^k) with {x, y} = {s, t}, c != 0, k >= 1 (for k = 1 the linear
// variable is t). Each has A/p = F_q[[x]].
struct SurfacePrime {
  enum class Kind { S, T, Graph };
  Kind kind = Kind::S;
  char y = 't';  // graph: the linear variable
  FqElem c{0};
  int k = 0;

  // Variable of the residue ring A/p = F_q[[x]].
  char residue_var() const;
  // Degree used for truncation: 1 for (s), (t), else k.
  int degree() const { return kind == Kind::Graph ? k : 1; }
  friend bool operator==(const SurfacePrime&, const SurfacePrime&) = default;
};

class SchemeModel {
 public:
  static SchemeModel p1(FieldPtr field) { return SchemeModel(ModelKind::P1, std::move(field)); }
  static SchemeModel local_surface(FieldPtr field) { return SchemeModel(ModelKind::LocalSurface, std::move(field)); }

  ModelKind kind() const { return kind_; }
  const FiniteField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  int dimension() const { return kind_ == ModelKind::P1 ? 1 : 2; }
  std::string name() const;

  // Curve places in canonical order: degree, then polynomial order, with
  // infinity first among degree-1 places.
  std::vector<Place> places_up_to(int degree) const;
  // Supported surface primes of degree <= bound: (s), (t), then graphs by
  // k, linear variable, constant code.
  std::vector<SurfacePrime> primes_up_to(int degree) const;

  Place parse_place(std::string_view text) const;
  // UNSUPPORTED_PRIME if not in the maximal ideal or not prime;
  // ANALYTIC_SPLITTING_UNSUPPORTED for primes outside the supported list.
  SurfacePrime parse_prime(std::string_view text) const;
  std::string format(const Place& p) const;
  std::string format(const SurfacePrime& p) const;

 private:
  SchemeModel(ModelKind kind, FieldPtr field) : kind_(kind), field_(std::move(field)) {}

  ModelKind kind_;
  FieldPtr field_;
};

struct SchemePoint {
  enum class Type {
    Generic,          // eta
    Closed,           // a curve place, or the closed point m of the surface
    HeightOne,        // a surface prime
    ClosedFamily,     // "x closed in U" (curve)
    HeightOneFamily,  // "p height-one in U" (surface)
  };
  Type type = Type::Generic;
  std::optional<Place> place;
  std::optional<SurfacePrime> prime;

  friend bool operator==(const SchemePoint&, const SchemePoint&) = default;
};

int dimension(const SchemeModel& model, const SchemePoint& x);
// Whether y lies in the closure of x.
bool specializes(const SchemeModel& model, const SchemePoint& x, const SchemePoint& y);
std::string label(const SchemeModel& model, const SchemePoint& x);

struct DivisorComponent {
  SchemePoint point;  // a curve place or a surface prime
  int mult = 1;
};

struct DivisorData {
  std::vector<DivisorComponent> components;

  bool empty() const { return components.empty(); }
  // Multiplicity of a point, 0 if absent.
  int multiplicity(const SchemePoint& x) const;
  // All multiplicities set to 1.
  DivisorData reduced() const;
  // Whether every multiplicity of *this is >= that of other, on the same support.
  bool dominates(const DivisorData& other) const;
};

// "[0]+2[inf]+[t^2+1]" on P^1 (a constant c denotes the place t - c);
// "3(s)+(t)" or "(t-s^2)" on the surface. Empty text is the zero divisor.
DivisorData parse_divisor(const SchemeModel& model, std::string_view text);
std::string format_divisor(const SchemeModel& model, const DivisorData& d);
// Whether x lies in Supp(D).
bool in_support(const SchemeModel& model, const DivisorData& d, const SchemePoint& x);

enum class ChainKind { Chain, Parshin, ParshinOnPair, QChain, QoChain };
std::string kind_name(ChainKind k);

struct ChainRecord {
  std::vector<SchemePoint> points;
  ChainKind kind = ChainKind::Chain;
  bool family = false;  // stands for the direct sum over a family of points

  int dimension(const SchemeModel& model) const;
};

std::string format_chain(const SchemeModel& model, const ChainRecord& c);

// Abstract finite poset of points used by the definitional predicates.
struct PosetPoint {
  std::string label;
  int dim = 0;
  bool in_D = false;
};

class ChainPoset {
 public:
  explicit ChainPoset(std::vector<PosetPoint> points);
  // y lies in the closure of x (reflexive relation is added automatically).
  void add_specialization(std::size_t x, std::size_t y);

  std::size_t size() const { return points_.size(); }
  const PosetPoint& point(std::size_t i) const { return points_[i]; }
  bool specializes(std::size_t x, std::size_t y) const { return spec_[x][y]; }
  int min_dim() const;

 private:
  std::vector<PosetPoint> points_;
  std::vector<std::vector<bool>> spec_;
};

// Predicates on index sequences (p_0, ..., p_last) of a poset.
bool is_chain(const ChainPoset& P, const std::vector<std::size_t>& c);
bool is_parshin(const ChainPoset& P, const std::vector<std::size_t>& c);
bool is_parshin_on_pair(const ChainPoset& P, const std::vector<std::size_t>& c);
bool is_q_chain(const ChainPoset& P, const std::vector<std::size_t>& c);
bool is_qo_chain(const ChainPoset& P, const std::vector<std::size_t>& c);
std::vector<ChainKind> classify(const ChainPoset& P, const std::vector<std::size_t>& c);

// Finite poset of the model: generic point, closed point(s), the support of D
// and one representative point of U for each family.
struct ModelPoset {
  ChainPoset poset;
  std::vector<SchemePoint> points;
};
ModelPoset model_poset(const SchemeModel& model, const DivisorData& d);

// Templates of Parshin chains on the pair (U, X) followed by Q-chains (and
// their Q-degree-two refinements), in a deterministic order.
std::vector<ChainRecord> enumerate_chain_types(const SchemeModel& model, const DivisorData& d);

struct ResidueRing {
  int level = 0;                    // 0 finite, 1 local, 2 two-dimensional local, -1 global
  std::uint32_t residue_order = 0;  // order of the last finite residue field
  std::vector<std::string> uniformizers;  // innermost first
  std::string description;
};

ResidueRing residue_ring_at(const SchemeModel& model, const ChainRecord& c);

// D(P) for a maximal Parshin chain on the pair: the multiplicity of the
// penultimate point. NOT_MAXIMAL_CHAIN otherwise.
int multiplicity_D(const SchemeModel& model, const ChainRecord& c, const DivisorData& d);

}  // namespace parshin::chains
