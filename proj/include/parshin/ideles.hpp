#pragma once

// Idele groups and idele class groups C(X,D)/n of the supported models,
// presented as explicit cokernels, together with independent checks:
// a brute-force ray class group on P^1, Weil reciprocity, and the
// reciprocity law on Spec F_q[[s,t]].

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parshin/abgroup.hpp"
#include "parshin/bilaurent.hpp"
#include "parshin/chains.hpp"
#include "parshin/poly.hpp"

namespace parshin::ideles {

// f = num/den in F_q(t): den monic, gcd(num, den) = 1.
struct RationalFunction {
  Poly num;
  Poly den;
};

RationalFunction make_rational(const FiniteField& F, Poly num, Poly den);
// "t^2+1", "(t+1)/(t^2+2)", "2/t"; ZERO_ELEMENT for 0.
RationalFunction parse_rational(const FiniteField& F, std::string_view text);
std::string format_rational(const FiniteField& F, const RationalFunction& f);
int order_at(const FiniteField& F, const RationalFunction& f, const chains::Place& v);

// Elements of the local surface monoid: c * prod p_i^{e_i} over supported
// primes, written "2*s^2*(t-s)^-1".
struct SurfaceElement {
  FqElem unit{1};
  std::vector<std::pair<chains::SurfacePrime, int>> factors;
};
SurfaceElement parse_surface_element(const chains::SchemeModel& model, std::string_view text);
std::string format_surface_element(const chains::SchemeModel& model, const SurfaceElement& x);

struct IdeleComponent {
  chains::ChainRecord chain;
  long long ord = 0;     // Z-summand at a chain through U (degree 0)
  std::string value;     // symbol or local element at a chain through D
};

struct IdeleElement {
  std::vector<IdeleComponent> components;
  bool is_zero() const { return components.empty(); }
};

// Q-map image of f in I(X,D) on P^1: ord-components at U-points and the
// diagonal element at every chain (v, eta) with v in Supp D.
IdeleElement q_map_image(const chains::SchemeModel& model, const chains::DivisorData& D, const RationalFunction& f);
// Q-map image of the symbol {f, g} on the local surface: residue symbols at
// height-one primes of U, the diagonal symbol at primes of D.
IdeleElement q_map_image(const chains::SchemeModel& model, const chains::DivisorData& D, const SurfaceElement& f,
                         const SurfaceElement& g);

struct ClassGroupJob {
  chains::SchemeModel model;
  chains::DivisorData D;
  Integer n;
  int max_bound = 6;
};

struct Generator {
  std::string point;
  std::string role;
  std::string label() const { return point + ":" + role; }
  friend bool operator==(const Generator&, const Generator&) = default;
};

struct ClassGroupPresentation {
  int bound = 0;
  std::vector<Generator> generators;
  PresentedGroup group;
};

struct StabilizationStep {
  int bound = 0;
  InvariantFactors invariants;
};

struct ClassGroupResult {
  ClassGroupPresentation presentation;  // at the certified bound
  InvariantFactors invariants;
  int certified_bound = 0;
  std::vector<StabilizationStep> history;
};

// Presentation of C(X,D)/n truncated at degree bound B.
ClassGroupPresentation class_group_presentation(const ClassGroupJob& job, int bound);
// Raises B from the largest degree in Supp D until the invariants agree at
// B-1 and B; NOT_STABILIZED past job.max_bound, WILD_COEFFICIENTS unless
// gcd(n, p) = 1.
ClassGroupResult class_group(const ClassGroupJob& job);

// Ray class group of P^1 for the modulus D, tensored with Z/n: divisors on
// places of degree <= B outside D modulo div(c*a/b) with a, b monic of
// degree <= B and c*a/b = 1 mod D. Shares nothing with class_group.
ClassGroupResult ray_class_oracle(const chains::SchemeModel& p1, const chains::DivisorData& D, const Integer& n,
                                  int max_bound = 6);

// Natural map C(X,D')/n -> C(X,D)/n for D' >= D, both presented at the same
// bound. NOT_A_HOMOMORPHISM if the presentations are incompatible.
GroupMap transition_map(const ClassGroupPresentation& from, const ClassGroupPresentation& to);

// Degree map C(P^1,D)/n -> Z/n.
GroupMap degree_map(const chains::SchemeModel& p1, const ClassGroupPresentation& c, const Integer& n);

struct ReciprocityReport {
  bool holds = false;
  std::vector<std::pair<std::string, std::string>> contributions;  // point, value
};

// prod over all places v of N_{k(v)/F_q}(d_v{f, g}) = 1.
ReciprocityReport weil_reciprocity(const FiniteField& F, const RationalFunction& f, const RationalFunction& g);
bool weil_reciprocity_check(const FiniteField& F, const RationalFunction& f, const RationalFunction& g);

// Sum over the height-one primes (s), (t) of the valuation of d_p{f, g}
// in the residue field vanishes.
ReciprocityReport local_surface_reciprocity(const BiLaurent& f, const BiLaurent& g);
bool local_surface_reciprocity_check(const BiLaurent& f, const BiLaurent& g);
// Same law on the monoid generated by the supported primes.
ReciprocityReport local_surface_reciprocity(const chains::SchemeModel& model, const SurfaceElement& f,
                                            const SurfaceElement& g);

}  // namespace parshin::ideles
