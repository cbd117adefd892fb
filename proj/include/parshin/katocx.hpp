#pragma once

// Combinatorial complexes of simple normal crossing configurations:
// components Y_1..Y_N, the connected components of every intersection
// Y_S = Y_{i_1} n ... n Y_{i_s}, and the face maps between them.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parshin/abgroup.hpp"
#include "parshin/rng.hpp"

namespace parshin::katocx {

using Subset = std::vector<int>;  // 1-based, strictly increasing

struct FaceSpec {
  Subset subset;
  int nu = 1;              // 1-based position of the removed index
  std::vector<int> map;    // component of Y_S -> component of Y_{S - i_nu}
};

class SNCConfig {
 public:
  // Intersections not listed are empty; singletons default to one
  // component. A face map may be omitted when its target is connected.
  // Throws FACE_MAP_INCOMPATIBLE when the face data is inconsistent.
  static SNCConfig create(int components, const std::map<Subset, int>& pi0, const std::vector<FaceSpec>& faces = {});

  // Curve-like configuration: points[{i, j}] intersection points of Y_i, Y_j.
  static SNCConfig graph(int components, const std::map<std::pair<int, int>, int>& points);

  int components() const { return n_; }
  int pi0(const Subset& s) const;
  // delta_nu on the components of Y_S (|S| >= 2).
  int face(const Subset& s, int nu, int component) const;
  // Nonempty intersections of the given size, in lexicographic order.
  std::vector<Subset> strata(std::size_t size) const;

  std::string to_json() const;

 private:
  int n_ = 0;
  std::map<Subset, int> pi0_;
  std::map<std::pair<Subset, int>, std::vector<int>> faces_;
};

// {"components": 3, "intersections": [{"subset": [1,2], "pi0": 1}, ...],
//  "faces": [{"subset": [1,2,3], "nu": 1, "map": [0]}, ...]}
SNCConfig parse_snc_config(std::string_view json_text);

// Random graph incidence data: each pair meets in 0..max_points points.
SNCConfig random_graph_config(Rng& rng, int max_components, int max_points);

struct Cell {
  Subset subset;
  int component = 0;
};

struct NerveComplex {
  Integer n;
  int top = 0;                           // C_s for 0 <= s <= top
  std::vector<std::vector<Cell>> cells;  // cells[s]: components of Y^[s+1]
  std::vector<IntMatrix> d;              // d[s]: C_{s+1} -> C_s, size |cells[s]| x |cells[s+1]|

  std::size_t rank(int s) const { return cells[static_cast<std::size_t>(s)].size(); }
};

// d_s = sum_{nu=1}^{s+2} (-1)^(nu+1) (delta_nu)_*; d o d = 0 is verified.
NerveComplex build_nerve_complex(const SNCConfig& config, const Integer& n);

// H_a = ker d_{a-1} / im d_a over Z/n; DEGREE_OUT_OF_RANGE unless
// 0 <= a <= top.
PresentedGroup homology(const NerveComplex& cx, int a);

struct ObstructionReport {
  InvariantFactors h1;
  InvariantFactors h2;
  std::string statement;
};

// Degrees above the top of the complex contribute 0.
ObstructionReport obstruction_report(const SNCConfig& config, const Integer& n);

}  // namespace parshin::katocx
