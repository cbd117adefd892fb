#include "parshin/katocx.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "parshin/error.hpp"

namespace parshin::katocx {

namespace {

Subset drop(const Subset& s, int nu) {
  Subset out = s;
  out.erase(out.begin() + (nu - 1));
  return out;
}

std::string subset_text(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Elementary divisors of m (nonzero Smith diagonal entries).
std::vector<Integer> elementary_divisors(const IntMatrix& m) {
  std::vector<Integer> out;
  if (m.rows() == 0 || m.cols() == 0) return out;
  auto snf = smith_normal_form(m);
  const std::size_t k = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < k; ++i) {
    if (snf.diagonal(i, i) != 0) out.push_back(abs(snf.diagonal(i, i)));
  }
  return out;
}

}  // namespace

SNCConfig SNCConfig::create(int components, const std::map<Subset, int>& pi0, const std::vector<FaceSpec>& faces) {
  if (components < 1) fail(ErrorCode::InvalidInput, "a configuration needs at least one component");
  SNCConfig c;
  c.n_ = components;
  for (int i = 1; i <= components; ++i) c.pi0_[{i}] = 1;
  for (const auto& [s, k] : pi0) {
    if (s.empty()) fail(ErrorCode::InvalidInput, "empty subset");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 1 || s[i] > components) fail(ErrorCode::InvalidInput, "component index out of range in " + subset_text(s));
      if (i > 0 && s[i] <= s[i - 1]) fail(ErrorCode::InvalidInput, "subset must be strictly increasing: " + subset_text(s));
    }
    if (k < 0) fail(ErrorCode::InvalidInput, "negative component count");
    if (s.size() == 1 && k != 1) fail(ErrorCode::InvalidInput, "components are connected");
    if (k == 0) {
      c.pi0_.erase(s);
    } else {
      c.pi0_[s] = k;
    }
  }
  for (const auto& f : faces) {
    const int k = c.pi0(f.subset);
    if (k == 0 || f.subset.size() < 2) fail(ErrorCode::InvalidInput, "face map on an empty stratum " + subset_text(f.subset));
    if (f.nu < 1 || f.nu > static_cast<int>(f.subset.size())) fail(ErrorCode::InvalidInput, "face index out of range");
    if (!c.faces_.emplace(std::pair{f.subset, f.nu}, f.map).second) {
      fail(ErrorCode::InvalidInput, "face map given twice for " + subset_text(f.subset));
    }
  }

  // Every face must land in a nonempty stratum; fill the forced maps.
  for (const auto& [s, k] : c.pi0_) {
    if (s.size() < 2) continue;
    for (int nu = 1; nu <= static_cast<int>(s.size()); ++nu) {
      const Subset t = drop(s, nu);
      const int kt = c.pi0(t);
      if (kt == 0) {
        fail(ErrorCode::FaceMapIncompatible, subset_text(s) + " is nonempty but " + subset_text(t) + " is empty");
      }
      auto it = c.faces_.find({s, nu});
      if (it == c.faces_.end()) {
        if (kt != 1) fail(ErrorCode::FaceMapIncompatible, "face map required for " + subset_text(s) + " -> " + subset_text(t));
        c.faces_[{s, nu}] = std::vector<int>(static_cast<std::size_t>(k), 0);
        continue;
      }
      if (it->second.size() != static_cast<std::size_t>(k)) {
        fail(ErrorCode::FaceMapIncompatible, "face map of " + subset_text(s) + " has the wrong length");
      }
      for (int v : it->second) {
        if (v < 0 || v >= kt) fail(ErrorCode::FaceMapIncompatible, "face map of " + subset_text(s) + " leaves the target");
      }
    }
  }

  // delta_mu delta_nu = delta_nu delta_{mu+1} for mu >= nu.
  for (const auto& [s, k] : c.pi0_) {
    const int m = static_cast<int>(s.size());
    if (m < 3) continue;
    for (int nu = 1; nu <= m - 1; ++nu) {
      for (int mu = nu; mu <= m - 1; ++mu) {
        for (int x = 0; x < k; ++x) {
          const int lhs = c.face(drop(s, nu), mu, c.face(s, nu, x));
          const int rhs = c.face(drop(s, mu + 1), nu, c.face(s, mu + 1, x));
          if (lhs != rhs) {
            fail(ErrorCode::FaceMapIncompatible, "faces of " + subset_text(s) + " do not commute at component " +
                                                     std::to_string(x));
          }
        }
      }
    }
  }
  return c;
}

SNCConfig SNCConfig::graph(int components, const std::map<std::pair<int, int>, int>& points) {
  std::map<Subset, int> pi0;
  for (const auto& [e, k] : points) {
    auto [i, j] = e;
    if (i == j) fail(ErrorCode::InvalidInput, "a component does not meet itself transversally");
    pi0[{std::min(i, j), std::max(i, j)}] += k;
  }
  return create(components, pi0);
}

int SNCConfig::pi0(const Subset& s) const {
  auto it = pi0_.find(s);
  return it == pi0_.end() ? 0 : it->second;
}

int SNCConfig::face(const Subset& s, int nu, int component) const {
  auto it = faces_.find({s, nu});
  if (it == faces_.end()) fail(ErrorCode::InvalidInput, "no face map for " + subset_text(s));
  return it->second.at(static_cast<std::size_t>(component));
}

std::vector<Subset> SNCConfig::strata(std::size_t size) const {
  std::vector<Subset> out;
  for (const auto& [s, k] : pi0_) {
    if (s.size() == size) out.push_back(s);
  }
  return out;
}

std::string SNCConfig::to_json() const {
  nlohmann::ordered_json j;
  j["components"] = n_;
  auto inter = nlohmann::ordered_json::array();
  for (const auto& [s, k] : pi0_) {
    if (s.size() < 2) continue;
    inter.push_back({{"subset", s}, {"pi0", k}});
  }
  j["intersections"] = inter;
  auto faces = nlohmann::ordered_json::array();
  for (const auto& [key, map] : faces_) {
    if (pi0(drop(key.first, key.second)) == 1) continue;
    faces.push_back({{"subset", key.first}, {"nu", key.second}, {"map", map}});
  }
  j["faces"] = faces;
  return j.dump();
}

SNCConfig parse_snc_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("configuration is not valid JSON: ") + e.what());
  }
  try {
    const int n = j.at("components").get<int>();
    std::map<Subset, int> pi0;
    if (j.contains("intersections")) {
      for (const auto& e : j.at("intersections")) {
        Subset s = e.at("subset").get<Subset>();
        std::sort(s.begin(), s.end());
        pi0[s] = e.at("pi0").get<int>();
      }
    }
    std::vector<FaceSpec> faces;
    if (j.contains("faces")) {
      for (const auto& e : j.at("faces")) {
        faces.push_back({e.at("subset").get<Subset>(), e.at("nu").get<int>(), e.at("map").get<std::vector<int>>()});
      }
    }
    return SNCConfig::create(n, pi0, faces);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed configuration: ") + e.what());
  }
}

SNCConfig random_graph_config(Rng& rng, int max_components, int max_points) {
  const int n = static_cast<int>(rng.range(1, max_components));
  std::map<std::pair<int, int>, int> points;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      // Sparse on purpose so that disconnected fibers occur.
      const int k = rng.below(2) == 0 ? 0 : static_cast<int>(rng.range(1, max_points));
      if (k > 0) points[{i, j}] = k;
    }
  }
  return SNCConfig::graph(n, points);
}

NerveComplex build_nerve_complex(const SNCConfig& config, const Integer& n) {
  if (n < 2) fail(ErrorCode::InvalidInput, "modulus must be at least 2");
  NerveComplex cx;
  cx.n = n;
  cx.top = config.components() - 1;
  std::vector<std::map<std::pair<Subset, int>, std::size_t>> index(static_cast<std::size_t>(cx.top) + 1);
  for (int s = 0; s <= cx.top; ++s) {
    auto& cs = cx.cells.emplace_back();
    for (const auto& S : config.strata(static_cast<std::size_t>(s) + 1)) {
      for (int c = 0; c < config.pi0(S); ++c) {
        index[static_cast<std::size_t>(s)][{S, c}] = cs.size();
        cs.push_back({S, c});
      }
    }
  }
  for (int s = 0; s < cx.top; ++s) {
    const auto& src = cx.cells[static_cast<std::size_t>(s) + 1];
    IntMatrix d(cx.cells[static_cast<std::size_t>(s)].size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto& [S, c] = src[j];
      for (int nu = 1; nu <= static_cast<int>(S.size()); ++nu) {
        const std::size_t i = index[static_cast<std::size_t>(s)].at({drop(S, nu), config.face(S, nu, c)});
        d(i, j) += nu % 2 == 1 ? 1 : -1;
      }
    }
    cx.d.push_back(std::move(d));
  }
  for (int s = 0; s + 1 < cx.top; ++s) {
    const auto& a = cx.d[static_cast<std::size_t>(s)];
    const auto& b = cx.d[static_cast<std::size_t>(s) + 1];
    if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) continue;
    if (!(a * b).is_zero()) fail(ErrorCode::FaceMapIncompatible, "d o d != 0 in degree " + std::to_string(s));
  }
  return cx;
}

PresentedGroup homology(const NerveComplex& cx, int a) {
  if (a < 0 || a > cx.top) {
    fail(ErrorCode::DegreeOutOfRange, "degree " + std::to_string(a) + " outside 0.." + std::to_string(cx.top));
  }
  // Universal coefficients over the Smith forms of the integral boundaries:
  // H_a(C/n) = H_a(C) (x) Z/n  +  Tor(H_{a-1}(C), Z/n).
  const std::size_t ca = cx.rank(a);
  std::vector<Integer> out_of = a > 0 ? elementary_divisors(cx.d[static_cast<std::size_t>(a) - 1]) : std::vector<Integer>{};
  std::vector<Integer> into = a < cx.top ? elementary_divisors(cx.d[static_cast<std::size_t>(a)]) : std::vector<Integer>{};
  const std::size_t free = ca - out_of.size() - into.size();
  std::vector<Integer> factors;
  for (const auto* list : {&into, &out_of}) {
    for (const auto& e : *list) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), e.get_mpz_t(), cx.n.get_mpz_t());
      if (g > 1) factors.push_back(g);
    }
  }
  return PresentedGroup::from_factors(factors, free, cx.n);
}

ObstructionReport obstruction_report(const SNCConfig& config, const Integer& n) {
  auto cx = build_nerve_complex(config, n);
  auto h = [&](int a) { return a <= cx.top ? homology(cx, a).invariants() : InvariantFactors{}; };
  ObstructionReport rep;
  rep.h1 = h(1);
  rep.h2 = h(2);
  const std::string N = n.get_str();
  std::ostringstream os;
  os << "H_2(C(Y,Z/" << N << ")) = " << rep.h2.to_string() << " -> C(X,D;X_s)/" << N << " -> pi_1^ab(U)/" << N
     << " -> H_1(C(Y,Z/" << N << ")) = " << rep.h1.to_string() << " -> 0; ";
  if (rep.h1.is_trivial() && rep.h2.is_trivial()) {
    os << "the reciprocity map is an isomorphism mod " << N;
  } else if (rep.h2.is_trivial()) {
    os << "the reciprocity map is injective mod " << N << " with cokernel " << rep.h1.to_string();
  } else if (rep.h1.is_trivial()) {
    os << "the reciprocity map is surjective mod " << N << "; its kernel is a quotient of " << rep.h2.to_string();
  } else {
    os << "cokernel " << rep.h1.to_string() << ", kernel a quotient of " << rep.h2.to_string();
  }
  rep.statement = os.str();
  return rep;
}

}  // namespace parshin::katocx
