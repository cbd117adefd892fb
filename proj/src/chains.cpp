#include "parshin/chains.hpp"

#include <algorithm>
#include <cctype>

#include "parshin/error.hpp"
#include "parshin/parse.hpp"

namespace parshin::chains {

char SurfacePrime::residue_var() const {
  switch (kind) {
    case Kind::S: return 't';
    case Kind::T: return 's';
    case Kind::Graph: return y == 't' ? 's' : 't';
  }
  return 's';
}

std::string SchemeModel::name() const {
  std::string q = std::to_string(field_->order());
  return kind_ == ModelKind::P1 ? "P1/F_" + q : "Spec F_" + q + "[[s,t]]";
}

std::vector<Place> SchemeModel::places_up_to(int degree) const {
  std::vector<Place> out;
  if (degree >= 1) out.push_back(Place{true, {}});
  for (int d = 1; d <= degree; ++d) {
    for (auto& p : poly::monic_irreducibles(*field_, d)) out.push_back(Place{false, std::move(p)});
  }
  return out;
}

std::vector<SurfacePrime> SchemeModel::primes_up_to(int degree) const {
  std::vector<SurfacePrime> out;
  if (degree < 1) return out;
  out.push_back({SurfacePrime::Kind::S, 's', FqElem{0}, 1});
  out.push_back({SurfacePrime::Kind::T, 't', FqElem{0}, 1});
  for (int k = 1; k <= degree; ++k) {
    for (char y : {'t', 's'}) {
      if (k == 1 && y == 's') continue;
      for (std::uint32_t c = 1; c < field_->order(); ++c) out.push_back({SurfacePrime::Kind::Graph, y, FqElem{c}, k});
    }
  }
  return out;
}

Place SchemeModel::parse_place(std::string_view text) const {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  if (s == "inf" || s == "oo" || s == "infinity") return Place{true, {}};
  Poly p = poly::parse(*field_, s, "t");
  if (poly::degree(p) <= 0) {
    // A constant a denotes the place t - a.
    FqElem a = p.empty() ? field_->zero() : p[0];
    return Place{false, {field_->neg(a), field_->one()}};
  }
  if (!poly::is_irreducible(*field_, p)) fail(ErrorCode::UnsupportedPrime, "not an irreducible polynomial: " + s);
  return Place{false, poly::monic(*field_, p)};
}

SurfacePrime SchemeModel::parse_prime(std::string_view text) const {
  const FiniteField& F = *field_;
  auto expr = text::parse_expression(text, F, {"s", "t"});
  if (expr.big_o) fail(ErrorCode::UnsupportedPrime, "primes are polynomials");
  if (expr.terms.empty()) fail(ErrorCode::UnsupportedPrime, "the zero ideal is not a height-one prime");
  for (const auto& [e, c] : expr.terms) {
    if (e[0] < 0 || e[1] < 0) fail(ErrorCode::UnsupportedPrime, "primes are polynomials");
    if (e[0] == 0 && e[1] == 0) fail(ErrorCode::UnsupportedPrime, "polynomial is a unit in F_q[[s,t]]");
  }
  if (expr.terms.size() == 1) {
    const auto& e = expr.terms.begin()->first;
    if (e[0] == 1 && e[1] == 0) return {SurfacePrime::Kind::S, 's', FqElem{0}, 1};
    if (e[0] == 0 && e[1] == 1) return {SurfacePrime::Kind::T, 't', FqElem{0}, 1};
    fail(ErrorCode::UnsupportedPrime, "monomial is not prime: " + std::string(text));
  }
  if (expr.terms.size() == 2) {
    auto it = expr.terms.begin();
    auto [e1, c1] = *it++;
    auto [e2, c2] = *it;
    // Find the linear term a*y and the pure power b*x^k.
    for (int pass = 0; pass < 2; ++pass) {
      const auto& ey = pass == 0 ? e1 : e2;
      const auto& ex = pass == 0 ? e2 : e1;
      FqElem a = pass == 0 ? c1 : c2;
      FqElem b = pass == 0 ? c2 : c1;
      for (int yi = 1; yi >= 0; --yi) {
        int xi = 1 - yi;
        if (ey[yi] == 1 && ey[xi] == 0 && ex[yi] == 0 && ex[xi] >= 1) {
          int k = ex[xi];
          char y = yi == 1 ? 't' : 's';
          FqElem c = F.neg(F.div(b, a));
          if (k == 1 && y == 's') {
            // s - c t  ~  t - c^-1 s
            return {SurfacePrime::Kind::Graph, 't', F.inv(c), 1};
          }
          return {SurfacePrime::Kind::Graph, y, c, k};
        }
      }
    }
  }
  fail(ErrorCode::AnalyticSplittingUnsupported,
       "prime (" + std::string(text) + ") is not on the supported list; its completion may split");
}

std::string SchemeModel::format(const Place& p) const {
  if (p.infinity) return "inf";
  if (poly::degree(p.poly) == 1) return field_->format(field_->neg(p.poly[0]));
  return poly::format(*field_, p.poly, "t");
}

std::string SchemeModel::format(const SurfacePrime& p) const {
  switch (p.kind) {
    case SurfacePrime::Kind::S: return "s";
    case SurfacePrime::Kind::T: return "t";
    case SurfacePrime::Kind::Graph: break;
  }
  std::string c = field_->format(p.c);
  if (c.find_first_of("+g") != std::string::npos) c = "(" + c + ")";
  std::string x(1, p.residue_var());
  std::string out(1, p.y);
  out += "-";
  if (p.c != field_->one()) out += c + "*";
  out += x;
  if (p.k > 1) out += "^" + std::to_string(p.k);
  return out;
}

int dimension(const SchemeModel& model, const SchemePoint& x) {
  using T = SchemePoint::Type;
  switch (x.type) {
    case T::Generic: return model.dimension();
    case T::Closed:
    case T::ClosedFamily: return 0;
    case T::HeightOne:
    case T::HeightOneFamily: return 1;
  }
  return 0;
}

bool specializes(const SchemeModel& model, const SchemePoint& x, const SchemePoint& y) {
  using T = SchemePoint::Type;
  if (x == y) return true;
  if (x.type == T::Generic) return true;
  if (model.kind() == ModelKind::LocalSurface && (x.type == T::HeightOne || x.type == T::HeightOneFamily)) {
    return y.type == T::Closed;
  }
  return false;
}

std::string label(const SchemeModel& model, const SchemePoint& x) {
  using T = SchemePoint::Type;
  switch (x.type) {
    case T::Generic: return "eta";
    case T::Closed: return x.place ? model.format(*x.place) : "m";
    case T::HeightOne: return "(" + model.format(*x.prime) + ")";
    case T::ClosedFamily: return "x";
    case T::HeightOneFamily: return "(f)";
  }
  return "?";
}

int DivisorData::multiplicity(const SchemePoint& x) const {
  for (const auto& c : components) {
    if (c.point == x) return c.mult;
  }
  return 0;
}

DivisorData DivisorData::reduced() const {
  DivisorData out = *this;
  for (auto& c : out.components) c.mult = 1;
  return out;
}

bool DivisorData::dominates(const DivisorData& other) const {
  if (components.size() != other.components.size()) return false;
  for (const auto& c : other.components) {
    int m = multiplicity(c.point);
    if (m == 0 || m < c.mult) return false;
  }
  return true;
}

namespace {

bool point_less(const SchemeModel& model, const SchemePoint& a, const SchemePoint& b) {
  if (a.place && b.place) {
    if (a.place->infinity != b.place->infinity) return a.place->infinity;
    if (a.place->degree() != b.place->degree()) return a.place->degree() < b.place->degree();
    return poly::less(a.place->poly, b.place->poly);
  }
  if (a.prime && b.prime) {
    auto key = [](const SurfacePrime& p) {
      return std::make_tuple(p.kind == SurfacePrime::Kind::Graph ? 1 : 0, p.k, p.kind == SurfacePrime::Kind::T ? 1 : 0,
                             p.y == 's' ? 1 : 0, p.c.code);
    };
    return key(*a.prime) < key(*b.prime);
  }
  return label(model, a) < label(model, b);
}

}  // namespace

DivisorData parse_divisor(const SchemeModel& model, std::string_view text) {
  DivisorData d;
  const bool curve = model.kind() == ModelKind::P1;
  const char open = curve ? '[' : '(';
  const char close = curve ? ']' : ')';
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  bool first = true;
  for (;;) {
    skip();
    if (pos >= text.size()) break;
    if (!first) {
      if (text[pos] != '+') fail(ErrorCode::ParseError, "expected '+' in divisor");
      ++pos;
      skip();
    }
    first = false;
    int mult = 1;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos - start > 6) fail(ErrorCode::ParseError, "multiplicity too large");
      mult = std::stoi(std::string(text.substr(start, pos - start)));
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      }
    }
    if (mult < 1) fail(ErrorCode::InvalidInput, "multiplicities must be positive");
    if (pos >= text.size() || text[pos] != open) fail(ErrorCode::ParseError, std::string("expected '") + open + "'");
    int depth = 0;
    std::size_t start = ++pos;
    while (pos < text.size() && !(text[pos] == close && depth == 0)) {
      if (text[pos] == '(') ++depth;
      if (text[pos] == ')') --depth;
      ++pos;
    }
    if (pos >= text.size()) fail(ErrorCode::ParseError, "unterminated divisor component");
    std::string_view inner = text.substr(start, pos - start);
    ++pos;
    SchemePoint pt;
    if (curve) {
      pt.type = SchemePoint::Type::Closed;
      pt.place = model.parse_place(inner);
    } else {
      pt.type = SchemePoint::Type::HeightOne;
      pt.prime = model.parse_prime(inner);
    }
    bool merged = false;
    for (auto& c : d.components) {
      if (c.point == pt) {
        c.mult += mult;
        merged = true;
      }
    }
    if (!merged) d.components.push_back({pt, mult});
  }
  std::sort(d.components.begin(), d.components.end(),
            [&](const DivisorComponent& a, const DivisorComponent& b) { return point_less(model, a.point, b.point); });
  return d;
}

std::string format_divisor(const SchemeModel& model, const DivisorData& d) {
  std::string out;
  for (const auto& c : d.components) {
    if (!out.empty()) out += "+";
    if (c.mult != 1) out += std::to_string(c.mult);
    if (c.point.place) out += "[" + model.format(*c.point.place) + "]";
    else out += "(" + model.format(*c.point.prime) + ")";
  }
  return out;
}

bool in_support(const SchemeModel& model, const DivisorData& d, const SchemePoint& x) {
  using T = SchemePoint::Type;
  switch (x.type) {
    case T::Generic:
    case T::ClosedFamily:
    case T::HeightOneFamily: return false;
    case T::Closed:
      if (model.kind() == ModelKind::LocalSurface) return !d.empty();
      return d.multiplicity(x) > 0;
    case T::HeightOne: return d.multiplicity(x) > 0;
  }
  return false;
}

std::string kind_name(ChainKind k) {
  switch (k) {
    case ChainKind::Chain: return "chain";
    case ChainKind::Parshin: return "parshin";
    case ChainKind::ParshinOnPair: return "parshin_on_pair";
    case ChainKind::QChain: return "q_chain";
    case ChainKind::QoChain: return "qo_chain";
  }
  return "?";
}

int ChainRecord::dimension(const SchemeModel& model) const {
  if (points.empty()) fail(ErrorCode::InvalidInput, "empty chain");
  return chains::dimension(model, points.back());
}

std::string format_chain(const SchemeModel& model, const ChainRecord& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.points.size(); ++i) out += (i ? ", " : "") + label(model, c.points[i]);
  return out + ")";
}

ChainPoset::ChainPoset(std::vector<PosetPoint> points) : points_(std::move(points)) {
  spec_.assign(points_.size(), std::vector<bool>(points_.size(), false));
  for (std::size_t i = 0; i < points_.size(); ++i) spec_[i][i] = true;
}

void ChainPoset::add_specialization(std::size_t x, std::size_t y) { spec_.at(x).at(y) = true; }

int ChainPoset::min_dim() const {
  int m = INT32_MAX;
  for (const auto& p : points_) m = std::min(m, p.dim);
  return points_.empty() ? 0 : m;
}

bool is_chain(const ChainPoset& P, const std::vector<std::size_t>& c) {
  if (c.empty()) return false;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (c[i] == c[i + 1] || !P.specializes(c[i + 1], c[i])) return false;
  }
  return true;
}

bool is_parshin(const ChainPoset& P, const std::vector<std::size_t>& c) {
  if (!is_chain(P, c)) return false;
  const int dm = P.min_dim();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (P.point(c[i]).dim != static_cast<int>(i) + dm) return false;
  }
  return true;
}

bool is_parshin_on_pair(const ChainPoset& P, const std::vector<std::size_t>& c) {
  if (!is_parshin(P, c)) return false;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!P.point(c[i]).in_D) return false;
  }
  return !P.point(c.back()).in_D;
}

bool is_q_chain(const ChainPoset& P, const std::vector<std::size_t>& c) {
  // (p_0, ..., p_{s-2}, p_s): the entry at index s-1 is omitted, so s = size.
  if (!is_chain(P, c)) return false;
  const int dm = P.min_dim();
  const std::size_t s = c.size();
  for (std::size_t i = 0; i + 1 < s; ++i) {
    if (P.point(c[i]).dim != static_cast<int>(i) + dm || !P.point(c[i]).in_D) return false;
  }
  return P.point(c.back()).dim == static_cast<int>(s) + dm && !P.point(c.back()).in_D;
}

bool is_qo_chain(const ChainPoset& P, const std::vector<std::size_t>& c) { return is_q_chain(P, c) && c.size() >= 2; }

std::vector<ChainKind> classify(const ChainPoset& P, const std::vector<std::size_t>& c) {
  std::vector<ChainKind> out;
  if (is_chain(P, c)) out.push_back(ChainKind::Chain);
  if (is_parshin(P, c)) out.push_back(ChainKind::Parshin);
  if (is_parshin_on_pair(P, c)) out.push_back(ChainKind::ParshinOnPair);
  if (is_q_chain(P, c)) out.push_back(ChainKind::QChain);
  if (is_qo_chain(P, c)) out.push_back(ChainKind::QoChain);
  return out;
}

ModelPoset model_poset(const SchemeModel& model, const DivisorData& d) {
  using T = SchemePoint::Type;
  std::vector<SchemePoint> pts;
  pts.push_back({T::Generic, {}, {}});
  if (model.kind() == ModelKind::LocalSurface) pts.push_back({T::Closed, {}, {}});
  for (const auto& c : d.components) pts.push_back(c.point);
  pts.push_back({model.kind() == ModelKind::P1 ? T::ClosedFamily : T::HeightOneFamily, {}, {}});
  std::vector<PosetPoint> pp;
  for (const auto& p : pts) pp.push_back({label(model, p), dimension(model, p), in_support(model, d, p)});
  ChainPoset poset(std::move(pp));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i != j && specializes(model, pts[i], pts[j])) poset.add_specialization(i, j);
    }
  }
  return {std::move(poset), std::move(pts)};
}

std::vector<ChainRecord> enumerate_chain_types(const SchemeModel& model, const DivisorData& d) {
  using T = SchemePoint::Type;
  const SchemePoint eta{T::Generic, {}, {}};
  std::vector<ChainRecord> out;
  if (model.kind() == ModelKind::P1) {
    for (const auto& c : d.components) {
      if (!c.point.place) fail(ErrorCode::UnsupportedPrime, "curve divisors are supported on places");
    }
    out.push_back({{SchemePoint{T::ClosedFamily, {}, {}}}, ChainKind::ParshinOnPair, true});
    for (const auto& c : d.components) out.push_back({{c.point, eta}, ChainKind::ParshinOnPair, false});
    out.push_back({{eta}, ChainKind::QChain, false});
    return out;
  }
  for (const auto& c : d.components) {
    if (!c.point.prime) fail(ErrorCode::UnsupportedPrime, "surface divisors are supported on height-one primes");
  }
  const SchemePoint m{T::Closed, {}, {}};
  const SchemePoint family{T::HeightOneFamily, {}, {}};
  if (d.empty()) {
    out.push_back({{m}, ChainKind::ParshinOnPair, false});
  } else {
    out.push_back({{m, family}, ChainKind::ParshinOnPair, true});
    for (const auto& c : d.components) out.push_back({{m, c.point, eta}, ChainKind::ParshinOnPair, false});
  }
  out.push_back({{family}, ChainKind::QChain, true});
  if (!d.empty()) out.push_back({{m, eta}, ChainKind::QoChain, false});
  return out;
}

namespace {

std::string power_name(std::uint32_t q, int d) {
  std::uint64_t v = 1;
  for (int i = 0; i < d; ++i) v *= q;
  return std::to_string(v);
}

}  // namespace

ResidueRing residue_ring_at(const SchemeModel& model, const ChainRecord& c) {
  using T = SchemePoint::Type;
  const std::uint32_t q = model.field().order();
  const std::string Fq = "F_" + std::to_string(q);
  const auto& pts = c.points;
  if (pts.empty()) fail(ErrorCode::InvalidInput, "empty chain");
  ResidueRing r;
  if (model.kind() == ModelKind::P1) {
    if (pts.size() == 1 && pts[0].type == T::Closed) {
      int deg = pts[0].place->degree();
      r.level = 0;
      r.residue_order = static_cast<std::uint32_t>(std::stoul(power_name(q, deg)));
      r.description = "F_" + power_name(q, deg);
      return r;
    }
    if (pts.size() == 1 && pts[0].type == T::ClosedFamily) {
      r.level = 0;
      r.description = Fq + "^deg(x)";
      return r;
    }
    if (pts.size() == 1 && pts[0].type == T::Generic) {
      r.level = -1;
      r.residue_order = q;
      r.description = Fq + "(t)";
      return r;
    }
    if (pts.size() == 2 && pts[0].type == T::Closed && pts[1].type == T::Generic) {
      const Place& v = *pts[0].place;
      r.level = 1;
      r.residue_order = static_cast<std::uint32_t>(std::stoul(power_name(q, v.degree())));
      std::string pi = v.infinity ? "1/t" : (v.degree() == 1 ? "t-" + model.format(v) : "pi");
      if (!v.infinity && v.degree() == 1 && v.poly[0].is_zero()) pi = "t";
      r.uniformizers = {pi};
      r.description = "F_" + power_name(q, v.degree()) + "((" + pi + "))";
      return r;
    }
    fail(ErrorCode::InvalidInput, "not a chain on the curve model: " + format_chain(model, c));
  }
  r.residue_order = q;
  if (pts.size() == 1 && pts[0].type == T::Closed) {
    r.level = 0;
    r.description = Fq;
    return r;
  }
  auto prime_of = [&](const SchemePoint& p) -> std::optional<SurfacePrime> { return p.prime; };
  auto one_dim = [&](const SchemePoint& p) {
    if (auto pr = prime_of(p)) return std::string(1, pr->residue_var());
    return std::string("x_p");
  };
  if ((pts.size() == 2 && pts[0].type == T::Closed && (pts[1].type == T::HeightOne || pts[1].type == T::HeightOneFamily)) ||
      (pts.size() == 1 && (pts[0].type == T::HeightOne || pts[0].type == T::HeightOneFamily))) {
    const SchemePoint& p = pts.back();
    r.level = 1;
    r.uniformizers = {one_dim(p)};
    r.description = Fq + "((" + r.uniformizers[0] + "))";
    return r;
  }
  if (pts.size() == 3 && pts[0].type == T::Closed && pts[1].type == T::HeightOne && pts[2].type == T::Generic) {
    const SurfacePrime& p = *pts[1].prime;
    std::string inner(1, p.residue_var());
    std::string outer = p.kind == SurfacePrime::Kind::Graph ? model.format(p) : std::string(1, p.kind == SurfacePrime::Kind::S ? 's' : 't');
    r.level = 2;
    r.uniformizers = {inner, outer};
    r.description = Fq + "((" + inner + "))((" + outer + "))";
    return r;
  }
  if (pts.size() == 2 && pts[0].type == T::Closed && pts[1].type == T::Generic) {
    r.level = -1;
    r.description = "Frac " + Fq + "[[s,t]]";
    return r;
  }
  fail(ErrorCode::InvalidInput, "not a chain on the surface model: " + format_chain(model, c));
}

int multiplicity_D(const SchemeModel& model, const ChainRecord& c, const DivisorData& d) {
  auto mp = model_poset(model, d);
  std::vector<std::size_t> idx;
  for (const auto& p : c.points) {
    auto it = std::find(mp.points.begin(), mp.points.end(), p);
    if (it == mp.points.end()) fail(ErrorCode::NotMaximalChain, "chain leaves the support of D: " + format_chain(model, c));
    idx.push_back(static_cast<std::size_t>(it - mp.points.begin()));
  }
  if (!is_parshin_on_pair(mp.poset, idx) || static_cast<int>(c.points.size()) != model.dimension() + 1) {
    fail(ErrorCode::NotMaximalChain, "not a maximal Parshin chain on the pair: " + format_chain(model, c));
  }
  return d.multiplicity(c.points[c.points.size() - 2]);
}

}  // namespace parshin::chains
