#include "parshin/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "parshin/abgroup.hpp"
#include "parshin/chains.hpp"
#include "parshin/error.hpp"
#include "parshin/ideles.hpp"
#include "parshin/katocx.hpp"
#include "parshin/milnor.hpp"
#include "parshin/rng.hpp"
#include "parshin/tower.hpp"

namespace parshin::cli {

namespace {

// ------------------------------------------------------------ parameters

const Json& field_of(const Json& job, const char* key) {
  if (!job.contains(key)) fail(ErrorCode::InvalidInput, std::string("missing parameter '") + key + "'");
  return job.at(key);
}

long long get_int(const Json& job, const char* key, std::optional<long long> fallback, long long lo, long long hi) {
  long long v;
  if (!job.contains(key)) {
    if (!fallback) fail(ErrorCode::InvalidInput, std::string("missing parameter '") + key + "'");
    v = *fallback;
  } else {
    const auto& x = job.at(key);
    if (!x.is_number_integer()) fail(ErrorCode::InvalidInput, std::string("parameter '") + key + "' must be an integer");
    v = x.get<long long>();
  }
  if (v < lo || v > hi) {
    fail(ErrorCode::InvalidInput, std::string("parameter '") + key + "' = " + std::to_string(v) + " outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::uint64_t get_seed(const Json& job) {
  const auto& x = field_of(job, "seed");
  if (!x.is_number_unsigned() && !x.is_number_integer()) fail(ErrorCode::InvalidInput, "seed must be an integer");
  return x.get<std::uint64_t>();
}

std::string get_str(const Json& job, const char* key, std::optional<std::string> fallback = std::nullopt) {
  if (!job.contains(key)) {
    if (!fallback) fail(ErrorCode::InvalidInput, std::string("missing parameter '") + key + "'");
    return *fallback;
  }
  if (!job.at(key).is_string()) fail(ErrorCode::InvalidInput, std::string("parameter '") + key + "' must be a string");
  return job.at(key).get<std::string>();
}

std::uint32_t get_q(const Json& job) { return static_cast<std::uint32_t>(get_int(job, "q", std::nullopt, 2, 1 << 16)); }

Json integer_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Json factors_json(const InvariantFactors& inv) {
  Json a = Json::array();
  for (const auto& d : inv.factors) a.push_back(integer_json(d));
  return a;
}

void put_group(Json& out, const InvariantFactors& inv) {
  out["invariant_factors"] = factors_json(inv);
  out["free_rank"] = inv.free_rank;
  out["group"] = inv.to_string();
}

Json history_json(const ideles::ClassGroupResult& r) {
  Json h = Json::array();
  for (const auto& s : r.history) h.push_back({{"bound", s.bound}, {"group", s.invariants.to_string()}});
  return {{"certified_bound", r.certified_bound}, {"rule", "invariants equal at B-1 and B"}, {"history", h}};
}

// ---------------------------------------------------------------- kgroup

struct FieldTag {
  std::uint32_t q = 0;
  int level = 0;
  std::string var = "t";
};

FieldTag parse_field_tag(const std::string& tag) {
  static const std::regex re(R"(^\s*F_(\d+)\s*((\(\(([st])\)\))?)\s*((\(\(t\)\))?)\s*$)");
  std::smatch m;
  if (!std::regex_match(tag, m, re)) fail(ErrorCode::ParseError, "unknown field tag '" + tag + "'");
  FieldTag t;
  t.q = static_cast<std::uint32_t>(std::stoul(m[1].str()));
  const bool first = m[3].matched, second = m[6].matched;
  if (first && second) {
    if (m[4].str() != "s") fail(ErrorCode::ParseError, "two-dimensional fields are written F_q((s))((t))");
    t.level = 2;
  } else if (first) {
    t.level = 1;
    t.var = m[4].str();
  }
  return t;
}

template <class K>
Json kgroup_result(const K& field, const Json& job, std::size_t r, const Integer& n) {
  milnor::KGroup k;
  if constexpr (std::is_same_v<K, FiniteFieldK>) {
    const std::string mode = get_str(job, "mode", "auto");
    milnor::ClosureMode cm = milnor::ClosureMode::Auto;
    if (mode == "closure") {
      cm = milnor::ClosureMode::Closure;
    } else if (mode == "structural") {
      cm = milnor::ClosureMode::Structural;
    } else if (mode != "auto") {
      fail(ErrorCode::InvalidInput, "mode must be auto, closure or structural");
    }
    k = milnor::km_mod_n(field, r, n, cm);
  } else {
    k = milnor::km_mod_n(field, r, n);
  }
  Json out;
  out["field"] = field.name();
  put_group(out, k.group.invariants());
  out["method"] = k.method;
  out["generators"] = k.generators;
  out["cross_validated"] = k.cross_validated;
  if (k.method == "closure") {
    out["closure"] = {{"generators", k.closure_generators}, {"relations", k.closure_relations}};
  }
  if (job.contains("symbol")) {
    std::string text = get_str(job, "symbol");
    if (auto at = text.find('@'); at != std::string::npos) text = text.substr(0, at);
    auto x = milnor::parse_sum(field, text);
    if (x.degree != r) fail(ErrorCode::InvalidInput, "symbol degree does not match r");
    Json c = Json::array();
    for (const auto& v : milnor::coordinates(field, x, n)) c.push_back(integer_json(v));
    out["symbol"] = milnor::format_sum(field, x);
    out["normal_form"] = milnor::format_sum(field, milnor::steinberg_normalize(field, x, n));
    out["coordinates"] = c;
  }
  return out;
}

Json run_kgroup(const Json& job) {
  std::string tag = get_str(job, "field");
  if (job.contains("symbol")) {
    const std::string s = get_str(job, "symbol");
    if (auto at = s.find('@'); at != std::string::npos) tag = s.substr(at + 1);
  }
  const FieldTag t = parse_field_tag(tag);
  const auto r = static_cast<std::size_t>(get_int(job, "r", std::nullopt, 0, 3));
  const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 1, 1 << 20)));
  const int precision = static_cast<int>(get_int(job, "precision", 16, 4, 256));
  auto F = finite_field(t.q);
  if (t.level == 0) return kgroup_result(FiniteFieldK(F), job, r, n);
  if (t.level == 1) return kgroup_result(LocalFieldK(F, precision, t.var), job, r, n);
  return kgroup_result(TwoLocalFieldK(F, precision), job, r, n);
}

// ------------------------------------------------------------ class groups

chains::SchemeModel model_of(const Json& job) {
  const std::string scheme = get_str(job, "scheme", "p1");
  auto F = finite_field(get_q(job));
  if (scheme == "p1") return chains::SchemeModel::p1(F);
  if (scheme == "local_surface") return chains::SchemeModel::local_surface(F);
  fail(ErrorCode::InvalidInput, "scheme must be p1 or local_surface");
}

Json run_classgroup(const Json& job) {
  auto model = model_of(job);
  auto D = chains::parse_divisor(model, get_str(job, "divisor", ""));
  const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 2, 1 << 20)));
  const int bound = static_cast<int>(get_int(job, "degree_bound", 6, 1, 12));
  auto r = ideles::class_group({model, D, n, bound});
  Json out;
  out["model"] = model.name();
  out["divisor"] = chains::format_divisor(model, D);
  put_group(out, r.invariants);
  out["generators"] = r.presentation.generators.size();
  out["certificate"] = history_json(r);
  return out;
}

Json run_oracle(const Json& job) {
  const std::string kind = get_str(job, "kind", "ray-class");
  if (kind != "ray-class") fail(ErrorCode::InvalidInput, "unknown oracle '" + kind + "'");
  auto model = chains::SchemeModel::p1(finite_field(get_q(job)));
  auto D = chains::parse_divisor(model, get_str(job, "divisor", ""));
  const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 2, 1 << 20)));
  const int bound = static_cast<int>(get_int(job, "degree_bound", 6, 1, 12));
  auto r = ideles::ray_class_oracle(model, D, n, bound);
  Json out;
  out["model"] = model.name();
  out["divisor"] = chains::format_divisor(model, D);
  put_group(out, r.invariants);
  Json cert = history_json(r);
  cert["rule"] = "invariants equal at B-1 and B, with B-1 >= deg D";
  out["certificate"] = cert;
  return out;
}

// ------------------------------------------------------------ verify suites

Poly random_poly(const FiniteField& F, Rng& rng, int max_deg) {
  Poly a;
  while (a.empty()) {
    a.assign(static_cast<std::size_t>(rng.range(0, max_deg)) + 1, F.zero());
    for (auto& c : a) c = F.element(static_cast<std::uint32_t>(rng.below(F.order())));
    poly::trim(a);
  }
  return a;
}

Json run_verify_weil(const Json& job) {
  auto F = finite_field(get_q(job));
  const auto trials = get_int(job, "trials", 200, 0, 1000000);
  const int max_deg = static_cast<int>(get_int(job, "max_degree", 4, 0, 12));
  const Rng root(get_seed(job));
  long long passed = 0;
  Json failures = Json::array(), sample = Json::array();
  for (long long i = 0; i < trials; ++i) {
    Rng r = root.split(static_cast<std::uint64_t>(i));
    auto f = ideles::make_rational(*F, random_poly(*F, r, max_deg), random_poly(*F, r, max_deg));
    auto g = ideles::make_rational(*F, random_poly(*F, r, max_deg), random_poly(*F, r, max_deg));
    const bool ok = ideles::weil_reciprocity_check(*F, f, g);
    passed += ok ? 1 : 0;
    const std::string pair = ideles::format_rational(*F, f) + " , " + ideles::format_rational(*F, g);
    if (!ok) failures.push_back(pair);
    if (i < 3) sample.push_back(pair);
  }
  return {{"field", "F_" + std::to_string(F->order())}, {"trials", trials}, {"passed", passed},
          {"all_passed", passed == trials}, {"sample", sample}, {"failures", failures}};
}

Json run_verify_local(const Json& job) {
  auto F = finite_field(get_q(job));
  const auto trials = get_int(job, "trials", 100, 0, 1000000);
  const Rng root(get_seed(job));
  long long passed = 0;
  Json failures = Json::array(), sample = Json::array();
  for (long long i = 0; i < trials; ++i) {
    Rng r = root.split(static_cast<std::uint64_t>(i));
    auto f = BiLaurent::random(F, r, 3, 2);
    auto g = BiLaurent::random(F, r, 3, 2);
    const bool ok = ideles::local_surface_reciprocity_check(f, g);
    passed += ok ? 1 : 0;
    const std::string pair = f.format() + " , " + g.format();
    if (!ok) failures.push_back(pair);
    if (i < 3) sample.push_back(pair);
  }
  Json out{{"field", "F_" + std::to_string(F->order()) + "((s))((t))"}, {"trials", trials}, {"passed", passed},
           {"all_passed", passed == trials}, {"sample", sample}, {"failures", failures}};
  if (job.contains("n")) {
    const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 2, 1 << 20)));
    TwoLocalFieldK K(F, 16);
    auto k = milnor::km_mod_n(K, 2, n);
    auto coords = [&](const BiLaurent& a, const BiLaurent& b) {
      Json c = Json::array();
      for (const auto& v : milnor::coordinates(K, milnor::SymbolSum<BiLaurent>::single({a, b}), n)) c.push_back(integer_json(v));
      return c;
    };
    const auto s = BiLaurent::s(F), t = BiLaurent::t(F), gen = BiLaurent::constant(F, F->generator());
    Json k2;
    put_group(k2, k.group.invariants());
    k2["method"] = k.method;
    k2["cross_validated"] = k.cross_validated;
    k2["generators"] = k.generators;
    k2["coordinates"] = {{"{s,t}", coords(s, t)}, {"{t,g}", coords(t, gen)}, {"{s,g}", coords(s, gen)}};
    out["k2_mod_n"] = k2;
  }
  return out;
}

Json run_verify_ray_class(const Json& job) {
  const auto q = get_q(job);
  const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 2, 1 << 20)));
  const int max_mult = static_cast<int>(get_int(job, "max_mult", 3, 0, 6));
  const int bound = static_cast<int>(get_int(job, "degree_bound", 6, 1, 12));
  const int oracle_bound = static_cast<int>(get_int(job, "oracle_bound", bound, 1, 12));
  auto model = chains::SchemeModel::p1(finite_field(q));
  Json rows = Json::array();
  long long agree = 0, disagree = 0, unstable = 0;
  for (int a = 0; a <= max_mult; ++a) {
    for (int b = 0; b <= max_mult; ++b) {
      std::string d;
      if (a > 0) d += (a > 1 ? std::to_string(a) : "") + "[0]";
      if (b > 0) d += std::string(d.empty() ? "" : "+") + (b > 1 ? std::to_string(b) : "") + "[inf]";
      auto D = chains::parse_divisor(model, d);
      Json row{{"divisor", chains::format_divisor(model, D)}};
      std::optional<InvariantFactors> cg, orc;
      try {
        auto r = ideles::class_group({model, D, n, bound});
        cg = r.invariants;
        row["class_group"] = r.invariants.to_string();
        row["class_group_bound"] = r.certified_bound;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotStabilized) throw;
        row["class_group"] = "NOT_STABILIZED";
      }
      try {
        auto r = ideles::ray_class_oracle(model, D, n, oracle_bound);
        orc = r.invariants;
        row["oracle"] = r.invariants.to_string();
        row["oracle_bound"] = r.certified_bound;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotStabilized) throw;
        row["oracle"] = "NOT_STABILIZED";
      }
      if (cg && orc) {
        const bool eq = *cg == *orc;
        row["agree"] = eq;
        (eq ? agree : disagree) += 1;
      } else {
        row["agree"] = nullptr;
        ++unstable;
      }
      rows.push_back(row);
    }
  }
  return {{"field", "F_" + std::to_string(q)}, {"n", integer_json(n)}, {"degree_bound", bound},
          {"oracle_bound", oracle_bound}, {"agree", agree}, {"disagree", disagree}, {"not_stabilized", unstable},
          {"all_agree", disagree == 0 && unstable == 0}, {"jobs", rows}};
}

// Independent count for curve-like nerves: H_0 = (Z/n)^C, H_1 = (Z/n)^(E-V+C).
std::pair<long long, long long> graph_betti(const katocx::SNCConfig& cfg) {
  const int V = cfg.components();
  std::vector<int> parent(static_cast<std::size_t>(V) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  long long C = V, E = 0;
  for (const auto& s : cfg.strata(2)) {
    E += cfg.pi0(s);
    int a = find(s[0]), b = find(s[1]);
    if (a != b) {
      parent[a] = b;
      --C;
    }
  }
  return {C, E - V + C};
}

InvariantFactors elementary(long long n, long long k) {
  InvariantFactors inv;
  inv.factors.assign(static_cast<std::size_t>(k), Integer(static_cast<long>(n)));
  return inv;
}

Json run_verify_kato(const Json& job) {
  const auto trials = get_int(job, "trials", 50, 0, 100000);
  const int max_components = static_cast<int>(get_int(job, "max_components", 6, 1, 12));
  const Rng root(get_seed(job));
  std::vector<long long> moduli{2, 3, 4};
  if (job.contains("moduli")) moduli = job.at("moduli").get<std::vector<long long>>();
  long long passed = 0;
  Json failures = Json::array(), sample = Json::array();
  for (long long i = 0; i < trials; ++i) {
    Rng r = root.split(static_cast<std::uint64_t>(i));
    auto cfg = katocx::random_graph_config(r, max_components, 2);
    auto [h0, h1] = graph_betti(cfg);
    bool ok = true;
    for (long long n : moduli) {
      auto cx = katocx::build_nerve_complex(cfg, Integer(static_cast<long>(n)));
      ok = ok && katocx::homology(cx, 0).invariants() == elementary(n, h0);
      if (cx.top >= 1) ok = ok && katocx::homology(cx, 1).invariants() == elementary(n, h1);
    }
    passed += ok ? 1 : 0;
    if (!ok) failures.push_back(Json::parse(cfg.to_json()));
    if (i < 3) sample.push_back(Json::parse(cfg.to_json()));
  }
  Json triangle = Json::object();
  auto tri = katocx::SNCConfig::graph(3, {{{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 1}});
  for (long long n : moduli) {
    triangle[std::to_string(n)] =
        katocx::homology(katocx::build_nerve_complex(tri, Integer(static_cast<long>(n))), 1).invariants().to_string();
  }
  return {{"trials", trials}, {"passed", passed}, {"all_passed", passed == trials}, {"triangle_h1", triangle},
          {"sample", sample}, {"failures", failures}};
}

Json run_verify(const Json& job) {
  const std::string kind = get_str(job, "kind");
  if (kind == "weil") return run_verify_weil(job);
  if (kind == "local") return run_verify_local(job);
  if (kind == "ray-class") return run_verify_ray_class(job);
  if (kind == "kato") return run_verify_kato(job);
  fail(ErrorCode::InvalidInput, "unknown verification '" + kind + "'");
}

// ------------------------------------------------------------------ kato

katocx::SNCConfig config_of(const Json& job) {
  const auto& c = field_of(job, "config");
  if (c.is_string()) return katocx::parse_snc_config(c.get<std::string>());
  return katocx::parse_snc_config(c.dump());
}

Json run_kato_homology(const Json& job) {
  auto cfg = config_of(job);
  const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 2, 1 << 20)));
  auto cx = katocx::build_nerve_complex(cfg, n);
  std::vector<int> degrees;
  if (job.contains("degrees")) {
    degrees = job.at("degrees").get<std::vector<int>>();
  } else {
    for (int a = 0; a <= cx.top; ++a) degrees.push_back(a);
  }
  Json h = Json::array();
  for (int a : degrees) {
    Json e{{"degree", a}};
    put_group(e, katocx::homology(cx, a).invariants());
    h.push_back(e);
  }
  Json ranks = Json::array();
  for (int s = 0; s <= cx.top; ++s) ranks.push_back(cx.rank(s));
  return {{"components", cfg.components()}, {"chain_ranks", ranks}, {"homology", h}};
}

Json run_report(const Json& job) {
  auto cfg = config_of(job);
  const Integer n(static_cast<long>(get_int(job, "n", std::nullopt, 2, 1 << 20)));
  auto rep = katocx::obstruction_report(cfg, n);
  Json h1, h2;
  put_group(h1, rep.h1);
  put_group(h2, rep.h2);
  return {{"components", cfg.components()}, {"h1", h1}, {"h2", h2}, {"statement", rep.statement}};
}

// ------------------------------------------------------------ dispatch

const std::map<std::string, std::vector<std::string>>& anchor_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"kgroup", {"milnor-k-group", "steinberg-relation", "tame-symbol", "iterated-tame-split"}},
      {"classgroup", {"parshin-chain-on-pair", "q-chain", "idele-group", "modulus-subgroup", "q-map",
                      "idele-class-group"}},
      {"oracle", {"ray-class-group", "tame-log-class-field-theory"}},
      {"verify/weil", {"tame-symbol", "q-map", "weil-reciprocity"}},
      {"verify/local", {"two-dimensional-local-field", "tame-symbol", "local-surface-reciprocity",
                        "iterated-tame-split"}},
      {"verify/ray-class", {"idele-class-group", "ray-class-group", "tame-log-class-field-theory"}},
      {"verify/kato", {"kato-nerve-complex", "nerve-homology"}},
      {"kato-homology", {"kato-nerve-complex", "nerve-homology"}},
      {"report", {"kato-nerve-complex", "reciprocity-exact-sequence"}},
  };
  return table;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotStabilized:
      return kNotStabilized;
    case ErrorCode::UnsupportedField:
    case ErrorCode::WildCoefficients:
    case ErrorCode::UnsupportedPrime:
    case ErrorCode::AnalyticSplittingUnsupported:
    case ErrorCode::UnsupportedElementForm:
    case ErrorCode::ExactFormRequired:
    case ErrorCode::NotMaximalChain:
      return kUnsupported;
    default:
      return kFailure;
  }
}

std::string key_of(const Json& job) {
  std::string cmd = job.contains("command") && job["command"].is_string() ? job["command"].get<std::string>() : "";
  if (cmd == "verify" && job.contains("kind") && job["kind"].is_string()) cmd += "/" + job["kind"].get<std::string>();
  return cmd;
}

}  // namespace

RunReport run(const Json& job) {
  RunReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string key = key_of(job);
  rep.payload["schema"] = kSchema;
  rep.payload["command"] = key;
  rep.payload["input"] = job;
  try {
    if (!job.is_object()) fail(ErrorCode::InvalidInput, "a job must be a JSON object");
    const std::string cmd = get_str(job, "command");
    Json result;
    if (cmd == "kgroup") {
      result = run_kgroup(job);
    } else if (cmd == "classgroup") {
      result = run_classgroup(job);
    } else if (cmd == "oracle") {
      result = run_oracle(job);
    } else if (cmd == "verify") {
      result = run_verify(job);
    } else if (cmd == "kato-homology") {
      result = run_kato_homology(job);
    } else if (cmd == "report") {
      result = run_report(job);
    } else {
      fail(ErrorCode::InvalidInput, "unknown command '" + cmd + "'");
    }
    rep.payload["result"] = std::move(result);
  } catch (const Error& e) {
    rep.exit_code = exit_code_for(e.code());
    rep.payload["error"] = {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
  } catch (const nlohmann::json::exception& e) {
    rep.exit_code = kFailure;
    rep.payload["error"] = {{"code", std::string(error_code_name(ErrorCode::InvalidInput))}, {"message", e.what()}};
  }
  auto it = anchor_table().find(key);
  rep.payload["anchors"] = it == anchor_table().end() ? std::vector<std::string>{} : it->second;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<RunReport> run_batch(const std::vector<Json>& jobs) {
  std::vector<RunReport> out(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = run(jobs[i]);
  return out;
}

std::string render_json(const RunReport& r, bool with_timing) {
  Json j = r.payload;
  if (with_timing) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << r.seconds;
    j["timing"] = {{"seconds", std::stod(os.str())}};
  }
  return j.dump(2);
}

std::string render_markdown(const RunReport& r) {
  std::ostringstream os;
  os << "## " << r.payload.value("command", std::string("job")) << "\n\n";
  os << "input: `" << r.payload["input"].dump() << "`\n\n";
  if (r.payload.contains("error")) {
    os << "**error** `" << r.payload["error"]["code"].get<std::string>() << "`: "
       << r.payload["error"]["message"].get<std::string>() << "\n";
  } else {
    os << "| key | value |\n|---|---|\n";
    for (const auto& [k, v] : r.payload["result"].items()) {
      std::string text = v.is_string() ? v.get<std::string>() : v.dump();
      if (text.size() > 160) text = text.substr(0, 157) + "...";
      std::replace(text.begin(), text.end(), '|', '/');
      os << "| " << k << " | " << text << " |\n";
    }
  }
  os << "\nanchors: ";
  bool first = true;
  for (const auto& a : r.payload["anchors"]) {
    os << (first ? "" : ", ") << a.get<std::string>();
    first = false;
  }
  os << "\n\ntime: " << r.seconds << " s\n";
  return os.str();
}

std::vector<std::string> diff_keys(const Json& a, const Json& b) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a.items()) keys.insert(k);
  for (const auto& [k, v] : b.items()) keys.insert(k);
  std::vector<std::string> out;
  for (const auto& k : keys) {
    if (!a.contains(k) || !b.contains(k) || a.at(k).dump() != b.at(k).dump()) out.push_back(k);
  }
  return out;
}

RegressionSummary regression_suite(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) fail(ErrorCode::InvalidInput, "golden directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Json> stored(files.size()), jobs(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::ifstream in(files[i]);
    try {
      stored[i] = Json::parse(in);
      jobs[i] = stored[i].at("job");
      (void)stored[i].at("report");
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::GoldenMismatch, files[i].filename().string() + ": unreadable entry (" + e.what() + ")");
    }
  }
  auto reports = run_batch(jobs);
  RegressionSummary sum;
  sum.entries = files.size();
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto keys = diff_keys(stored[i].at("report"), reports[i].payload);
    if (keys.empty()) {
      ++sum.passed;
      continue;
    }
    std::string line = files[i].filename().string() + ":";
    for (const auto& k : keys) {
      line += " " + k;
      // Name the first diverging result fields as well.
      if (k == "result" && stored[i]["report"].contains("result") && reports[i].payload.contains("result")) {
        for (const auto& sub : diff_keys(stored[i]["report"]["result"], reports[i].payload["result"])) line += " result." + sub;
      }
    }
    sum.mismatches.push_back(line);
  }
  if (!sum.mismatches.empty()) {
    std::string msg = std::to_string(sum.mismatches.size()) + " of " + std::to_string(sum.entries) + " entries diverge:";
    for (const auto& m : sum.mismatches) msg += " [" + m + "]";
    fail(ErrorCode::GoldenMismatch, msg);
  }
  return sum;
}

void write_golden(const std::filesystem::path& file, const Json& job) {
  auto rep = run(job);
  if (rep.exit_code != kOk) fail(ErrorCode::InvalidInput, "refusing to store a failing job: " + rep.payload.dump());
  Json entry{{"job", job}, {"report", rep.payload}};
  std::ofstream out(file);
  out << entry.dump(2) << "\n";
}

}  // namespace parshin::cli
