#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "parshin/cli.hpp"
#include "parshin/error.hpp"

using parshin::cli::Json;

namespace {

struct Common {
  std::string output = "json";
  bool no_timing = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parshin::Error(parshin::ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const std::vector<parshin::cli::RunReport>& reports, const Common& c, bool as_array) {
  int code = 0;
  for (const auto& r : reports) code = std::max(code, r.exit_code);
  if (c.output == "md") {
    for (const auto& r : reports) std::cout << parshin::cli::render_markdown(r) << "\n";
    return code;
  }
  if (!as_array) {
    std::cout << parshin::cli::render_json(reports.front(), !c.no_timing) << "\n";
    return code;
  }
  std::cout << "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::cout << parshin::cli::render_json(reports[i], !c.no_timing) << (i + 1 < reports.size() ? ",\n" : "\n");
  }
  std::cout << "]\n";
  return code;
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher idele class groups, Milnor K-symbols and Kato nerve complexes at desk scale"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--output", common.output, "Report format")->check(CLI::IsMember({"json", "md"}));
  app.add_flag("--no-timing", common.no_timing, "Omit the timing field from JSON reports");
  std::string jobs_file;
  app.add_option("--jobs", jobs_file, "Run a JSON array of jobs (batch mode)");

  Json job;
  std::uint32_t q = 0;
  long long n = 0, r = 0, trials = 0, degree_bound = 6, precision = 16, max_degree = 4, max_mult = 3, oracle_bound = 0;
  std::uint64_t seed = 0;
  std::string field, symbol, scheme = "p1", divisor, config_path, degrees, mode = "auto", golden;
  bool update = false;

  auto* kg = app.add_subcommand("kgroup", "K^M_r/n of F_q, F_q((t)) or F_q((s))((t))");
  kg->add_option("--field", field, "F_9, F_3((t)), F_5((s))((t))");
  kg->add_option("--r", r, "Degree")->required();
  kg->add_option("--n", n, "Coefficients Z/n")->required();
  kg->add_option("--symbol", symbol, "Symbol sum to express in the basis, optionally tagged {a, b}@K");
  kg->add_option("--precision", precision, "Series precision");
  kg->add_option("--mode", mode, "auto, closure or structural (finite fields)");

  auto* cg = app.add_subcommand("classgroup", "C(X,D)/n with a stabilization certificate");
  cg->add_option("--scheme", scheme, "p1 or local_surface");
  cg->add_option("--q", q, "Field size")->required();
  cg->add_option("--divisor", divisor, "e.g. \"2[0]+[inf]\" or \"(s)+(t)\"");
  cg->add_option("--n", n, "Coefficients Z/n")->required();
  cg->add_option("--degree-bound", degree_bound, "Largest degree bound B to try");

  auto* orc = app.add_subcommand("oracle", "Independent oracles");
  auto* rc = orc->add_subcommand("ray-class", "Brute-force ray class group of P^1 mod n");
  orc->require_subcommand(1);
  rc->add_option("--q", q, "Field size")->required();
  rc->add_option("--divisor", divisor, "Modulus");
  rc->add_option("--n", n, "Coefficients Z/n")->required();
  rc->add_option("--degree-bound", degree_bound, "Largest degree bound B to try");

  auto* ver = app.add_subcommand("verify", "Seeded property suites");
  ver->require_subcommand(1);
  auto* vw = ver->add_subcommand("weil", "Weil reciprocity on P^1 for random pairs");
  vw->add_option("--q", q, "Field size")->required();
  vw->add_option("--trials", trials, "Number of pairs")->default_val(200);
  vw->add_option("--seed", seed, "Seed")->required();
  vw->add_option("--max-degree", max_degree, "Degree bound of numerators and denominators");
  auto* vl = ver->add_subcommand("local", "Reciprocity on F_q[[s,t]] for random monomial-unit pairs");
  vl->add_option("--q", q, "Field size")->required();
  vl->add_option("--trials", trials, "Number of pairs")->default_val(100);
  vl->add_option("--seed", seed, "Seed")->required();
  vl->add_option("--n", n, "Also present K_2(F_q((s))((t)))/n");
  auto* vr = ver->add_subcommand("ray-class", "class_group against the ray class oracle for D = a[0]+b[inf]");
  vr->add_option("--q", q, "Field size")->required();
  vr->add_option("--n", n, "Coefficients Z/n")->required();
  vr->add_option("--max-mult", max_mult, "Largest multiplicity");
  vr->add_option("--degree-bound", degree_bound, "Degree bound for both sides");
  vr->add_option("--oracle-bound", oracle_bound, "Separate degree bound for the oracle");
  auto* vk = ver->add_subcommand("kato", "Nerve homology against the graph formula");
  vk->add_option("--trials", trials, "Number of configurations")->default_val(50);
  vk->add_option("--seed", seed, "Seed")->required();

  auto* kh = app.add_subcommand("kato-homology", "Homology of the nerve complex C(Y, Z/n)");
  kh->add_option("--config", config_path, "Configuration JSON file")->required();
  kh->add_option("--n", n, "Coefficients Z/n")->required();
  kh->add_option("--degrees", degrees, "Comma-separated degrees, default all");

  auto* rp = app.add_subcommand("report", "H_1, H_2 obstruction report for a special fiber configuration");
  rp->add_option("--config", config_path, "Configuration JSON file")->required();
  rp->add_option("--n", n, "Coefficients Z/n")->required();

  auto* rg = app.add_subcommand("regress", "Replay the golden tables");
  rg->add_option("--golden", golden, "Golden directory")->required();
  rg->add_flag("--update", update, "Regenerate every entry from its stored job");

  auto* batch = app.add_subcommand("batch", "Run the jobs given with --jobs");
  (void)batch;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc2 = app.exit(e);
    return rc2 == 0 ? 0 : 1;
  }

  try {
    if (!jobs_file.empty()) {
      Json arr = Json::parse(slurp(jobs_file));
      if (!arr.is_array()) throw parshin::Error(parshin::ErrorCode::InvalidInput, "--jobs expects a JSON array");
      std::vector<Json> jobs(arr.begin(), arr.end());
      return emit(parshin::cli::run_batch(jobs), common, true);
    }
    if (rg->parsed()) {
      if (update) {
        for (const auto& e : std::filesystem::directory_iterator(golden)) {
          if (e.path().extension() != ".json") continue;
          Json stored = Json::parse(slurp(e.path().string()));
          parshin::cli::write_golden(e.path(), stored.at("job"));
        }
      }
      auto sum = parshin::cli::regression_suite(golden);
      std::cout << "golden entries: " << sum.entries << ", passed: " << sum.passed << "\n";
      return 0;
    }
    if (batch->parsed()) throw parshin::Error(parshin::ErrorCode::InvalidInput, "batch needs --jobs");

    if (kg->parsed()) {
      job = {{"command", "kgroup"}, {"r", r}, {"n", n}, {"precision", precision}, {"mode", mode}};
      if (!field.empty()) job["field"] = field;
      if (!symbol.empty()) job["symbol"] = symbol;
      if (field.empty() && symbol.find('@') == std::string::npos) {
        throw parshin::Error(parshin::ErrorCode::InvalidInput, "give --field or a tagged --symbol");
      }
      if (field.empty()) job["field"] = symbol.substr(symbol.find('@') + 1);
    } else if (cg->parsed()) {
      job = {{"command", "classgroup"}, {"scheme", scheme}, {"q", q}, {"divisor", divisor}, {"n", n},
             {"degree_bound", degree_bound}};
    } else if (rc->parsed()) {
      job = {{"command", "oracle"}, {"kind", "ray-class"}, {"q", q}, {"divisor", divisor}, {"n", n},
             {"degree_bound", degree_bound}};
    } else if (vw->parsed()) {
      job = {{"command", "verify"}, {"kind", "weil"}, {"q", q}, {"trials", trials}, {"seed", seed},
             {"max_degree", max_degree}};
    } else if (vl->parsed()) {
      job = {{"command", "verify"}, {"kind", "local"}, {"q", q}, {"trials", trials}, {"seed", seed}};
      if (n != 0) job["n"] = n;
    } else if (vr->parsed()) {
      job = {{"command", "verify"}, {"kind", "ray-class"}, {"q", q}, {"n", n}, {"max_mult", max_mult},
             {"degree_bound", degree_bound}};
      if (oracle_bound != 0) job["oracle_bound"] = oracle_bound;
    } else if (vk->parsed()) {
      job = {{"command", "verify"}, {"kind", "kato"}, {"trials", trials}, {"seed", seed}};
    } else if (kh->parsed() || rp->parsed()) {
      job = {{"command", kh->parsed() ? "kato-homology" : "report"}, {"config", Json::parse(slurp(config_path))},
             {"n", n}};
      if (kh->parsed() && !degrees.empty()) job["degrees"] = parse_degrees(degrees);
    }
    return emit({parshin::cli::run(job)}, common, false);
  } catch (const parshin::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == parshin::ErrorCode::NotStabilized ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
