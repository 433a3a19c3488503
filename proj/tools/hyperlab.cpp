// Experiment runner: theory tables, supercritical ensembles with normality
// reports, critical-window comparisons against the excursion oracle, exact
// oracle cross-checks, and single-run trajectory dumps.
//
// Exit codes: 0 pass, 1 statistical-acceptance failure, 2 usage/domain error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "hyperlab/ensemble.hpp"
#include "hyperlab/explorer.hpp"
#include "hyperlab/hypergraph.hpp"
#include "hyperlab/report.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/stats.hpp"
#include "hyperlab/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  int64_t n = 100000;
  int k = 3;
  std::vector<double> lambdas;  // theory accepts a grid
  double lambda = 1.5;
  double alpha = 0.0;
  bool alpha_set = false;
  int64_t runs = 100;
  uint64_t seed = 1;
  int workers = omp_get_max_threads();
  std::string out;
  int top_r = 2;
  double grid_step = 1e-3;
  double horizon = 0.0;  // 0: use default_excursion_horizon(alpha)
  double p_threshold = 0.01;
  bool vs_k2 = false;
  int64_t oracle_runs = 0;  // 0: same as runs
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat key=value config file; '#' starts a comment. Command-line flags win
// over config values.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::runtime_error("config: expected boolean, got '" + v + "'");
}

void apply_config(const std::map<std::string, std::string>& cfg, Options& opt) {
  auto get = [&](const char* key) -> const std::string* {
    const auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("n")) opt.n = std::stoll(*v);
  if (const auto* v = get("k")) opt.k = std::stoi(*v);
  if (const auto* v = get("lambda")) {
    opt.lambda = std::stod(*v);
    opt.lambdas = {opt.lambda};
  }
  if (const auto* v = get("alpha")) {
    opt.alpha = std::stod(*v);
    opt.alpha_set = true;
  }
  if (const auto* v = get("runs")) opt.runs = std::stoll(*v);
  if (const auto* v = get("seed")) opt.seed = std::stoull(*v);
  if (const auto* v = get("workers")) opt.workers = std::stoi(*v);
  if (const auto* v = get("out")) opt.out = *v;
  if (const auto* v = get("r")) opt.top_r = std::stoi(*v);
  if (const auto* v = get("grid_step")) opt.grid_step = std::stod(*v);
  if (const auto* v = get("horizon")) opt.horizon = std::stod(*v);
  if (const auto* v = get("p_threshold")) opt.p_threshold = std::stod(*v);
  if (const auto* v = get("vs_k2")) opt.vs_k2 = parse_bool(*v);
  if (const auto* v = get("oracle_runs")) opt.oracle_runs = std::stoll(*v);
}

// The experiment-defining parameters only: workers and output paths do not
// change any result, and leaving them out keeps reports byte-identical
// across worker counts.
json config_echo(const std::string& experiment, const Options& opt) {
  json j;
  j["experiment"] = experiment;
  j["n"] = opt.n;
  j["k"] = opt.k;
  if (experiment == "critical") {
    j["alpha"] = opt.alpha;
    j["r"] = opt.top_r;
    j["grid_step"] = opt.grid_step;
    j["horizon"] = opt.horizon;
    j["vs_k2"] = opt.vs_k2;
    j["oracle_runs"] = opt.oracle_runs;
  } else {
    j["lambda"] = opt.lambda;
  }
  j["runs"] = opt.runs;
  j["seed"] = opt.seed;
  j["p_threshold"] = opt.p_threshold;
  return j;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_theory(const Options& opt) {
  std::vector<double> lambdas = opt.lambdas.empty() ? std::vector<double>{1.5}
                                                    : opt.lambdas;
  std::ostringstream csv;
  csv << "n,k,lambda,lambda_star,rho_poisson,rho_k,sigma_sq_over_n,alpha\n";
  std::printf("%10s %3s %8s %12s %12s %12s %16s %10s\n", "n", "k", "lambda",
              "lambda_star", "rho_poisson", "rho_k", "sigma_sq_over_n", "alpha");
  for (const double lambda : lambdas) {
    const auto params = hyperlab::ModelParams::from_lambda(opt.n, opt.k, lambda);
    const auto v = hyperlab::theory_values(params);
    const double s2n = v.sigma_sq / static_cast<double>(opt.n);
    const double a = hyperlab::critical_alpha(params);
    std::printf("%10lld %3d %8.5g %12.8f %12.8f %12.8f %16s %10.4g\n",
                static_cast<long long>(opt.n), opt.k, lambda, v.lambda_star,
                v.rho_poisson, v.rho_k,
                std::isnan(s2n) ? "undef" : fmt(s2n).c_str(), a);
    csv << opt.n << ',' << opt.k << ',' << fmt(lambda) << ',' << fmt(v.lambda_star)
        << ',' << fmt(v.rho_poisson) << ',' << fmt(v.rho_k) << ',' << fmt(s2n) << ','
        << fmt(a) << '\n';
  }
  if (!opt.out.empty()) write_text_file(opt.out, csv.str());
  return 0;
}

int cmd_run(const Options& opt) {
  const auto params = hyperlab::ModelParams::from_lambda(opt.n, opt.k, opt.lambda);
  const double eps = opt.lambda - 1.0;
  if (eps <= 0.0)
    throw std::domain_error("run: needs lambda > 1 (use 'critical' near lambda = 1)");
  const double window = eps * eps * eps * static_cast<double>(opt.n);
  if (window < 50.0)
    std::cerr << "warning: (lambda-1)^3 n = " << window
              << " < 50; normal approximation may be poor\n";

  hyperlab::EnsembleConfig config{params, opt.runs, opt.seed, opt.workers, 2};
  const auto summaries = hyperlab::run_ensemble(config);

  const fs::path dir = opt.out.empty() ? fs::path("hyperlab-out") : fs::path(opt.out);
  fs::create_directories(dir);
  {
    std::ostringstream os;
    hyperlab::write_runs_csv(summaries, os);
    write_text_file(dir / "runs.csv", os.str());
  }

  json report;
  report["version"] = std::string(hyperlab::kVersion);
  report["config"] = config_echo("run", opt);

  int rc = 0;
  if (opt.runs >= 2) {
    const auto rep = hyperlab::standardize(summaries, params);
    report.update(hyperlab::to_json(rep));
    const bool pass = rep.ks_p_value > opt.p_threshold;
    report["verdict"] = pass ? "pass" : "fail";
    std::cout << "runs=" << rep.m << "  L1 mean=" << rep.sample_mean
              << " (theory " << rep.theory_mean << ")  var=" << rep.sample_var
              << " (theory " << rep.theory_var << ")\n"
              << "KS D=" << rep.ks_statistic << "  p=" << rep.ks_p_value
              << "  verdict=" << (pass ? "pass" : "fail") << '\n';
    if (!pass) rc = 1;
  } else {
    report["m"] = 1;
    report["sample_mean"] = static_cast<double>(summaries[0].L1());
    report["sample_var"] = nullptr;
    report["ks_statistic"] = nullptr;
    report["ks_p_value"] = nullptr;
    report["verdict"] = "insufficient";
    std::cout << "runs=1: single run, no distributional verdict\n";
  }
  write_json_file(dir / "report.json", report);
  std::cout << "wrote " << (dir / "runs.csv").string() << " and "
            << (dir / "report.json").string() << '\n';
  return rc;
}

int cmd_critical(const Options& opt) {
  const auto params = hyperlab::ModelParams::from_alpha(opt.n, opt.k, opt.alpha);
  const double horizon =
      opt.horizon > 0.0 ? opt.horizon : hyperlab::default_excursion_horizon(opt.alpha);
  const int64_t oracle_runs = opt.oracle_runs > 0 ? opt.oracle_runs : opt.runs;

  hyperlab::EnsembleConfig config{params, opt.runs, opt.seed, opt.workers, opt.top_r};
  const auto summaries = hyperlab::run_ensemble(config);
  const double rescale = std::pow(opt.k - 1, 1.0 / 3.0) *
                         std::pow(static_cast<double>(opt.n), -2.0 / 3.0);

  const auto oracle = hyperlab::excursion_ensemble(
      opt.alpha, opt.grid_step, horizon, opt.top_r, oracle_runs,
      hyperlab::stream_seed(opt.seed, 0x0eac1e), opt.workers);

  json tests = json::array();
  bool pass = true;
  for (int order = 1; order <= opt.top_r; ++order) {
    std::vector<double> sizes;
    sizes.reserve(summaries.size());
    for (const auto& s : summaries)
      if (s.L(order) > 0) sizes.push_back(rescale * static_cast<double>(s.L(order)));
    const auto gamma = hyperlab::excursion_order_stat(oracle, order);
    const auto ks = hyperlab::critical_compare(sizes, gamma);
    json t;
    t["name"] = "L" + std::to_string(order) + "_vs_excursion";
    t["ks_statistic"] = ks.statistic;
    t["ks_p_value"] = ks.p_value;
    tests.push_back(t);
    pass = pass && ks.p_value > opt.p_threshold;
    std::cout << t["name"].get<std::string>() << ": D=" << ks.statistic
              << " p=" << ks.p_value << '\n';
  }

  if (opt.vs_k2 && opt.k != 2) {
    const auto params2 = hyperlab::ModelParams::from_alpha(opt.n, 2, opt.alpha);
    hyperlab::EnsembleConfig config2{params2, opt.runs,
                                     hyperlab::stream_seed(opt.seed, 0x6b32),
                                     opt.workers, 1};
    const auto base = hyperlab::run_ensemble(config2);
    const double rescale2 = std::pow(static_cast<double>(opt.n), -2.0 / 3.0);
    std::vector<double> ours, theirs;
    for (const auto& s : summaries) ours.push_back(rescale * static_cast<double>(s.L1()));
    for (const auto& s : base) theirs.push_back(rescale2 * static_cast<double>(s.L1()));
    const auto ks = hyperlab::critical_compare(ours, theirs);
    json t;
    t["name"] = "L1_vs_k2";
    t["ks_statistic"] = ks.statistic;
    t["ks_p_value"] = ks.p_value;
    tests.push_back(t);
    pass = pass && ks.p_value > opt.p_threshold;
    std::cout << "L1_vs_k2: D=" << ks.statistic << " p=" << ks.p_value << '\n';
  }

  const fs::path dir = opt.out.empty() ? fs::path("hyperlab-out") : fs::path(opt.out);
  fs::create_directories(dir);
  {
    std::ostringstream os;
    hyperlab::write_runs_csv(summaries, os);
    write_text_file(dir / "runs.csv", os.str());
  }
  json report;
  report["version"] = std::string(hyperlab::kVersion);
  report["config"] = config_echo("critical", opt);
  report["lambda"] = params.lambda;
  report["rescale_factor"] = rescale;
  report["tests"] = tests;
  report["verdict"] = pass ? "pass" : "fail";
  write_json_file(dir / "report.json", report);
  std::cout << "verdict=" << (pass ? "pass" : "fail") << '\n';
  return pass ? 0 : 1;
}

int cmd_oracle_check(const Options& opt) {
  if (opt.n > 200)
    throw std::domain_error("oracle-check: n is capped at 200 (exact mode)");
  const auto params = hyperlab::ModelParams::from_lambda(opt.n, opt.k, opt.lambda);

  std::vector<int64_t> explicit_l1(static_cast<size_t>(opt.runs));
  for (int64_t i = 0; i < opt.runs; ++i) {
    const uint64_t seed = hyperlab::stream_seed(opt.seed, static_cast<uint64_t>(i));
    const auto h = hyperlab::sample_hypergraph(opt.n, opt.k, params.p, seed);
    const auto trace = hyperlab::explore_given(h);
    const auto truth = hyperlab::components(h);
    std::vector<int64_t> got = trace.component_sizes;
    std::sort(got.begin(), got.end(), std::greater<>());
    explicit_l1[i] = got.empty() ? 0 : got.front();
    if (got != truth.sizes) {
      const std::string dump = "mismatch-seed-" + std::to_string(seed) + ".txt";
      std::ofstream out(dump);
      hyperlab::write_hypergraph(h, out);
      std::cout << "MISMATCH at run " << i << " (seed " << seed
                << "); hypergraph dumped to " << dump << '\n';
      return 1;
    }
  }
  std::cout << "component multisets: " << opt.runs << "/" << opt.runs
            << " exact matches\n";

  // Distributional check: implicit-mode L1 histogram vs the explicit one.
  hyperlab::EnsembleConfig config{params, opt.runs,
                                  hyperlab::stream_seed(opt.seed, 0x1a9b1c17),
                                  opt.workers, 1};
  const auto implicit = hyperlab::run_ensemble(config);
  const size_t bins = static_cast<size_t>(opt.n + 1) / 2;
  std::vector<int64_t> ha(bins, 0), hb(bins, 0);
  for (const int64_t l1 : explicit_l1) ha[static_cast<size_t>(l1 - 1) / 2]++;
  for (const auto& s : implicit) hb[static_cast<size_t>(s.L1() - 1) / 2]++;
  const auto chi2 = hyperlab::chi2_two_sample(ha, hb);
  const bool pass = chi2.p_value > opt.p_threshold;
  std::cout << "implicit vs explicit L1 histogram: chi2=" << chi2.statistic
            << " df=" << chi2.df << " p=" << chi2.p_value << '\n'
            << "verdict=" << (pass ? "pass" : "fail") << '\n';
  return pass ? 0 : 1;
}

int cmd_trace(const Options& opt) {
  const auto params = opt.alpha_set
                          ? hyperlab::ModelParams::from_alpha(opt.n, opt.k, opt.alpha)
                          : hyperlab::ModelParams::from_lambda(opt.n, opt.k, opt.lambda);
  const auto trace = hyperlab::explore_implicit(params, opt.seed);
  const auto decomp = hyperlab::decompose(trace, params);
  if (opt.out.empty()) {
    hyperlab::write_diagnostic_csv(trace, decomp, params, std::cout);
  } else {
    std::ostringstream os;
    hyperlab::write_diagnostic_csv(trace, decomp, params, os);
    write_text_file(opt.out, os.str());
    std::cout << "wrote " << opt.out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::string config_path;

  // Flags beat config values: load the config first, then parse the command
  // line over it.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  std::map<std::string, std::string> cfg;
  try {
    if (!config_path.empty()) cfg = parse_config_file(config_path);
    apply_config(cfg, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  static const std::vector<std::string> kCommands = {"theory", "run", "critical",
                                                     "oracle-check", "trace"};
  // A config file may name the experiment; an explicit subcommand wins.
  if ((args.empty() || args[0].rfind("-", 0) == 0) && cfg.count("experiment")) {
    const std::string& exp = cfg.at("experiment");
    if (std::find(kCommands.begin(), kCommands.end(), exp) == kCommands.end()) {
      std::cerr << "error: config: unknown experiment '" << exp << "'\n";
      return 2;
    }
    args.insert(args.begin(), exp);
  }

  CLI::App app{"Component-structure laboratory for random k-uniform hypergraphs"};
  app.require_subcommand(0, 1);
  app.set_help_all_flag("--help-all", "print help for all subcommands");

  auto add_common = [&](CLI::App* sub, bool wants_lambda) {
    sub->add_option("--n", opt.n, "number of vertices");
    sub->add_option("--k", opt.k, "edge arity (k >= 2)");
    if (wants_lambda) sub->add_option("--lambda", opt.lambda, "branching intensity");
    sub->add_option("--seed", opt.seed, "master seed");
    sub->add_option("--workers", opt.workers, "parallel workers");
    sub->add_option("--out", opt.out, "output path");
    sub->add_option("--config", config_path, "flat key=value config file")
        ->check(CLI::ExistingFile);
  };

  auto* theory = app.add_subcommand("theory", "evaluate the limit constants");
  theory->add_option("--lambda", opt.lambdas, "lambda grid (repeatable)");
  theory->add_option("--n", opt.n, "number of vertices");
  theory->add_option("--k", opt.k, "edge arity (k >= 2)");
  theory->add_option("--out", opt.out, "CSV output path");
  theory->add_option("--config", config_path, "flat key=value config file")
      ->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "supercritical ensemble + normality report");
  add_common(run, true);
  run->add_option("--runs", opt.runs, "number of independent runs");
  run->add_option("--p-threshold", opt.p_threshold, "acceptance p-value threshold");

  auto* critical = app.add_subcommand("critical",
                                      "critical-window ensemble vs excursion oracle");
  add_common(critical, false);
  critical->add_option("--alpha", opt.alpha, "window location parameter");
  critical->add_option("--runs", opt.runs, "number of independent runs");
  critical->add_option("--r", opt.top_r, "order statistics compared");
  critical->add_option("--grid-step", opt.grid_step, "Euler grid step");
  critical->add_option("--horizon", opt.horizon, "simulation horizon (0 = auto)");
  critical->add_flag("--vs-k2", opt.vs_k2, "also compare against a k=2 ensemble");
  critical->add_option("--oracle-runs", opt.oracle_runs,
                       "excursion samples (0 = same as runs)");
  critical->add_option("--p-threshold", opt.p_threshold, "acceptance p-value threshold");

  auto* oracle = app.add_subcommand("oracle-check",
                                    "exact explicit-mode cross-validation (n <= 200)");
  add_common(oracle, true);
  oracle->add_option("--runs", opt.runs, "number of sampled hypergraphs");
  oracle->add_option("--p-threshold", opt.p_threshold, "acceptance p-value threshold");

  auto* trace = app.add_subcommand("trace", "single-run trajectory dump");
  add_common(trace, true);
  trace->add_option("--alpha", opt.alpha, "critical-window location (overrides lambda)");

  std::vector<const char*> cargs;
  cargs.push_back(argv[0]);
  for (const auto& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (trace->parsed() && trace->count("--alpha") > 0) opt.alpha_set = true;
  if (critical->parsed() && critical->count("--alpha") > 0) opt.alpha_set = true;

  try {
    if (theory->parsed()) return cmd_theory(opt);
    if (run->parsed()) return cmd_run(opt);
    if (critical->parsed()) return cmd_critical(opt);
    if (oracle->parsed()) return cmd_oracle_check(opt);
    if (trace->parsed()) return cmd_trace(opt);
    std::cerr << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
