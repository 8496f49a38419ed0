// Command-line front end: learning-curve experiments, minimal-family search
// on a preference file, single dominance queries, model fitting and the
// HTTP session service.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cautious/baselines.hpp"
#include "cautious/core.hpp"
#include "cautious/experiments.hpp"
#include "cautious/http_server.hpp"
#include "cautious/json_io.hpp"
#include "cautious/lp/problem.hpp"
#include "cautious/lp_engine.hpp"
#include "cautious/theta_search.hpp"

namespace {

using namespace cautious;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

struct TrialFlags {
  int n = 5;
  double alpha = 0.1;
  double p = 0.9;
  double sigma = 100.0;
  int tiers = 12;
  int budget = 25;
  std::string mode = "known";
  int reps = 10;
  int resamples = 5;
  int sample_size = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t max_nodes = 100000;
  std::string out;
  std::string truth;
};

void add_trial_flags(CLI::App* cmd, TrialFlags& f, bool with_mode) {
  cmd->add_option("--n", f.n, "number of attributes")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "interaction density")->capture_default_str();
  cmd->add_option("--p", f.p, "stop probability of subset growth")->capture_default_str();
  cmd->add_option("--sigma", f.sigma, "utility standard deviation")->capture_default_str();
  cmd->add_option("--tiers", f.tiers, "number of tiers")->capture_default_str();
  cmd->add_option("--budget", f.budget, "assignments per repetition")->capture_default_str();
  if (with_mode) {
    cmd->add_option("--mode", f.mode, "theta source")->check(CLI::IsMember({"known", "learned"}))->capture_default_str();
  }
  cmd->add_option("--reps", f.reps, "tier functions")->capture_default_str();
  cmd->add_option("--resamples", f.resamples, "test samples per tier function")->capture_default_str();
  cmd->add_option("--sample-size", f.sample_size, "alternatives per test sample")->capture_default_str();
  cmd->add_option("--seed", f.seed, "root seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads")->capture_default_str();
  cmd->add_option("--max-nodes", f.max_nodes, "theta search node budget")->capture_default_str();
  cmd->add_option("--out", f.out, "output prefix; writes <prefix>.csv and <prefix>.json");
  cmd->add_option("--truth", f.truth, "write the generating tier functions as JSON");
}

TrialConfig trial_config(const TrialFlags& f) {
  TrialConfig c;
  c.generator = {f.n, f.alpha, f.p, f.sigma, f.tiers, f.seed};
  c.budget = f.budget;
  c.sample_size = f.sample_size;
  c.tier_functions = f.reps;
  c.test_resamples = f.resamples;
  c.mode = f.mode == "learned" ? ThetaMode::Learned : ThetaMode::Known;
  c.threads = f.threads;
  c.search.limits.max_nodes = f.max_nodes;
  c.validate();
  return c;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

void write_truth(const TrialConfig& cfg, const std::string& path) {
  Json all = Json::array();
  for (int i = 0; i < cfg.tier_functions; ++i) {
    Json j = ground_truth_json(trial_ground_truth(cfg, i));
    j["index"] = i;
    all.push_back(std::move(j));
  }
  open_out(path) << Json{{"generator", generator_json(cfg.generator)}, {"tier_functions", all}}.dump(2) << '\n';
}

void emit_curves(const std::vector<CurvePoint>& points, const Json& doc, const std::string& prefix) {
  if (prefix.empty()) {
    write_curves_csv(std::cout, points);
    return;
  }
  auto csv = open_out(prefix + ".csv");
  write_curves_csv(csv, points);
  open_out(prefix + ".json") << doc.dump(2) << '\n';
}

int cmd_run(const TrialFlags& f) {
  const auto cfg = trial_config(f);
  if (!f.truth.empty()) write_truth(cfg, f.truth);
  const auto result = run_trial(cfg);
  emit_curves(result.points, trial_json(cfg, result), f.out);
  if (result.excluded > 0) {
    std::cerr << result.excluded << " tier function(s) excluded: theta search budget exhausted\n";
  }
  return kExitOk;
}

int cmd_compare(const TrialFlags& f) {
  const auto cfg = trial_config(f);
  if (!f.truth.empty()) write_truth(cfg, f.truth);
  const auto cmp = compare_theta_sources(cfg);
  Json doc;
  doc["generator"] = generator_json(cfg.generator);
  doc["excluded"] = cmp.learned_theta.excluded;
  Json pts = Json::array();
  for (const auto& p : cmp.points) pts.push_back(curve_point_json(p));
  doc["points"] = std::move(pts);
  const auto& t = cmp.true_theta.points.back();
  const auto& l = cmp.learned_theta.points.back();
  if (t.acr && l.acr) {
    doc["final_acr_difference"] = std::fabs(*t.acr - *l.acr);
    doc["pooled_half_width"] = pooled_half_width(t, l);
  }
  emit_curves(cmp.points, doc, f.out);
  return kExitOk;
}

PreferenceSet load_preferences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  return read_preferences(in);
}

void print_theta_min(const ThetaMinResult& r, bool json) {
  if (json) {
    std::cout << theta_min_json(r).dump(2) << '\n';
    return;
  }
  std::cout << "minimal families (" << r.families.size() << (r.complete ? "" : ", partial") << "):\n";
  for (const auto& f : r.families) std::cout << "  " << f.to_string() << '\n';
  std::cout << "unifying model: " << r.unifying.to_string() << '\n';
  std::cout << "nodes: " << r.stats.nodes << ", LP solves: " << r.stats.lp_solves << '\n';
}

struct SearchFlags {
  std::size_t max_nodes = 100000;
  std::string policy = "subsets";
};

SearchOptions search_options(const SearchFlags& f) {
  SearchOptions o;
  o.limits.max_nodes = f.max_nodes;
  o.policy = f.policy == "differences" ? CandidatePolicy::DifferenceSets : CandidatePolicy::SubsetsOfImplicated;
  return o;
}

int cmd_theta_min(const std::string& prefs, const SearchFlags& sf, bool json) {
  const auto r = load_preferences(prefs);
  try {
    print_theta_min(build_theta_min(r, search_options(sf)), json);
  } catch (const SearchBudgetExceeded& e) {
    std::cerr << e.what() << '\n';
    print_theta_min(e.partial(), json);
    return kExitBudget;
  }
  return kExitOk;
}

// The family given on the command line, or the unifying model of R.
SubsetFamily resolve_theta(const PreferenceSet& r, const std::string& theta, const SearchFlags& sf) {
  if (!theta.empty()) return SubsetFamily::parse(r.width(), theta);
  return build_theta_min(r, search_options(sf)).unifying;
}

int cmd_dominate(const std::string& prefs, const std::string& theta_text, const std::string& a_text,
                 const std::string& b_text, const std::string& lp_out, const SearchFlags& sf, bool json) {
  const auto r = load_preferences(prefs);
  const auto a = Alternative::parse(a_text);
  const auto b = Alternative::parse(b_text);
  const auto theta = resolve_theta(r, theta_text, sf);
  if (!lp_out.empty()) {
    auto out = open_out(lp_out);
    lp::write_cplex_lp(out, build_dominance_lp(theta, r, a, b));
  }
  std::string verdict;
  std::optional<DominanceVerdict> detail;
  if (r.contains(a, b) || r.contains(b, a)) {
    verdict = r.contains(a, b) ? "observed: A > B" : "observed: B > A";
  } else {
    detail = dominance(theta, r, a, b);
    verdict = to_string(detail->verdict);
  }
  if (json) {
    Json out;
    out["theta"] = family_json(theta);
    out["a"] = a.to_string();
    out["b"] = b.to_string();
    out["verdict"] = verdict;
    if (detail) {
      out["max_f_b_minus_f_a"] = detail->forward ? Json(*detail->forward) : Json(nullptr);
      out["max_f_a_minus_f_b"] = detail->backward ? Json(*detail->backward) : Json(nullptr);
    }
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "theta: " << theta.to_string() << '\n' << verdict << '\n';
  }
  return kExitOk;
}

int cmd_fit(const std::string& prefs, const std::string& theta_text, const std::string& model, const SearchFlags& sf,
            std::uint64_t seed) {
  const auto r = load_preferences(prefs);
  const auto theta = resolve_theta(r, theta_text, sf);
  if (model == "lpm") {
    std::cout << lpm_json(lpm_fit(theta, r)).dump(2) << '\n';
  } else {
    SvmConfig sc;
    sc.seed = seed;
    std::cout << svm_json(svm_fit(svm_training_rows(theta, r), sc), theta).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_serve(const std::string& host, int port, std::size_t max_nodes) {
  service::SessionOptions opts;
  opts.search.limits.max_nodes = max_nodes;
  service::HttpService svc(opts);
  std::cerr << "listening on " << host << ':' << port << '\n';
  if (!svc.listen(host, port)) throw ValidationError("cannot listen on " + host + ":" + std::to_string(port));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cautious ordinal preference inference with theta-additive utilities"};
  app.require_subcommand(1);

  TrialFlags run_flags;
  auto* run = app.add_subcommand("run", "learning curves for ORD, LPM and SVM");
  add_trial_flags(run, run_flags, true);

  TrialFlags cmp_flags;
  cmp_flags.tiers = 9;
  auto* cmp = app.add_subcommand("compare-theta", "ORD curves with the true and the learned theta");
  add_trial_flags(cmp, cmp_flags, false);

  SearchFlags search_flags;
  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--max-nodes", search_flags.max_nodes, "search node budget")->capture_default_str();
    cmd->add_option("--policy", search_flags.policy, "certificate candidates")
        ->check(CLI::IsMember({"subsets", "differences"}))
        ->capture_default_str();
  };

  std::string prefs, theta, a, b, lp_out, model = "lpm";
  bool json = false;
  std::uint64_t seed = 0;

  auto* tmin = app.add_subcommand("theta-min", "minimal families and unifying model of a preference file");
  tmin->add_option("prefs", prefs, "preference file, one A>B per line")->required();
  tmin->add_flag("--json", json, "JSON output");
  add_search(tmin);

  auto* dom = app.add_subcommand("dominate", "cautious verdict for one pair");
  dom->add_option("--prefs", prefs, "preference file")->required();
  dom->add_option("--theta", theta, "family such as \"1,2,3+4\"; defaults to the unifying model");
  dom->add_option("--a", a, "first alternative")->required();
  dom->add_option("--b", b, "second alternative")->required();
  dom->add_option("--lp-out", lp_out, "write the forward dominance LP in CPLEX LP format");
  dom->add_flag("--json", json, "JSON output");
  add_search(dom);

  auto* fit = app.add_subcommand("fit", "fit a point-estimate baseline and print it as JSON");
  fit->add_option("--prefs", prefs, "preference file")->required();
  fit->add_option("--theta", theta, "family; defaults to the unifying model");
  fit->add_option("--model", model, "baseline")->check(CLI::IsMember({"lpm", "svm"}))->capture_default_str();
  fit->add_option("--seed", seed, "SVM shuffle seed")->capture_default_str();
  add_search(fit);

  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t serve_nodes = 100000;
  auto* serve = app.add_subcommand("serve", "HTTP session service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--max-nodes", serve_nodes, "search node budget per assignment")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*cmp) return cmd_compare(cmp_flags);
    if (*tmin) return cmd_theta_min(prefs, search_flags, json);
    if (*dom) return cmd_dominate(prefs, theta, a, b, lp_out, search_flags, json);
    if (*fit) return cmd_fit(prefs, theta, model, search_flags, seed);
    if (*serve) return cmd_serve(host, port, serve_nodes);
  } catch (const SearchBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const EngineError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
