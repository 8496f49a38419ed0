#pragma once

// JSON documents for families, search results, fitted models, generated
// ground truth and learning curves. Keys keep insertion order so that equal
// inputs always serialize to identical bytes.

#include <string>
#include <vector>

#include "json.hpp"

#include "cautious/baselines.hpp"
#include "cautious/core.hpp"
#include "cautious/experiments.hpp"
#include "cautious/synth.hpp"
#include "cautious/theta_search.hpp"

namespace cautious {

using Json = nlohmann::ordered_json;

inline Json family_json(const SubsetFamily& theta) {
  Json out = Json::array();
  for (const auto& e : theta.encodings()) out.push_back(e);
  return out;
}

inline SubsetFamily family_from_json(int n, const Json& j) {
  if (!j.is_array()) throw IngestionError("a family must be a JSON array of subset encodings");
  std::vector<AttributeSubset> members;
  for (const auto& e : j) {
    if (!e.is_string()) throw IngestionError("subset encodings must be strings");
    members.push_back(AttributeSubset::parse(n, e.get<std::string>()));
  }
  return {n, std::move(members)};
}

inline Json utilities_json(const UtilityMap& u) {
  Json out = Json::object();
  for (const auto& [s, v] : u.entries()) out[s.to_string()] = v;
  return out;
}

inline Json theta_min_json(const ThetaMinResult& r) {
  Json fams = Json::array();
  for (const auto& f : r.families) fams.push_back(family_json(f));
  Json out;
  out["families"] = std::move(fams);
  out["representative"] = r.representative ? family_json(*r.representative) : Json(nullptr);
  out["unifying"] = family_json(r.unifying);
  out["stats"] = {{"nodes", r.stats.nodes}, {"lp_solves", r.stats.lp_solves}};
  out["complete"] = r.complete;
  return out;
}

inline Json lpm_json(const PointUtilityModel& m) {
  Json out;
  out["kind"] = "LPM";
  out["theta"] = family_json(m.theta);
  out["utilities"] = utilities_json(m.utilities);
  out["consistent"] = m.consistent;
  out["slack_total"] = m.slack_total;
  return out;
}

inline Json svm_json(const MarginClassifier& clf, const SubsetFamily& theta) {
  Json out;
  out["kind"] = "SVM";
  out["theta"] = family_json(theta);
  out["weights"] = clf.weights;
  out["bias"] = clf.bias;
  out["constant"] = clf.constant;
  if (clf.constant) out["constant_label"] = clf.constant_label;
  out["c"] = clf.config.c;
  out["epochs_run"] = clf.epochs_run;
  return out;
}

inline Json generator_json(const GeneratorConfig& g) {
  return {{"n", g.n}, {"alpha", g.alpha}, {"p", g.p}, {"sigma", g.sigma}, {"tiers", g.tiers}, {"seed", g.seed}};
}

inline Json ground_truth_json(const TierFunction& tf) {
  Json out;
  out["theta"] = family_json(tf.theta());
  out["utilities"] = utilities_json(tf.utilities());
  out["tiers"] = tf.tiers();
  out["f_min"] = tf.f_min();
  out["f_max"] = tf.f_max();
  out["thresholds"] = tf.thresholds();
  return out;
}

inline Json curve_point_json(const CurvePoint& p) {
  Json out;
  out["step"] = p.step;
  out["model"] = p.model;
  out["T"] = p.inferred;
  out["C"] = p.correct;
  out["W"] = p.wrong;
  out["ACR"] = p.acr ? Json(*p.acr) : Json(nullptr);
  out["ci"] = p.acr_ci;
  out["T_ci"] = p.inferred_ci;
  out["samples"] = p.samples;
  out["acr_samples"] = p.acr_samples;
  return out;
}

inline Json trial_json(const TrialConfig& cfg, const TrialResult& r) {
  Json out;
  out["generator"] = generator_json(cfg.generator);
  out["mode"] = to_string(cfg.mode);
  out["budget"] = cfg.budget;
  out["sample_size"] = cfg.sample_size;
  out["tier_functions"] = cfg.tier_functions;
  out["test_resamples"] = cfg.test_resamples;
  out["models"] = r.models;
  out["excluded"] = r.excluded;
  Json pts = Json::array();
  for (const auto& p : r.points) pts.push_back(curve_point_json(p));
  out["points"] = std::move(pts);
  return out;
}

}  // namespace cautious
