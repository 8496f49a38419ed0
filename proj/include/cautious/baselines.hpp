#pragma once

// Point-estimate baselines: LPM, which commits to one optimal vertex of
// P_theta, and a linear soft-margin classifier over concatenated indicator
// vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "cautious/core.hpp"
#include "cautious/lp_engine.hpp"

namespace cautious {

struct PointUtilityModel {
  SubsetFamily theta;
  UtilityMap utilities;
  bool consistent = true;    // every pair of R satisfied with margin rhs
  double slack_total = 0.0;  // sum of P1 violations over R under `utilities`
};

inline PointUtilityModel lpm_fit(const SubsetFamily& theta, const PreferenceSet& r, const EngineOptions& opts = {}) {
  auto fit = fit_representability(theta, r, opts);
  PointUtilityModel model{theta, std::move(fit.utilities), fit.representable, 0.0};
  for (const auto& p : r.pairs()) {
    const double gap = evaluate(theta, model.utilities, p.better) - evaluate(theta, model.utilities, p.worse);
    model.slack_total += std::max(0.0, opts.rhs - gap);
  }
  return model;
}

inline Verdict lpm_predict(const PointUtilityModel& model, const Alternative& a, const Alternative& b,
                           double tol = 1e-7) {
  const double diff = evaluate(model.theta, model.utilities, a) - evaluate(model.theta, model.utilities, b);
  if (diff > tol) return Verdict::PreferFirst;
  if (diff < -tol) return Verdict::PreferSecond;
  return Verdict::NoPrediction;
}

// (v_A, v_B): indicator vectors of A and B over theta, concatenated.
inline std::vector<double> svm_featurize(const SubsetFamily& theta, const Alternative& a, const Alternative& b) {
  std::vector<double> x;
  x.reserve(2 * theta.size());
  for (int v : indicator_vector(theta, a)) x.push_back(v);
  for (int v : indicator_vector(theta, b)) x.push_back(v);
  return x;
}

struct SvmRow {
  std::vector<double> features;
  int label = 0;  // 1 when the first alternative is preferred
};

// Two rows per pair of R: (v_A, v_B) -> 1 and (v_B, v_A) -> 0.
inline std::vector<SvmRow> svm_training_rows(const SubsetFamily& theta, const PreferenceSet& r) {
  std::vector<SvmRow> rows;
  rows.reserve(2 * r.size());
  for (const auto& p : r.pairs()) {
    rows.push_back({svm_featurize(theta, p.better, p.worse), 1});
    rows.push_back({svm_featurize(theta, p.worse, p.better), 0});
  }
  return rows;
}

struct SvmConfig {
  double c = 1.0;  // hinge-loss weight against 0.5 * |w|^2
  int epochs = 500;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;  // projected-gradient stopping gap
};

struct MarginClassifier {
  std::vector<double> weights;
  double bias = 0.0;
  SvmConfig config;
  bool constant = false;
  int constant_label = 0;
  int epochs_run = 0;

  double score(const std::vector<double>& x) const {
    double s = bias;
    for (std::size_t j = 0; j < x.size() && j < weights.size(); ++j) s += weights[j] * x[j];
    return s;
  }

  int label(const std::vector<double>& x) const {
    if (constant) return constant_label;
    return score(x) > 0.0 ? 1 : 0;
  }
};

// Linear L1-loss SVM trained by dual coordinate descent; the bias is handled
// as an extra constant feature. Deterministic for a given seed.
inline MarginClassifier svm_fit(const std::vector<SvmRow>& rows, const SvmConfig& config = {}) {
  MarginClassifier clf;
  clf.config = config;
  const bool has_pos = std::any_of(rows.begin(), rows.end(), [](const SvmRow& r) { return r.label == 1; });
  const bool has_neg = std::any_of(rows.begin(), rows.end(), [](const SvmRow& r) { return r.label == 0; });
  if (!has_pos || !has_neg) {
    clf.constant = true;
    clf.constant_label = has_pos ? 1 : 0;
    if (!rows.empty()) clf.weights.assign(rows.front().features.size(), 0.0);
    return clf;
  }
  const std::size_t dim = rows.front().features.size();
  const std::size_t count = rows.size();
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<double> alpha(count, 0.0);
  std::vector<double> qdiag(count);
  for (std::size_t i = 0; i < count; ++i) {
    qdiag[i] = 1.0 + std::inner_product(rows[i].features.begin(), rows[i].features.end(),
                                        rows[i].features.begin(), 0.0);
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);

  int epoch = 0;
  for (; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double pg_max = -INFINITY, pg_min = INFINITY;
    for (std::size_t i : order) {
      const auto& x = rows[i].features;
      const double y = rows[i].label == 1 ? 1.0 : -1.0;
      double s = b;
      for (std::size_t j = 0; j < dim; ++j) s += w[j] * x[j];
      const double g = y * s - 1.0;
      double pg = g;
      if (alpha[i] <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] >= config.c) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::fabs(pg) <= 1e-14) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qdiag[i], 0.0, config.c);
      const double step = (alpha[i] - old) * y;
      for (std::size_t j = 0; j < dim; ++j) w[j] += step * x[j];
      b += step;
    }
    if (pg_max - pg_min <= config.tolerance) {
      ++epoch;
      break;
    }
  }
  clf.weights = std::move(w);
  clf.bias = b;
  clf.epochs_run = epoch;
  return clf;
}

inline double svm_hinge_loss(const MarginClassifier& clf, const std::vector<SvmRow>& rows) {
  double loss = 0.0;
  for (const auto& r : rows) {
    const double y = r.label == 1 ? 1.0 : -1.0;
    const double s = clf.constant ? (clf.constant_label == 1 ? 1.0 : -1.0) : clf.score(r.features);
    loss += std::max(0.0, 1.0 - y * s);
  }
  return loss;
}

inline Verdict svm_predict(const MarginClassifier& clf, const SubsetFamily& theta, const Alternative& a,
                           const Alternative& b) {
  const int ab = clf.label(svm_featurize(theta, a, b));
  const int ba = clf.label(svm_featurize(theta, b, a));
  if (ab == 1 && ba == 0) return Verdict::PreferFirst;
  if (ab == 0 && ba == 1) return Verdict::PreferSecond;
  return Verdict::NoPrediction;
}

}  // namespace cautious
