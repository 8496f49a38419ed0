#pragma once

// Learning-curve experiments on synthetic tier lists: ORD (ordinal dominance)
// against the LPM and SVM baselines, with theta either known or learned as
// the unifying model of the simplest compatible families.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "cautious/baselines.hpp"
#include "cautious/core.hpp"
#include "cautious/lp_engine.hpp"
#include "cautious/synth.hpp"
#include "cautious/theta_search.hpp"

namespace cautious {

enum class ThetaMode { Known, Learned };
enum class ModelKind { ORD, LPM, SVM };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::ORD: return "ORD";
    case ModelKind::LPM: return "LPM";
    case ModelKind::SVM: return "SVM";
  }
  return "?";
}

inline const char* to_string(ThetaMode m) { return m == ThetaMode::Known ? "known" : "learned"; }

struct TrialConfig {
  GeneratorConfig generator;
  int budget = 25;
  int sample_size = 10;
  int tier_functions = 10;
  int test_resamples = 5;
  ThetaMode mode = ThetaMode::Known;
  std::vector<ModelKind> models{ModelKind::ORD, ModelKind::LPM, ModelKind::SVM};
  SvmConfig svm;
  SearchOptions search;
  EngineOptions engine;
  unsigned threads = 1;

  void validate() const {
    generator.validate();
    if (budget < 1) throw ValidationError("budget must be at least 1");
    if (sample_size < 2) throw ValidationError("test sample size must be at least 2");
    if (tier_functions < 1 || test_resamples < 1) throw ValidationError("repetition counts must be positive");
    const auto universe = std::size_t{1} << generator.n;
    if (static_cast<std::size_t>(budget) > universe || static_cast<std::size_t>(sample_size) > universe) {
      throw ValidationError("budget and sample size cannot exceed the number of alternatives");
    }
    if (models.empty()) throw ValidationError("no model selected");
  }
};

struct StepCounts {
  int inferred = 0;  // T
  int correct = 0;   // C
  int wrong = 0;     // W
};

// One tier function crossed with one test sample.
struct RepetitionRecord {
  int tier_function = 0;
  int resample = 0;
  std::vector<std::vector<StepCounts>> counts;  // [model][step - 1]
};

struct CurvePoint {
  int step = 0;
  std::string model;
  double inferred = 0.0;
  double correct = 0.0;
  double wrong = 0.0;
  std::optional<double> acr;  // mean C/T over repetitions with T > 0
  double acr_ci = 0.0;        // 95% half-width of the ACR mean
  double inferred_ci = 0.0;   // 95% half-width of the T mean
  std::size_t samples = 0;    // repetitions aggregated
  std::size_t acr_samples = 0;
};

struct TrialResult {
  std::vector<CurvePoint> points;
  std::vector<RepetitionRecord> repetitions;
  std::vector<std::string> models;
  std::size_t excluded = 0;  // tier functions dropped for search-budget exhaustion
};

namespace detail {

inline Rng stream_for(std::uint64_t root, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedU};
  return Rng(seq);
}

inline double half_width_95(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (xs.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

inline std::uint64_t pair_key(const Alternative& a, const Alternative& b) {
  return (std::uint64_t(a.bits()) << 32) | b.bits();
}

}  // namespace detail

// The generating tier function of repetition `index`.
inline TierFunction trial_ground_truth(const TrialConfig& cfg, int index) {
  Rng rng = detail::stream_for(cfg.generator.seed, static_cast<std::uint64_t>(index));
  return sample_tier_function(cfg.generator, rng);
}

namespace detail {

// Runs one tier function: returns one record per test resample, or nothing
// when the theta search ran out of budget.
inline std::optional<std::vector<RepetitionRecord>> run_tier_function(const TrialConfig& cfg, int index) {
  const int n = cfg.generator.n;
  Rng rng = stream_for(cfg.generator.seed, static_cast<std::uint64_t>(index));
  const TierFunction truth = sample_tier_function(cfg.generator, rng);

  auto universe = all_alternatives(n);
  auto reveal = universe;
  std::shuffle(reveal.begin(), reveal.end(), rng);
  reveal.resize(static_cast<std::size_t>(cfg.budget));

  std::vector<std::vector<Alternative>> samples;
  for (int s = 0; s < cfg.test_resamples; ++s) {
    auto pool = universe;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(cfg.sample_size));
    samples.push_back(std::move(pool));
  }

  const std::size_t models = cfg.models.size();
  std::vector<RepetitionRecord> records(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    records[s].tier_function = index;
    records[s].resample = static_cast<int>(s);
    records[s].counts.assign(models, std::vector<StepCounts>(static_cast<std::size_t>(cfg.budget)));
  }

  std::vector<TierAssignment> assigned;
  for (int step = 1; step <= cfg.budget; ++step) {
    const Alternative& next = reveal[static_cast<std::size_t>(step - 1)];
    assigned.push_back({next, truth.assign(next)});
    const PreferenceSet r = preferences_from_tiers(n, assigned);

    SubsetFamily theta = truth.theta();
    if (cfg.mode == ThetaMode::Learned) {
      try {
        theta = build_theta_min(r, cfg.search).unifying;
      } catch (const SearchBudgetExceeded&) {
        return std::nullopt;
      }
    }

    std::optional<std::vector<std::vector<int>>> rows;
    std::unordered_map<std::uint64_t, Verdict> ord_cache;
    std::optional<PointUtilityModel> lpm;
    std::optional<MarginClassifier> svm;
    for (auto m : cfg.models) {
      if (m == ModelKind::ORD) rows = compact_rows(theta, r);
      if (m == ModelKind::LPM) lpm = lpm_fit(theta, r, cfg.engine);
      if (m == ModelKind::SVM) {
        SvmConfig sc = cfg.svm;
        sc.seed = cfg.svm.seed ^ (static_cast<std::uint64_t>(index) << 20) ^ static_cast<std::uint64_t>(step);
        svm = svm_fit(svm_training_rows(theta, r), sc);
      }
    }

    auto verdict_for = [&](ModelKind m, const Alternative& a, const Alternative& b) {
      switch (m) {
        case ModelKind::ORD: {
          const auto key = pair_key(a, b);
          if (auto it = ord_cache.find(key); it != ord_cache.end()) return it->second;
          const Verdict v = dominance_on_rows(theta, *rows, a, b, cfg.engine).verdict;
          ord_cache.emplace(key, v);
          ord_cache.emplace(pair_key(b, a), v == Verdict::PreferFirst    ? Verdict::PreferSecond
                                            : v == Verdict::PreferSecond ? Verdict::PreferFirst
                                                                         : Verdict::NoPrediction);
          return v;
        }
        case ModelKind::LPM: return lpm_predict(*lpm, a, b, cfg.engine.dominance_tol);
        case ModelKind::SVM: return svm_predict(*svm, theta, a, b);
      }
      return Verdict::NoPrediction;
    };

    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto& alts = samples[s];
      for (std::size_t i = 0; i < alts.size(); ++i) {
        for (std::size_t j = i + 1; j < alts.size(); ++j) {
          const auto& a = alts[i];
          const auto& b = alts[j];
          if (r.relates(a, b)) continue;
          for (std::size_t mi = 0; mi < models; ++mi) {
            const Verdict v = verdict_for(cfg.models[mi], a, b);
            if (v == Verdict::NoPrediction) continue;
            auto& c = records[s].counts[mi][static_cast<std::size_t>(step - 1)];
            ++c.inferred;
            const int g_win = truth.assign(v == Verdict::PreferFirst ? a : b);
            const int g_lose = truth.assign(v == Verdict::PreferFirst ? b : a);
            if (g_win > g_lose) ++c.correct;
            if (g_win < g_lose) ++c.wrong;
          }
        }
      }
    }
  }
  return records;
}

}  // namespace detail

inline std::vector<CurvePoint> aggregate_curves(const std::vector<RepetitionRecord>& reps,
                                                const std::vector<std::string>& models, int budget) {
  std::vector<CurvePoint> points;
  for (int step = 1; step <= budget; ++step) {
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      CurvePoint p;
      p.step = step;
      p.model = models[mi];
      std::vector<double> ts, acrs;
      for (const auto& rep : reps) {
        const auto& c = rep.counts[mi][static_cast<std::size_t>(step - 1)];
        ts.push_back(c.inferred);
        p.inferred += c.inferred;
        p.correct += c.correct;
        p.wrong += c.wrong;
        if (c.inferred > 0) acrs.push_back(static_cast<double>(c.correct) / c.inferred);
      }
      p.samples = reps.size();
      if (!reps.empty()) {
        p.inferred /= reps.size();
        p.correct /= reps.size();
        p.wrong /= reps.size();
      }
      p.inferred_ci = detail::half_width_95(ts);
      p.acr_samples = acrs.size();
      if (!acrs.empty()) {
        p.acr = std::accumulate(acrs.begin(), acrs.end(), 0.0) / acrs.size();
        p.acr_ci = detail::half_width_95(acrs);
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

inline TrialResult run_trial(const TrialConfig& cfg) {
  cfg.validate();
  std::vector<std::optional<std::vector<RepetitionRecord>>> per_tf(static_cast<std::size_t>(cfg.tier_functions));
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.tier_functions)));
  if (workers == 1) {
    for (int i = 0; i < cfg.tier_functions; ++i) per_tf[static_cast<std::size_t>(i)] = detail::run_tier_function(cfg, i);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = static_cast<int>(w); i < cfg.tier_functions; i += static_cast<int>(workers)) {
          try {
            per_tf[static_cast<std::size_t>(i)] = detail::run_tier_function(cfg, i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  TrialResult result;
  for (auto m : cfg.models) result.models.emplace_back(to_string(m));
  for (auto& records : per_tf) {
    if (!records) {
      ++result.excluded;
      continue;
    }
    for (auto& rec : *records) result.repetitions.push_back(std::move(rec));
  }
  result.points = aggregate_curves(result.repetitions, result.models, cfg.budget);
  return result;
}

struct ThetaComparison {
  TrialResult true_theta;
  TrialResult learned_theta;
  std::vector<CurvePoint> points;  // both ORD curves, labelled ORD-true / ORD-learned
};

namespace detail {

inline TrialResult ord_only(const TrialResult& r, const std::set<int>& keep, int budget) {
  auto it = std::find(r.models.begin(), r.models.end(), "ORD");
  if (it == r.models.end()) throw PreconditionError("trial result has no ORD curve");
  const auto mi = static_cast<std::size_t>(it - r.models.begin());
  TrialResult out;
  out.models = {"ORD"};
  out.excluded = r.excluded;
  for (const auto& rep : r.repetitions) {
    if (!keep.contains(rep.tier_function)) continue;
    RepetitionRecord copy{rep.tier_function, rep.resample, {rep.counts[mi]}};
    out.repetitions.push_back(std::move(copy));
  }
  out.points = aggregate_curves(out.repetitions, out.models, budget);
  return out;
}

}  // namespace detail

// Pairs the ORD curves of a known-theta and a learned-theta run of the same
// configuration, restricted to tier functions present in both.
inline ThetaComparison pair_theta_curves(const TrialResult& known, const TrialResult& learned, int budget) {
  std::set<int> in_known, shared;
  for (const auto& rep : known.repetitions) in_known.insert(rep.tier_function);
  for (const auto& rep : learned.repetitions) {
    if (in_known.contains(rep.tier_function)) shared.insert(rep.tier_function);
  }
  ThetaComparison out;
  out.true_theta = detail::ord_only(known, shared, budget);
  out.learned_theta = detail::ord_only(learned, shared, budget);
  for (std::size_t i = 0; i < out.true_theta.points.size(); ++i) {
    auto t = out.true_theta.points[i];
    auto l = out.learned_theta.points[i];
    t.model = "ORD-true";
    l.model = "ORD-learned";
    out.points.push_back(std::move(t));
    out.points.push_back(std::move(l));
  }
  return out;
}

// ORD trained twice on identical data: once with the generating theta, once
// with the unifying model learned from R.
inline ThetaComparison compare_theta_sources(TrialConfig cfg) {
  cfg.models = {ModelKind::ORD};
  cfg.mode = ThetaMode::Known;
  const auto known = run_trial(cfg);
  cfg.mode = ThetaMode::Learned;
  const auto learned = run_trial(cfg);
  return pair_theta_curves(known, learned, cfg.budget);
}

// Pooled 95% half-width for the difference of two final-step ACR means:
// 1.96 * s_p / sqrt(mean sample count), s_p the pooled standard deviation.
inline double pooled_half_width(const CurvePoint& a, const CurvePoint& b) {
  const double na = static_cast<double>(a.acr_samples), nb = static_cast<double>(b.acr_samples);
  if (na < 2 || nb < 2) return 0.0;
  const double sa = a.acr_ci * std::sqrt(na) / 1.96;
  const double sb = b.acr_ci * std::sqrt(nb) / 1.96;
  const double sp = std::sqrt(((na - 1) * sa * sa + (nb - 1) * sb * sb) / (na + nb - 2));
  return 1.96 * sp / std::sqrt((na + nb) / 2.0);
}

inline void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "step,model,T,C,W,ACR,ci\n";
  out << std::setprecision(10);
  for (const auto& p : points) {
    out << p.step << ',' << p.model << ',' << p.inferred << ',' << p.correct << ',' << p.wrong << ',';
    if (p.acr) out << *p.acr;
    out << ',' << p.acr_ci << '\n';
  }
}

inline std::vector<CurvePoint> read_curves_csv(std::istream& in) {
  std::vector<CurvePoint> points;
  std::string line;
  if (!std::getline(in, line) || line != "step,model,T,C,W,ACR,ci") {
    throw IngestionError("unexpected curve CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() == 6) cells.emplace_back();
    if (cells.size() != 7) throw IngestionError("malformed curve CSV row: " + line);
    CurvePoint p;
    p.step = std::stoi(cells[0]);
    p.model = cells[1];
    p.inferred = std::stod(cells[2]);
    p.correct = std::stod(cells[3]);
    p.wrong = std::stod(cells[4]);
    if (!cells[5].empty()) p.acr = std::stod(cells[5]);
    p.acr_ci = std::stod(cells[6]);
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace cautious
