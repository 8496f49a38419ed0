#pragma once

// Linear programs over the compatibility polyhedron of a theta-additive model:
//
//   P1    : sum_S (I_A(S) - I_B(S)) u_S >= rhs   for every (A,B) in R, u free
//   P_theta: min sum e_AB  s.t. P1 rows relaxed by e_AB >= 0
//   D_theta: max sum l_AB  s.t. sum_AB (I_A(S) - I_B(S)) l_AB = 0 for S in theta,
//            0 <= l_AB <= 1
//
// Solves of P_theta and of the dominance LP run on a compacted row set: rows
// implied by transitivity (A>B, B>C make A>C redundant since gaps add up) and
// duplicate difference vectors are dropped. This leaves the polyhedron
// unchanged. build_p1 itself stays literal, one row per pair.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cautious/core.hpp"
#include "cautious/lp/solver.hpp"

namespace cautious {

struct EngineOptions {
  double feasibility_tol = 1e-7;  // "optimal value is 0" for P_theta / D_theta
  double dominance_tol = 1e-7;    // "strictly negative" for the dominance LP
  double rhs = 1.0;               // right-hand side of the P1 rows
  lp::Backend backend = lp::Backend::Floating;
};

inline std::vector<int> difference_row(const SubsetFamily& theta, const Alternative& a, const Alternative& b) {
  std::vector<int> row;
  row.reserve(theta.size());
  for (const auto& s : theta.members()) row.push_back(indicator(a, s) - indicator(b, s));
  return row;
}

inline std::vector<int> indicator_vector(const SubsetFamily& theta, const Alternative& a) {
  std::vector<int> v;
  v.reserve(theta.size());
  for (const auto& s : theta.members()) v.push_back(indicator(a, s));
  return v;
}

namespace detail {

inline std::string var_name(const AttributeSubset& s) {
  std::string out = "u";
  for (int i = 0; i < s.width(); ++i) {
    if (s.has(i)) out += "_" + std::to_string(i + 1);
  }
  return out;
}

inline void check_widths(const SubsetFamily& theta, const PreferenceSet& r) {
  if (theta.width() != r.width()) {
    throw DimensionError("family width " + std::to_string(theta.width()) + " != preference width " +
                         std::to_string(r.width()));
  }
}

// Pairs of R that are not implied by a two-step chain of remaining pairs.
// Removal is sequential, so each dropped row is implied by rows still
// present at the time it is dropped; by induction the final set implies all.
inline std::vector<Preference> transitive_core(const PreferenceSet& r) {
  std::unordered_map<Alternative, std::unordered_set<Alternative>> succ;
  for (const auto& p : r.pairs()) succ[p.better].insert(p.worse);
  std::vector<Preference> kept;
  for (const auto& p : r.pairs()) {
    bool implied = false;
    for (const auto& mid : succ[p.better]) {
      if (mid == p.worse) continue;
      auto it = succ.find(mid);
      if (it != succ.end() && it->second.contains(p.worse)) {
        implied = true;
        break;
      }
    }
    if (implied) {
      succ[p.better].erase(p.worse);
    } else {
      kept.push_back(p);
    }
  }
  return kept;
}

inline PreferenceSet transitive_reduction(const PreferenceSet& r) {
  PreferenceSet out(r.width());
  for (const auto& p : transitive_core(r)) out.add(p.better, p.worse);
  return out;
}

inline std::vector<std::vector<int>> compact_rows(const SubsetFamily& theta, const PreferenceSet& r) {
  std::vector<std::vector<int>> rows;
  std::set<std::vector<int>> seen;
  for (const auto& p : transitive_core(r)) {
    auto row = difference_row(theta, p.better, p.worse);
    if (seen.insert(row).second) rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<lp::Term> row_terms(const std::vector<int>& row) {
  std::vector<lp::Term> terms;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] != 0) terms.push_back({j, static_cast<double>(row[j])});
  }
  return terms;
}

inline void add_utility_variables(lp::Problem& p, const SubsetFamily& theta) {
  for (const auto& s : theta.members()) p.add_free_variable(var_name(s));
}

inline lp::Problem p1_from_rows(const SubsetFamily& theta, const std::vector<std::vector<int>>& rows, double rhs) {
  lp::Problem p;
  add_utility_variables(p, theta);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    p.add_constraint("pref" + std::to_string(k), row_terms(rows[k]), lp::Relation::GreaterEqual, rhs);
  }
  return p;
}

inline lp::Problem p_theta_from_rows(const SubsetFamily& theta, const std::vector<std::vector<int>>& rows,
                                     double rhs) {
  lp::Problem p;
  add_utility_variables(p, theta);
  std::vector<lp::Term> objective;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto e = p.add_variable("e" + std::to_string(k), 0.0, lp::kInfinity);
    auto terms = row_terms(rows[k]);
    terms.push_back({e, 1.0});
    p.add_constraint("pref" + std::to_string(k), std::move(terms), lp::Relation::GreaterEqual, rhs);
    objective.push_back({e, 1.0});
  }
  p.set_objective(lp::Sense::Minimize, std::move(objective));
  return p;
}

}  // namespace detail

// The compatibility polyhedron P1, one row per pair of R.
inline lp::Problem build_p1(const SubsetFamily& theta, const PreferenceSet& r, double rhs = 1.0) {
  detail::check_widths(theta, r);
  std::vector<std::vector<int>> rows;
  for (const auto& p : r.pairs()) rows.push_back(difference_row(theta, p.better, p.worse));
  return detail::p1_from_rows(theta, rows, rhs);
}

// P1 with objective max f(B) - f(A); A dominates B when the optimum is
// negative.
inline lp::Problem build_dominance_lp(const SubsetFamily& theta, const PreferenceSet& r, const Alternative& a,
                                      const Alternative& b, double rhs = 1.0) {
  auto p = build_p1(theta, r, rhs);
  p.set_objective(lp::Sense::Maximize, detail::row_terms(difference_row(theta, b, a)));
  return p;
}

// P_theta, one slack per pair of R.
inline lp::Problem build_representability_lp(const SubsetFamily& theta, const PreferenceSet& r, double rhs = 1.0) {
  detail::check_widths(theta, r);
  std::vector<std::vector<int>> rows;
  for (const auto& p : r.pairs()) rows.push_back(difference_row(theta, p.better, p.worse));
  return detail::p_theta_from_rows(theta, rows, rhs);
}

// D_theta, one weight per pair of R.
inline lp::Problem build_dual_lp(const SubsetFamily& theta, const PreferenceSet& r) {
  detail::check_widths(theta, r);
  lp::Problem p;
  std::vector<lp::Term> objective;
  for (std::size_t k = 0; k < r.size(); ++k) {
    p.add_variable("l" + std::to_string(k), 0.0, 1.0);
    objective.push_back({k, 1.0});
  }
  for (const auto& s : theta.members()) {
    std::vector<lp::Term> terms;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const int d = indicator(r.pairs()[k].better, s) - indicator(r.pairs()[k].worse, s);
      if (d != 0) terms.push_back({k, static_cast<double>(d)});
    }
    p.add_constraint("s" + detail::var_name(s).substr(1), std::move(terms), lp::Relation::Equal, 0.0);
  }
  p.set_objective(lp::Sense::Maximize, std::move(objective));
  return p;
}

struct RepresentabilityFit {
  bool representable = false;
  double slack_total = 0.0;  // optimum of P_theta
  UtilityMap utilities;      // an optimal u
};

inline RepresentabilityFit fit_representability(const SubsetFamily& theta, const PreferenceSet& r,
                                                 const EngineOptions& opts = {}) {
  detail::check_widths(theta, r);
  const auto rows = detail::compact_rows(theta, r);
  const auto outcome = lp::solve(detail::p_theta_from_rows(theta, rows, opts.rhs), opts.backend);
  if (outcome.status != lp::Status::Optimal) {
    throw EngineError(std::string("P_theta solve ended ") + lp::to_string(outcome.status));
  }
  RepresentabilityFit fit;
  fit.slack_total = *outcome.objective;
  fit.representable = fit.slack_total <= opts.feasibility_tol;
  fit.utilities = UtilityMap(theta, std::span<const double>(outcome.values.data(), theta.size()));
  return fit;
}

inline bool is_representable(const SubsetFamily& theta, const PreferenceSet& r, const EngineOptions& opts = {}) {
  return fit_representability(theta, r, opts).representable;
}

// Optimal weights of D_theta. `implicated` lists indices into `pairs` whose
// weight exceeds the feasibility tolerance.
struct Certificate {
  std::vector<Preference> pairs;
  std::vector<double> weights;
  std::vector<std::size_t> implicated;
  double objective = 0.0;

  bool proves_infeasibility(double tol = 1e-7) const { return objective > tol; }
};

inline Certificate dual_certificate(const SubsetFamily& theta, const PreferenceSet& r,
                                    const EngineOptions& opts = {}) {
  const auto outcome = lp::solve(build_dual_lp(theta, r), opts.backend);
  if (outcome.status != lp::Status::Optimal) {
    throw EngineError(std::string("D_theta solve ended ") + lp::to_string(outcome.status));
  }
  Certificate cert;
  cert.pairs = r.pairs();
  cert.weights = outcome.values;
  for (auto& w : cert.weights) w = std::clamp(w, 0.0, 1.0);
  cert.objective = *outcome.objective;
  if (cert.objective > opts.feasibility_tol) {
    for (std::size_t k = 0; k < cert.weights.size(); ++k) {
      if (cert.weights[k] > opts.feasibility_tol) cert.implicated.push_back(k);
    }
  }
  return cert;
}

// sum over pairs of (I_A(S) - I_B(S)) * weight.
inline double certificate_imbalance(const AttributeSubset& s, const Certificate& cert) {
  double total = 0.0;
  for (std::size_t k = 0; k < cert.pairs.size(); ++k) {
    if (cert.weights[k] == 0.0) continue;
    total += (indicator(cert.pairs[k].better, s) - indicator(cert.pairs[k].worse, s)) * cert.weights[k];
  }
  return total;
}

inline bool breaks_certificate(const AttributeSubset& s, const Certificate& cert, double tol = 1e-7) {
  return std::fabs(certificate_imbalance(s, cert)) > tol;
}

enum class Verdict { PreferFirst, PreferSecond, NoPrediction };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PreferFirst: return "prefer_first";
    case Verdict::PreferSecond: return "prefer_second";
    case Verdict::NoPrediction: return "no_prediction";
  }
  return "?";
}

struct DominanceVerdict {
  Verdict verdict = Verdict::NoPrediction;
  // max f(B) - f(A) and max f(A) - f(B) over P1; empty when unbounded.
  std::optional<double> forward;
  std::optional<double> backward;
};

namespace detail {

inline std::optional<double> max_gap(const SubsetFamily& theta, const std::vector<std::vector<int>>& rows,
                                     const std::vector<int>& gain, const EngineOptions& opts) {
  auto p = p1_from_rows(theta, rows, opts.rhs);
  p.set_objective(lp::Sense::Maximize, row_terms(gain));
  const auto outcome = lp::solve(p, opts.backend);
  if (outcome.status == lp::Status::Infeasible) {
    throw PreconditionError("dominance requires a nonempty compatibility polyhedron");
  }
  if (outcome.status == lp::Status::Unbounded) return std::nullopt;
  return outcome.objective;
}

inline DominanceVerdict dominance_on_rows(const SubsetFamily& theta, const std::vector<std::vector<int>>& rows,
                                          const Alternative& a, const Alternative& b, const EngineOptions& opts) {
  auto b_minus_a = difference_row(theta, b, a);
  auto a_minus_b = difference_row(theta, a, b);
  DominanceVerdict v;
  v.forward = max_gap(theta, rows, b_minus_a, opts);
  v.backward = max_gap(theta, rows, a_minus_b, opts);
  const bool first = v.forward && *v.forward < -opts.dominance_tol;
  const bool second = v.backward && *v.backward < -opts.dominance_tol;
  if (first && second) throw EngineError("dominance LPs contradict each other");
  v.verdict = first ? Verdict::PreferFirst : second ? Verdict::PreferSecond : Verdict::NoPrediction;
  return v;
}

}  // namespace detail

inline DominanceVerdict dominance(const SubsetFamily& theta, const PreferenceSet& r, const Alternative& a,
                                  const Alternative& b, const EngineOptions& opts = {}) {
  detail::check_widths(theta, r);
  if (a.width() != theta.width() || b.width() != theta.width()) throw DimensionError("alternative width mismatch");
  return detail::dominance_on_rows(theta, detail::compact_rows(theta, r), a, b, opts);
}

enum class Prediction { Observed, PreferFirst, PreferSecond, NoPrediction };

inline const char* to_string(Prediction p) {
  switch (p) {
    case Prediction::Observed: return "observed";
    case Prediction::PreferFirst: return "prefer_first";
    case Prediction::PreferSecond: return "prefer_second";
    case Prediction::NoPrediction: return "no_prediction";
  }
  return "?";
}

struct PairPrediction {
  std::size_t first = 0;
  std::size_t second = 0;
  Prediction prediction = Prediction::NoPrediction;
  bool observed_first_better = false;  // meaningful for Observed
  std::optional<DominanceVerdict> detail;  // set for inferred pairs
};

// Verdicts for every unordered pair (i < j) of `alternatives`.
inline std::vector<PairPrediction> predict_matrix(const SubsetFamily& theta, const PreferenceSet& r,
                                                  std::span<const Alternative> alternatives,
                                                  const EngineOptions& opts = {}) {
  detail::check_widths(theta, r);
  std::vector<PairPrediction> out;
  if (alternatives.empty()) return out;
  const auto rows = detail::compact_rows(theta, r);
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    for (std::size_t j = i + 1; j < alternatives.size(); ++j) {
      PairPrediction pp;
      pp.first = i;
      pp.second = j;
      const auto& a = alternatives[i];
      const auto& b = alternatives[j];
      if (r.contains(a, b) || r.contains(b, a)) {
        pp.prediction = Prediction::Observed;
        pp.observed_first_better = r.contains(a, b);
      } else {
        pp.detail = detail::dominance_on_rows(theta, rows, a, b, opts);
        pp.prediction = pp.detail->verdict == Verdict::PreferFirst    ? Prediction::PreferFirst
                        : pp.detail->verdict == Verdict::PreferSecond ? Prediction::PreferSecond
                                                                      : Prediction::NoPrediction;
      }
      out.push_back(pp);
    }
  }
  return out;
}

}  // namespace cautious
