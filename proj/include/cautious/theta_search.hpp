#pragma once

// Enumeration of the simplest families able to represent a preference set.
//
// The search walks over families, starting from the empty family. A node
// whose family represents R is recorded; otherwise the optimal D_theta weights
// of the node serve as a certificate, and the walk branches on every candidate
// subset that breaks it. Branches whose (degree, size) key exceeds the best
// key recorded so far are cut.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cautious/core.hpp"
#include "cautious/lp_engine.hpp"

namespace cautious {

struct SearchLimits {
  std::size_t max_nodes = 100000;
  std::optional<std::chrono::milliseconds> wall_clock;
};

// Which subsets a certificate may be broken with.
enum class CandidatePolicy {
  // Nonempty subsets of A\B and B\A for implicated pairs (A,B), plus A and B.
  DifferenceSets,
  // Every nonempty subset of A or of B for implicated pairs (A,B).
  SubsetsOfImplicated,
};

struct SearchOptions {
  SearchLimits limits;
  CandidatePolicy policy = CandidatePolicy::SubsetsOfImplicated;
  EngineOptions engine;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t lp_solves = 0;
};

struct ThetaMinResult {
  std::vector<SubsetFamily> families;  // canonical order, all with one (degree, size)
  std::optional<SubsetFamily> representative;
  SubsetFamily unifying;
  SearchStats stats;
  bool complete = true;
};

class SearchBudgetExceeded : public Error {
 public:
  SearchBudgetExceeded(const std::string& what, ThetaMinResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const ThetaMinResult& partial() const { return partial_; }

 private:
  ThetaMinResult partial_;
};

class OracleExhausted : public Error {
 public:
  using Error::Error;
};

inline SubsetFamily unifying_model(const std::vector<SubsetFamily>& families) {
  if (families.empty()) throw PreconditionError("unifying model of an empty collection");
  SubsetFamily out(families.front().width());
  for (const auto& f : families) out = out.united(f);
  return out;
}

inline SubsetFamily unifying_model(const ThetaMinResult& result) { return unifying_model(result.families); }

namespace detail {

inline void add_submasks(int n, Mask mask, std::set<AttributeSubset>& pool) {
  for (Mask sub = mask; sub != 0; sub = (sub - 1) & mask) pool.emplace(n, sub);
}

inline std::vector<AttributeSubset> certificate_candidates(const Certificate& cert, int n, CandidatePolicy policy) {
  std::set<AttributeSubset> pool;
  for (std::size_t k : cert.implicated) {
    const Mask a = cert.pairs[k].better.bits();
    const Mask b = cert.pairs[k].worse.bits();
    if (policy == CandidatePolicy::DifferenceSets) {
      add_submasks(n, a & ~b, pool);
      add_submasks(n, b & ~a, pool);
      if (a) pool.emplace(n, a);
      if (b) pool.emplace(n, b);
    } else {
      add_submasks(n, a, pool);
      add_submasks(n, b, pool);
    }
  }
  return {pool.begin(), pool.end()};
}

struct FamilyHash {
  std::size_t operator()(const SubsetFamily& f) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& s : f.members()) h = (h ^ s.bits()) * 1099511628211ULL;
    return h;
  }
};

class ThetaMinSearch {
 public:
  ThetaMinSearch(const PreferenceSet& r, const SearchOptions& opts)
      : core_(transitive_reduction(r)), opts_(opts), n_(r.width()), start_(std::chrono::steady_clock::now()) {
    // The full power set is the sentinel upper bound.
    best_ = {n_, (std::size_t{1} << n_) - 1};
  }

  // Nodes are expanded in increasing (degree, size) order. Children never
  // have a smaller key than their parent, so once a representable family is
  // met only nodes with an equal key remain to be examined.
  ThetaMinResult run() {
    push(SubsetFamily(n_));
    while (!frontier_.empty()) {
      auto node = frontier_.begin();
      SubsetFamily theta = *node;
      frontier_.erase(node);
      if (best_ < theta.key()) break;
      expand(theta);
    }
    return result(true);
  }

  ThetaMinResult result(bool complete) const {
    ThetaMinResult out;
    out.families = found_;
    std::sort(out.families.begin(), out.families.end());
    out.representative = representative_;
    out.unifying = found_.empty() ? SubsetFamily(n_) : unifying_model(found_);
    out.stats = stats_;
    out.complete = complete;
    return out;
  }

 private:
  struct KeyOrder {
    bool operator()(const SubsetFamily& a, const SubsetFamily& b) const {
      if (a.key() < b.key()) return true;
      if (b.key() < a.key()) return false;
      return a < b;
    }
  };

  void push(SubsetFamily theta) {
    if (visited_.insert(theta).second) frontier_.insert(std::move(theta));
  }

  void expand(const SubsetFamily& theta) {
    ++stats_.nodes;
    check_budget();

    ++stats_.lp_solves;
    const Certificate cert = dual_certificate(theta, core_, opts_.engine);
    if (!cert.proves_infeasibility(opts_.engine.feasibility_tol)) {
      record(theta);
      return;
    }
    for (const auto& s : certificate_candidates(cert, n_, opts_.policy)) {
      if (theta.contains(s)) continue;
      if (!breaks_certificate(s, cert, opts_.engine.feasibility_tol)) continue;
      const SimplicityKey next{std::max(theta.degree(), s.cardinality()), theta.size() + 1};
      if (best_ < next) continue;
      push(theta.with(s));
    }
  }

  void record(const SubsetFamily& theta) {
    if (theta.key() < best_) {
      found_.assign(1, theta);
      best_ = theta.key();
      representative_ = theta;
    } else {
      found_.push_back(theta);
    }
  }

  void check_budget() {
    if (stats_.nodes > opts_.limits.max_nodes) {
      throw SearchBudgetExceeded("theta search exceeded its node budget", result(false));
    }
    if (opts_.limits.wall_clock && (stats_.nodes & 63U) == 0 &&
        std::chrono::steady_clock::now() - start_ > *opts_.limits.wall_clock) {
      throw SearchBudgetExceeded("theta search exceeded its time budget", result(false));
    }
  }

  PreferenceSet core_;
  SearchOptions opts_;
  int n_;
  std::chrono::steady_clock::time_point start_;
  SimplicityKey best_;
  std::vector<SubsetFamily> found_;
  std::optional<SubsetFamily> representative_;
  std::set<SubsetFamily, KeyOrder> frontier_;
  std::unordered_set<SubsetFamily, FamilyHash> visited_;
  SearchStats stats_;
};

}  // namespace detail

// All (degree, size)-minimal families representing R. Throws
// SearchBudgetExceeded, carrying the best families found so far, when the
// limits are hit.
inline ThetaMinResult build_theta_min(const PreferenceSet& r, const SearchOptions& opts = {}) {
  return detail::ThetaMinSearch(r, opts).run();
}

// Exhaustive oracle: scans (degree, size) layers in lexicographic order and
// returns every representable family of the first nonempty layer.
inline std::vector<SubsetFamily> brute_force_theta_min(const PreferenceSet& r, int max_degree, std::size_t max_size,
                                                       const EngineOptions& opts = {}) {
  const int n = r.width();
  if (r.empty()) return {SubsetFamily(n)};
  max_degree = std::min(max_degree, n);
  std::vector<AttributeSubset> all;
  for (Mask m = 1; m <= detail::full_mask(n); ++m) {
    all.emplace_back(n, m);
    if (m == detail::full_mask(n)) break;
  }
  std::sort(all.begin(), all.end());

  for (int d = 1; d <= max_degree; ++d) {
    std::vector<AttributeSubset> pool;
    for (const auto& s : all) {
      if (s.cardinality() <= d) pool.push_back(s);
    }
    for (std::size_t size = 1; size <= std::min(max_size, pool.size()); ++size) {
      std::vector<SubsetFamily> layer;
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      for (;;) {
        std::vector<AttributeSubset> members;
        bool reaches_degree = false;
        for (auto i : idx) {
          members.push_back(pool[i]);
          reaches_degree = reaches_degree || pool[i].cardinality() == d;
        }
        if (reaches_degree) {
          SubsetFamily fam(n, std::move(members));
          if (is_representable(fam, r, opts)) layer.push_back(std::move(fam));
        }
        // Next combination in lexicographic index order.
        std::size_t k = size;
        while (k > 0 && idx[k - 1] == pool.size() - size + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t i = k; i < size; ++i) idx[i] = idx[i - 1] + 1;
      }
      if (!layer.empty()) {
        std::sort(layer.begin(), layer.end());
        return layer;
      }
    }
  }
  throw OracleExhausted("no representable family within degree " + std::to_string(max_degree) + " and size " +
                        std::to_string(max_size));
}

}  // namespace cautious
