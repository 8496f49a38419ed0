#pragma once

// Synthetic decision makers: a random theta-additive utility and the tier
// function it induces over the whole alternative space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cautious/core.hpp"

namespace cautious {

using Rng = std::mt19937_64;

struct GeneratorConfig {
  int n = 5;
  double alpha = 0.1;   // interaction density
  double p = 0.9;       // stop probability after each growth step
  double sigma = 100.0; // standard deviation of the utilities
  int tiers = 12;
  std::uint64_t seed = 1;

  void validate() const {
    if (n < 1 || n > kMaxAttributes) throw ValidationError("n out of range");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("p must lie in (0, 1]");
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
    if (tiers < 1) throw ValidationError("tier count must be at least 1");
  }
};

inline constexpr int kGrowthRetries = 1000;

// Starts from a uniform singleton and adds uniformly drawn new attributes,
// stopping at the full set or, after each addition, with probability p.
inline Mask grow_subset_mask(int n, double p, Rng& rng) {
  std::uniform_int_distribution<int> first(0, n - 1);
  Mask s = Mask{1} << first(rng);
  if (n == 1) return s;
  std::bernoulli_distribution stop(p);
  for (;;) {
    std::vector<int> absent;
    for (int i = 0; i < n; ++i) {
      if (!((s >> i) & 1U)) absent.push_back(i);
    }
    std::uniform_int_distribution<std::size_t> pick(0, absent.size() - 1);
    s |= Mask{1} << absent[pick(rng)];
    if (s == detail::full_mask(n)) return s;
    if (stop(rng)) return s;
  }
}

// E|S| of grow_subset_mask for n >= 2.
inline double expected_subset_size(double p, int n) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("p must lie in (0, 1]");
  if (n < 2) throw ValidationError("n must be at least 2");
  return 2.0 + (1.0 - p - std::pow(1.0 - p, n - 1)) / p;
}

inline std::size_t extra_subset_count(int n, double alpha) {
  const double room = std::ldexp(1.0, n) - n;
  return static_cast<std::size_t>(std::floor(alpha * room + 1e-12));
}

// All singletons plus floor(alpha (2^n - n)) distinct grown subsets. A grown
// subset that is already present is regrown; after kGrowthRetries failures
// the family is returned as is.
inline SubsetFamily sample_theta(const GeneratorConfig& config, Rng& rng) {
  config.validate();
  const int n = config.n;
  std::vector<AttributeSubset> members;
  for (int i = 0; i < n; ++i) members.emplace_back(n, Mask{1} << i);
  std::unordered_set<Mask> present;
  for (const auto& s : members) present.insert(s.bits());
  const std::size_t extra = extra_subset_count(n, config.alpha);
  for (std::size_t k = 0; k < extra; ++k) {
    bool added = false;
    for (int attempt = 0; attempt < kGrowthRetries && !added; ++attempt) {
      const Mask m = grow_subset_mask(n, config.p, rng);
      if (present.insert(m).second) {
        members.emplace_back(n, m);
        added = true;
      }
    }
    if (!added) break;
  }
  return {n, std::move(members)};
}

inline UtilityMap sample_utilities(const SubsetFamily& theta, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  std::normal_distribution<double> normal(0.0, sigma);
  UtilityMap u;
  for (const auto& s : theta.members()) u.set(s, normal(rng));
  return u;
}

class TierFunction {
 public:
  TierFunction(SubsetFamily theta, UtilityMap u, int tiers, std::span<const Alternative> universe)
      : theta_(std::move(theta)), u_(std::move(u)), tiers_(tiers) {
    if (tiers < 1) throw ValidationError("tier count must be at least 1");
    if (universe.empty()) throw PreconditionError("tier function needs a nonempty universe");
    f_min_ = INFINITY;
    f_max_ = -INFINITY;
    for (const auto& a : universe) {
      const double f = evaluate(theta_, u_, a);
      utility_.emplace(a, f);
      f_min_ = std::min(f_min_, f);
      f_max_ = std::max(f_max_, f);
    }
    const double width = (f_max_ - f_min_) / tiers;
    for (int k = 1; k <= tiers; ++k) thresholds_.push_back(k == tiers ? f_max_ : f_min_ + k * width);
    for (const auto& [a, f] : utility_) tier_.emplace(a, classify(f));
  }

  // min { k : f <= threshold_k }, so boundary scores land in the lower tier.
  int classify(double f) const {
    if (f_max_ == f_min_) return 1;
    auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), f);
    if (it == thresholds_.end()) return tiers_;
    return static_cast<int>(it - thresholds_.begin()) + 1;
  }

  int assign(const Alternative& a) const {
    auto it = tier_.find(a);
    if (it == tier_.end()) throw PreconditionError("alternative " + a.to_string() + " is outside the universe");
    return it->second;
  }

  double utility(const Alternative& a) const {
    auto it = utility_.find(a);
    if (it == utility_.end()) throw PreconditionError("alternative " + a.to_string() + " is outside the universe");
    return it->second;
  }

  const SubsetFamily& theta() const { return theta_; }
  const UtilityMap& utilities() const { return u_; }
  int tiers() const { return tiers_; }
  double f_min() const { return f_min_; }
  double f_max() const { return f_max_; }
  const std::vector<double>& thresholds() const { return thresholds_; }

 private:
  SubsetFamily theta_;
  UtilityMap u_;
  int tiers_;
  double f_min_ = 0.0, f_max_ = 0.0;
  std::vector<double> thresholds_;
  std::unordered_map<Alternative, double> utility_;
  std::unordered_map<Alternative, int> tier_;
};

inline TierFunction build_tier_function(const SubsetFamily& theta, const UtilityMap& u, int tiers,
                                        std::span<const Alternative> universe) {
  return TierFunction(theta, u, tiers, universe);
}

inline TierFunction sample_tier_function(const GeneratorConfig& config, Rng& rng) {
  auto theta = sample_theta(config, rng);
  auto u = sample_utilities(theta, config.sigma, rng);
  const auto universe = all_alternatives(config.n);
  return TierFunction(std::move(theta), std::move(u), config.tiers, universe);
}

}  // namespace cautious
