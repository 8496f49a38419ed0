#pragma once

// In-memory elicitation sessions. A session records tier assignments and
// publishes an immutable snapshot per version holding R, the minimal
// families and their unifying model. Writers on one session are serialized;
// readers only ever see complete snapshots.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cautious/core.hpp"
#include "cautious/json_io.hpp"
#include "cautious/lp_engine.hpp"
#include "cautious/theta_search.hpp"

namespace cautious::service {

inline constexpr int kMaxInteractiveAttributes = 12;

// Carries the HTTP status and a stable machine-readable code.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

using Clock = std::function<std::string()>;

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

struct LoggedAssignment {
  Alternative alternative;
  int tier = 0;
  std::string timestamp;
};

struct Snapshot {
  explicit Snapshot(int n) : r(n) {}

  std::uint64_t version = 0;
  std::vector<LoggedAssignment> log;
  PreferenceSet r;
  ThetaMinResult theta_min;
  std::optional<std::string> warning;

  const SubsetFamily& unifying() const { return theta_min.unifying; }
  // A partial search that found nothing leaves no model to predict with.
  bool has_model() const { return theta_min.complete || !theta_min.families.empty(); }
};

struct SessionOptions {
  SearchOptions search;
  EngineOptions engine;
};

struct PredictionView {
  std::uint64_t version = 0;
  std::vector<Alternative> alternatives;
  std::vector<PairPrediction> pairs;
};

struct Revision {
  std::size_t first = 0;
  std::size_t second = 0;
  Prediction before = Prediction::NoPrediction;
  Prediction after = Prediction::NoPrediction;
};

inline ThetaMinResult empty_theta_min(int n) {
  ThetaMinResult r;
  r.families = {SubsetFamily(n)};
  r.representative = SubsetFamily(n);
  r.unifying = SubsetFamily(n);
  return r;
}

class Session {
 public:
  Session(std::string id, AttributeUniverse universe, int tiers, SessionOptions options, Clock clock)
      : id_(std::move(id)),
        universe_(std::move(universe)),
        tiers_(tiers),
        options_(std::move(options)),
        clock_(std::move(clock)) {
    auto first = std::make_shared<Snapshot>(universe_.size());
    first->theta_min = empty_theta_min(universe_.size());
    snapshot_ = std::move(first);
  }

  const std::string& id() const { return id_; }
  const AttributeUniverse& universe() const { return universe_; }
  int tiers() const { return tiers_; }

  std::shared_ptr<const Snapshot> snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
  }

  // New assignment, or a tier change when `reassign` is set.
  std::shared_ptr<const Snapshot> assign(const Alternative& a, int tier, bool reassign = false) {
    std::lock_guard writer(writer_mutex_);
    if (a.width() != universe_.size()) {
      throw ServiceError(400, "dimension", "alternative " + a.to_string() + " does not have " +
                                               std::to_string(universe_.size()) + " attributes");
    }
    if (tier < 1 || tier > tiers_) {
      throw ServiceError(400, "validation", "tier must lie in [1, " + std::to_string(tiers_) + "]");
    }
    const auto current = snapshot();
    auto log = current->log;
    auto it = std::find_if(log.begin(), log.end(), [&](const LoggedAssignment& e) { return e.alternative == a; });
    if (reassign) {
      if (it == log.end()) throw ServiceError(404, "not_assigned", a.to_string() + " has not been assigned");
      if (it->tier == tier) return current;
      log.erase(it);
    } else if (it != log.end()) {
      throw ServiceError(409, "already_assigned",
                         a.to_string() + " is already in tier " + std::to_string(it->tier));
    }
    log.push_back({a, tier, clock_()});
    publish(rebuild(std::move(log), current->version + 1));
    return snapshot();
  }

  PredictionView predictions(const std::vector<Alternative>& alts) {
    for (const auto& a : alts) {
      if (a.width() != universe_.size()) {
        throw ServiceError(400, "dimension", "alternative " + a.to_string() + " does not have " +
                                                 std::to_string(universe_.size()) + " attributes");
      }
    }
    const auto snap = snapshot();
    const std::string key = list_key(alts);
    {
      std::lock_guard lock(cache_mutex_);
      if (cache_version_ == snap->version) {
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
      }
    }
    PredictionView view{snap->version, alts, {}};
    if (snap->has_model()) {
      view.pairs = predict_matrix(snap->unifying(), snap->r, alts, options_.engine);
    } else {
      for (std::size_t i = 0; i < alts.size(); ++i) {
        for (std::size_t j = i + 1; j < alts.size(); ++j) {
          PairPrediction pp;
          pp.first = i;
          pp.second = j;
          if (snap->r.relates(alts[i], alts[j])) {
            pp.prediction = Prediction::Observed;
            pp.observed_first_better = snap->r.contains(alts[i], alts[j]);
          }
          view.pairs.push_back(pp);
        }
      }
    }
    std::lock_guard lock(cache_mutex_);
    if (cache_version_ != snap->version) {
      cache_.clear();
      cache_version_ = snap->version;
    }
    cache_.emplace(key, view);
    return view;
  }

  // Committed verdicts of the last view served for the same list that have
  // changed in `view`. The view becomes the new reference for that list.
  std::vector<Revision> revisions(const PredictionView& view) {
    std::lock_guard lock(cache_mutex_);
    const std::string key = list_key(view.alternatives);
    std::vector<Revision> out;
    auto it = last_served_.find(key);
    if (it != last_served_.end() && it->second.version < view.version) {
      for (std::size_t k = 0; k < view.pairs.size() && k < it->second.pairs.size(); ++k) {
        const auto before = it->second.pairs[k].prediction;
        const auto after = view.pairs[k].prediction;
        const bool committed = before == Prediction::PreferFirst || before == Prediction::PreferSecond;
        if (committed && before != after) out.push_back({view.pairs[k].first, view.pairs[k].second, before, after});
      }
    }
    if (it == last_served_.end() || it->second.version <= view.version) last_served_[key] = view;
    return out;
  }

 private:
  static std::string list_key(const std::vector<Alternative>& alts) {
    std::string key;
    for (const auto& a : alts) key += a.to_string() + ',';
    return key;
  }

  std::shared_ptr<Snapshot> rebuild(std::vector<LoggedAssignment> log, std::uint64_t version) const {
    auto next = std::make_shared<Snapshot>(universe_.size());
    next->version = version;
    std::vector<TierAssignment> assignments;
    for (const auto& e : log) assignments.push_back({e.alternative, e.tier});
    next->log = std::move(log);
    next->r = preferences_from_tiers(universe_.size(), assignments);
    if (next->r.empty()) {
      next->theta_min = empty_theta_min(universe_.size());
      return next;
    }
    try {
      next->theta_min = build_theta_min(next->r, options_.search);
    } catch (const SearchBudgetExceeded& e) {
      next->theta_min = e.partial();
      next->warning = std::string(e.what()) + "; the minimal families shown are partial";
    }
    return next;
  }

  void publish(std::shared_ptr<const Snapshot> snap) {
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(snap);
  }

  std::string id_;
  AttributeUniverse universe_;
  int tiers_;
  SessionOptions options_;
  Clock clock_;

  std::mutex writer_mutex_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;

  std::mutex cache_mutex_;
  std::uint64_t cache_version_ = 0;
  std::unordered_map<std::string, PredictionView> cache_;
  std::unordered_map<std::string, PredictionView> last_served_;
};

class SessionStore {
 public:
  explicit SessionStore(SessionOptions options = {}, Clock clock = utc_now)
      : options_(std::move(options)), clock_(std::move(clock)) {}

  std::shared_ptr<Session> create(int n, std::vector<std::string> names, int tiers) {
    if (n < 1 || n > kMaxInteractiveAttributes) {
      throw ServiceError(400, "validation",
                         "n must lie in [1, " + std::to_string(kMaxInteractiveAttributes) + "]");
    }
    if (tiers < 1) throw ServiceError(400, "validation", "tier count must be at least 1");
    AttributeUniverse universe = [&] {
      try {
        return AttributeUniverse(n, std::move(names));
      } catch (const ValidationError& e) {
        throw ServiceError(400, "validation", e.what());
      }
    }();
    std::lock_guard lock(mutex_);
    const std::string id = "s" + std::to_string(++counter_);
    auto session = std::make_shared<Session>(id, std::move(universe), tiers, options_, clock_);
    sessions_.emplace(id, session);
    return session;
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "not_found", "no session '" + id + "'");
    return it->second;
  }

 private:
  SessionOptions options_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::uint64_t counter_ = 0;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// JSON views.

inline Json names_json(const AttributeUniverse& u) {
  Json out = Json::array();
  for (int i = 0; i < u.size(); ++i) out.push_back(u.name(i));
  return out;
}

inline Json theta_json(const Snapshot& s) {
  Json out;
  out["version"] = s.version;
  const Json tm = theta_min_json(s.theta_min);
  for (auto it = tm.begin(); it != tm.end(); ++it) out[it.key()] = it.value();
  if (s.warning) out["warning"] = *s.warning;
  return out;
}

inline Json state_json(const Session& session, const Snapshot& s) {
  Json out;
  out["id"] = session.id();
  out["version"] = s.version;
  out["n"] = session.universe().size();
  out["names"] = names_json(session.universe());
  out["tiers"] = session.tiers();
  Json log = Json::array();
  for (const auto& e : s.log) {
    log.push_back({{"alternative", e.alternative.to_string()}, {"tier", e.tier}, {"timestamp", e.timestamp}});
  }
  out["log"] = std::move(log);
  Json prefs = Json::array();
  for (const auto& p : s.r.pairs()) prefs.push_back(p.better.to_string() + ">" + p.worse.to_string());
  out["preferences"] = std::move(prefs);
  out["theta"] = theta_json(s);
  return out;
}

inline Json assignment_json(const Snapshot& s) {
  Json out;
  out["version"] = s.version;
  out["preferences"] = s.r.size();
  Json fams = Json::array();
  for (const auto& f : s.theta_min.families) fams.push_back(family_json(f));
  out["families"] = std::move(fams);
  out["unifying"] = family_json(s.theta_min.unifying);
  out["complete"] = s.theta_min.complete;
  out["warning"] = s.warning ? Json(*s.warning) : Json(nullptr);
  return out;
}

inline Json predictions_json(const PredictionView& view, const std::vector<Revision>& revised) {
  Json out;
  out["version"] = view.version;
  Json alts = Json::array();
  for (const auto& a : view.alternatives) alts.push_back(a.to_string());
  out["alternatives"] = std::move(alts);
  Json pairs = Json::array();
  for (const auto& p : view.pairs) {
    Json e;
    e["first"] = view.alternatives[p.first].to_string();
    e["second"] = view.alternatives[p.second].to_string();
    e["prediction"] = to_string(p.prediction);
    if (p.prediction == Prediction::Observed) e["observed_first_better"] = p.observed_first_better;
    pairs.push_back(std::move(e));
  }
  out["pairs"] = std::move(pairs);
  Json rev = Json::array();
  for (const auto& r : revised) {
    rev.push_back({{"first", view.alternatives[r.first].to_string()},
                   {"second", view.alternatives[r.second].to_string()},
                   {"before", to_string(r.before)},
                   {"after", to_string(r.after)}});
  }
  out["revised"] = std::move(rev);
  return out;
}

}  // namespace cautious::service
