#pragma once

// Binary-attribute alternatives, theta-additive utility models and strict
// preference sets.
//
// Attributes are addressed by 0-based index in the API. The text encodings
// are 1-based to match the usual a_1..a_n notation: an alternative prints as
// a '0'/'1' string with a_1 leftmost ("0111"), a subset as its sorted
// attribute numbers joined by '+' ("1+2+3").

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cautious/errors.hpp"

namespace cautious {

inline constexpr int kMaxAttributes = 24;

using Mask = std::uint32_t;

namespace detail {

inline void check_width(int n) {
  if (n < 1 || n > kMaxAttributes) {
    throw DimensionError("attribute count must be in [1, " + std::to_string(kMaxAttributes) +
                         "], got " + std::to_string(n));
  }
}

inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

class AttributeUniverse {
 public:
  explicit AttributeUniverse(int n) : n_(n) { detail::check_width(n); }

  AttributeUniverse(int n, std::vector<std::string> names) : n_(n), names_(std::move(names)) {
    detail::check_width(n);
    if (!names_.empty()) {
      if (static_cast<int>(names_.size()) != n_) {
        throw ValidationError("expected " + std::to_string(n_) + " attribute names, got " +
                              std::to_string(names_.size()));
      }
      std::unordered_set<std::string> seen;
      for (const auto& name : names_) {
        if (!seen.insert(name).second) throw ValidationError("duplicate attribute name '" + name + "'");
      }
    }
  }

  int size() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }

  std::string name(int i) const {
    if (!names_.empty()) return names_.at(static_cast<std::size_t>(i));
    return "a" + std::to_string(i + 1);
  }

  std::size_t alternative_count() const { return std::size_t{1} << n_; }

 private:
  int n_;
  std::vector<std::string> names_;
};

// A point of {0,1}^n; bit i set means attribute i is present.
class Alternative {
 public:
  Alternative() = default;

  Alternative(int n, Mask bits) : bits_(bits), n_(n) {
    detail::check_width(n);
    if ((bits & ~detail::full_mask(n)) != 0) {
      throw DimensionError("alternative bits exceed width " + std::to_string(n));
    }
  }

  static Alternative of(int n, std::initializer_list<int> attributes) {
    Mask m = 0;
    for (int a : attributes) {
      if (a < 0 || a >= n) throw DimensionError("attribute index out of range");
      m |= Mask{1} << a;
    }
    return {n, m};
  }

  static Alternative parse(std::string_view text) {
    std::string s = detail::trim(text);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
      std::string compact;
      for (char c : s.substr(1, s.size() - 2)) {
        if (c != ',' && c != ' ') compact.push_back(c);
      }
      s = compact;
    }
    if (s.empty()) throw IngestionError("empty alternative encoding");
    const int n = static_cast<int>(s.size());
    if (n > kMaxAttributes) throw DimensionError("alternative encoding too wide: " + s);
    Mask m = 0;
    for (int i = 0; i < n; ++i) {
      if (s[static_cast<std::size_t>(i)] == '1') {
        m |= Mask{1} << i;
      } else if (s[static_cast<std::size_t>(i)] != '0') {
        throw IngestionError("invalid alternative encoding '" + s + "'");
      }
    }
    return {n, m};
  }

  Mask bits() const { return bits_; }
  int width() const { return n_; }
  bool has(int i) const { return ((bits_ >> i) & 1U) != 0; }
  int count() const { return std::popcount(bits_); }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (int i = 0; i < n_; ++i) {
      if (has(i)) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
  }

  friend bool operator==(const Alternative&, const Alternative&) = default;
  friend auto operator<=>(const Alternative& a, const Alternative& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  Mask bits_ = 0;
  int n_ = 0;
};

// A nonempty set of attributes. Ordered canonically by cardinality, then by
// bit pattern.
class AttributeSubset {
 public:
  AttributeSubset() = default;

  AttributeSubset(int n, Mask bits) : bits_(bits), n_(n) {
    detail::check_width(n);
    if (bits == 0) throw ModelError("attribute subsets must be nonempty");
    if ((bits & ~detail::full_mask(n)) != 0) {
      throw DimensionError("subset bits exceed width " + std::to_string(n));
    }
  }

  static AttributeSubset of(int n, std::initializer_list<int> attributes) {
    Mask m = 0;
    for (int a : attributes) {
      if (a < 0 || a >= n) throw DimensionError("attribute index out of range");
      m |= Mask{1} << a;
    }
    return {n, m};
  }

  // "1+3" -> {a_1, a_3}.
  static AttributeSubset parse(int n, std::string_view text) {
    std::string s = detail::trim(text);
    if (s.empty()) throw IngestionError("empty subset encoding");
    Mask m = 0;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '+')) {
      item = detail::trim(item);
      int idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw IngestionError("invalid subset encoding '" + s + "'");
      }
      if (idx < 1 || idx > n) throw DimensionError("attribute number out of range in '" + s + "'");
      m |= Mask{1} << (idx - 1);
    }
    return {n, m};
  }

  Mask bits() const { return bits_; }
  int width() const { return n_; }
  int cardinality() const { return std::popcount(bits_); }
  bool has(int i) const { return ((bits_ >> i) & 1U) != 0; }

  std::string to_string() const {
    std::string out;
    for (int i = 0; i < n_; ++i) {
      if (!has(i)) continue;
      if (!out.empty()) out.push_back('+');
      out += std::to_string(i + 1);
    }
    return out;
  }

  friend bool operator==(const AttributeSubset&, const AttributeSubset&) = default;
  friend auto operator<=>(const AttributeSubset& a, const AttributeSubset& b) {
    if (auto c = a.cardinality() <=> b.cardinality(); c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  Mask bits_ = 1;
  int n_ = 0;
};

// I_A(S): 1 iff every attribute of S is present in A.
inline int indicator(const Alternative& a, const AttributeSubset& s) {
  if (a.width() != s.width()) {
    throw DimensionError("alternative width " + std::to_string(a.width()) + " != subset width " +
                         std::to_string(s.width()));
  }
  return (s.bits() & ~a.bits()) == 0 ? 1 : 0;
}

struct SimplicityKey {
  int degree = 0;
  std::size_t size = 0;

  friend auto operator<=>(const SimplicityKey&, const SimplicityKey&) = default;
};

// The theta of a theta-additive model: a duplicate-free, canonically ordered
// family of nonempty attribute subsets.
class SubsetFamily {
 public:
  explicit SubsetFamily(int n = 1) : n_(n) { detail::check_width(n); }

  SubsetFamily(int n, std::vector<AttributeSubset> members) : n_(n), members_(std::move(members)) {
    detail::check_width(n);
    for (const auto& s : members_) {
      if (s.width() != n_) throw DimensionError("subset width does not match family width");
    }
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  static SubsetFamily singletons(int n) {
    std::vector<AttributeSubset> m;
    for (int i = 0; i < n; ++i) m.emplace_back(n, Mask{1} << i);
    return {n, std::move(m)};
  }

  // Comma-separated subset encodings: "1,2+3" -> {{a_1}, {a_2, a_3}}.
  static SubsetFamily parse(int n, std::string_view text) {
    std::vector<AttributeSubset> m;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (detail::trim(item).empty()) continue;
      m.push_back(AttributeSubset::parse(n, item));
    }
    return {n, std::move(m)};
  }

  int width() const { return n_; }
  const std::vector<AttributeSubset>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  int degree() const { return members_.empty() ? 0 : members_.back().cardinality(); }

  SimplicityKey key() const { return {degree(), size()}; }

  bool contains(const AttributeSubset& s) const {
    return std::binary_search(members_.begin(), members_.end(), s);
  }

  std::size_t index_of(const AttributeSubset& s) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), s);
    if (it == members_.end() || *it != s) throw ModelError("subset " + s.to_string() + " not in family");
    return static_cast<std::size_t>(it - members_.begin());
  }

  SubsetFamily with(const AttributeSubset& s) const {
    auto m = members_;
    m.push_back(s);
    return {n_, std::move(m)};
  }

  SubsetFamily united(const SubsetFamily& other) const {
    if (other.n_ != n_) throw DimensionError("family widths differ");
    auto m = members_;
    m.insert(m.end(), other.members_.begin(), other.members_.end());
    return {n_, std::move(m)};
  }

  std::vector<std::string> encodings() const {
    std::vector<std::string> out;
    out.reserve(members_.size());
    for (const auto& s : members_) out.push_back(s.to_string());
    return out;
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) out += ", ";
      out += "{" + members_[i].to_string() + "}";
    }
    return out + "}";
  }

  friend bool operator==(const SubsetFamily&, const SubsetFamily&) = default;
  friend bool operator<(const SubsetFamily& a, const SubsetFamily& b) {
    if (a.key() != b.key()) return a.key() < b.key();
    return a.members_ < b.members_;
  }

 private:
  int n_;
  std::vector<AttributeSubset> members_;
};

// Strict lexicographic simplicity order on (degree, size).
inline bool lex_less(const SubsetFamily& a, const SubsetFamily& b) { return a.key() < b.key(); }

class UtilityMap {
 public:
  UtilityMap() = default;

  UtilityMap(const SubsetFamily& theta, std::span<const double> values) {
    if (values.size() != theta.size()) throw ModelError("one utility value per subset is required");
    for (std::size_t i = 0; i < values.size(); ++i) entries_[theta.members()[i]] = values[i];
  }

  void set(const AttributeSubset& s, double value) { entries_[s] = value; }

  double at(const AttributeSubset& s) const {
    auto it = entries_.find(s);
    if (it == entries_.end()) throw ModelError("no utility for subset " + s.to_string());
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<AttributeSubset, double>& entries() const { return entries_; }

  bool matches(const SubsetFamily& theta) const {
    if (entries_.size() != theta.size()) return false;
    auto it = entries_.begin();
    for (const auto& s : theta.members()) {
      if (it->first != s) return false;
      ++it;
    }
    return true;
  }

  // Values in the canonical order of theta.
  std::vector<double> values(const SubsetFamily& theta) const {
    std::vector<double> out;
    out.reserve(theta.size());
    for (const auto& s : theta.members()) out.push_back(at(s));
    return out;
  }

 private:
  std::map<AttributeSubset, double> entries_;
};

// f_{theta,u}(A) = sum of u_S over S in theta with S a subset of A.
inline double evaluate(const SubsetFamily& theta, const UtilityMap& u, const Alternative& a) {
  if (!u.matches(theta)) throw ModelError("utility map keys differ from the subset family");
  if (a.width() != theta.width()) throw DimensionError("alternative width differs from family width");
  double total = 0.0;
  for (const auto& [s, value] : u.entries()) {
    if (indicator(a, s)) total += value;
  }
  return total;
}

struct Preference {
  Alternative better;
  Alternative worse;

  friend bool operator==(const Preference&, const Preference&) = default;
  friend auto operator<=>(const Preference&, const Preference&) = default;
};

}  // namespace cautious

template <>
struct std::hash<cautious::Alternative> {
  std::size_t operator()(const cautious::Alternative& a) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t(a.width()) << 32) | a.bits());
  }
};

template <>
struct std::hash<cautious::AttributeSubset> {
  std::size_t operator()(const cautious::AttributeSubset& s) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t(s.width()) << 32) | s.bits());
  }
};

template <>
struct std::hash<cautious::Preference> {
  std::size_t operator()(const cautious::Preference& p) const noexcept {
    std::uint64_t k = (std::uint64_t(p.better.bits()) << 32) | p.worse.bits();
    return std::hash<std::uint64_t>{}(k * 0x9E3779B97F4A7C15ULL);
  }
};

namespace cautious {

// R: ordered strict preferences, first strictly better than second.
class PreferenceSet {
 public:
  explicit PreferenceSet(int n) : n_(n) { detail::check_width(n); }

  PreferenceSet(int n, std::initializer_list<std::pair<Alternative, Alternative>> pairs) : PreferenceSet(n) {
    for (const auto& [a, b] : pairs) add(a, b);
  }

  // Returns false when the pair was already present.
  bool add(const Alternative& better, const Alternative& worse) {
    if (better.width() != n_ || worse.width() != n_) {
      throw DimensionError("preference width differs from set width " + std::to_string(n_));
    }
    if (better == worse) throw IngestionError("alternative " + better.to_string() + " preferred to itself");
    if (index_.contains(Preference{worse, better})) {
      throw IngestionError("contradictory preferences between " + better.to_string() + " and " +
                           worse.to_string());
    }
    if (!index_.insert(Preference{better, worse}).second) return false;
    pairs_.push_back(Preference{better, worse});
    return true;
  }

  int width() const { return n_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<Preference>& pairs() const { return pairs_; }

  bool contains(const Alternative& better, const Alternative& worse) const {
    return index_.contains(Preference{better, worse});
  }

  bool relates(const Alternative& a, const Alternative& b) const { return contains(a, b) || contains(b, a); }

  PreferenceSet without(std::size_t index) const {
    PreferenceSet out(n_);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      if (i != index) out.add(pairs_[i].better, pairs_[i].worse);
    }
    return out;
  }

 private:
  int n_;
  std::vector<Preference> pairs_;
  std::unordered_set<Preference> index_;
};

struct TierAssignment {
  Alternative alternative;
  int tier = 1;
};

// Every cross-tier pair (A, B) with tier(A) > tier(B). Pairs are emitted in
// assignment order.
inline PreferenceSet preferences_from_tiers(int n, std::span<const TierAssignment> assignments) {
  std::vector<TierAssignment> unique;
  std::unordered_map<Alternative, int> seen;
  for (const auto& a : assignments) {
    if (a.tier < 1) throw IngestionError("tier indices must be positive");
    if (a.alternative.width() != n) throw DimensionError("assignment width differs from universe");
    auto [it, inserted] = seen.emplace(a.alternative, a.tier);
    if (!inserted) {
      if (it->second != a.tier) {
        throw IngestionError("alternative " + a.alternative.to_string() + " assigned to tiers " +
                             std::to_string(it->second) + " and " + std::to_string(a.tier));
      }
      continue;
    }
    unique.push_back(a);
  }
  PreferenceSet r(n);
  for (const auto& x : unique) {
    for (const auto& y : unique) {
      if (x.tier > y.tier) r.add(x.alternative, y.alternative);
    }
  }
  return r;
}

// One "A>B" pair per line; blank lines and '#' comments are skipped.
inline PreferenceSet read_preferences(std::istream& in) {
  std::vector<std::pair<Alternative, Alternative>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string s = detail::trim(line);
    if (s.empty()) continue;
    auto gt = s.find('>');
    if (gt == std::string::npos) {
      throw IngestionError("line " + std::to_string(lineno) + ": expected 'A>B'");
    }
    pairs.emplace_back(Alternative::parse(s.substr(0, gt)), Alternative::parse(s.substr(gt + 1)));
  }
  if (pairs.empty()) throw IngestionError("preference file contains no pairs");
  PreferenceSet r(pairs.front().first.width());
  for (const auto& [a, b] : pairs) r.add(a, b);
  return r;
}

inline void write_preferences(std::ostream& out, const PreferenceSet& r) {
  for (const auto& p : r.pairs()) out << p.better.to_string() << '>' << p.worse.to_string() << '\n';
}

// All 2^n alternatives in bit-pattern order.
inline std::vector<Alternative> all_alternatives(int n) {
  detail::check_width(n);
  std::vector<Alternative> out;
  out.reserve(std::size_t{1} << n);
  for (Mask m = 0; m <= detail::full_mask(n); ++m) {
    out.emplace_back(n, m);
    if (m == detail::full_mask(n)) break;
  }
  return out;
}

}  // namespace cautious
