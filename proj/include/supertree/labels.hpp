#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace supertree {

using LabelId = std::int32_t;
inline constexpr LabelId kNoLabel = -1;

// A set of label ids. Always sized to the owning universe.
using LabelSet = boost::dynamic_bitset<std::uint64_t>;

// Dense, lexicographically ordered interning of leaf label strings.
class LabelUniverse {
 public:
  LabelUniverse() = default;

  explicit LabelUniverse(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], static_cast<LabelId>(i));
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(LabelId id) const { return names_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& names() const { return names_; }

  LabelId find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? kNoLabel : it->second;
  }

  LabelId id(std::string_view name) const {
    LabelId found = find(name);
    if (found == kNoLabel) throw std::out_of_range("unknown label '" + std::string(name) + "'");
    return found;
  }

  LabelSet empty_set() const { return LabelSet(names_.size()); }

  LabelSet full_set() const {
    LabelSet s(names_.size());
    s.set();
    return s;
  }

  LabelSet make_set(const std::vector<std::string>& labels) const {
    LabelSet s = empty_set();
    for (const auto& l : labels) s.set(static_cast<std::size_t>(id(l)));
    return s;
  }

  bool operator==(const LabelUniverse& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, LabelId, std::less<>> index_;
};

using UniversePtr = std::shared_ptr<const LabelUniverse>;

inline UniversePtr make_universe(std::vector<std::string> names) {
  return std::make_shared<const LabelUniverse>(std::move(names));
}

// Iterates the members of a label set in ascending id order.
template <class Fn>
void for_each_label(const LabelSet& s, Fn&& fn) {
  for (auto i = s.find_first(); i != LabelSet::npos; i = s.find_next(i)) fn(static_cast<LabelId>(i));
}

inline std::vector<LabelId> to_vector(const LabelSet& s) {
  std::vector<LabelId> out;
  out.reserve(s.count());
  for_each_label(s, [&](LabelId l) { out.push_back(l); });
  return out;
}

inline LabelId min_label(const LabelSet& s) {
  auto i = s.find_first();
  return i == LabelSet::npos ? kNoLabel : static_cast<LabelId>(i);
}

}  // namespace supertree
