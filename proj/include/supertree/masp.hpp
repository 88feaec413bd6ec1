#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcsp.hpp"
#include "state_space.hpp"

namespace supertree {

// Maximum agreement supertree by memoized recursion over sub-forests.
// Terminal states are worth |Λ|; any other state is worth the best sum over
// its decompositions into at most k*D slots. Unrooted instances evaluate
// every tuple of rootings (each tree hung from an internal node or from an
// edge midpoint) against one shared memo.
template <PhyloTree Tree>
class MaspSolver {
 public:
  struct Entry {
    int value = 0;
    bool terminal = true;
    std::vector<StateKey> slots;
  };

  explicit MaspSolver(const ProblemInstance<Tree>& inst)
      : inst_(&inst),
        space_((require_solvable(inst), inst)),
        max_slots_(inst.k() * static_cast<std::size_t>(std::max(inst.max_degree(), 1))) {}

  const SubForestSpace<Tree>& space() const { return space_; }
  const std::unordered_map<StateKey, Entry>& memo() const { return memo_; }
  std::size_t max_slots() const { return max_slots_; }

  int value(StateKey key) {
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;
    std::vector<StateId> parts = space_.decode(key);
    Entry e;
    if (space_.is_terminal(parts)) {
      e.value = static_cast<int>(space_.lambda(parts).count());
    } else {
      e.terminal = false;
      e.value = Splitter(*this, parts).solve(e.slots);
    }
    int v = e.value;
    memo_.emplace(key, std::move(e));
    return v;
  }

  StateKey best_state() {
    const std::size_t k = space_.k();
    std::vector<StateId> top(k);
    if constexpr (kIsRooted<Tree>) {
      for (std::size_t i = 0; i < k; ++i) top[i] = space_.catalog(i).top();
      StateKey key = space_.encode(top);
      value(key);
      return key;
    } else {
      // Every rooted variant: each tree hung from an internal node or an edge midpoint.
      std::vector<std::vector<StateId>> options;
      for (std::size_t i = 0; i < k; ++i) options.push_back(space_.catalog(i).rootings());
      std::vector<std::size_t> idx(k, 0);
      StateKey best = 0;
      int best_value = -1;
      do {
        for (std::size_t i = 0; i < k; ++i) top[i] = options[i][idx[i]];
        if (bound(top) <= best_value) continue;
        StateKey key = space_.encode(top);
        if (int v = value(key); v > best_value) {
          best_value = v;
          best = key;
        }
      } while (detail::advance_odometer(idx, options));
      return best;
    }
  }

  RootedTree reconstruct(StateKey key) const {
    RootedTreeBuilder b(inst_->universe);
    return b.build(build(key, b));
  }

  SupertreeResult<Tree> solve() {
    detail::Stopwatch clock;
    StateKey key = best_state();
    RootedTree witness = reconstruct(key);
    SupertreeResult<Tree> out;
    out.size = static_cast<std::size_t>(memo_.at(key).value);
    if constexpr (kIsRooted<Tree>)
      out.tree = std::move(witness);
    else
      out.tree = unroot_any(witness);
    out.stats = {memo_.size(), transitions_, clock.elapsed_ms()};
    return out;
  }

  // Every entry equals its best fully memoized decomposition, and no
  // decomposition (unvisited slots taken at their bound) exceeds it.
  bool verify_memo() const {
    for (const auto& [key, e] : memo_) {
      std::vector<StateId> parts = space_.decode(key);
      if (space_.is_terminal(parts)) {
        if (e.value != static_cast<int>(space_.lambda(parts).count())) return false;
        continue;
      }
      if (e.value > bound(parts)) return false;
      const std::size_t k = parts.size();
      int exact = -1;
      bool exceeded = false;
      for_each_decomposition(space_, parts, max_slots_, [&](std::size_t d, std::span<const StateId> blocks) {
        int sum = 0;
        bool complete = true;
        for (std::size_t j = 0; j < d; ++j) {
          auto slot = blocks.subspan(j * k, k);
          if (auto it = memo_.find(space_.encode(slot)); it != memo_.end()) {
            sum += it->second.value;
          } else {
            sum += bound(slot);
            complete = false;
          }
        }
        if (complete) exact = std::max(exact, sum);
        exceeded = exceeded || sum > e.value;
      });
      if (exceeded || exact != e.value) return false;
    }
    return true;
  }

 private:
  // Best decomposition of one non-terminal state. Each non-empty part offers
  // its whole self or at least two of its root subtrees as items; the chosen
  // items are spread over slots holding at most one item per tree. Memoizing
  // over item subsets reaches the same optimum as walking every partition:
  // the slot holding the lowest item is fixed first, the rest recurses.
  // At most k*D items are ever placed, so the slot cap never binds.
  class Splitter {
   public:
    Splitter(MaspSolver& solver, std::span<const StateId> parts)
        : solver_(solver),
          parts_(parts.begin(), parts.end()),
          options_(parts.size()),
          tree_bits_(parts.size(), 0),
          admissible_(solver.space_.admissible(parts)) {
      const auto& space = solver_.space_;
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] == kEmptyState) {
          options_[i].push_back(0);
          continue;
        }
        options_[i].push_back(add_item(i, parts_[i]));
        const auto& cat = space.catalog(i);
        if (cat.is_trivial(parts_[i])) continue;
        std::uint64_t first = 0;
        auto kids = cat.children_of(parts_[i]);
        for (std::size_t j = 0; j < kids.size(); ++j) {
          std::uint64_t bit = add_item(i, kids[j]);
          if (j == 0) first = bit;
        }
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << kids.size()); ++m)
          if (std::popcount(m) >= 2) options_[i].push_back(m * first);
      }
    }

    int solve(std::vector<StateKey>& slots) {
      const int ceiling = solver_.bound(parts_);
      std::vector<std::size_t> idx(parts_.size(), 0);
      int best = -1;
      std::uint64_t best_set = 0, best_first = 0;
      do {
        std::uint64_t set = 0;
        for (std::size_t i = 0; i < parts_.size(); ++i) set |= options_[i][idx[i]];
        auto [v, first] = split(set, true);
        if (v > best) {
          best = v;
          best_set = set;
          best_first = first;
        }
      } while (best < ceiling && detail::advance_odometer(idx, options_));
      slots.clear();
      slots.push_back(slot_key(best_first));
      for (std::uint64_t rest = best_set & ~best_first; rest;) {
        std::uint64_t t = memo_.at(rest).second;
        slots.push_back(slot_key(t));
        rest &= ~t;
      }
      return best;
    }

   private:
    std::uint64_t add_item(std::size_t tree, StateId state) {
      if (item_tree_.size() == 64) throw std::length_error("too many items for decomposition");
      std::uint64_t bit = std::uint64_t{1} << item_tree_.size();
      item_tree_.push_back(tree);
      item_state_.push_back(state);
      item_labels_.push_back(solver_.space_.catalog(tree).leaves(state) & admissible_);
      tree_bits_[tree] |= bit;
      return bit;
    }

    std::vector<StateId> slot_parts(std::uint64_t t) const {
      std::vector<StateId> slot(parts_.size(), kEmptyState);
      for (; t; t &= t - 1) {
        auto b = static_cast<std::size_t>(std::countr_zero(t));
        slot[item_tree_[b]] = item_state_[b];
      }
      return slot;
    }

    StateKey slot_key(std::uint64_t t) const { return solver_.space_.encode(slot_parts(t)); }

    // Slots drawn from `set` have disjoint admissible labels, all carried by its items.
    int ceiling(std::uint64_t set) const {
      if (set == 0) return 0;
      LabelSet labels = admissible_;
      labels.reset();
      for (; set; set &= set - 1) labels |= item_labels_[static_cast<std::size_t>(std::countr_zero(set))];
      return static_cast<int>(labels.count());
    }

    // Best value of partitioning `set` into slots; with `several`, at least two.
    // Returns the value and the slot holding the lowest item.
    std::pair<int, std::uint64_t> split(std::uint64_t set, bool several) {
      if (!several) {
        if (set == 0) return {0, 0};
        if (auto it = memo_.find(set); it != memo_.end()) return it->second;
      }
      const std::uint64_t low = set & (~set + 1);
      std::vector<std::uint64_t> candidates{low};
      const std::size_t low_tree = item_tree_[static_cast<std::size_t>(std::countr_zero(low))];
      for (std::size_t j = 0; j < parts_.size(); ++j) {
        std::uint64_t avail = set & tree_bits_[j];
        if (j == low_tree || avail == 0) continue;
        const std::size_t n = candidates.size();
        for (; avail; avail &= avail - 1)
          for (std::size_t c = 0; c < n; ++c) candidates.push_back(candidates[c] | (avail & (~avail + 1)));
      }
      const int cap = ceiling(set);
      std::pair<int, std::uint64_t> best{-1, 0};
      for (std::uint64_t t : candidates) {
        if (several && t == set) continue;
        if (best.first >= cap) break;
        ++solver_.transitions_;
        std::vector<StateId> slot = slot_parts(t);
        const int slot_bound = solver_.bound(slot);
        if (slot_bound + ceiling(set & ~t) <= best.first) continue;
        const int rest = split(set & ~t, false).first;
        if (slot_bound + rest <= best.first) continue;
        const int v = solver_.value(solver_.space_.encode(slot)) + rest;
        if (v > best.first) best = {v, t};
      }
      if (!several) memo_.emplace(set, best);
      return best;
    }

    MaspSolver& solver_;
    std::vector<StateId> parts_;
    std::vector<std::vector<std::uint64_t>> options_;
    std::vector<std::uint64_t> tree_bits_;
    std::vector<std::size_t> item_tree_;
    std::vector<StateId> item_state_;
    LabelSet admissible_;
    std::vector<LabelSet> item_labels_;
    std::unordered_map<std::uint64_t, std::pair<int, std::uint64_t>> memo_;
  };

  int bound(std::span<const StateId> parts) const { return static_cast<int>(space_.admissible(parts).count()); }

  NodeId build(StateKey key, RootedTreeBuilder& b) const {
    auto it = memo_.find(key);
    if (it == memo_.end()) throw std::logic_error("reconstruct: state not memoized");
    const Entry& e = it->second;
    if (e.terminal) return detail::add_caterpillar(space_.lambda(space_.decode(key)), b);
    std::vector<NodeId> kids;
    for (StateKey s : e.slots) kids.push_back(build(s, b));
    return b.add_internal_dropping_empty(kids);
  }

  const ProblemInstance<Tree>* inst_;
  SubForestSpace<Tree> space_;
  std::size_t max_slots_;
  std::unordered_map<StateKey, Entry> memo_;
  std::size_t transitions_ = 0;
};

template <PhyloTree Tree>
SupertreeResult<Tree> solve_masp(const ProblemInstance<Tree>& inst) {
  return MaspSolver<Tree>(inst).solve();
}

inline SupertreeResult<RootedTree> masp_rooted(const RootedInstance& inst) { return solve_masp(inst); }
inline SupertreeResult<UnrootedTree> masp_unrooted(const UnrootedInstance& inst) { return solve_masp(inst); }

}  // namespace supertree
