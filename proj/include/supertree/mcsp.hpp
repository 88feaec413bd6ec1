#pragma once

#include <chrono>
#include <unordered_map>
#include <vector>

#include "state_space.hpp"

namespace supertree {

struct SolveStats {
  std::size_t states_visited = 0;  // memo entries
  std::size_t transitions = 0;     // bipartites or decompositions evaluated
  double wall_ms = 0.0;
};

template <PhyloTree Tree>
struct SupertreeResult {
  std::size_t size = 0;
  Tree tree;
  SolveStats stats;
};

namespace detail {

// Rooted caterpillar over the given labels in ascending id order:
// (((l1,l2),l3),...). Returns kNoNode for an empty set.
inline NodeId add_caterpillar(const LabelSet& labels, RootedTreeBuilder& b) {
  NodeId spine = kNoNode;
  for_each_label(labels, [&](LabelId l) {
    NodeId leaf = b.add_leaf(l);
    spine = spine == kNoNode ? leaf : b.add_internal({spine, leaf});
  });
  return spine;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

// Maximum compatible supertree by memoized recursion over cut-subforests.
// A terminal state is worth |Λ|; any other state is worth the best sum over
// its bipartites. Rooted instances start from the tuple of whole trees;
// unrooted instances take the best over every cut-subforest.
template <PhyloTree Tree>
class McspSolver {
 public:
  struct Entry {
    int value = 0;
    bool terminal = true;
    StateKey left = 0;
    StateKey right = 0;
  };

  explicit McspSolver(const ProblemInstance<Tree>& inst) : inst_(&inst), space_((require_solvable(inst), inst)) {}

  const CutSubforestSpace<Tree>& space() const { return space_; }
  const std::unordered_map<StateKey, Entry>& memo() const { return memo_; }
  std::size_t transitions() const { return transitions_; }

  int value(StateKey key) {
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;
    std::vector<StateId> parts = space_.decode(key);
    Entry e;
    if (space_.is_terminal(parts)) {
      e.value = static_cast<int>(space_.lambda(parts).count());
    } else {
      e.terminal = false;
      e.value = -1;
      for_each_bipartite(space_, parts, [&](std::span<const StateId> l, std::span<const StateId> r) {
        ++transitions_;
        StateKey lk = space_.encode(l), rk = space_.encode(r);
        int v = value(lk) + value(rk);
        if (v > e.value) {
          e.value = v;
          e.left = lk;
          e.right = rk;
        }
      });
    }
    memo_.emplace(key, e);
    return e.value;
  }

  // The state the answer is read from.
  StateKey best_state() {
    if constexpr (kIsRooted<Tree>) {
      std::vector<StateId> top;
      for (std::size_t i = 0; i < space_.k(); ++i) top.push_back(space_.catalog(i).top());
      StateKey key = space_.encode(top);
      value(key);
      return key;
    } else {
      StateKey best = 0;
      int best_value = -1;
      for (StateKey key = 1; key < space_.key_count(); ++key) {
        int v = value(key);
        if (v > best_value) {
          best_value = v;
          best = key;
        }
      }
      return best;
    }
  }

  // Binary witness for a memoized state.
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

  // Re-derives every memoized value from its children; true if all agree.
  bool verify_memo() const {
    for (const auto& [key, e] : memo_) {
      std::vector<StateId> parts = space_.decode(key);
      int expect = -1;
      if (space_.is_terminal(parts)) {
        expect = static_cast<int>(space_.lambda(parts).count());
      } else {
        for_each_bipartite(space_, parts, [&](std::span<const StateId> l, std::span<const StateId> r) {
          expect = std::max(expect, memo_.at(space_.encode(l)).value + memo_.at(space_.encode(r)).value);
        });
      }
      if (expect != e.value) return false;
    }
    return true;
  }

 private:
  NodeId build(StateKey key, RootedTreeBuilder& b) const {
    auto it = memo_.find(key);
    if (it == memo_.end()) throw std::logic_error("reconstruct: state not memoized");
    const Entry& e = it->second;
    if (e.terminal) return detail::add_caterpillar(space_.lambda(space_.decode(key)), b);
    return b.add_internal_dropping_empty({build(e.left, b), build(e.right, b)});
  }

  const ProblemInstance<Tree>* inst_;
  CutSubforestSpace<Tree> space_;
  std::unordered_map<StateKey, Entry> memo_;
  std::size_t transitions_ = 0;
};

template <PhyloTree Tree>
SupertreeResult<Tree> solve_mcsp(const ProblemInstance<Tree>& inst) {
  return McspSolver<Tree>(inst).solve();
}

inline SupertreeResult<RootedTree> mcsp_rooted(const RootedInstance& inst) { return solve_mcsp(inst); }
inline SupertreeResult<UnrootedTree> mcsp_unrooted(const UnrootedInstance& inst) { return solve_mcsp(inst); }

}  // namespace supertree
