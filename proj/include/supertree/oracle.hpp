#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "instance.hpp"

namespace supertree {

enum class TreeShape { RootedAll, RootedBinary, UnrootedAll, UnrootedBinary };

inline constexpr std::size_t kDefaultRootedOracleCap = 7;
inline constexpr std::size_t kDefaultUnrootedOracleCap = 6;

namespace detail {

// Mutable parent-array tree used only while growing topologies leaf by leaf.
struct GrowingTree {
  std::vector<int> parent;
  std::vector<LabelId> label;

  RootedTree freeze(const UniversePtr& universe) const {
    RootedTreeBuilder b(universe);
    std::vector<std::vector<NodeId>> kids(parent.size());
    int root = -1;
    for (std::size_t v = 0; v < parent.size(); ++v) {
      if (parent[v] < 0)
        root = static_cast<int>(v);
      else
        kids[static_cast<std::size_t>(parent[v])].push_back(static_cast<NodeId>(v));
    }
    std::function<NodeId(int)> copy = [&](int v) -> NodeId {
      if (label[static_cast<std::size_t>(v)] != kNoLabel) return b.add_leaf(label[static_cast<std::size_t>(v)]);
      std::vector<NodeId> c;
      for (NodeId w : kids[static_cast<std::size_t>(v)]) c.push_back(copy(w));
      return b.add_internal(std::move(c));
    };
    return b.build(copy(root));
  }
};

// Every rooted topology on `labels` arises exactly once by inserting the
// labels in order, each either onto an existing edge (including above the
// root) or, for multifurcating shapes, as a new child of an internal node.
inline bool grow_rooted(GrowingTree& t, const std::vector<LabelId>& labels, std::size_t next, bool binary,
                        const UniversePtr& universe, const std::function<bool(const RootedTree&)>& fn) {
  if (next == labels.size()) return fn(t.freeze(universe));
  const std::size_t existing = t.parent.size();
  for (std::size_t x = 0; x < existing; ++x) {
    // Subdivide the edge above x.
    const int up = t.parent[x];
    const int mid = static_cast<int>(t.parent.size());
    t.parent.push_back(up);
    t.label.push_back(kNoLabel);
    t.parent.push_back(mid);
    t.label.push_back(labels[next]);
    t.parent[x] = mid;
    bool go_on = grow_rooted(t, labels, next + 1, binary, universe, fn);
    t.parent[x] = up;
    t.parent.resize(existing);
    t.label.resize(existing);
    if (!go_on) return false;
  }
  if (!binary) {
    for (std::size_t x = 0; x < existing; ++x) {
      if (t.label[x] != kNoLabel) continue;
      t.parent.push_back(static_cast<int>(x));
      t.label.push_back(labels[next]);
      bool go_on = grow_rooted(t, labels, next + 1, binary, universe, fn);
      t.parent.resize(existing);
      t.label.resize(existing);
      if (!go_on) return false;
    }
  }
  return true;
}

inline bool for_each_rooted(const UniversePtr& universe, const std::vector<LabelId>& labels, bool binary,
                            const std::function<bool(const RootedTree&)>& fn) {
  GrowingTree t{{-1}, {labels.front()}};
  return grow_rooted(t, labels, 1, binary, universe, fn);
}

}  // namespace detail

// Visits each distinct leaf-labelled topology on `labels` once; stops early
// when fn returns false. Unrooted shapes are produced as the smallest label
// joined to every rooted shape on the remaining labels.
template <PhyloTree Tree>
void for_each_tree(const UniversePtr& universe, const LabelSet& labels, TreeShape shape,
                   const std::function<bool(const Tree&)>& fn, std::size_t cap) {
  if (labels.none()) throw std::invalid_argument("enumerate_trees: label set is empty");
  if (labels.count() > cap) throw std::length_error("enumerate_trees: label count above oracle cap");
  std::vector<LabelId> ids = to_vector(labels);
  const bool binary = shape == TreeShape::RootedBinary || shape == TreeShape::UnrootedBinary;
  if constexpr (kIsRooted<Tree>) {
    if (shape != TreeShape::RootedAll && shape != TreeShape::RootedBinary)
      throw std::invalid_argument("enumerate_trees: unrooted shape requested for rooted trees");
    detail::for_each_rooted(universe, ids, binary, fn);
  } else {
    if (shape != TreeShape::UnrootedAll && shape != TreeShape::UnrootedBinary)
      throw std::invalid_argument("enumerate_trees: rooted shape requested for unrooted trees");
    const LabelId anchor = ids.front();
    if (ids.size() == 1) {
      RootedTreeBuilder b(universe);
      fn(unroot_any(b.build(b.add_leaf(anchor))));
      return;
    }
    std::vector<LabelId> rest(ids.begin() + 1, ids.end());
    detail::for_each_rooted(universe, rest, binary, [&](const RootedTree& r) {
      RootedTreeBuilder b(universe);
      std::function<NodeId(NodeId)> copy = [&](NodeId v) -> NodeId {
        if (r.is_leaf(v)) return b.add_leaf(r.label(v));
        std::vector<NodeId> kids;
        for (NodeId c : r.children(v)) kids.push_back(copy(c));
        return b.add_internal(std::move(kids));
      };
      NodeId body = copy(r.root());
      return fn(unroot_any(b.build(b.add_internal({b.add_leaf(anchor), body}))));
    });
  }
}

template <PhyloTree Tree>
std::vector<Tree> enumerate_trees(const UniversePtr& universe, const LabelSet& labels, TreeShape shape,
                                  std::size_t cap = kDefaultRootedOracleCap) {
  std::vector<Tree> out;
  for_each_tree<Tree>(
      universe, labels, shape,
      [&](const Tree& t) {
        out.push_back(t);
        return true;
      },
      cap);
  return out;
}

template <PhyloTree Tree>
struct OracleResult {
  std::size_t size = 0;
  Tree witness;
};

namespace detail {

// Label subsets of `all` with exactly `size` members, in lexicographic order.
inline bool for_each_subset(const std::vector<LabelId>& all, std::size_t size, std::size_t universe_size,
                            const std::function<bool(const LabelSet&)>& fn) {
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  while (true) {
    LabelSet s(universe_size);
    for (std::size_t i : pick) s.set(static_cast<std::size_t>(all[i]));
    if (!fn(s)) return false;
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == all.size() - size + i - 1) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

template <PhyloTree Tree>
OracleResult<Tree> brute_force(const ProblemInstance<Tree>& inst, TreeShape shape,
                               const std::function<bool(const Tree&)>& accept, std::size_t cap) {
  LabelSet all = inst.universe->empty_set();
  for (const auto& t : inst.trees) all |= t.leafset();
  if (all.count() > cap) throw std::length_error("oracle: instance has more labels than the oracle cap");
  std::vector<LabelId> ids = to_vector(all);
  OracleResult<Tree> found;
  for (std::size_t size = ids.size(); size >= 1; --size) {
    bool hit = false;
    for_each_subset(ids, size, inst.universe->size(), [&](const LabelSet& s) {
      for_each_tree<Tree>(
          inst.universe, s, shape,
          [&](const Tree& x) {
            if (!accept(x)) return true;
            found = {size, x};
            hit = true;
            return false;
          },
          cap);
      return !hit;
    });
    if (hit) return found;
  }
  return found;
}

}  // namespace detail

// Largest agreement supertree by exhaustion over label subsets (largest
// first) and all topologies on each subset.
template <PhyloTree Tree>
OracleResult<Tree> brute_masp(const ProblemInstance<Tree>& inst, std::size_t cap = kIsRooted<Tree> ? kDefaultRootedOracleCap
                                                                                                  : kDefaultUnrootedOracleCap) {
  const TreeShape shape = kIsRooted<Tree> ? TreeShape::RootedAll : TreeShape::UnrootedAll;
  return detail::brute_force<Tree>(
      inst, shape, [&](const Tree& x) { return is_agreement_supertree(x, inst); }, cap);
}

// Largest compatible supertree; binary candidates suffice since any binary
// resolution of a compatible supertree is one too.
template <PhyloTree Tree>
OracleResult<Tree> brute_mcsp(const ProblemInstance<Tree>& inst, std::size_t cap = kIsRooted<Tree> ? kDefaultRootedOracleCap
                                                                                                  : kDefaultUnrootedOracleCap) {
  const TreeShape shape = kIsRooted<Tree> ? TreeShape::RootedBinary : TreeShape::UnrootedBinary;
  return detail::brute_force<Tree>(
      inst, shape, [&](const Tree& x) { return is_compatible_supertree(x, inst); }, cap);
}

}  // namespace supertree
