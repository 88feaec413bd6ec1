#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "newick.hpp"
#include "topology.hpp"

namespace supertree {

// T|S: leaves outside S removed, degree-two nodes suppressed. May be empty.
inline RootedTree restrict(const RootedTree& tree, const LabelSet& keep) {
  RootedTreeBuilder b(tree.universe());
  if (tree.empty()) return b.build(kNoNode);
  std::function<NodeId(NodeId)> copy = [&](NodeId v) -> NodeId {
    if (tree.is_leaf(v)) return keep.test(static_cast<std::size_t>(tree.label(v))) ? b.add_leaf(tree.label(v)) : kNoNode;
    std::vector<NodeId> kids;
    for (NodeId c : tree.children(v))
      if (tree.cluster(c).intersects(keep)) kids.push_back(copy(c));
    return b.add_internal_dropping_empty(kids);
  };
  return b.build(copy(tree.root()));
}

inline UnrootedTree restrict(const UnrootedTree& tree, const LabelSet& keep) {
  return unroot_any(restrict(canonical_rooting(tree), keep));
}

// Leaf sets below every node.
inline std::vector<LabelSet> clusters(const RootedTree& tree) {
  std::vector<LabelSet> out;
  out.reserve(tree.node_count());
  for (std::size_t v = 0; v < tree.node_count(); ++v) out.push_back(tree.cluster(static_cast<NodeId>(v)));
  std::sort(out.begin(), out.end());
  return out;
}

// One side of every edge bipartition, normalized to the side without the
// smallest leaf. Sorted.
inline std::vector<LabelSet> splits(const UnrootedTree& tree) {
  std::vector<LabelSet> out;
  if (tree.leaf_count() < 2) return out;
  RootedTree r = canonical_rooting(tree);
  const auto smallest = static_cast<std::size_t>(min_label(tree.leafset()));
  for (std::size_t v = 0; v < r.node_count(); ++v) {
    if (static_cast<NodeId>(v) == r.root()) continue;
    LabelSet side = r.cluster(static_cast<NodeId>(v));
    if (side.test(smallest)) side = tree.leafset() - side;
    out.push_back(std::move(side));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {
inline bool sorted_includes(const std::vector<LabelSet>& big, const std::vector<LabelSet>& small) {
  return std::all_of(small.begin(), small.end(),
                     [&](const LabelSet& s) { return std::binary_search(big.begin(), big.end(), s); });
}
}  // namespace detail

// True iff `refined` can be contracted to `coarse`. Requires equal leaf sets.
inline bool refines(const RootedTree& refined, const RootedTree& coarse) {
  if (refined.leafset() != coarse.leafset()) throw std::invalid_argument("refines: leaf sets differ");
  if (refined.leaf_count() <= 2) return true;
  return detail::sorted_includes(clusters(refined), clusters(coarse));
}

inline bool refines(const UnrootedTree& refined, const UnrootedTree& coarse) {
  if (refined.leafset() != coarse.leafset()) throw std::invalid_argument("refines: leaf sets differ");
  if (refined.leaf_count() <= 2) return true;
  return detail::sorted_includes(splits(refined), splits(coarse));
}

// Leaf-labelled isomorphism, decided on canonical Newick.
inline bool equals_canonical(const RootedTree& a, const RootedTree& b) { return write_newick(a) == write_newick(b); }
inline bool equals_canonical(const UnrootedTree& a, const UnrootedTree& b) { return write_newick(a) == write_newick(b); }

}  // namespace supertree
