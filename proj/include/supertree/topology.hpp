#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "tree.hpp"

namespace supertree {

// Rooted copy of an unrooted tree hanging from `root`, every edge oriented
// away from it. When `removed` names a neighbor of the root, that branch is
// left out. `root` must be internal unless the tree is a single node.
inline RootedTree orient(const UnrootedTree& tree, NodeId root, NodeId removed = kNoNode) {
  RootedTreeBuilder b(tree.universe());
  if (tree.empty()) return b.build(kNoNode);
  std::function<NodeId(NodeId, NodeId)> copy = [&](NodeId v, NodeId from) -> NodeId {
    if (tree.is_leaf(v)) return b.add_leaf(tree.label(v));
    std::vector<NodeId> kids;
    for (NodeId w : tree.neighbors(v))
      if (w != from) kids.push_back(copy(w, v));
    return b.add_internal(std::move(kids));
  };
  if (tree.is_leaf(root)) {
    if (tree.node_count() != 1) throw std::invalid_argument("cannot orient an unrooted tree at a leaf");
    return b.build(b.add_leaf(tree.label(root)));
  }
  return b.build(copy(root, removed));
}

// Rooted tree obtained by rooting at internal node v and optionally removing
// the nontrivial branch toward neighbor `removed`.
inline RootedTree root_at(const UnrootedTree& tree, NodeId v, NodeId removed = kNoNode) {
  if (v < 0 || static_cast<std::size_t>(v) >= tree.node_count() || tree.is_leaf(v))
    throw std::invalid_argument("root_at: v must be an internal node");
  if (removed != kNoNode) {
    bool adjacent = false;
    for (NodeId w : tree.neighbors(v)) adjacent = adjacent || w == removed;
    if (!adjacent) throw std::invalid_argument("root_at: removed is not a neighbor of v");
    if (tree.is_leaf(removed)) throw std::invalid_argument("root_at: removed branch is trivial (a leaf)");
  }
  return orient(tree, v, removed);
}

// Rooted tree obtained by subdividing the edge x-y and hanging the tree from
// the new node. Pendant edges are allowed.
inline RootedTree root_at_edge(const UnrootedTree& tree, NodeId x, NodeId y) {
  bool adjacent = false;
  if (x >= 0 && static_cast<std::size_t>(x) < tree.node_count())
    for (NodeId w : tree.neighbors(x)) adjacent = adjacent || w == y;
  if (!adjacent) throw std::invalid_argument("root_at_edge: x and y are not adjacent");
  RootedTreeBuilder b(tree.universe());
  std::function<NodeId(NodeId, NodeId)> copy = [&](NodeId v, NodeId from) -> NodeId {
    if (tree.is_leaf(v)) return b.add_leaf(tree.label(v));
    std::vector<NodeId> kids;
    for (NodeId w : tree.neighbors(v))
      if (w != from) kids.push_back(copy(w, v));
    return b.add_internal(std::move(kids));
  };
  NodeId left = copy(x, y);
  NodeId right = copy(y, x);
  return b.build(b.add_internal({left, right}));
}

// Unrooted version of any rooted tree, including the empty, single-leaf and
// two-leaf cases. A root with exactly two children is dissolved into an edge.
inline UnrootedTree unroot_any(const RootedTree& tree) {
  UnrootedTreeBuilder b(tree.universe());
  if (tree.empty()) return std::move(b).build();
  std::vector<NodeId> map(tree.node_count(), kNoNode);
  const NodeId r = tree.root();
  const bool dissolve_root = !tree.is_leaf(r) && tree.children(r).size() == 2;
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    auto v = static_cast<NodeId>(i);
    if (dissolve_root && v == r) continue;
    map[i] = b.add_node(tree.label(v));
  }
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    auto v = static_cast<NodeId>(i);
    NodeId p = tree.parent(v);
    if (p == kNoNode || (dissolve_root && p == r)) continue;
    b.add_edge(map[static_cast<std::size_t>(p)], map[i]);
  }
  if (dissolve_root) {
    auto ch = tree.children(r);
    b.add_edge(map[static_cast<std::size_t>(ch[0])], map[static_cast<std::size_t>(ch[1])]);
  }
  return std::move(b).build();
}

inline UnrootedTree unroot(const RootedTree& tree) {
  if (tree.leaf_count() < 2) throw std::invalid_argument("unroot: tree needs at least two leaves");
  return unroot_any(tree);
}

// Deterministic rooted view of an unrooted tree: hung from the neighbor of the
// smallest leaf. Degenerate trees map to the empty tree, a leaf, or a cherry.
inline RootedTree canonical_rooting(const UnrootedTree& tree) {
  if (tree.node_count() == 2) {
    RootedTreeBuilder b(tree.universe());
    return b.build(b.add_internal({b.add_leaf(tree.label(0)), b.add_leaf(tree.label(1))}));
  }
  if (tree.node_count() <= 1) return orient(tree, 0);
  NodeId smallest = tree.leaf_node(min_label(tree.leafset()));
  return orient(tree, tree.neighbors(smallest)[0]);
}

// Complete subtree of a rooted tree below node v.
inline RootedTree subtree_at(const RootedTree& tree, NodeId v) {
  RootedTreeBuilder b(tree.universe());
  std::function<NodeId(NodeId)> copy = [&](NodeId u) -> NodeId {
    if (tree.is_leaf(u)) return b.add_leaf(tree.label(u));
    std::vector<NodeId> kids;
    for (NodeId c : tree.children(u)) kids.push_back(copy(c));
    return b.add_internal(std::move(kids));
  };
  return b.build(copy(v));
}

}  // namespace supertree
