#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "labels.hpp"

namespace supertree {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct RootedNode {
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  LabelId label = kNoLabel;  // set iff the node is a leaf
};

// Arena-backed rooted phylogenetic tree. Every internal node has at least two
// children; a single-leaf tree has the leaf as its root; the empty tree has no
// nodes. Immutable once built.
class RootedTree {
 public:
  RootedTree() = default;
  explicit RootedTree(UniversePtr universe) : universe_(std::move(universe)), leafset_(universe_->empty_set()) {}

  const UniversePtr& universe() const { return universe_; }
  bool empty() const { return root_ == kNoNode; }
  NodeId root() const { return root_; }
  std::size_t node_count() const { return nodes_.size(); }
  const RootedNode& node(NodeId v) const { return nodes_[static_cast<std::size_t>(v)]; }
  std::span<const NodeId> children(NodeId v) const { return node(v).children; }
  NodeId parent(NodeId v) const { return node(v).parent; }
  bool is_leaf(NodeId v) const { return node(v).label != kNoLabel; }
  LabelId label(NodeId v) const { return node(v).label; }

  const LabelSet& leafset() const { return leafset_; }
  std::size_t leaf_count() const { return leafset_.count(); }
  // Leaves below v (the cluster of v).
  const LabelSet& cluster(NodeId v) const { return clusters_[static_cast<std::size_t>(v)]; }
  // Smallest label id below v; drives canonical child order.
  LabelId min_label_below(NodeId v) const { return min_label_[static_cast<std::size_t>(v)]; }

  // Maximum number of children over all nodes.
  int max_degree() const {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.children.size());
    return static_cast<int>(d);
  }

  bool is_binary() const {
    for (const auto& n : nodes_)
      if (n.label == kNoLabel && n.children.size() != 2) return false;
    return true;
  }

 private:
  friend class RootedTreeBuilder;

  UniversePtr universe_;
  std::vector<RootedNode> nodes_;
  NodeId root_ = kNoNode;
  LabelSet leafset_;
  std::vector<LabelSet> clusters_;
  std::vector<LabelId> min_label_;
};

// Collects an arbitrary rooted topology, then normalizes it on build():
// childless internal nodes vanish and single-child nodes are suppressed.
class RootedTreeBuilder {
 public:
  explicit RootedTreeBuilder(UniversePtr universe) : universe_(std::move(universe)) {}

  NodeId add_leaf(LabelId label) {
    if (label < 0 || static_cast<std::size_t>(label) >= universe_->size())
      throw std::out_of_range("label id outside universe");
    raw_.push_back({kNoNode, {}, label});
    return static_cast<NodeId>(raw_.size() - 1);
  }

  NodeId add_internal(std::vector<NodeId> children) {
    raw_.push_back({kNoNode, std::move(children), kNoLabel});
    return static_cast<NodeId>(raw_.size() - 1);
  }

  // Adds an internal node whose children may include kNoNode placeholders.
  NodeId add_internal_dropping_empty(const std::vector<NodeId>& children) {
    std::vector<NodeId> kept;
    for (NodeId c : children)
      if (c != kNoNode) kept.push_back(c);
    if (kept.empty()) return kNoNode;
    if (kept.size() == 1) return kept.front();
    return add_internal(std::move(kept));
  }

  // Throws std::invalid_argument on duplicate leaf labels.
  RootedTree build(NodeId root) const {
    RootedTree tree(universe_);
    if (root == kNoNode) return tree;
    NodeId top = normalize(root, tree);
    if (top == kNoNode) return tree;
    // Renumber in preorder so the root is node 0.
    std::vector<NodeId> order;
    order.reserve(tree.nodes_.size());
    std::vector<NodeId> stack{top};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      order.push_back(v);
      const auto& ch = tree.nodes_[static_cast<std::size_t>(v)].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    std::vector<NodeId> new_id(tree.nodes_.size(), kNoNode);
    for (std::size_t i = 0; i < order.size(); ++i) new_id[static_cast<std::size_t>(order[i])] = static_cast<NodeId>(i);
    std::vector<RootedNode> nodes(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const RootedNode& old = tree.nodes_[static_cast<std::size_t>(order[i])];
      nodes[i].label = old.label;
      for (NodeId c : old.children) {
        NodeId nc = new_id[static_cast<std::size_t>(c)];
        nodes[i].children.push_back(nc);
        nodes[static_cast<std::size_t>(nc)].parent = static_cast<NodeId>(i);
      }
    }
    tree.nodes_ = std::move(nodes);
    tree.root_ = 0;
    finalize(tree);
    return tree;
  }

 private:
  NodeId normalize(NodeId v, RootedTree& out) const {
    const RootedNode& r = raw_.at(static_cast<std::size_t>(v));
    if (r.label != kNoLabel) {
      out.nodes_.push_back({kNoNode, {}, r.label});
      return static_cast<NodeId>(out.nodes_.size() - 1);
    }
    std::vector<NodeId> kids;
    for (NodeId c : r.children) {
      NodeId k = normalize(c, out);
      if (k != kNoNode) kids.push_back(k);
    }
    if (kids.empty()) return kNoNode;
    if (kids.size() == 1) return kids.front();
    out.nodes_.push_back({kNoNode, std::move(kids), kNoLabel});
    return static_cast<NodeId>(out.nodes_.size() - 1);
  }

  static void finalize(RootedTree& t) {
    const std::size_t n = t.nodes_.size();
    t.clusters_.assign(n, t.universe_->empty_set());
    t.min_label_.assign(n, kNoLabel);
    t.leafset_ = t.universe_->empty_set();
    // Preorder numbering: children have larger ids than parents.
    for (std::size_t i = n; i-- > 0;) {
      auto& node = t.nodes_[i];
      if (node.label != kNoLabel) {
        auto l = static_cast<std::size_t>(node.label);
        if (t.leafset_.test(l))
          throw std::invalid_argument("duplicate leaf label '" + t.universe_->name(node.label) + "'");
        t.leafset_.set(l);
        t.clusters_[i].set(l);
        t.min_label_[i] = node.label;
        continue;
      }
      LabelId m = kNoLabel;
      for (NodeId c : node.children) {
        t.clusters_[i] |= t.clusters_[static_cast<std::size_t>(c)];
        LabelId cm = t.min_label_[static_cast<std::size_t>(c)];
        if (m == kNoLabel || cm < m) m = cm;
      }
      t.min_label_[i] = m;
    }
  }

  UniversePtr universe_;
  std::vector<RootedNode> raw_;
};

struct UnrootedNode {
  std::vector<NodeId> neighbors;
  LabelId label = kNoLabel;  // set iff the node is a leaf
};

// Arena-backed unrooted phylogenetic tree. Leaves have one neighbor, internal
// nodes at least three. Trees with fewer than three leaves are representable
// (a single node, or a leaf-leaf edge) but flagged as degenerate.
class UnrootedTree {
 public:
  UnrootedTree() = default;
  explicit UnrootedTree(UniversePtr universe) : universe_(std::move(universe)), leafset_(universe_->empty_set()) {}

  const UniversePtr& universe() const { return universe_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t node_count() const { return nodes_.size(); }
  const UnrootedNode& node(NodeId v) const { return nodes_[static_cast<std::size_t>(v)]; }
  std::span<const NodeId> neighbors(NodeId v) const { return node(v).neighbors; }
  bool is_leaf(NodeId v) const { return node(v).label != kNoLabel; }
  LabelId label(NodeId v) const { return node(v).label; }
  const LabelSet& leafset() const { return leafset_; }
  std::size_t leaf_count() const { return leafset_.count(); }
  bool degenerate() const { return leaf_count() < 3; }

  NodeId leaf_node(LabelId l) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].label == l) return static_cast<NodeId>(i);
    return kNoNode;
  }

  // Some internal node, or kNoNode for degenerate trees.
  NodeId any_internal() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].label == kNoLabel) return static_cast<NodeId>(i);
    return kNoNode;
  }

  int max_degree() const {
    std::size_t d = 0;
    for (const auto& n : nodes_)
      if (n.label == kNoLabel) d = std::max(d, n.neighbors.size());
    return static_cast<int>(d);
  }

 private:
  friend class UnrootedTreeBuilder;

  UniversePtr universe_;
  std::vector<UnrootedNode> nodes_;
  LabelSet leafset_;
};

class UnrootedTreeBuilder {
 public:
  explicit UnrootedTreeBuilder(UniversePtr universe) : universe_(std::move(universe)) {}

  NodeId add_node(LabelId label = kNoLabel) {
    nodes_.push_back({{}, label});
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void add_edge(NodeId a, NodeId b) {
    nodes_.at(static_cast<std::size_t>(a)).neighbors.push_back(b);
    nodes_.at(static_cast<std::size_t>(b)).neighbors.push_back(a);
  }

  // Validates the unrooted invariants; throws std::invalid_argument.
  UnrootedTree build() && {
    UnrootedTree t(universe_);
    std::size_t edges = 0;
    for (const auto& n : nodes_) edges += n.neighbors.size();
    edges /= 2;
    if (!nodes_.empty() && edges != nodes_.size() - 1) throw std::invalid_argument("unrooted tree is not a tree");
    for (const auto& n : nodes_) {
      if (n.label != kNoLabel) {
        auto l = static_cast<std::size_t>(n.label);
        if (t.leafset_.test(l))
          throw std::invalid_argument("duplicate leaf label '" + universe_->name(n.label) + "'");
        t.leafset_.set(l);
        if (nodes_.size() > 1 && n.neighbors.size() != 1) throw std::invalid_argument("leaf with degree != 1");
      } else if (n.neighbors.size() < 3) {
        throw std::invalid_argument("internal node of degree < 3");
      }
    }
    if (!nodes_.empty()) {
      std::vector<bool> seen(nodes_.size(), false);
      std::vector<NodeId> stack{0};
      seen[0] = true;
      std::size_t reached = 1;
      while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : nodes_[static_cast<std::size_t>(v)].neighbors)
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = true;
            ++reached;
            stack.push_back(w);
          }
      }
      if (reached != nodes_.size()) throw std::invalid_argument("unrooted tree is disconnected");
    }
    t.nodes_ = std::move(nodes_);
    return t;
  }

 private:
  UniversePtr universe_;
  std::vector<UnrootedNode> nodes_;
};

}  // namespace supertree
