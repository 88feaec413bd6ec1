#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "instance.hpp"

namespace supertree {

// Per-tree dense state id. 0 is always the empty tree.
using StateId = std::int32_t;
inline constexpr StateId kEmptyState = 0;

// Memo key: mixed-radix encoding of a k-tuple of per-tree state ids.
using StateKey = std::uint64_t;

inline constexpr int kMaxBranchBits = 20;

namespace detail {

// Branches hanging from each node: children for rooted trees, neighbors for
// unrooted ones, together with the leaf set behind each branch.
template <PhyloTree Tree>
struct BranchTable {
  std::vector<std::vector<NodeId>> targets;
  std::vector<std::vector<LabelSet>> leaves;

  explicit BranchTable(const Tree& tree) : targets(tree.node_count()), leaves(tree.node_count()) {
    for (std::size_t v = 0; v < tree.node_count(); ++v) {
      auto node = static_cast<NodeId>(v);
      if constexpr (kIsRooted<Tree>) {
        for (NodeId c : tree.children(node)) {
          targets[v].push_back(c);
          leaves[v].push_back(tree.cluster(c));
        }
      } else {
        if (tree.is_leaf(node)) continue;
        for (NodeId w : tree.neighbors(node)) {
          targets[v].push_back(w);
          leaves[v].push_back(side(tree, node, w));
        }
      }
    }
  }

  // Leaves reachable through w without passing v.
  static LabelSet side(const UnrootedTree& tree, NodeId v, NodeId w) {
    LabelSet out = tree.universe()->empty_set();
    std::vector<std::pair<NodeId, NodeId>> stack{{w, v}};
    while (!stack.empty()) {
      auto [x, from] = stack.back();
      stack.pop_back();
      if (tree.is_leaf(x)) {
        out.set(static_cast<std::size_t>(tree.label(x)));
        continue;
      }
      for (NodeId y : tree.neighbors(x))
        if (y != from) stack.push_back({y, x});
    }
    return out;
  }
};

// Copies the part of a tree behind branch (from -> v) into a builder.
template <PhyloTree Tree>
NodeId copy_branch(const Tree& tree, NodeId v, NodeId from, RootedTreeBuilder& b) {
  if (tree.is_leaf(v)) return b.add_leaf(tree.label(v));
  std::vector<NodeId> kids;
  if constexpr (kIsRooted<Tree>) {
    for (NodeId c : tree.children(v)) kids.push_back(copy_branch(tree, c, v, b));
  } else {
    for (NodeId w : tree.neighbors(v))
      if (w != from) kids.push_back(copy_branch(tree, w, v, b));
  }
  return b.add_internal(std::move(kids));
}


}  // namespace detail

// ---------------------------------------------------------------------------
// Cut-subtrees (compatible supertree states)

// A cut-subtree: the empty tree, a leaf, or the branches of `center` picked by
// `selection` joined under a fresh root. Selections always pick at least two
// branches; a single picked branch is stored as the subtree it denotes.
struct CutSubtreeRef {
  enum class Kind : std::uint8_t { Empty, Leaf, Internal };
  Kind kind = Kind::Empty;
  NodeId center = kNoNode;
  std::uint32_t selection = 0;

  bool operator==(const CutSubtreeRef&) const = default;
};

template <PhyloTree Tree>
class CutSubtreeCatalog {
 public:
  explicit CutSubtreeCatalog(const Tree& tree) : tree_(&tree), branches_(tree) {
    const std::size_t nodes = tree.node_count();
    refs_.push_back({});
    leaves_.push_back(tree.universe()->empty_set());
    leaf_state_.assign(nodes, kEmptyState);
    mask_state_.resize(nodes);
    for (std::size_t v = 0; v < nodes; ++v) {
      if (!tree.is_leaf(static_cast<NodeId>(v))) continue;
      leaf_state_[v] = add({CutSubtreeRef::Kind::Leaf, static_cast<NodeId>(v), 0},
                           single(tree.label(static_cast<NodeId>(v))));
    }
    for (std::size_t v = 0; v < nodes; ++v) {
      const auto& targets = branches_.targets[v];
      if (tree.is_leaf(static_cast<NodeId>(v))) continue;
      if (targets.size() > kMaxBranchBits) throw std::length_error("node degree too large for cut-subtree enumeration");
      const std::uint32_t masks = 1u << targets.size();
      mask_state_[v].assign(masks, kEmptyState);
      for (std::uint32_t m = 0; m < masks; ++m) {
        if (std::popcount(m) < 2) continue;
        LabelSet ls = tree.universe()->empty_set();
        for (std::size_t j = 0; j < targets.size(); ++j)
          if (m >> j & 1u) ls |= branches_.leaves[v][j];
        mask_state_[v][m] = add({CutSubtreeRef::Kind::Internal, static_cast<NodeId>(v), m}, std::move(ls));
      }
    }
    // Singleton selections descend into the picked branch.
    for (std::size_t v = 0; v < nodes; ++v) {
      const auto& targets = branches_.targets[v];
      for (std::size_t j = 0; j < targets.size() && !mask_state_[v].empty(); ++j)
        mask_state_[v][1u << j] = whole_branch(static_cast<NodeId>(v), targets[j]);
    }
  }

  std::size_t size() const { return refs_.size(); }
  const CutSubtreeRef& ref(StateId s) const { return refs_[static_cast<std::size_t>(s)]; }
  const LabelSet& leaves(StateId s) const { return leaves_[static_cast<std::size_t>(s)]; }
  const Tree& tree() const { return *tree_; }
  const LabelSet& tree_leafset() const { return tree_->leafset(); }

  bool is_trivial(StateId s) const { return ref(s).kind != CutSubtreeRef::Kind::Internal; }
  LabelId leaf_label(StateId s) const {
    return ref(s).kind == CutSubtreeRef::Kind::Leaf ? tree_->label(ref(s).center) : kNoLabel;
  }

  std::span<const NodeId> branch_targets(NodeId center) const { return branches_.targets[static_cast<std::size_t>(center)]; }

  // State for a selection of center's branches (any popcount).
  StateId canonical(NodeId center, std::uint32_t selection) const {
    if (selection == 0) return kEmptyState;
    return mask_state_[static_cast<std::size_t>(center)][selection];
  }

  StateId leaf_state(NodeId leaf) const { return leaf_state_[static_cast<std::size_t>(leaf)]; }

  // The whole input tree (rooted trees only).
  StateId top() const
    requires kIsRooted<Tree>
  {
    if (tree_->empty()) return kEmptyState;
    NodeId r = tree_->root();
    if (tree_->is_leaf(r)) return leaf_state(r);
    return canonical(r, (1u << tree_->children(r).size()) - 1);
  }

  RootedTree materialize(StateId s) const {
    RootedTreeBuilder b(tree_->universe());
    const auto& r = ref(s);
    switch (r.kind) {
      case CutSubtreeRef::Kind::Empty:
        return b.build(kNoNode);
      case CutSubtreeRef::Kind::Leaf:
        return b.build(b.add_leaf(tree_->label(r.center)));
      case CutSubtreeRef::Kind::Internal:
        break;
    }
    std::vector<NodeId> kids;
    auto targets = branch_targets(r.center);
    for (std::size_t j = 0; j < targets.size(); ++j)
      if (r.selection >> j & 1u) kids.push_back(detail::copy_branch(*tree_, targets[j], r.center, b));
    return b.build(b.add_internal(std::move(kids)));
  }

  std::string describe(StateId s) const {
    const auto& r = ref(s);
    switch (r.kind) {
      case CutSubtreeRef::Kind::Empty:
        return "Empty";
      case CutSubtreeRef::Kind::Leaf:
        return "Leaf(" + tree_->universe()->name(tree_->label(r.center)) + ")";
      case CutSubtreeRef::Kind::Internal:
        break;
    }
    return "Internal(node " + std::to_string(r.center) + ", mask " + std::to_string(r.selection) +
           ") = " + write_newick(materialize(s));
  }

 private:
  LabelSet single(LabelId l) const {
    LabelSet s = tree_->universe()->empty_set();
    s.set(static_cast<std::size_t>(l));
    return s;
  }

  StateId add(CutSubtreeRef r, LabelSet ls) {
    refs_.push_back(r);
    leaves_.push_back(std::move(ls));
    return static_cast<StateId>(refs_.size() - 1);
  }

  // The full branch behind (from -> v), as a cut-subtree rooted at v.
  StateId whole_branch(NodeId from, NodeId v) const {
    if (tree_->is_leaf(v)) return leaf_state(v);
    auto targets = branch_targets(v);
    std::uint32_t m = 0;
    for (std::size_t j = 0; j < targets.size(); ++j)
      if (targets[j] != from) m |= 1u << j;
    return mask_state_[static_cast<std::size_t>(v)][m];
  }

  const Tree* tree_;
  detail::BranchTable<Tree> branches_;
  std::vector<CutSubtreeRef> refs_;
  std::vector<LabelSet> leaves_;
  std::vector<StateId> leaf_state_;
  std::vector<std::vector<StateId>> mask_state_;
};

// All non-empty cut-subtrees of one input tree, in catalog order.
template <PhyloTree Tree>
std::vector<CutSubtreeRef> enumerate_cut_subtrees(const ProblemInstance<Tree>& inst, std::size_t tree_index) {
  CutSubtreeCatalog<Tree> cat(inst.trees.at(tree_index));
  std::vector<CutSubtreeRef> out;
  for (std::size_t s = 1; s < cat.size(); ++s) out.push_back(cat.ref(static_cast<StateId>(s)));
  return out;
}

// ---------------------------------------------------------------------------
// Sub-forests (agreement supertree states)

// Complete subtrees of a rooted tree. For an unrooted tree: rooted at an
// internal node with at most one branch removed, or hung from the midpoint of
// an edge. Rootings at internal nodes alone miss agreement supertrees whose
// restrictions to different inputs need different root positions, e.g.
// (a,b,d); ((a,b),(c,d)); (b,c,d); with answer ((a,b),(c,d)).
struct SubForestRef {
  enum class Kind : std::uint8_t { Empty, Leaf, Complete, FullRooting, EdgeRooting, EdgeMidpoint };
  Kind kind = Kind::Empty;
  NodeId node = kNoNode;
  // EdgeRooting: the neighbor whose branch is left out.
  // EdgeMidpoint: the other end of the subdivided edge.
  NodeId other = kNoNode;

  bool operator==(const SubForestRef&) const = default;
};

template <PhyloTree Tree>
class SubForestCatalog {
 public:
  explicit SubForestCatalog(const Tree& tree) : tree_(&tree) {
    refs_.push_back({});
    children_.emplace_back();
    const std::size_t nodes = tree.node_count();
    node_state_.assign(nodes, kEmptyState);
    if constexpr (kIsRooted<Tree>) {
      for (std::size_t v = 0; v < nodes; ++v) {
        auto node = static_cast<NodeId>(v);
        node_state_[v] = push({tree.is_leaf(node) ? SubForestRef::Kind::Leaf : SubForestRef::Kind::Complete, node});
      }
      for (std::size_t v = 0; v < nodes; ++v)
        for (NodeId c : tree.children(static_cast<NodeId>(v)))
          children_[static_cast<std::size_t>(node_state_[v])].push_back(node_state_[static_cast<std::size_t>(c)]);
    } else {
      using K = SubForestRef::Kind;
      for (std::size_t v = 0; v < nodes; ++v)
        if (tree.is_leaf(static_cast<NodeId>(v))) node_state_[v] = push({K::Leaf, static_cast<NodeId>(v)});
      for (std::size_t v = 0; v < nodes; ++v)
        if (!tree.is_leaf(static_cast<NodeId>(v))) {
          node_state_[v] = push({K::FullRooting, static_cast<NodeId>(v)});
          full_rootings_.push_back(node_state_[v]);
        }
      edge_state_.resize(nodes);
      for (std::size_t v = 0; v < nodes; ++v) {
        auto node = static_cast<NodeId>(v);
        if (tree.is_leaf(node)) continue;
        for (NodeId u : tree.neighbors(node)) edge_state_[v].push_back(push({K::EdgeRooting, node, u}));
      }
      top_rootings_ = full_rootings_;
      for (std::size_t v = 0; v < nodes; ++v)
        for (NodeId u : tree.neighbors(static_cast<NodeId>(v)))
          if (tree.is_leaf(static_cast<NodeId>(v)) ? true : (!tree.is_leaf(u) && static_cast<NodeId>(v) < u))
            top_rootings_.push_back(push({K::EdgeMidpoint, static_cast<NodeId>(v), u}));
      for (std::size_t s = 1; s < refs_.size(); ++s) {
        const auto& r = refs_[s];
        if (r.kind == K::Leaf) continue;
        if (r.kind == K::EdgeMidpoint) {
          children_[s] = {toward(r.other, r.node), toward(r.node, r.other)};
          continue;
        }
        for (NodeId w : tree.neighbors(r.node))
          if (w != r.other) children_[s].push_back(toward(r.node, w));
      }
    }
    leaves_.assign(refs_.size(), tree.universe()->empty_set());
    for (std::size_t s = 1; s < refs_.size(); ++s) leaves_[s] = collect(static_cast<StateId>(s));
  }

  std::size_t size() const { return refs_.size(); }
  const SubForestRef& ref(StateId s) const { return refs_[static_cast<std::size_t>(s)]; }
  const LabelSet& leaves(StateId s) const { return leaves_[static_cast<std::size_t>(s)]; }
  const Tree& tree() const { return *tree_; }
  const LabelSet& tree_leafset() const { return tree_->leafset(); }

  bool is_trivial(StateId s) const {
    auto k = ref(s).kind;
    return k == SubForestRef::Kind::Empty || k == SubForestRef::Kind::Leaf;
  }
  LabelId leaf_label(StateId s) const { return ref(s).kind == SubForestRef::Kind::Leaf ? tree_->label(ref(s).node) : kNoLabel; }

  // States of the subtrees attached to the root of s.
  std::span<const StateId> children_of(StateId s) const {
    if (is_trivial(s)) throw std::invalid_argument("children_of: state has no root subtrees");
    return children_[static_cast<std::size_t>(s)];
  }

  // Rooted trees: the whole tree.
  StateId top() const
    requires kIsRooted<Tree>
  {
    return tree_->empty() ? kEmptyState : node_state_[static_cast<std::size_t>(tree_->root())];
  }

  // Unrooted trees: one state per internal node.
  const std::vector<StateId>& full_rootings() const
    requires(!kIsRooted<Tree>)
  {
    return full_rootings_;
  }

  // Unrooted trees: every rooted version of the whole tree (internal nodes,
  // then edge midpoints).
  const std::vector<StateId>& rootings() const
    requires(!kIsRooted<Tree>)
  {
    return top_rootings_;
  }

  StateId node_state(NodeId v) const { return node_state_[static_cast<std::size_t>(v)]; }

  RootedTree materialize(StateId s) const {
    const auto& r = ref(s);
    RootedTreeBuilder b(tree_->universe());
    switch (r.kind) {
      case SubForestRef::Kind::Empty:
        return b.build(kNoNode);
      case SubForestRef::Kind::Leaf:
        return b.build(b.add_leaf(tree_->label(r.node)));
      case SubForestRef::Kind::Complete:
        if constexpr (kIsRooted<Tree>) return subtree_at(*tree_, r.node);
        break;
      case SubForestRef::Kind::FullRooting:
      case SubForestRef::Kind::EdgeRooting:
        if constexpr (!kIsRooted<Tree>) return orient(*tree_, r.node, r.other);
        break;
      case SubForestRef::Kind::EdgeMidpoint:
        if constexpr (!kIsRooted<Tree>) return root_at_edge(*tree_, r.node, r.other);
        break;
    }
    throw std::logic_error("sub-forest kind does not match tree type");
  }

  std::string describe(StateId s) const {
    static constexpr const char* kNames[] = {"Empty", "Leaf", "Complete", "FullRooting", "EdgeRooting", "EdgeMidpoint"};
    const auto& r = ref(s);
    std::string out = kNames[static_cast<int>(r.kind)];
    if (r.kind == SubForestRef::Kind::Empty) return out;
    out += "(node " + std::to_string(r.node);
    if (r.kind == SubForestRef::Kind::EdgeRooting) out += ", removed " + std::to_string(r.other);
    if (r.kind == SubForestRef::Kind::EdgeMidpoint) out += ", " + std::to_string(r.other);
    return out + ") = " + write_newick(materialize(s));
  }

 private:
  StateId push(SubForestRef r) {
    refs_.push_back(r);
    children_.emplace_back();
    return static_cast<StateId>(refs_.size() - 1);
  }

  // State for the branch at w seen from its neighbor v.
  StateId toward(NodeId v, NodeId w) const {
    if constexpr (!kIsRooted<Tree>) {
      if (tree_->is_leaf(w)) return node_state_[static_cast<std::size_t>(w)];
      auto nb = tree_->neighbors(w);
      for (std::size_t j = 0; j < nb.size(); ++j)
        if (nb[j] == v) return edge_state_[static_cast<std::size_t>(w)][j];
    }
    throw std::logic_error("toward: not adjacent");
  }

  LabelSet collect(StateId s) const {
    const auto& r = ref(s);
    if (r.kind == SubForestRef::Kind::Leaf) {
      LabelSet out = tree_->universe()->empty_set();
      out.set(static_cast<std::size_t>(leaf_label(s)));
      return out;
    }
    if constexpr (kIsRooted<Tree>) {
      return tree_->cluster(r.node);
    } else {
      if (r.kind == SubForestRef::Kind::EdgeMidpoint) return tree_->leafset();
      LabelSet out = tree_->universe()->empty_set();
      for (NodeId w : tree_->neighbors(r.node))
        if (w != r.other) out |= detail::BranchTable<Tree>::side(*tree_, r.node, w);
      return out;
    }
  }

  const Tree* tree_;
  std::vector<SubForestRef> refs_;
  std::vector<std::vector<StateId>> children_;
  std::vector<LabelSet> leaves_;
  std::vector<StateId> node_state_;
  std::vector<std::vector<StateId>> edge_state_;
  std::vector<StateId> full_rootings_;
  std::vector<StateId> top_rootings_;
};

// Maximal subtrees of an unrooted input tree: one full rooting per internal
// node plus two edge rootings per internal edge.
inline std::vector<SubForestRef> enumerate_maximal_subtrees(const UnrootedInstance& inst, std::size_t tree_index) {
  const auto& tree = inst.trees.at(tree_index);
  if (tree.any_internal() == kNoNode) throw std::invalid_argument("tree has no internal node");
  SubForestCatalog<UnrootedTree> cat(tree);
  std::vector<SubForestRef> out;
  for (std::size_t s = 1; s < cat.size(); ++s) {
    const auto& r = cat.ref(static_cast<StateId>(s));
    if (r.kind == SubForestRef::Kind::FullRooting ||
        (r.kind == SubForestRef::Kind::EdgeRooting && !tree.is_leaf(r.other)))
      out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// k-tuples of per-tree states

template <class Catalog>
class ForestSpace {
 public:
  template <PhyloTree Tree>
  explicit ForestSpace(const ProblemInstance<Tree>& inst) {
    catalogs_.reserve(inst.trees.size());
    for (const auto& t : inst.trees) catalogs_.emplace_back(t);
    StateKey stride = 1;
    for (const auto& c : catalogs_) {
      strides_.push_back(stride);
      if (stride > std::numeric_limits<StateKey>::max() / c.size())
        throw std::length_error("state space too large for 64-bit keys");
      stride *= c.size();
    }
    total_ = stride;
    universe_ = inst.universe;
  }

  std::size_t k() const { return catalogs_.size(); }
  const Catalog& catalog(std::size_t i) const { return catalogs_[i]; }
  StateKey key_count() const { return total_; }

  StateKey encode(std::span<const StateId> parts) const {
    StateKey key = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) key += static_cast<StateKey>(parts[i]) * strides_[i];
    return key;
  }

  void decode(StateKey key, std::span<StateId> parts) const {
    for (std::size_t i = 0; i < catalogs_.size(); ++i) {
      parts[i] = static_cast<StateId>(key % catalogs_[i].size());
      key /= catalogs_[i].size();
    }
  }

  std::vector<StateId> decode(StateKey key) const {
    std::vector<StateId> parts(k());
    decode(key, parts);
    return parts;
  }

  bool is_terminal(std::span<const StateId> parts) const {
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (!catalogs_[i].is_trivial(parts[i])) return false;
    return true;
  }

  // Labels of a terminal state that no input tree excludes: a label carried by
  // some leaf part survives iff every tree containing it has it as its part.
  LabelSet lambda(std::span<const StateId> parts) const {
    if (!is_terminal(parts)) throw std::invalid_argument("lambda: state is not terminal");
    LabelSet out = universe_->empty_set();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      LabelId l = catalogs_[i].leaf_label(parts[i]);
      if (l == kNoLabel) continue;
      bool ok = true;
      for (std::size_t j = 0; j < parts.size() && ok; ++j)
        ok = !catalogs_[j].tree_leafset().test(static_cast<std::size_t>(l)) || catalogs_[j].leaf_label(parts[j]) == l;
      if (ok) out.set(static_cast<std::size_t>(l));
    }
    return out;
  }

  // Labels some part carries and no tree holds outside its part. Equals lambda on
  // terminal states; the slots of any decomposition have disjoint admissible
  // sets inside the parent's, so |admissible| bounds the agreement value.
  LabelSet admissible(std::span<const StateId> parts) const {
    LabelSet out = universe_->empty_set();
    for (std::size_t i = 0; i < parts.size(); ++i) out |= catalogs_[i].leaves(parts[i]);
    for (std::size_t j = 0; j < parts.size(); ++j) out -= catalogs_[j].tree_leafset() - catalogs_[j].leaves(parts[j]);
    return out;
  }

  std::size_t total_leaves(std::span<const StateId> parts) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) n += catalogs_[i].leaves(parts[i]).count();
    return n;
  }

  std::string describe(std::span<const StateId> parts) const {
    std::string out = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += "; ";
      out += catalogs_[i].describe(parts[i]);
    }
    return out + "]";
  }

 private:
  std::vector<Catalog> catalogs_;
  std::vector<StateKey> strides_;
  StateKey total_ = 1;
  UniversePtr universe_;
};

template <PhyloTree Tree>
using CutSubforestSpace = ForestSpace<CutSubtreeCatalog<Tree>>;
template <PhyloTree Tree>
using SubForestSpace = ForestSpace<SubForestCatalog<Tree>>;

namespace detail {

// Lexicographic step over per-tree option indices, last tree fastest.
template <class Options>
bool advance_odometer(std::vector<std::size_t>& idx, const Options& options) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < options[i].size()) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace detail

// Visits every unordered bipartite (left, right) of a non-terminal
// cut-subforest. Each tree's root branches are split between the sides; leaf
// parts go wholly to one side; empty parts stay empty on both. Neither side is
// entirely empty. Orientation is fixed by sending the first non-empty part's
// lowest branch (or its leaf) to the left.
template <PhyloTree Tree, class Fn>
void for_each_bipartite(const CutSubforestSpace<Tree>& space, std::span<const StateId> parts, Fn&& fn) {
  if (space.is_terminal(parts)) throw std::invalid_argument("bipartites: state is terminal");
  const std::size_t k = parts.size();
  std::vector<std::vector<std::pair<StateId, StateId>>> options(k);
  bool oriented = false;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& cat = space.catalog(i);
    const auto& r = cat.ref(parts[i]);
    auto& opt = options[i];
    switch (r.kind) {
      case CutSubtreeRef::Kind::Empty:
        opt.push_back({kEmptyState, kEmptyState});
        break;
      case CutSubtreeRef::Kind::Leaf:
        opt.push_back({parts[i], kEmptyState});
        if (oriented) opt.push_back({kEmptyState, parts[i]});
        oriented = true;
        break;
      case CutSubtreeRef::Kind::Internal: {
        const std::uint32_t mask = r.selection;
        const std::uint32_t low = mask & (~mask + 1u);
        // Enumerate submasks in increasing order.
        for (std::uint32_t sub = 0;; sub = (sub - mask) & mask) {
          if (!oriented ? (sub & low) != 0 : true)
            opt.push_back({cat.canonical(r.center, sub), cat.canonical(r.center, mask ^ sub)});
          if (sub == mask) break;
        }
        oriented = true;
        break;
      }
    }
  }
  std::vector<std::size_t> idx(k, 0);
  std::vector<StateId> left(k), right(k);
  while (true) {
    bool right_nonempty = false;
    for (std::size_t i = 0; i < k; ++i) {
      left[i] = options[i][idx[i]].first;
      right[i] = options[i][idx[i]].second;
      right_nonempty = right_nonempty || right[i] != kEmptyState;
    }
    if (right_nonempty) fn(std::span<const StateId>(left), std::span<const StateId>(right));
    if (!detail::advance_odometer(idx, options)) break;
  }
}

// Visits every decomposition of a non-terminal sub-forest into d slots,
// 2 <= d <= d_max, up to slot permutation. Per tree, either the whole part
// goes to one slot, or at least two distinct root subtrees go to distinct
// slots (the rest are dropped); empty parts stay empty everywhere. Every slot
// holds at least one non-empty part. The callback receives d and a row-major
// d x k block of per-tree state ids; a callback returning bool stops the walk
// by returning false.
template <PhyloTree Tree, class Fn>
void for_each_decomposition(const SubForestSpace<Tree>& space, std::span<const StateId> parts, std::size_t d_max,
                            Fn&& fn) {
  if (space.is_terminal(parts)) throw std::invalid_argument("decompositions: state is terminal");
  const std::size_t k = parts.size();
  // options[i]: alternative item lists for tree i.
  std::vector<std::vector<std::vector<StateId>>> options(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& cat = space.catalog(i);
    if (parts[i] == kEmptyState) {
      options[i].push_back({});
      continue;
    }
    options[i].push_back({parts[i]});
    if (cat.is_trivial(parts[i])) continue;
    auto kids = cat.children_of(parts[i]);
    if (kids.size() > kMaxBranchBits) throw std::length_error("node degree too large for decomposition enumeration");
    for (std::uint32_t m = 0; m < (1u << kids.size()); ++m) {
      if (std::popcount(m) < 2) continue;
      std::vector<StateId> items;
      for (std::size_t j = 0; j < kids.size(); ++j)
        if (m >> j & 1u) items.push_back(kids[j]);
      options[i].push_back(std::move(items));
    }
  }

  std::vector<std::pair<std::size_t, StateId>> items;
  std::vector<StateId> blocks;
  std::size_t used = 0;
  bool stopped = false;
  std::function<void(std::size_t)> place = [&](std::size_t t) {
    if (t == items.size()) {
      if (used < 2) return;
      std::span<const StateId> view(blocks.data(), used * k);
      if constexpr (std::is_same_v<std::invoke_result_t<Fn&, std::size_t, std::span<const StateId>>, bool>)
        stopped = !fn(used, view);
      else
        fn(used, view);
      return;
    }
    auto [tree, state] = items[t];
    for (std::size_t b = 0; b < used && !stopped; ++b) {
      StateId& cell = blocks[b * k + tree];
      if (cell != kEmptyState) continue;
      cell = state;
      place(t + 1);
      cell = kEmptyState;
    }
    if (used < d_max && !stopped) {
      blocks[used * k + tree] = state;
      ++used;
      place(t + 1);
      --used;
      blocks[used * k + tree] = kEmptyState;
    }
  };

  std::vector<std::size_t> idx(k, 0);
  while (true) {
    items.clear();
    for (std::size_t i = 0; i < k; ++i)
      for (StateId s : options[i][idx[i]]) items.push_back({i, s});
    blocks.assign(std::max<std::size_t>(items.size(), 1) * k, kEmptyState);
    used = 0;
    place(0);
    if (stopped || !detail::advance_odometer(idx, options)) break;
  }
}

}  // namespace supertree
