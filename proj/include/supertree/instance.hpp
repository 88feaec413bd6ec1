#pragma once

#include <algorithm>
#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "newick.hpp"
#include "tree_ops.hpp"

namespace supertree {

template <class Tree>
concept PhyloTree = std::same_as<Tree, RootedTree> || std::same_as<Tree, UnrootedTree>;

template <PhyloTree Tree>
inline constexpr bool kIsRooted = std::is_same_v<Tree, RootedTree>;

// Raised by solvers for inputs outside their contract (unrooted trees with
// fewer than three leaves).
class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <PhyloTree Tree>
Tree tree_from_ast(const NewickAst& ast, UniversePtr universe) {
  if constexpr (kIsRooted<Tree>)
    return to_rooted(ast, std::move(universe));
  else
    return to_unrooted(ast, std::move(universe));
}

// k input trees over one shared label universe.
template <PhyloTree Tree>
struct ProblemInstance {
  UniversePtr universe;
  std::vector<Tree> trees;

  std::size_t k() const { return trees.size(); }

  // Size of the union of the input leaf sets.
  std::size_t n() const {
    LabelSet all = universe->empty_set();
    for (const auto& t : trees) all |= t.leafset();
    return all.count();
  }

  // Maximum node degree: children for rooted trees, neighbors for unrooted.
  int max_degree() const {
    int d = 0;
    for (const auto& t : trees) d = std::max(d, t.max_degree());
    return d;
  }

  // Parses a candidate tree over this instance's universe.
  Tree parse(std::string_view newick) const { return tree_from_ast<Tree>(parse_newick_ast(newick), universe); }
};

using RootedInstance = ProblemInstance<RootedTree>;
using UnrootedInstance = ProblemInstance<UnrootedTree>;

// Builds an instance from parsed trees; the universe is the union of their labels.
template <PhyloTree Tree>
ProblemInstance<Tree> make_instance(const std::vector<NewickAst>& asts) {
  if (asts.empty()) throw std::invalid_argument("an instance needs at least one tree");
  std::vector<std::string> labels;
  for (const auto& a : asts) a.collect_labels(labels);
  ProblemInstance<Tree> inst{make_universe(labels), {}};
  for (const auto& a : asts) inst.trees.push_back(tree_from_ast<Tree>(a, inst.universe));
  return inst;
}

template <PhyloTree Tree>
ProblemInstance<Tree> make_instance(const std::vector<std::string>& newicks) {
  std::vector<NewickAst> asts;
  for (const auto& s : newicks) asts.push_back(parse_newick_ast(s));
  return make_instance<Tree>(asts);
}

// X|L(Ti) = Ti|L(X) for every input tree.
template <PhyloTree Tree>
bool is_agreement_supertree(const Tree& x, const ProblemInstance<Tree>& inst) {
  for (const auto& t : inst.trees)
    if (!equals_canonical(restrict(x, t.leafset()), restrict(t, x.leafset()))) return false;
  return true;
}

// Y|L(Ti) refines Ti|L(Y) for every input tree.
template <PhyloTree Tree>
bool is_compatible_supertree(const Tree& y, const ProblemInstance<Tree>& inst) {
  for (const auto& t : inst.trees)
    if (!refines(restrict(y, t.leafset()), restrict(t, y.leafset()))) return false;
  return true;
}

template <PhyloTree Tree>
void require_solvable(const ProblemInstance<Tree>& inst) {
  if (inst.trees.empty()) throw std::invalid_argument("an instance needs at least one tree");
  for (std::size_t i = 0; i < inst.trees.size(); ++i)
    if (inst.trees[i].empty()) throw InfeasibleInput("input tree " + std::to_string(i + 1) + " is empty");
  if constexpr (!kIsRooted<Tree>) {
    for (std::size_t i = 0; i < inst.trees.size(); ++i)
      if (inst.trees[i].degenerate())
        throw InfeasibleInput("unrooted input tree " + std::to_string(i + 1) + " has fewer than 3 leaves");
  }
}

}  // namespace supertree
