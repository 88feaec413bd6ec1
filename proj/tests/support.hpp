#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "supertree/supertree.hpp"

namespace supertree::testing {

// Universe of one-character labels, e.g. letters("abcd").
inline UniversePtr letters(std::string_view chars) {
  std::vector<std::string> names;
  for (char c : chars) names.emplace_back(1, c);
  return make_universe(std::move(names));
}

inline RootedTree R(const UniversePtr& u, std::string_view newick) { return parse_rooted(newick, u); }
inline UnrootedTree U(const UniversePtr& u, std::string_view newick) { return parse_unrooted(newick, u); }

inline RootedInstance rooted(const std::vector<std::string>& trees) { return make_instance<RootedTree>(trees); }
inline UnrootedInstance unrooted(const std::vector<std::string>& trees) { return make_instance<UnrootedTree>(trees); }

// Small random instances for oracle comparisons: k in 1..3, n in 3..6,
// D <= 3 (D = 3 for unrooted since internal nodes need degree 3).
inline GeneratorConfig small_config(std::uint64_t seed, bool is_rooted) {
  GeneratorConfig g;
  g.seed = seed;
  g.k = 1 + static_cast<int>(seed % 3);
  g.n = 3 + static_cast<int>((seed / 3) % 4);
  g.max_degree = is_rooted ? 2 + static_cast<int>(seed % 2) : 3;
  g.rooted = is_rooted;
  return g;
}

template <PhyloTree Tree>
ProblemInstance<Tree> small_instance(std::uint64_t seed) {
  return load_instance_text<Tree>(generate_instance(small_config(seed, kIsRooted<Tree>)));
}

template <PhyloTree Tree>
ProblemInstance<Tree> generated(std::uint64_t seed, int k, int n, int d, double min_fraction = 0.5) {
  GeneratorConfig g;
  g.seed = seed;
  g.k = k;
  g.n = n;
  g.max_degree = d;
  g.rooted = kIsRooted<Tree>;
  g.min_fraction = min_fraction;
  return load_instance_text<Tree>(generate_instance(g));
}

// Single random tree on n labels with max degree d.
template <PhyloTree Tree>
Tree random_tree(std::uint64_t seed, int n, int d) {
  return generated<Tree>(seed, 1, n, d, 1.0).trees.front();
}


// First `base` trees plus tree `extra` restricted to the labels they already cover, so the
// extra tree adds constraints but no labels. Empty optional when the restriction degenerates.
template <PhyloTree Tree>
std::optional<ProblemInstance<Tree>> with_restricted_extra(const ProblemInstance<Tree>& inst, std::size_t base,
                                                           std::size_t extra) {
  ProblemInstance<Tree> out{inst.universe, {inst.trees.begin(), inst.trees.begin() + base}};
  LabelSet covered = inst.universe->empty_set();
  for (const auto& t : out.trees) covered |= t.leafset();
  Tree r = restrict(inst.trees[extra], covered & inst.trees[extra].leafset());
  if (r.leaf_count() < (kIsRooted<Tree> ? 1u : 3u)) return std::nullopt;
  out.trees.push_back(std::move(r));
  return out;
}

}  // namespace supertree::testing
