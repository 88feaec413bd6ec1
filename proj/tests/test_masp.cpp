#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace supertree;
using namespace supertree::testing;

namespace {

int max_degree_of(const RootedTree& t) { return t.empty() ? 0 : t.max_degree(); }

TEST(MaspRooted, Examples) {
  EXPECT_EQ(masp_rooted(rooted({"((a,b),c);", "((a,b),c);"})).size, 3u);
  EXPECT_EQ(masp_rooted(rooted({"(a,b,c);", "((a,b),c);"})).size, 2u);
  auto r = masp_rooted(rooted({"((a,b),c);", "((a,b),d);"}));
  EXPECT_EQ(r.size, 4u);
  EXPECT_EQ(write_newick(r.tree), "(((a,b),c),d);");
  EXPECT_EQ(masp_rooted(rooted({"((a,b),c);", "((a,c),b);"})).size, 2u);
}

TEST(MaspRooted, KeepsMultifurcations) {
  auto inst = rooted({"(a,b,c,d);", "(a,b,(c,e));"});
  auto r = masp_rooted(inst);
  EXPECT_TRUE(is_agreement_supertree(r.tree, inst));
  EXPECT_EQ(r.size, brute_masp(inst).size);
}

TEST(MaspRooted, WitnessAgreesAndRespectsDegreeBound) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = generated<RootedTree>(seed, 1 + seed % 3, 8, 2 + seed % 3);
    auto r = masp_rooted(inst);
    EXPECT_EQ(r.tree.leaf_count(), r.size);
    EXPECT_TRUE(is_agreement_supertree(r.tree, inst));
    EXPECT_LE(max_degree_of(r.tree), static_cast<int>(inst.k()) * inst.max_degree() + 1);
  }
}

TEST(MaspUnrooted, Examples) {
  auto same = unrooted({"((a,b),(c,d),e);", "((a,b),(c,d),e);"});
  EXPECT_EQ(masp_unrooted(same).size, 5u);

  auto quartets = unrooted({"((a,b),(c,d));", "((a,c),(b,d));"});
  auto r = masp_unrooted(quartets);
  EXPECT_EQ(r.size, 3u);
  EXPECT_TRUE(is_agreement_supertree(r.tree, quartets));

  auto stars = unrooted({"(a,b,c);", "(d,e,f);"});
  r = masp_unrooted(stars);
  EXPECT_EQ(r.size, 6u);
  EXPECT_TRUE(is_agreement_supertree(r.tree, stars));
}

// Two stars pin the root to different internal nodes of the answer, so the
// answer is only reachable by hanging the quartet from its middle edge.
TEST(MaspUnrooted, StarsForcingDifferentRootPositions) {
  auto inst = unrooted({"(b,a,d);", "((d,c),a,b);", "(d,b,c);"});
  auto r = masp_unrooted(inst);
  EXPECT_EQ(r.size, 4u);
  EXPECT_TRUE(equals_canonical(r.tree, inst.parse("((a,b),(c,d));")));
  EXPECT_EQ(brute_masp(inst).size, 4u);
}

TEST(MaspUnrooted, SmallTreesAreInfeasible) {
  EXPECT_THROW(masp_unrooted(unrooted({"(a,b);", "((a,b),(c,d));"})), InfeasibleInput);
}

TEST(Masp, MemoIsSelfConsistent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto ri = small_instance<RootedTree>(seed);
    MaspSolver<RootedTree> rs(ri);
    rs.solve();
    EXPECT_TRUE(rs.verify_memo()) << seed;
    auto ui = small_instance<UnrootedTree>(seed);
    MaspSolver<UnrootedTree> us(ui);
    us.solve();
    EXPECT_TRUE(us.verify_memo()) << seed;
  }
}

TEST(Masp, MatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto ri = small_instance<RootedTree>(seed);
    EXPECT_EQ(masp_rooted(ri).size, brute_masp(ri).size) << generate_instance(small_config(seed, true));
    auto ui = small_instance<UnrootedTree>(seed);
    EXPECT_EQ(masp_unrooted(ui).size, brute_masp(ui).size) << generate_instance(small_config(seed, false));
  }
}

// Solving every rooted variant separately gives the same answer as the
// shared memo.
TEST(MaspUnrooted, SharedMemoMatchesPerVariantSolves) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = generated<UnrootedTree>(seed, 2, 5, 3);
    std::vector<std::vector<RootedTree>> variants(inst.k());
    for (std::size_t i = 0; i < inst.k(); ++i) {
      const UnrootedTree& t = inst.trees[i];
      for (std::size_t v = 0; v < t.node_count(); ++v) {
        auto node = static_cast<NodeId>(v);
        if (!t.is_leaf(node)) variants[i].push_back(root_at(t, node));
        for (NodeId w : t.neighbors(node))
          if (t.is_leaf(node) || (!t.is_leaf(w) && node < w)) variants[i].push_back(root_at_edge(t, node, w));
      }
    }
    std::size_t best = 0;
    std::vector<std::size_t> idx(inst.k(), 0);
    do {
      RootedInstance rv{inst.universe, {}};
      for (std::size_t i = 0; i < inst.k(); ++i) rv.trees.push_back(variants[i][idx[i]]);
      best = std::max(best, masp_rooted(rv).size);
    } while (detail::advance_odometer(idx, variants));
    MaspSolver<UnrootedTree> shared(inst);
    EXPECT_EQ(shared.solve().size, best) << seed;

    // Every top-level state's memo value matches the rooted solve of that variant.
    const auto& space = shared.space();
    std::vector<StateId> top(inst.k());
    for (std::size_t i = 0; i < inst.k(); ++i) top[i] = space.catalog(i).rootings()[seed % space.catalog(i).rootings().size()];
    RootedInstance rv{inst.universe, {}};
    for (std::size_t i = 0; i < inst.k(); ++i) rv.trees.push_back(space.catalog(i).materialize(top[i]));
    EXPECT_EQ(static_cast<std::size_t>(shared.value(space.encode(top))), masp_rooted(rv).size);
  }
}

template <PhyloTree Tree>
void check_invariants(std::uint64_t seed) {
  auto inst = generated<Tree>(seed, 3, 6, kIsRooted<Tree> ? 2 + static_cast<int>(seed % 3) : 3);
  const std::size_t size = solve_masp(inst).size;
  ProblemInstance<Tree> perm = inst;
  std::rotate(perm.trees.begin(), perm.trees.begin() + 1, perm.trees.end());
  EXPECT_EQ(solve_masp(perm).size, size);
  ProblemInstance<Tree> fewer{inst.universe, {inst.trees[0], inst.trees[2]}};
  ProblemInstance<Tree> reordered{inst.universe, {inst.trees[0], inst.trees[2], inst.trees[1]}};
  if (auto more = with_restricted_extra(reordered, 2, 2)) {
    EXPECT_GE(solve_masp(fewer).size, solve_masp(*more).size);
  }
}

TEST(Masp, PermutationAndMonotonicity) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    check_invariants<RootedTree>(seed);
    check_invariants<UnrootedTree>(seed);
  }
}

TEST(Masp, BinaryInputsCoincideWithMcsp) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto inst = generated<RootedTree>(seed, 1 + seed % 3, 9, 2);
    EXPECT_EQ(masp_rooted(inst).size, mcsp_rooted(inst).size) << seed;
  }
}

TEST(Masp, ReconstructionDropsEmptySlots) {
  // Disjoint single leaves only: terminal top state, caterpillar witness.
  auto r = masp_rooted(rooted({"a;", "b;"}));
  EXPECT_EQ(write_newick(r.tree), "(a,b);");
  auto inst = rooted({"((a,b),c);"});
  r = masp_rooted(inst);
  EXPECT_EQ(write_newick(r.tree), "((a,b),c);");
}

}  // namespace
