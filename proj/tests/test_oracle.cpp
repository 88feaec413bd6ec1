#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace supertree;
using namespace supertree::testing;

namespace {

template <PhyloTree Tree>
std::size_t count_trees(std::size_t n, TreeShape shape) {
  auto u = letters(std::string("abcdefg").substr(0, n));
  auto trees = enumerate_trees<Tree>(u, u->full_set(), shape);
  std::set<std::string> distinct;
  for (const auto& t : trees) {
    EXPECT_EQ(t.leaf_count(), n);
    distinct.insert(write_newick(t));
  }
  EXPECT_EQ(distinct.size(), trees.size()) << "duplicate topology";
  return trees.size();
}

TEST(Enumeration, RootedCounts) {
  const std::size_t all[] = {1, 1, 4, 26, 236};
  const std::size_t binary[] = {1, 1, 3, 15, 105};
  for (std::size_t n = 1; n <= 5; ++n) {
    EXPECT_EQ(count_trees<RootedTree>(n, TreeShape::RootedAll), all[n - 1]) << n;
    EXPECT_EQ(count_trees<RootedTree>(n, TreeShape::RootedBinary), binary[n - 1]) << n;
  }
}

TEST(Enumeration, UnrootedCounts) {
  // Unrooted shapes on n labels correspond to rooted shapes on n - 1.
  const std::size_t all[] = {1, 4, 26, 236};
  const std::size_t binary[] = {1, 3, 15, 105};
  for (std::size_t n = 3; n <= 6; ++n) {
    EXPECT_EQ(count_trees<UnrootedTree>(n, TreeShape::UnrootedAll), all[n - 3]) << n;
    EXPECT_EQ(count_trees<UnrootedTree>(n, TreeShape::UnrootedBinary), binary[n - 3]) << n;
  }
}

TEST(Enumeration, NoUnaryNodesAndBinaryShapesAreBinary) {
  auto u = letters("abcde");
  for (const auto& t : enumerate_trees<RootedTree>(u, u->full_set(), TreeShape::RootedBinary)) EXPECT_TRUE(t.is_binary());
  for (const auto& t : enumerate_trees<RootedTree>(u, u->full_set(), TreeShape::RootedAll))
    for (std::size_t v = 0; v < t.node_count(); ++v)
      if (!t.is_leaf(static_cast<NodeId>(v))) {
        EXPECT_GE(t.children(static_cast<NodeId>(v)).size(), 2u);
      }
}

TEST(Enumeration, CapIsEnforced) {
  auto u = letters("abcdefgh");
  EXPECT_THROW(enumerate_trees<RootedTree>(u, u->full_set(), TreeShape::RootedAll), std::length_error);
  EXPECT_THROW(enumerate_trees<RootedTree>(u, u->empty_set(), TreeShape::RootedAll), std::invalid_argument);
  auto big = rooted({"((a,b),(c,d));", "((e,f),(g,h));"});
  EXPECT_THROW(brute_masp(big), std::length_error);
  auto seven = unrooted({"((a,b),(c,d));", "((e,f),(g,a));"});
  EXPECT_THROW(brute_mcsp(seven), std::length_error);
}

TEST(BruteMasp, Examples) {
  auto one = rooted({"((a,b),c);"});
  auto r = brute_masp(one);
  EXPECT_EQ(r.size, 3u);
  EXPECT_TRUE(equals_canonical(r.witness, one.trees[0]));
  EXPECT_EQ(brute_masp(rooted({"(a,b,c);", "((a,b),c);"})).size, 2u);
  EXPECT_EQ(brute_masp(rooted({"((a,b),c);", "((a,c),b);"})).size, 2u);
  EXPECT_EQ(brute_masp(rooted({"((a,b),c);", "((a,b),d);"})).size, 4u);
  EXPECT_EQ(brute_masp(unrooted({"((a,b),(c,d));", "((a,c),(b,d));"})).size, 3u);
  EXPECT_EQ(brute_masp(unrooted({"(a,b,c);", "(d,e,f);"})).size, 6u);
}

TEST(BruteMcsp, Examples) {
  auto star = rooted({"(a,b,c);"});
  auto r = brute_mcsp(star);
  EXPECT_EQ(r.size, 3u);
  EXPECT_TRUE(r.witness.is_binary());
  EXPECT_EQ(brute_mcsp(rooted({"(a,b,c);", "((a,b),c);"})).size, 3u);
  EXPECT_EQ(brute_mcsp(rooted({"((a,b),c);", "((a,c),b);"})).size, 2u);
  EXPECT_EQ(brute_mcsp(unrooted({"(a,b,c);", "((a,b),(c,d));"})).size, 4u);
}

TEST(Oracle, SingleTreeIsItsOwnAnswer) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = generated<RootedTree>(seed, 1, 6, 3, 1.0);
    EXPECT_EQ(brute_masp(inst).size, inst.n());
    EXPECT_EQ(brute_mcsp(inst).size, inst.n());
  }
}

TEST(Oracle, McspDominatesMaspAndWitnessesCheck) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto ri = small_instance<RootedTree>(seed);
    auto a = brute_masp(ri), c = brute_mcsp(ri);
    EXPECT_GE(c.size, a.size);
    EXPECT_TRUE(is_agreement_supertree(a.witness, ri));
    EXPECT_TRUE(is_compatible_supertree(c.witness, ri));
    auto ui = small_instance<UnrootedTree>(seed);
    EXPECT_GE(brute_mcsp(ui).size, brute_masp(ui).size);
  }
}

// Renaming labels by a bijection (which also reorders their ids) leaves the sizes alone.
TEST(Oracle, RelabelingInvariance) {
  const std::string from = "abcdef", to = "zyxwvu";
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::string text = generate_instance(small_config(seed, seed % 2 == 0));
    std::string renamed = text;
    for (std::size_t i = text.find('\n') + 1; i < renamed.size(); ++i)
      if (auto p = from.find(text[i]); p != std::string::npos) renamed[i] = to[p];
    if (seed % 2 == 0) {
      auto a = load_instance_text<RootedTree>(text), b = load_instance_text<RootedTree>(renamed);
      EXPECT_EQ(brute_masp(a).size, brute_masp(b).size);
      EXPECT_EQ(brute_mcsp(a).size, brute_mcsp(b).size);
    } else {
      auto a = load_instance_text<UnrootedTree>(text), b = load_instance_text<UnrootedTree>(renamed);
      EXPECT_EQ(brute_masp(a).size, brute_masp(b).size);
      EXPECT_EQ(brute_mcsp(a).size, brute_mcsp(b).size);
    }
  }
}

}  // namespace
