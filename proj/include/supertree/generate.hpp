#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "newick.hpp"

namespace supertree {

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int k = 2;
  int n = 5;
  int max_degree = 3;
  bool rooted = true;
  // Smallest tree size as a fraction of n (at least 1 rooted, 3 unrooted).
  double min_fraction = 0.5;
};

// Reproducible random source. Draws are reduced modulo the bound so the
// stream does not depend on the standard library's distributions.
class TreeRng {
 public:
  explicit TreeRng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }

  // Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::string> generated_labels(int n) {
  std::vector<std::string> out;
  if (n <= 26) {
    for (int i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('a' + i));
    return out;
  }
  const std::size_t width = std::to_string(n).size();
  for (int i = 1; i <= n; ++i) {
    std::string num = std::to_string(i);
    out.push_back("t" + std::string(width - num.size(), '0') + num);
  }
  return out;
}

// Random rooted topology on the given labels with at most max_children
// children per node: repeatedly merges 2..max_children random pieces.
inline NewickAst random_rooted_ast(std::vector<std::string> labels, int max_children, TreeRng& rng) {
  if (labels.empty()) return {};
  if (max_children < 2) throw std::invalid_argument("max_children must be at least 2");
  std::vector<NewickAst> pool;
  for (auto& l : labels) pool.push_back({std::move(l), {}});
  while (pool.size() > 1) {
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(max_children), pool.size());
    std::size_t r = rng.between(2, hi);
    NewickAst joined;
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t pick = rng.below(pool.size());
      joined.children.push_back(std::move(pool[pick]));
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    pool.push_back(std::move(joined));
  }
  return std::move(pool.front());
}

// Random unrooted topology (max node degree max_degree >= 3), written as a
// rooted expression whose top node is an internal node of the unrooted tree.
inline NewickAst random_unrooted_ast(std::vector<std::string> labels, int max_degree, TreeRng& rng) {
  if (max_degree < 3) throw std::invalid_argument("unrooted trees need max degree >= 3");
  if (labels.size() < 3) throw std::invalid_argument("unrooted trees need at least 3 leaves");
  std::size_t pick = rng.below(labels.size());
  NewickAst anchor{labels[pick], {}};
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pick));
  NewickAst body = random_rooted_ast(std::move(labels), max_degree - 1, rng);
  body.children.push_back(std::move(anchor));
  return body;
}

inline std::string ast_to_newick(const NewickAst& ast) {
  if (ast.children.empty()) return ast.label;
  std::string out = "(";
  for (std::size_t i = 0; i < ast.children.size(); ++i) {
    if (i) out += ',';
    out += ast_to_newick(ast.children[i]);
  }
  return out + ")";
}

// Instance file text: a comment header and k Newick lines. Deterministic in
// the config.
inline std::string generate_instance(const GeneratorConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("generate: k must be at least 1");
  if (cfg.max_degree < 2) throw std::invalid_argument("generate: D must be at least 2");
  if (cfg.rooted && cfg.n < 1) throw std::invalid_argument("generate: n must be at least 1");
  if (!cfg.rooted && cfg.n < 3) throw std::invalid_argument("generate: unrooted trees need n >= 3");
  if (!cfg.rooted && cfg.max_degree < 3)
    throw std::invalid_argument("generate: unrooted internal nodes have degree >= 3, so D must be >= 3");
  TreeRng rng(cfg.seed);
  const std::vector<std::string> names = generated_labels(cfg.n);
  const auto n = static_cast<std::size_t>(cfg.n);
  const std::size_t floor_size = cfg.rooted ? 1 : 3;
  const auto frac = static_cast<std::size_t>(cfg.min_fraction * static_cast<double>(n) + 0.999999);
  const std::size_t lo = std::min(n, std::max(floor_size, frac));

  std::string out = "# seed=" + std::to_string(cfg.seed) + " k=" + std::to_string(cfg.k) + " n=" +
                    std::to_string(cfg.n) + " D=" + std::to_string(cfg.max_degree) +
                    (cfg.rooted ? " rooted" : " unrooted") + "\n";
  for (int t = 0; t < cfg.k; ++t) {
    std::vector<std::string> pool = names;
    rng.shuffle(pool);
    pool.resize(rng.between(lo, n));
    std::sort(pool.begin(), pool.end());
    NewickAst ast = cfg.rooted ? random_rooted_ast(pool, cfg.max_degree, rng) : random_unrooted_ast(pool, cfg.max_degree, rng);
    out += ast_to_newick(ast) + ";\n";
  }
  return out;
}

}  // namespace supertree
