#pragma once

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "topology.hpp"

namespace supertree {

// Syntax error in Newick text; offset is the 0-based character position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset), message_(what) {}
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

// Label-level parse result. A node with children is internal (its own label,
// if any, is dropped); a node without children is a leaf. The empty tree ";"
// parses to a node with neither label nor children.
struct NewickAst {
  std::string label;
  std::vector<NewickAst> children;

  bool is_leaf() const { return children.empty() && !label.empty(); }
  bool is_empty_tree() const { return children.empty() && label.empty(); }

  void collect_labels(std::vector<std::string>& out) const {
    if (is_leaf()) out.push_back(label);
    for (const auto& c : children) c.collect_labels(out);
  }
};

namespace detail {

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : text_(text) {}

  NewickAst read_tree() {
    skip_ws();
    NewickAst root;
    if (peek() != ';') root = read_subtree();
    skip_ws();
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return root;
  }

 private:
  static bool is_label_char(char c) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    return std::string_view("(),:;[]'").find(c) == std::string_view::npos;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string read_label() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_branch_length() {
    skip_ws();
    if (peek() != ':') return;
    ++pos_;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   std::string_view("+-.eE").find(text_[pos_]) != std::string_view::npos))
      ++pos_;
    if (pos_ == start) fail("expected branch length after ':'");
  }

  NewickAst read_subtree() {
    skip_ws();
    NewickAst node;
    if (peek() == '\'') fail("quoted labels are not supported");
    if (peek() == '(') {
      ++pos_;
      node.children.push_back(read_subtree());
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        node.children.push_back(read_subtree());
        skip_ws();
      }
      if (peek() != ')') fail("expected ',' or ')'");
      ++pos_;
      skip_ws();
      read_label();  // inner-node label, discarded
    } else {
      node.label = read_label();
      if (node.label.empty()) fail("expected label or '('");
    }
    skip_branch_length();
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline NodeId ast_to_builder(const NewickAst& ast, const LabelUniverse& u, RootedTreeBuilder& b) {
  if (ast.is_leaf()) return b.add_leaf(u.id(ast.label));
  std::vector<NodeId> kids;
  for (const auto& c : ast.children) kids.push_back(ast_to_builder(c, u, b));
  return b.add_internal(std::move(kids));
}

inline void write_rooted(const RootedTree& t, NodeId v, std::string& out) {
  if (t.is_leaf(v)) {
    out += t.universe()->name(t.label(v));
    return;
  }
  std::vector<NodeId> kids(t.children(v).begin(), t.children(v).end());
  std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) { return t.min_label_below(a) < t.min_label_below(b); });
  out += '(';
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ',';
    write_rooted(t, kids[i], out);
  }
  out += ')';
}

}  // namespace detail

// Parses a single Newick expression terminated by ';'. Throws ParseError.
inline NewickAst parse_newick_ast(std::string_view text) { return detail::NewickReader(text).read_tree(); }

inline RootedTree to_rooted(const NewickAst& ast, UniversePtr universe) {
  RootedTreeBuilder b(universe);
  if (ast.is_empty_tree()) return b.build(kNoNode);
  return b.build(detail::ast_to_builder(ast, *universe, b));
}

// The parsed rooted topology with a two-child root fused into one edge.
inline UnrootedTree to_unrooted(const NewickAst& ast, UniversePtr universe) {
  return unroot_any(to_rooted(ast, std::move(universe)));
}

inline RootedTree parse_rooted(std::string_view text, UniversePtr universe) {
  return to_rooted(parse_newick_ast(text), std::move(universe));
}

inline UnrootedTree parse_unrooted(std::string_view text, UniversePtr universe) {
  return to_unrooted(parse_newick_ast(text), std::move(universe));
}

// Canonical Newick: children ordered by the smallest label id below them.
inline std::string write_newick(const RootedTree& t) {
  std::string out;
  if (!t.empty()) detail::write_rooted(t, t.root(), out);
  out += ';';
  return out;
}

// Canonical unrooted Newick: the tree hangs from the neighbor of its smallest
// leaf, so that neighbor's full neighborhood becomes the outermost group.
inline std::string write_newick(const UnrootedTree& t) { return write_newick(canonical_rooting(t)); }

}  // namespace supertree
