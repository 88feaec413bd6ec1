#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "instance.hpp"

namespace supertree {

// Malformed instance input, located as file:line:column (1-based).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& file, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what) {}
};

struct NewickLine {
  std::size_t line = 0;
  NewickAst ast;
};

// One Newick per line; blank lines and lines starting with '#' are skipped.
inline std::vector<NewickLine> read_newick_lines(std::istream& in, const std::string& name) {
  std::vector<NewickLine> out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    try {
      out.push_back({line_no, parse_newick_ast(text)});
    } catch (const ParseError& e) {
      throw InputError(name, line_no, e.offset() + 1, e.message());
    }
  }
  return out;
}

template <PhyloTree Tree>
ProblemInstance<Tree> load_instance(std::istream& in, const std::string& name) {
  std::vector<NewickLine> lines = read_newick_lines(in, name);
  if (lines.empty()) throw InputError(name, 1, 1, "no trees in input");
  std::vector<std::string> labels;
  for (const auto& l : lines) l.ast.collect_labels(labels);
  ProblemInstance<Tree> inst{make_universe(labels), {}};
  for (const auto& l : lines) {
    try {
      inst.trees.push_back(tree_from_ast<Tree>(l.ast, inst.universe));
    } catch (const std::invalid_argument& e) {
      throw InputError(name, l.line, 1, e.what());
    }
  }
  return inst;
}

template <PhyloTree Tree>
ProblemInstance<Tree> load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  return load_instance<Tree>(in, path);
}

template <PhyloTree Tree>
ProblemInstance<Tree> load_instance_text(const std::string& text, const std::string& name = "<text>") {
  std::istringstream in(text);
  return load_instance<Tree>(in, name);
}

}  // namespace supertree
