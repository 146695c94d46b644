#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace coderag {

/// Syntax tree of a C++ fragment. Identifiers are anonymized to "id",
/// literals reduced to their type, operators kept in labels.
struct SyntaxNode {
  std::string label;
  std::vector<SyntaxNode> children;

  /// "label" for leaves, "(label child ...)" otherwise.
  std::string canonical() const;
  std::size_t size() const;
};

struct ParsedFragment {
  SyntaxNode root;        // label "unit"
  std::size_t errors = 0;  // tokens the grammar could not place
};

/// Error-tolerant parse of statements, declarations, function and class
/// definitions. Never throws; unrecognized tokens become ERROR leaves.
ParsedFragment parse_fragment(std::string_view code);

/// Canonical forms of every node with at least one child (subtrees of
/// depth >= 2) except the root, with multiplicities.
std::map<std::string, std::size_t> subtree_multiset(const SyntaxNode& root);

struct AstDetail {
  double score = 0.0;
  std::size_t reference_subtrees = 0;
  std::size_t matched = 0;
  bool flagged = false;  // reference had no subtrees
};

/// Matched reference subtrees (multiset intersection) over the number of
/// reference subtrees. A reference without subtrees scores 1 only against
/// a byte-equal candidate that also has none, and is flagged.
AstDetail ast_similarity_detail(std::string_view candidate, std::string_view reference);
double ast_similarity(std::string_view candidate, std::string_view reference);

}  // namespace coderag
