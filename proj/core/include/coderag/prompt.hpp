#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/corpus.hpp"
#include "coderag/retrieval.hpp"
#include "coderag/token_budget.hpp"

namespace coderag {

enum class TemplateId { MsgDef, ClassDef, FuncDec, FuncDef, Similar };
enum class Language { Zh, En };

std::string_view to_string(TemplateId id);
std::string_view to_string(Language lang);
TemplateId template_for(UnitKind kind);
std::optional<TemplateId> parse_template_id(std::string_view text);
/// Throws Error(Config).
Language parse_language(std::string_view text);

struct PromptTemplate {
  TemplateId id = TemplateId::Similar;
  Language language = Language::En;
  std::string body;

  /// The shipped template for (id, language).
  static PromptTemplate builtin(TemplateId id, Language language);
  /// Reads a template file. Throws Error(TemplateMismatch) if it is not
  /// well-formed for `id`.
  static PromptTemplate from_file(TemplateId id, Language language, const std::filesystem::path& path);

  /// Placeholder names the id requires: {knowledge} or {snippets}, and
  /// {current_code}.
  std::vector<std::string> required_placeholders() const;
  /// Description of the first problem, or nullopt when every required
  /// placeholder occurs exactly once on a line of its own and all other
  /// non-empty lines are `//` comments.
  std::optional<std::string> check() const;
};

/// Instruction-only prompt used when there is nothing retrieved to show.
std::string render_base_prompt(std::string_view current_code, Language language);

struct PromptItem {
  DocId doc = 0;
  std::string label;  // shown on the item's marker line
  std::string text;
};

PromptItem prompt_item(DocId doc, const CodeUnit& unit);

struct PromptOptions {
  std::size_t budget = 2048;
  std::size_t max_snippets = 4;
  std::shared_ptr<const TokenCounter> counter;  // null = default counter
};

struct PromptBundle {
  TemplateId template_id = TemplateId::Similar;
  Language language = Language::En;
  std::string text;
  std::size_t token_count = 0;
  std::size_t budget = 0;
  std::vector<DocId> included;   // rendered items, in rendered order
  std::size_t dropped = 0;       // items left out to meet the budget
  bool truncated = false;        // dropped > 0
  bool context_truncated = false;  // leading context lines were cut
  bool base = false;             // rendered without retrieved material
};

/// The no-retrieval prompt, budgeted like the others.
PromptBundle build_base_prompt(std::string_view current_code, Language language,
                               const PromptOptions& options = {});

/// Marker lines delimiting item `n` (1-based) in a rendered prompt.
std::string item_open_marker(std::size_t n);
std::string item_close_marker(std::size_t n);

/// Text of item `n` in a rendered prompt, if present.
std::optional<std::string> find_prompt_item(std::string_view prompt, std::size_t n);

/// Knowledge units of one kind, then the current code. Later units are
/// dropped whole to meet the budget. Throws Error(TemplateMismatch) when
/// the template is not the one for `kind`.
PromptBundle build_identifier_prompt(UnitKind kind, const std::vector<PromptItem>& knowledge,
                                     std::string_view current_code, const PromptTemplate& tmpl,
                                     const PromptOptions& options = {});

/// Snippets in rank order (at most max_snippets), then the current code.
/// Lowest-ranked snippets are dropped whole to meet the budget.
PromptBundle build_similarity_prompt(const std::vector<ScoredSnippet>& snippets, const Corpus& corpus,
                                     std::string_view current_code, const PromptTemplate& tmpl,
                                     const PromptOptions& options = {});

}  // namespace coderag
