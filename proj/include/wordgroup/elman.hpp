#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wordgroup/corpus.hpp"

namespace wordgroup {

struct Category {
  std::string name;
  WordList words;
};

/// Template grammar: each template is a list of category names.
struct Grammar {
  std::vector<Category> categories;
  std::vector<std::vector<std::string>> templates;

  /// Throws std::invalid_argument unless categories are non-empty and
  /// pairwise disjoint and every template slot names a known category.
  void validate() const;
  const Category& category(const std::string& name) const;
};

/// Nouns {man, woman, boy, girl, cat, dog, book, rock}, verbs {see, chase,
/// eat, like, break, move}, templates NOUN VERB and NOUN VERB NOUN.
Grammar default_grammar();

struct LabeledCorpus {
  TokenStream tokens;
  std::vector<std::string> labels;
  /// Token count of each sentence, boundary token included when present.
  std::vector<std::size_t> sentence_lengths;

  /// One sentence per line, tokens separated by single spaces.
  void write_text(std::ostream& out) const;
  /// `token<TAB>category` per token.
  void write_labels(std::ostream& out) const;
};

struct GenerateOptions {
  /// Appended after every sentence with category "BOUNDARY" when set.
  std::optional<std::string> boundary_token;
};

/// Picks a template uniformly per sentence and fills each slot with a
/// uniform draw from its category. Sentences are concatenated without
/// boundary tokens unless requested.
LabeledCorpus generate(const Grammar& grammar, std::size_t num_sentences, std::uint64_t seed,
                       const GenerateOptions& options = {});

/// Parses a labels file back into (token, category) columns.
LabeledCorpus read_labels(std::istream& in);

}  // namespace wordgroup
