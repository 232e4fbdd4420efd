#include "wordgroup/elman.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace wordgroup {
namespace {

std::size_t draw_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % b);
}

}  // namespace

void Grammar::validate() const {
  std::set<std::string> names, seen_words;
  for (const auto& c : categories) {
    if (c.words.empty()) throw std::invalid_argument("grammar: empty category " + c.name);
    if (!names.insert(c.name).second) {
      throw std::invalid_argument("grammar: duplicate category " + c.name);
    }
    for (const auto& w : c.words) {
      if (!seen_words.insert(w).second) {
        throw std::invalid_argument("grammar: word in more than one category: " + w);
      }
    }
  }
  if (templates.empty()) throw std::invalid_argument("grammar: no templates");
  for (const auto& t : templates) {
    if (t.empty()) throw std::invalid_argument("grammar: empty template");
    for (const auto& slot : t) {
      if (!names.count(slot)) throw std::invalid_argument("grammar: unknown category " + slot);
    }
  }
}

const Category& Grammar::category(const std::string& name) const {
  for (const auto& c : categories) {
    if (c.name == name) return c;
  }
  throw std::invalid_argument("grammar: unknown category " + name);
}

Grammar default_grammar() {
  Grammar g;
  g.categories = {
      {"NOUN", {"man", "woman", "boy", "girl", "cat", "dog", "book", "rock"}},
      {"VERB", {"see", "chase", "eat", "like", "break", "move"}},
  };
  g.templates = {{"NOUN", "VERB"}, {"NOUN", "VERB", "NOUN"}};
  return g;
}

void LabeledCorpus::write_text(std::ostream& out) const {
  std::size_t pos = 0;
  for (std::size_t len : sentence_lengths) {
    for (std::size_t i = 0; i < len; ++i) {
      if (i) out << ' ';
      out << tokens[pos++];
    }
    out << '\n';
  }
}

void LabeledCorpus::write_labels(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) out << tokens[i] << '\t' << labels[i] << '\n';
}

LabeledCorpus generate(const Grammar& grammar, std::size_t num_sentences, std::uint64_t seed,
                       const GenerateOptions& options) {
  grammar.validate();
  if (num_sentences == 0) throw std::invalid_argument("generate: num_sentences must be >= 1");
  std::mt19937_64 rng(seed);
  LabeledCorpus corpus;
  for (std::size_t s = 0; s < num_sentences; ++s) {
    const auto& tmpl = grammar.templates[draw_index(rng, grammar.templates.size())];
    for (const auto& slot : tmpl) {
      const auto& cat = grammar.category(slot);
      corpus.tokens.push_back(cat.words[draw_index(rng, cat.words.size())]);
      corpus.labels.push_back(cat.name);
    }
    std::size_t len = tmpl.size();
    if (options.boundary_token) {
      corpus.tokens.push_back(*options.boundary_token);
      corpus.labels.push_back("BOUNDARY");
      ++len;
    }
    corpus.sentence_lengths.push_back(len);
  }
  return corpus;
}

LabeledCorpus read_labels(std::istream& in) {
  LabeledCorpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw std::runtime_error("labels line " + std::to_string(lineno) +
                               ": expected token<TAB>category");
    }
    corpus.tokens.push_back(line.substr(0, tab));
    corpus.labels.push_back(line.substr(tab + 1));
  }
  corpus.sentence_lengths.push_back(corpus.tokens.size());
  return corpus;
}

}  // namespace wordgroup
