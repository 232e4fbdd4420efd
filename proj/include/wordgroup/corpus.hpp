#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordgroup {

using Token = std::string;
using TokenStream = std::vector<Token>;
using WordList = std::vector<std::string>;

/// Splits UTF-8 text into lowercase word tokens.
///
/// A token is a maximal run of letters, digits and apostrophes with leading
/// and trailing apostrophes removed, so "o'clock" stays whole while "'tis"
/// becomes "tis". Everything else separates tokens. Malformed UTF-8 bytes are
/// dropped. U+2019 (right single quotation mark) is read as an apostrophe.
TokenStream tokenize(std::string_view text);

/// Reads the whole stream and tokenizes it.
TokenStream tokenize(std::istream& in);

/// Reads and tokenizes a file; throws std::runtime_error if it can't be opened.
TokenStream tokenize_file(const std::string& path);

/// Word frequency table. Entry ids are dense and follow the canonical order:
/// count descending, then word ascending.
class Vocabulary {
 public:
  struct Entry {
    std::string word;
    std::uint64_t count = 0;
  };

  Vocabulary() = default;

  /// Builds from (word, count) pairs in any order. Duplicate words or zero
  /// counts throw std::invalid_argument.
  static Vocabulary from_counts(std::vector<Entry> entries);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t total() const { return total_; }

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& operator[](std::size_t id) const { return entries_[id]; }

  std::optional<std::size_t> find(std::string_view word) const;
  std::uint64_t count(std::string_view word) const;

  /// `word<TAB>count` per line in id order.
  void write_tsv(std::ostream& out) const;
  static Vocabulary read_tsv(std::istream& in);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t total_ = 0;
};

Vocabulary build_vocabulary(const TokenStream& tokens);

/// First min(n, V) words of the vocabulary order. n must be >= 1.
WordList select_top(const Vocabulary& vocab, std::size_t n);

}  // namespace wordgroup
