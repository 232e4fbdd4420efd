#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "wordgroup/corpus.hpp"

namespace wordgroup {

/// Moving-window geometry. Context positions on each side of a target at p
/// are p ± k for gap < k <= gap + side_length.
struct WindowConfig {
  int side_length = 1;
  int gap = 0;

  /// Throws std::invalid_argument unless side_length >= 1 and gap >= 0.
  void validate() const;
};

/// Exact window co-occurrence counts for a target set against a context set.
class CooccurrenceTable {
 public:
  using Cell = std::pair<std::size_t, std::uint64_t>;  // (context id, count)

  CooccurrenceTable() = default;
  CooccurrenceTable(WordList targets, WordList contexts);

  const WordList& targets() const { return targets_; }
  const WordList& contexts() const { return contexts_; }

  /// Non-zero cells of one target row, sorted by context id.
  const std::vector<Cell>& row(std::size_t target) const { return rows_[target]; }
  std::uint64_t count(std::size_t target, std::size_t context) const;
  std::uint64_t positions(std::size_t target) const { return positions_[target]; }

  /// Adds another table over the same target and context lists.
  void merge(const CooccurrenceTable& other);

  void add(std::size_t target, std::size_t context, std::uint64_t n);
  void add_positions(std::size_t target, std::uint64_t n) { positions_[target] += n; }

  friend bool operator==(const CooccurrenceTable&, const CooccurrenceTable&) = default;

  /// Writes the positions block followed by (target, context, count) triplets
  /// sorted by target word then context word.
  void write_tsv(std::ostream& out) const;
  static CooccurrenceTable read_tsv(std::istream& in);

 private:
  WordList targets_;
  WordList contexts_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::uint64_t> positions_;
};

/// Counts window co-occurrences over the whole stream. Target and context
/// lists must not contain duplicates; words absent from the stream are fine.
CooccurrenceTable count(const TokenStream& tokens, const WordList& targets,
                        const WordList& contexts, const WindowConfig& config);

/// Counts only the target occurrences at positions [begin, end), with windows
/// still reading the full stream. Summing over a cover of [0, size) with
/// `merge` reproduces `count`.
CooccurrenceTable count_range(const TokenStream& tokens, const WordList& targets,
                              const WordList& contexts, const WindowConfig& config,
                              std::size_t begin, std::size_t end);

/// Row-normalized context probabilities.
class ContextVectorSet {
 public:
  using Cell = std::pair<std::size_t, double>;

  const WordList& targets() const { return targets_; }
  const WordList& contexts() const { return contexts_; }
  std::size_t size() const { return targets_.size(); }

  const std::vector<Cell>& row(std::size_t target) const { return rows_[target]; }
  std::vector<double> dense_row(std::size_t target) const;

  /// True for targets with no in-corpus window positions; their rows are zero.
  bool flagged(std::size_t target) const { return flagged_[target]; }
  std::vector<std::size_t> usable() const;

  /// `target<TAB>context<TAB>probability` for non-zero cells, sorted like the
  /// count file, probabilities at 17 significant digits.
  void write_tsv(std::ostream& out) const;

 private:
  friend ContextVectorSet to_vectors(const CooccurrenceTable& table);

  WordList targets_;
  WordList contexts_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<bool> flagged_;
};

ContextVectorSet to_vectors(const CooccurrenceTable& table);

}  // namespace wordgroup
