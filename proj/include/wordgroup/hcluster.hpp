#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wordgroup/metrics.hpp"

namespace wordgroup {

/// Inter-cluster distance rule: single = min, complete = max,
/// average = size-weighted mean (UPGMA).
enum class Linkage { kSingle, kComplete, kAverage };

Linkage parse_linkage(std::string_view name);
std::string_view to_string(Linkage linkage);

/// One agglomeration step. `left` is the child holding the smaller leaf id.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t node = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

/// Binary merge tree. Leaves are nodes 0..L-1; merge s creates node L+s.
class Dendrogram {
 public:
  Dendrogram() = default;
  /// Throws std::invalid_argument if the merges do not form a valid tree
  /// (see validate()).
  Dendrogram(std::vector<std::string> leaves, std::vector<Merge> merges);

  const std::vector<std::string>& leaves() const { return leaves_; }
  const std::vector<Merge>& merges() const { return merges_; }
  std::size_t num_leaves() const { return leaves_.size(); }
  std::size_t root() const { return leaves_.size() + merges_.size() - 1; }
  bool is_leaf(std::size_t node) const { return node < leaves_.size(); }

  /// 0 for leaves, merge height otherwise.
  double height(std::size_t node) const;
  const Merge& merge_of(std::size_t node) const { return merges_.at(node - leaves_.size()); }
  std::size_t min_leaf(std::size_t node) const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;

 private:
  void validate() const;

  std::vector<std::string> leaves_;
  std::vector<Merge> merges_;
};

/// Flat clustering. Cluster ids are dense and ordered by smallest leaf id.
struct Partition {
  std::vector<std::string> words;
  std::vector<std::size_t> cluster;
  std::size_t k = 0;

  std::vector<std::vector<std::string>> groups() const;
};

/// Agglomerative clustering with Lance-Williams updates. Among equally close
/// cluster pairs the one with the smallest (min node id, max node id) wins.
/// Throws std::invalid_argument for fewer than two labels, non-finite or
/// negative entries, a non-zero diagonal or an asymmetric matrix.
Dendrogram agglomerate(const DistanceMatrix& d, Linkage linkage);

/// Undoes the last k-1 merges. Requires 1 <= k <= number of leaves.
Partition cut(const Dendrogram& tree, std::size_t k);

enum class TreeFormat { kNewick, kJson, kAscii };

TreeFormat parse_tree_format(std::string_view name);

/// Newick with branch length = parent height - child height.
std::string to_newick(const Dendrogram& tree);
/// Nested {"id", "label" | "children", "height"} objects.
std::string to_json(const Dendrogram& tree);
Dendrogram dendrogram_from_json(std::string_view text);
std::string to_ascii(const Dendrogram& tree);

std::string export_tree(const Dendrogram& tree, TreeFormat format);

}  // namespace wordgroup
