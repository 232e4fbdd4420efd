#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordgroup/elman.hpp"
#include "wordgroup/hcluster.hpp"

namespace wordgroup {

/// Named reference word groups. Groups may share words.
struct GoldGroups {
  std::vector<std::pair<std::string, WordList>> groups;

  /// JSON object {group name: [words]}; file order is kept.
  static GoldGroups from_json(std::string_view text);
  static GoldGroups from_file(const std::string& path);

  /// Distinct words over all groups, sorted.
  WordList words() const;
};

struct FilteredGold {
  GoldGroups gold;
  std::vector<std::string> warnings;
};

/// Drops words not in `present`, then groups left empty, with one warning
/// per dropped word or group.
FilteredGold filter_gold(const GoldGroups& gold, const WordList& present);

/// One group per category, holding the distinct words labeled with it.
GoldGroups gold_from_labels(const LabeledCorpus& labeled);

/// Share of gold words whose cluster's best-overlapping group contains them.
/// Every gold word must appear in the partition.
double purity(const Partition& partition, const GoldGroups& gold);

struct GroupF1 {
  std::vector<std::pair<std::string, double>> per_group;
  double macro = 0.0;
};

/// Best-matching cluster F1 for each gold group, and their mean. Precision
/// uses the full cluster size.
GroupF1 group_f1(const Partition& partition, const GoldGroups& gold);

/// Maps each unit to its majority gold category (ties to the
/// lexicographically first) and returns the fraction of items whose unit's
/// category matches their own.
double category_accuracy(std::span<const std::size_t> units,
                         std::span<const std::string> categories);

}  // namespace wordgroup
