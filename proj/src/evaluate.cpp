#include "wordgroup/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace wordgroup {
namespace {

// Per-cluster membership restricted to the words of the partition, with each
// gold word checked for presence.
std::unordered_map<std::string, std::size_t> cluster_lookup(const Partition& partition,
                                                            const GoldGroups& gold) {
  std::unordered_map<std::string, std::size_t> cluster_of;
  for (std::size_t i = 0; i < partition.words.size(); ++i) {
    cluster_of.emplace(partition.words[i], partition.cluster[i]);
  }
  const auto words = gold.words();
  if (words.empty()) throw std::invalid_argument("evaluation: no gold words");
  for (const auto& w : words) {
    if (!cluster_of.count(w)) {
      throw std::invalid_argument("evaluation: gold word not in partition: " + w);
    }
  }
  return cluster_of;
}

}  // namespace

GoldGroups GoldGroups::from_json(std::string_view text) {
  const auto j = nlohmann::ordered_json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("gold groups: expected a JSON object");
  GoldGroups gold;
  for (const auto& [name, words] : j.items()) {
    gold.groups.emplace_back(name, words.get<WordList>());
  }
  return gold;
}

GoldGroups GoldGroups::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gold groups file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

WordList GoldGroups::words() const {
  std::set<std::string> all;
  for (const auto& [name, words] : groups) all.insert(words.begin(), words.end());
  return {all.begin(), all.end()};
}

FilteredGold filter_gold(const GoldGroups& gold, const WordList& present) {
  const std::set<std::string> have(present.begin(), present.end());
  FilteredGold out;
  for (const auto& [name, words] : gold.groups) {
    WordList kept;
    for (const auto& w : words) {
      if (have.count(w)) {
        kept.push_back(w);
      } else {
        out.warnings.push_back("gold word '" + w + "' (" + name + ") not among targets; ignored");
      }
    }
    if (kept.empty()) {
      out.warnings.push_back("gold group '" + name + "' has no words among targets; dropped");
    } else {
      out.gold.groups.emplace_back(name, std::move(kept));
    }
  }
  return out;
}

GoldGroups gold_from_labels(const LabeledCorpus& labeled) {
  std::map<std::string, std::set<std::string>> by_category;
  for (std::size_t i = 0; i < labeled.tokens.size(); ++i) {
    by_category[labeled.labels[i]].insert(labeled.tokens[i]);
  }
  GoldGroups gold;
  for (auto& [name, words] : by_category) gold.groups.emplace_back(name, WordList(words.begin(), words.end()));
  return gold;
}

double purity(const Partition& partition, const GoldGroups& gold) {
  const auto cluster_of = cluster_lookup(partition, gold);
  // overlap[cluster][group]
  std::vector<std::vector<std::size_t>> overlap(partition.k,
                                                std::vector<std::size_t>(gold.groups.size(), 0));
  for (std::size_t g = 0; g < gold.groups.size(); ++g) {
    const std::set<std::string> members(gold.groups[g].second.begin(),
                                        gold.groups[g].second.end());
    for (const auto& w : members) ++overlap[cluster_of.at(w)][g];
  }
  std::size_t hits = 0;
  for (const auto& row : overlap) hits += *std::max_element(row.begin(), row.end());
  const std::size_t denom = gold.words().size();
  return static_cast<double>(hits) / static_cast<double>(denom);
}

GroupF1 group_f1(const Partition& partition, const GoldGroups& gold) {
  const auto cluster_of = cluster_lookup(partition, gold);
  std::vector<std::size_t> cluster_size(partition.k, 0);
  for (std::size_t c : partition.cluster) ++cluster_size[c];

  GroupF1 out;
  double sum = 0.0;
  for (const auto& [name, words] : gold.groups) {
    const std::set<std::string> members(words.begin(), words.end());
    std::vector<std::size_t> hit(partition.k, 0);
    for (const auto& w : members) ++hit[cluster_of.at(w)];
    double best = 0.0;
    for (std::size_t c = 0; c < partition.k; ++c) {
      if (hit[c] == 0) continue;
      const double precision = static_cast<double>(hit[c]) / static_cast<double>(cluster_size[c]);
      const double recall = static_cast<double>(hit[c]) / static_cast<double>(members.size());
      best = std::max(best, 2.0 * precision * recall / (precision + recall));
    }
    out.per_group.emplace_back(name, best);
    sum += best;
  }
  out.macro = gold.groups.empty() ? 0.0 : sum / static_cast<double>(gold.groups.size());
  return out;
}

double category_accuracy(std::span<const std::size_t> units,
                         std::span<const std::string> categories) {
  if (units.size() != categories.size()) {
    throw std::invalid_argument("category_accuracy: " + std::to_string(units.size()) +
                                " labels for " + std::to_string(categories.size()) + " items");
  }
  if (units.empty()) throw std::invalid_argument("category_accuracy: no items");
  // std::map keeps categories sorted, so the first maximum is the
  // lexicographically first.
  std::map<std::size_t, std::map<std::string, std::size_t>> tally;
  for (std::size_t i = 0; i < units.size(); ++i) ++tally[units[i]][categories[i]];
  std::size_t correct = 0;
  for (const auto& [unit, counts] : tally) {
    std::size_t best = 0;
    for (const auto& [cat, n] : counts) best = std::max(best, n);
    correct += best;
  }
  return static_cast<double>(correct) / static_cast<double>(units.size());
}

}  // namespace wordgroup
