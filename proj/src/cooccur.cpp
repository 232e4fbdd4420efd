#include "wordgroup/cooccur.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "wordgroup/format.hpp"

namespace wordgroup {
namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kDenseCellLimit = std::size_t{1} << 22;
constexpr std::size_t kMinTokensPerThread = std::size_t{1} << 16;

std::unordered_map<std::string_view, std::size_t> index_words(const WordList& words,
                                                              const char* what) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!index.emplace(words[i], i).second) {
      throw std::invalid_argument(std::string("duplicate word in ") + what + ": " + words[i]);
    }
  }
  return index;
}

std::vector<std::size_t> sorted_order(const WordList& words) {
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return words[a] < words[b]; });
  return order;
}

// Token ids resolved once per stream so window scans never hash strings.
struct ResolvedStream {
  std::vector<std::size_t> target_of;
  std::vector<std::size_t> context_of;
};

ResolvedStream resolve(const TokenStream& tokens, const WordList& targets,
                       const WordList& contexts) {
  const auto target_index = index_words(targets, "targets");
  const auto context_index = index_words(contexts, "contexts");
  ResolvedStream r;
  r.target_of.resize(tokens.size(), kNone);
  r.context_of.resize(tokens.size(), kNone);
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    if (auto it = target_index.find(tokens[p]); it != target_index.end()) r.target_of[p] = it->second;
    if (auto it = context_index.find(tokens[p]); it != context_index.end()) r.context_of[p] = it->second;
  }
  return r;
}

CooccurrenceTable count_resolved(const ResolvedStream& stream, const WordList& targets,
                                 const WordList& contexts, const WindowConfig& config,
                                 std::size_t begin, std::size_t end) {
  CooccurrenceTable table(targets, contexts);
  const std::size_t n = stream.target_of.size();
  const std::size_t nc = contexts.size();
  const bool dense = targets.size() * nc <= kDenseCellLimit;
  std::vector<std::uint64_t> dense_cells(dense ? targets.size() * nc : 0);
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_cells;
  const auto lo = static_cast<std::size_t>(config.gap) + 1;
  const auto hi = static_cast<std::size_t>(config.gap) + static_cast<std::size_t>(config.side_length);

  end = std::min(end, n);
  for (std::size_t p = begin; p < end; ++p) {
    const std::size_t i = stream.target_of[p];
    if (i == kNone) continue;
    std::uint64_t in_corpus = 0;
    auto visit = [&](std::size_t q) {
      ++in_corpus;
      const std::size_t j = stream.context_of[q];
      if (j == kNone) return;
      if (dense) {
        ++dense_cells[i * nc + j];
      } else {
        ++sparse_cells[static_cast<std::uint64_t>(i) * nc + j];
      }
    };
    for (std::size_t k = lo; k <= hi; ++k) {
      if (k <= p) visit(p - k);
      if (k < n - p) visit(p + k);
    }
    table.add_positions(i, in_corpus);
  }

  if (dense) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      for (std::size_t j = 0; j < nc; ++j) {
        if (dense_cells[i * nc + j] != 0) table.add(i, j, dense_cells[i * nc + j]);
      }
    }
  } else {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells(sparse_cells.begin(),
                                                               sparse_cells.end());
    std::sort(cells.begin(), cells.end());
    for (const auto& [key, c] : cells) table.add(key / nc, key % nc, c);
  }
  return table;
}

}  // namespace

void WindowConfig::validate() const {
  if (side_length < 1) throw std::invalid_argument("window side_length must be >= 1");
  if (gap < 0) throw std::invalid_argument("window gap must be >= 0");
}

CooccurrenceTable::CooccurrenceTable(WordList targets, WordList contexts)
    : targets_(std::move(targets)),
      contexts_(std::move(contexts)),
      rows_(targets_.size()),
      positions_(targets_.size(), 0) {}

std::uint64_t CooccurrenceTable::count(std::size_t target, std::size_t context) const {
  const auto& r = rows_.at(target);
  const auto it = std::lower_bound(r.begin(), r.end(), Cell{context, 0});
  return (it != r.end() && it->first == context) ? it->second : 0;
}

void CooccurrenceTable::add(std::size_t target, std::size_t context, std::uint64_t n) {
  if (n == 0) return;
  auto& r = rows_.at(target);
  if (r.empty() || r.back().first < context) {
    r.emplace_back(context, n);
    return;
  }
  const auto it = std::lower_bound(r.begin(), r.end(), Cell{context, 0});
  if (it != r.end() && it->first == context) {
    it->second += n;
  } else {
    r.insert(it, Cell{context, n});
  }
}

void CooccurrenceTable::merge(const CooccurrenceTable& other) {
  if (other.targets_ != targets_ || other.contexts_ != contexts_) {
    throw std::invalid_argument("merge: tables cover different word lists");
  }
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    positions_[i] += other.positions_[i];
    for (const auto& [j, n] : other.rows_[i]) add(i, j, n);
  }
}

void CooccurrenceTable::write_tsv(std::ostream& out) const {
  out << "#positions target\ttotal\n";
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    out << targets_[i] << '\t' << positions_[i] << '\n';
  }
  out << "#counts target\tcontext\tcount\n";
  const auto context_rank = [&] {
    std::vector<std::size_t> rank(contexts_.size());
    const auto order = sorted_order(contexts_);
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    return rank;
  }();
  for (std::size_t i : sorted_order(targets_)) {
    auto cells = rows_[i];
    std::sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) {
      return context_rank[a.first] < context_rank[b.first];
    });
    for (const auto& [j, n] : cells) {
      out << targets_[i] << '\t' << contexts_[j] << '\t' << n << '\n';
    }
  }
}

CooccurrenceTable CooccurrenceTable::read_tsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "#positions target\ttotal") {
    throw std::runtime_error("count file: missing #positions header");
  }
  WordList targets;
  std::vector<std::uint64_t> positions;
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> triplets;
  bool in_counts = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "#counts target\tcontext\tcount") {
      in_counts = true;
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, '\t');) fields.push_back(f);
    if (!in_counts && fields.size() == 2) {
      targets.push_back(fields[0]);
      positions.push_back(std::stoull(fields[1]));
    } else if (in_counts && fields.size() == 3) {
      triplets.emplace_back(fields[0], fields[1], std::stoull(fields[2]));
    } else {
      throw std::runtime_error("count file: malformed line: " + line);
    }
  }
  // The file does not record the context list order; contexts are taken in
  // order of first appearance.
  WordList contexts;
  std::unordered_map<std::string, std::size_t> context_index;
  for (const auto& t : triplets) {
    if (context_index.emplace(std::get<1>(t), contexts.size()).second) {
      contexts.push_back(std::get<1>(t));
    }
  }
  CooccurrenceTable table(targets, contexts);
  const auto target_index = index_words(table.targets_, "targets");
  for (std::size_t i = 0; i < positions.size(); ++i) table.positions_[i] = positions[i];
  for (const auto& [t, c, n] : triplets) {
    const auto it = target_index.find(t);
    if (it == target_index.end()) throw std::runtime_error("count file: unknown target " + t);
    table.add(it->second, context_index.at(c), n);
  }
  return table;
}

CooccurrenceTable count_range(const TokenStream& tokens, const WordList& targets,
                              const WordList& contexts, const WindowConfig& config,
                              std::size_t begin, std::size_t end) {
  config.validate();
  return count_resolved(resolve(tokens, targets, contexts), targets, contexts, config, begin,
                        end);
}

CooccurrenceTable count(const TokenStream& tokens, const WordList& targets,
                        const WordList& contexts, const WindowConfig& config) {
  config.validate();
  const auto stream = resolve(tokens, targets, contexts);
  const std::size_t n = tokens.size();
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunks = std::clamp<std::size_t>(n / kMinTokensPerThread, 1, hw);
  if (chunks == 1) return count_resolved(stream, targets, contexts, config, 0, n);

  std::vector<CooccurrenceTable> parts(chunks);
  std::vector<std::thread> workers;
  for (std::size_t c = 0; c < chunks; ++c) {
    workers.emplace_back([&, c] {
      parts[c] = count_resolved(stream, targets, contexts, config, n * c / chunks,
                                n * (c + 1) / chunks);
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t c = 1; c < chunks; ++c) parts[0].merge(parts[c]);
  return std::move(parts[0]);
}

std::vector<double> ContextVectorSet::dense_row(std::size_t target) const {
  std::vector<double> out(contexts_.size(), 0.0);
  for (const auto& [j, p] : rows_.at(target)) out[j] = p;
  return out;
}

std::vector<std::size_t> ContextVectorSet::usable() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (!flagged_[i]) out.push_back(i);
  }
  return out;
}

void ContextVectorSet::write_tsv(std::ostream& out) const {
  std::vector<std::size_t> context_rank(contexts_.size());
  const auto context_order = sorted_order(contexts_);
  for (std::size_t r = 0; r < context_order.size(); ++r) context_rank[context_order[r]] = r;
  for (std::size_t i : sorted_order(targets_)) {
    auto cells = rows_[i];
    std::sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) {
      return context_rank[a.first] < context_rank[b.first];
    });
    for (const auto& [j, p] : cells) {
      out << targets_[i] << '\t' << contexts_[j] << '\t' << format_real(p) << '\n';
    }
  }
}

ContextVectorSet to_vectors(const CooccurrenceTable& table) {
  ContextVectorSet set;
  set.targets_ = table.targets();
  set.contexts_ = table.contexts();
  set.rows_.resize(set.targets_.size());
  set.flagged_.resize(set.targets_.size(), false);
  for (std::size_t i = 0; i < set.targets_.size(); ++i) {
    const std::uint64_t total = table.positions(i);
    if (total == 0) {
      set.flagged_[i] = true;
      continue;
    }
    const auto denom = static_cast<double>(total);
    for (const auto& [j, n] : table.row(i)) {
      set.rows_[i].emplace_back(j, static_cast<double>(n) / denom);
    }
  }
  return set;
}

}  // namespace wordgroup
