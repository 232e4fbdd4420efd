#include "wordgroup/compnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "wordgroup/format.hpp"

namespace wordgroup {
namespace {

// Unbiased draw from [0, bound) that does not depend on the standard
// library's distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace

InputVector InputVector::from_dense(std::span<const double> dense) {
  InputVector v;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) v.entries.emplace_back(i, dense[i]);
  }
  return v;
}

std::vector<double> InputVector::to_dense(std::size_t dim) const {
  std::vector<double> out(dim, 0.0);
  for (const auto& [i, x] : entries) out.at(i) = x;
  return out;
}

std::vector<Occurrence> encode_occurrences(const TokenStream& tokens, const WordList& targets,
                                           const WordList& contexts,
                                           const WindowConfig& window) {
  window.validate();
  std::unordered_map<std::string_view, std::size_t> target_index, context_index;
  for (std::size_t i = 0; i < targets.size(); ++i) target_index.emplace(targets[i], i);
  for (std::size_t j = 0; j < contexts.size(); ++j) context_index.emplace(contexts[j], j);

  const std::size_t n = tokens.size();
  const auto lo = static_cast<std::size_t>(window.gap) + 1;
  const auto hi = lo + static_cast<std::size_t>(window.side_length) - 1;
  std::vector<Occurrence> out;
  std::vector<std::size_t> bag;
  for (std::size_t p = 0; p < n; ++p) {
    const auto t = target_index.find(tokens[p]);
    if (t == target_index.end()) continue;
    bag.clear();
    auto visit = [&](std::size_t q) {
      if (auto c = context_index.find(tokens[q]); c != context_index.end()) {
        bag.push_back(c->second);
      }
    };
    for (std::size_t k = lo; k <= hi; ++k) {
      if (k <= p) visit(p - k);
      if (k < n - p) visit(p + k);
    }
    std::sort(bag.begin(), bag.end());

    Occurrence occ;
    occ.position = p;
    occ.word = t->second;
    occ.input.entries.emplace_back(t->second, 1.0);
    const double total = static_cast<double>(bag.size());
    for (std::size_t a = 0; a < bag.size();) {
      std::size_t b = a;
      while (b < bag.size() && bag[b] == bag[a]) ++b;
      occ.input.entries.emplace_back(targets.size() + bag[a],
                                     static_cast<double>(b - a) / total);
      a = b;
    }
    out.push_back(std::move(occ));
  }
  return out;
}

WinnerRule parse_winner_rule(std::string_view name) {
  if (name == "dot") return WinnerRule::kDotProduct;
  if (name == "euclidean") return WinnerRule::kEuclidean;
  throw std::invalid_argument("unknown winner rule: " + std::string(name));
}

std::string_view to_string(WinnerRule rule) {
  return rule == WinnerRule::kDotProduct ? "dot" : "euclidean";
}

void NetworkConfig::validate() const {
  if (num_units < 2) throw std::invalid_argument("network needs at least 2 units");
  if (!(learning_rate_initial > 0.0 && learning_rate_initial <= 1.0)) {
    throw std::invalid_argument("learning_rate_initial must be in (0, 1]");
  }
  if (!(learning_rate_final >= 0.0 && learning_rate_final <= learning_rate_initial)) {
    throw std::invalid_argument("learning_rate_final must be in [0, learning_rate_initial]");
  }
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
}

CompetitiveNetwork CompetitiveNetwork::init(const NetworkConfig& config, std::size_t input_dim,
                                            std::span<const InputVector> samples) {
  config.validate();
  if (samples.size() < config.num_units) {
    throw std::invalid_argument("network init: " + std::to_string(samples.size()) +
                                " samples for " + std::to_string(config.num_units) + " units");
  }
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[draw_below(rng, i + 1)]);
  }

  std::vector<std::size_t> chosen;
  for (std::size_t idx : order) {
    if (chosen.size() == config.num_units) break;
    const bool repeat = std::any_of(chosen.begin(), chosen.end(),
                                    [&](std::size_t c) { return samples[c] == samples[idx]; });
    if (!repeat) chosen.push_back(idx);
  }
  // Not enough distinct values: fall back to repeated ones, still distinct samples.
  for (std::size_t idx : order) {
    if (chosen.size() == config.num_units) break;
    if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
  }

  CompetitiveNetwork net;
  net.config_ = config;
  net.dim_ = input_dim;
  for (std::size_t idx : chosen) {
    net.check_dim(samples[idx]);
    net.weights_.push_back(samples[idx].to_dense(input_dim));
  }
  return net;
}

CompetitiveNetwork CompetitiveNetwork::from_weights(const NetworkConfig& config,
                                                    std::vector<std::vector<double>> weights) {
  if (weights.empty()) throw std::invalid_argument("network needs at least one unit");
  CompetitiveNetwork net;
  net.config_ = config;
  net.dim_ = weights.front().size();
  for (const auto& w : weights) {
    if (w.size() != net.dim_) throw std::invalid_argument("unit weight dimensions differ");
    if (!std::all_of(w.begin(), w.end(), [](double x) { return std::isfinite(x); })) {
      throw std::invalid_argument("unit weights must be finite");
    }
  }
  net.config_.num_units = weights.size();
  net.weights_ = std::move(weights);
  return net;
}

void CompetitiveNetwork::check_dim(const InputVector& x) const {
  if (!x.entries.empty() && x.entries.back().first >= dim_) {
    throw std::invalid_argument("input dimension " + std::to_string(x.entries.back().first + 1) +
                                " exceeds network dimension " + std::to_string(dim_));
  }
}

double CompetitiveNetwork::squared_distance(std::size_t unit, const InputVector& x) const {
  const auto& w = weights_.at(unit);
  double sum = 0.0;
  auto it = x.entries.begin();
  for (std::size_t d = 0; d < dim_; ++d) {
    double xd = 0.0;
    if (it != x.entries.end() && it->first == d) {
      xd = it->second;
      ++it;
    }
    const double diff = w[d] - xd;
    sum += diff * diff;
  }
  return sum;
}

double CompetitiveNetwork::dot(std::size_t unit, const InputVector& x) const {
  const auto& w = weights_.at(unit);
  double sum = 0.0;
  for (const auto& [d, xd] : x.entries) sum += w[d] * xd;
  return sum;
}

std::size_t CompetitiveNetwork::winner(const InputVector& x) const {
  check_dim(x);
  std::size_t best = 0;
  if (config_.winner_rule == WinnerRule::kDotProduct) {
    double best_s = dot(0, x);
    for (std::size_t k = 1; k < weights_.size(); ++k) {
      const double s = dot(k, x);
      if (s > best_s) {
        best = k;
        best_s = s;
      }
    }
    return best;
  }
  double best_d = squared_distance(0, x);
  for (std::size_t k = 1; k < weights_.size(); ++k) {
    const double d = squared_distance(k, x);
    if (d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

void CompetitiveNetwork::schedule(std::uint64_t total_steps) {
  schedule_begin_ = step_;
  schedule_length_ = total_steps;
}

double CompetitiveNetwork::learning_rate() const {
  const double first = config_.learning_rate_initial;
  const double last = config_.learning_rate_final;
  if (schedule_length_ == 0 || step_ < schedule_begin_) return first;
  const std::uint64_t t = step_ - schedule_begin_;
  if (t + 1 >= schedule_length_) return schedule_length_ == 1 ? first : last;
  const double frac = static_cast<double>(t) / static_cast<double>(schedule_length_ - 1);
  return first + (last - first) * frac;
}

std::size_t CompetitiveNetwork::train_step(const InputVector& x) {
  const std::size_t k = winner(x);
  const double rate = learning_rate();
  auto& w = weights_[k];
  auto it = x.entries.begin();
  for (std::size_t d = 0; d < dim_; ++d) {
    double xd = 0.0;
    if (it != x.entries.end() && it->first == d) {
      xd = it->second;
      ++it;
    }
    w[d] += rate * (xd - w[d]);
  }
  ++step_;
  return k;
}

std::string CompetitiveNetwork::snapshot_json() const {
  std::string out = "{\"dims\":" + std::to_string(dim_) +
                    ",\"K\":" + std::to_string(weights_.size()) +
                    ",\"seed\":" + std::to_string(config_.seed) +
                    ",\"step\":" + std::to_string(step_) + ",\"weights\":[";
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (k) out += ',';
    out += '[';
    for (std::size_t d = 0; d < dim_; ++d) {
      if (d) out += ',';
      out += format_real(weights_[k][d]);
    }
    out += ']';
  }
  out += "]}";
  return out;
}

CompetitiveNetwork CompetitiveNetwork::from_snapshot_json(std::string_view text,
                                                          const NetworkConfig& config) {
  const auto j = nlohmann::json::parse(text);
  auto weights = j.at("weights").get<std::vector<std::vector<double>>>();
  if (weights.size() != j.at("K").get<std::size_t>()) {
    throw std::invalid_argument("snapshot: K does not match weights");
  }
  NetworkConfig cfg = config;
  cfg.seed = j.at("seed").get<std::uint64_t>();
  auto net = from_weights(cfg, std::move(weights));
  if (net.dim_ != j.at("dims").get<std::size_t>()) {
    throw std::invalid_argument("snapshot: dims does not match weights");
  }
  net.step_ = j.at("step").get<std::uint64_t>();
  return net;
}

void TrainingLog::write_tsv(std::ostream& out) const {
  for (std::size_t e = 0; e < winners.size(); ++e) {
    for (std::size_t k = 0; k < winners[e].size(); ++k) {
      out << (e + 1) << '\t' << k << '\t' << winners[e][k] << '\n';
    }
  }
}

TrainingLog train(CompetitiveNetwork& net, std::span<const InputVector> stream, int epochs) {
  if (stream.empty()) throw std::invalid_argument("train: empty occurrence stream");
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  net.schedule(static_cast<std::uint64_t>(epochs) * stream.size());
  TrainingLog log;
  for (int e = 0; e < epochs; ++e) {
    std::vector<std::uint64_t> wins(net.num_units(), 0);
    for (const auto& x : stream) ++wins[net.train_step(x)];
    log.winners.push_back(std::move(wins));
    log.snapshots.push_back(net.snapshot_json());
  }
  return log;
}

std::vector<std::size_t> classify(const CompetitiveNetwork& net,
                                  std::span<const InputVector> stream) {
  std::vector<std::size_t> out;
  out.reserve(stream.size());
  for (const auto& x : stream) out.push_back(net.winner(x));
  return out;
}

}  // namespace wordgroup
