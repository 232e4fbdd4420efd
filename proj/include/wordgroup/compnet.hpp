#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordgroup/cooccur.hpp"

namespace wordgroup {

/// Sparse input vector: (dimension, value) pairs sorted by dimension, no
/// duplicates. Missing dimensions are zero.
struct InputVector {
  std::vector<std::pair<std::size_t, double>> entries;

  static InputVector from_dense(std::span<const double> dense);
  std::vector<double> to_dense(std::size_t dim) const;

  friend bool operator==(const InputVector&, const InputVector&) = default;
};

/// One target occurrence encoded as a one-hot word block followed by the
/// L1-normalized bag of context words inside its window.
struct Occurrence {
  std::size_t position = 0;  // index in the token stream
  std::size_t word = 0;      // index into the target list
  InputVector input;
};

/// Encodes every occurrence of a target word, in stream order. The input
/// dimension is targets.size() + contexts.size().
std::vector<Occurrence> encode_occurrences(const TokenStream& tokens, const WordList& targets,
                                           const WordList& contexts,
                                           const WindowConfig& window);

/// How the winning unit is picked: largest weight-input inner product
/// (classic competitive learning) or smallest Euclidean distance.
enum class WinnerRule { kDotProduct, kEuclidean };

WinnerRule parse_winner_rule(std::string_view name);
std::string_view to_string(WinnerRule rule);

struct NetworkConfig {
  std::size_t num_units = 2;
  WinnerRule winner_rule = WinnerRule::kDotProduct;
  double learning_rate_initial = 0.3;
  double learning_rate_final = 0.01;
  int epochs = 3;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when a field is out of range. A final rate
  /// of 0 is allowed and freezes the weights at the end of the schedule.
  void validate() const;
};

/// Winner-take-all competitive layer; the winning unit moves toward each
/// training input.
class CompetitiveNetwork {
 public:
  /// Seeds each unit with a different randomly chosen sample, preferring
  /// samples with distinct values. Throws if samples.size() < num_units.
  static CompetitiveNetwork init(const NetworkConfig& config, std::size_t input_dim,
                                 std::span<const InputVector> samples);

  /// Builds a network from explicit weights (all the same dimension).
  static CompetitiveNetwork from_weights(const NetworkConfig& config,
                                         std::vector<std::vector<double>> weights);

  const NetworkConfig& config() const { return config_; }
  std::size_t num_units() const { return weights_.size(); }
  std::size_t input_dim() const { return dim_; }
  std::uint64_t step() const { return step_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }

  /// Squared Euclidean distance between unit `unit` and x.
  double squared_distance(std::size_t unit, const InputVector& x) const;
  double dot(std::size_t unit, const InputVector& x) const;

  /// Best unit under the configured rule; ties go to the lowest id.
  std::size_t winner(const InputVector& x) const;

  /// Plans a linear decay from the initial to the final rate over the next
  /// `total_steps` calls to train_step.
  void schedule(std::uint64_t total_steps);

  /// Rate the next train_step will use.
  double learning_rate() const;

  /// Moves the winner toward x by the current rate and returns its id.
  std::size_t train_step(const InputVector& x);

  /// {dims, K, seed, step, weights}, reals at 17 significant digits.
  std::string snapshot_json() const;
  static CompetitiveNetwork from_snapshot_json(std::string_view text,
                                               const NetworkConfig& config);

 private:
  void check_dim(const InputVector& x) const;

  NetworkConfig config_;
  std::size_t dim_ = 0;
  std::vector<std::vector<double>> weights_;
  std::uint64_t step_ = 0;
  std::uint64_t schedule_begin_ = 0;
  std::uint64_t schedule_length_ = 0;
};

struct TrainingLog {
  /// winners[epoch][unit] = number of inputs the unit won in that epoch.
  std::vector<std::vector<std::uint64_t>> winners;
  /// Network state at the end of each epoch, as snapshot_json().
  std::vector<std::string> snapshots;

  /// `epoch<TAB>unit<TAB>winner_count`, epochs counted from 1.
  void write_tsv(std::ostream& out) const;
};

/// Runs `epochs` passes over the stream in order, scheduling the rate decay
/// across all of them. Throws on an empty stream or epochs < 1.
TrainingLog train(CompetitiveNetwork& net, std::span<const InputVector> stream, int epochs);

/// Winner per input; weights are not touched.
std::vector<std::size_t> classify(const CompetitiveNetwork& net,
                                  std::span<const InputVector> stream);

}  // namespace wordgroup
