#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "wordgroup/cooccur.hpp"

namespace wordgroup {

enum class Metric { kEuclidean, kSpearman };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

/// Throws std::invalid_argument on dimension mismatch or empty input.
double euclidean(std::span<const double> u, std::span<const double> v);

/// Fractional ranks (1-based); tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman correlation computed as the Pearson correlation of average
/// ranks, which stays exact under ties. Needs dimension >= 2 and at least two
/// distinct values in each vector.
double spearman_rho(std::span<const double> u, std::span<const double> v);

/// 1 - spearman_rho, in [0, 2].
double spearman_distance(std::span<const double> u, std::span<const double> v);

double distance(Metric metric, std::span<const double> u, std::span<const double> v);

/// Symmetric dissimilarity matrix with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * labels_.size() + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double d);

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

  /// Header row and first column hold labels; values at 17 significant digits.
  void write_tsv(std::ostream& out) const;
  static DistanceMatrix read_tsv(std::istream& in);

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

/// Distances between every pair of unflagged rows. Throws if fewer than two
/// rows are usable.
DistanceMatrix pairwise(const ContextVectorSet& vectors, Metric metric);

}  // namespace wordgroup
