#include "wordgroup/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wordgroup/format.hpp"

namespace wordgroup {
namespace {

void check_dims(std::span<const double> u, std::span<const double> v, std::size_t min_dim) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
  }
  if (u.size() < min_dim) {
    throw std::invalid_argument("vectors need dimension >= " + std::to_string(min_dim));
  }
}

// Pearson correlation of two average-rank vectors of equal length.
double rank_correlation(const std::vector<double>& ru, const std::vector<double>& rv) {
  // Average ranks always have mean (m + 1) / 2.
  const double mean = 0.5 * static_cast<double>(ru.size() + 1);
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < ru.size(); ++i) {
    const double a = ru[i] - mean;
    const double b = rv[i] - mean;
    suv += a * b;
    suu += a * a;
    svv += b * b;
  }
  if (suu == 0.0 || svv == 0.0) {
    throw std::invalid_argument("spearman_rho: constant vector has no rank variance");
  }
  return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::kEuclidean;
  if (name == "spearman") return Metric::kSpearman;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

std::string_view to_string(Metric metric) {
  return metric == Metric::kEuclidean ? "euclidean" : "spearman";
}

double euclidean(std::span<const double> u, std::span<const double> v) {
  check_dims(u, v, 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double mean = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> u, std::span<const double> v) {
  check_dims(u, v, 2);
  return rank_correlation(average_ranks(u), average_ranks(v));
}

double spearman_distance(std::span<const double> u, std::span<const double> v) {
  return 1.0 - spearman_rho(u, v);
}

double distance(Metric metric, std::span<const double> u, std::span<const double> v) {
  return metric == Metric::kEuclidean ? euclidean(u, v) : spearman_distance(u, v);
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, double d) {
  const std::size_t n = labels_.size();
  values_.at(i * n + j) = d;
  values_.at(j * n + i) = d;
}

void DistanceMatrix::write_tsv(std::ostream& out) const {
  for (const auto& label : labels_) out << '\t' << label;
  out << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    out << labels_[i];
    for (std::size_t j = 0; j < size(); ++j) out << '\t' << format_real((*this)(i, j));
    out << '\n';
  }
}

DistanceMatrix DistanceMatrix::read_tsv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return fields;
  };
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("distance file: empty");
  auto header = split(line);
  if (header.empty() || !header[0].empty()) {
    throw std::runtime_error("distance file: header must start with a tab");
  }
  header.erase(header.begin());
  DistanceMatrix m(header);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("distance file: missing rows");
    const auto fields = split(line);
    if (fields.size() != m.size() + 1 || fields[0] != m.labels_[i]) {
      throw std::runtime_error("distance file: malformed row " + std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      m.values_[i * m.size() + j] = parse_real(fields[j + 1]);
    }
  }
  return m;
}

DistanceMatrix pairwise(const ContextVectorSet& vectors, Metric metric) {
  const auto rows = vectors.usable();
  if (rows.size() < 2) {
    throw std::invalid_argument("pairwise: need at least 2 targets with context, have " +
                                std::to_string(rows.size()));
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> dense;
  for (std::size_t r : rows) {
    labels.push_back(vectors.targets()[r]);
    dense.push_back(vectors.dense_row(r));
  }
  if (metric == Metric::kSpearman) {
    if (dense[0].size() < 2) throw std::invalid_argument("spearman needs dimension >= 2");
    for (auto& row : dense) row = average_ranks(row);
  }
  DistanceMatrix m(std::move(labels));
  for (std::size_t a = 0; a < dense.size(); ++a) {
    for (std::size_t b = a + 1; b < dense.size(); ++b) {
      const double d = metric == Metric::kEuclidean
                           ? euclidean(dense[a], dense[b])
                           : 1.0 - rank_correlation(dense[a], dense[b]);
      m.set(a, b, d);
    }
  }
  return m;
}

}  // namespace wordgroup
