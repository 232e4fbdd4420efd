#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

struct Counts {
  std::map<std::pair<std::string, std::string>, std::uint64_t> cells;
  std::map<std::string, std::uint64_t> positions;
};

/// Every (target occurrence, other position) pair is examined.
inline Counts window_counts(const std::vector<std::string>& tokens,
                            const std::vector<std::string>& targets,
                            const std::vector<std::string>& contexts, int side, int gap) {
  Counts out;
  for (const auto& t : targets) out.positions[t] = 0;
  const auto n = static_cast<long>(tokens.size());
  for (long p = 0; p < n; ++p) {
    if (std::find(targets.begin(), targets.end(), tokens[p]) == targets.end()) continue;
    for (long q = 0; q < n; ++q) {
      const long off = std::labs(q - p);
      if (off <= gap || off > gap + side) continue;
      ++out.positions[tokens[p]];
      if (std::find(contexts.begin(), contexts.end(), tokens[q]) != contexts.end()) {
        ++out.cells[{tokens[p], tokens[q]}];
      }
    }
  }
  return out;
}

/// Rank of each value = 1 + (#smaller) + (#equal - 1) / 2, by pairwise counting.
inline std::vector<double> naive_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double x : v) {
      if (x < v[i]) ++less;
      if (x == v[i]) ++equal;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= n, mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(naive_ranks(a), naive_ranks(b));
}

/// Textbook no-ties formula 1 - 6 sum d^2 / (m (m^2 - 1)).
inline double spearman_no_ties(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = naive_ranks(a), rb = naive_ranks(b);
  double d2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double m = static_cast<double>(a.size());
  return 1.0 - 6.0 * d2 / (m * (m * m - 1.0));
}

struct OracleMerge {
  std::size_t left, right;
  double height;
};

/// linkage: 0 single, 1 complete, 2 average. Inter-cluster distances are
/// recomputed from the leaf sets at every step.
inline std::vector<OracleMerge> hac(const std::vector<std::vector<double>>& d, int linkage) {
  const std::size_t n = d.size();
  struct Cluster {
    std::size_t node;
    std::vector<std::size_t> leaves;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}});
  auto between = [&](const Cluster& a, const Cluster& b) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0, sum = 0;
    for (auto i : a.leaves) {
      for (auto j : b.leaves) {
        lo = std::min(lo, d[i][j]);
        hi = std::max(hi, d[i][j]);
        sum += d[i][j];
      }
    }
    if (linkage == 0) return lo;
    if (linkage == 1) return hi;
    return sum / static_cast<double>(a.leaves.size() * b.leaves.size());
  };
  std::vector<OracleMerge> merges;
  std::size_t next = n;
  while (active.size() > 1) {
    std::tuple<double, std::size_t, std::size_t> best{std::numeric_limits<double>::infinity(), 0, 0};
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const auto key = std::make_tuple(between(active[a], active[b]),
                                         std::min(active[a].node, active[b].node),
                                         std::max(active[a].node, active[b].node));
        if (key < best) best = key, ba = a, bb = b;
      }
    }
    Cluster& A = active[ba];
    Cluster& B = active[bb];
    const auto min_a = *std::min_element(A.leaves.begin(), A.leaves.end());
    const auto min_b = *std::min_element(B.leaves.begin(), B.leaves.end());
    merges.push_back({min_a < min_b ? A.node : B.node, min_a < min_b ? B.node : A.node,
                      std::get<0>(best)});
    Cluster merged{next++, A.leaves};
    merged.leaves.insert(merged.leaves.end(), B.leaves.begin(), B.leaves.end());
    active.erase(active.begin() + static_cast<long>(bb));
    active[ba] = std::move(merged);
  }
  return merges;
}

}  // namespace oracle
