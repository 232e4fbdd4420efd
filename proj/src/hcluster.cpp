#include "wordgroup/hcluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "wordgroup/format.hpp"

namespace wordgroup {
namespace {

using json = nlohmann::json;

void check_matrix(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) throw std::invalid_argument("agglomerate: need at least 2 labels");
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw std::invalid_argument("agglomerate: non-zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = d(i, j);
      if (!std::isfinite(x)) throw std::invalid_argument("agglomerate: non-finite distance");
      if (x < 0.0) throw std::invalid_argument("agglomerate: negative distance");
      if (x != d(j, i)) throw std::invalid_argument("agglomerate: matrix not symmetric");
    }
  }
}

bool needs_quotes(const std::string& label) {
  return label.empty() || label.find_first_of(" \t\r\n()[]':;,") != std::string::npos;
}

void append_label(const std::string& label, std::string& out) {
  if (!needs_quotes(label)) {
    out += label;
    return;
  }
  out += '\'';
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
}

void newick_node(const Dendrogram& tree, std::size_t node, std::string& out) {
  if (tree.is_leaf(node)) {
    append_label(tree.leaves()[node], out);
    return;
  }
  const Merge& m = tree.merge_of(node);
  out += '(';
  for (std::size_t child : {m.left, m.right}) {
    newick_node(tree, child, out);
    out += ':';
    out += format_shortest(m.height - tree.height(child));
    if (child == m.left) out += ',';
  }
  out += ')';
}

json json_node(const Dendrogram& tree, std::size_t node) {
  json j;
  j["id"] = node;
  if (tree.is_leaf(node)) {
    j["label"] = tree.leaves()[node];
  } else {
    const Merge& m = tree.merge_of(node);
    j["children"] = json::array({json_node(tree, m.left), json_node(tree, m.right)});
  }
  j["height"] = tree.height(node);
  return j;
}

void ascii_node(const Dendrogram& tree, std::size_t node, const std::string& prefix,
                bool last, bool top, std::string& out) {
  std::string line = prefix;
  if (!top) line += last ? "`-- " : "|-- ";
  if (tree.is_leaf(node)) {
    line += tree.leaves()[node];
  } else {
    line += "+ " + format_shortest(tree.height(node));
  }
  out += line;
  out += '\n';
  if (tree.is_leaf(node)) return;
  const std::string child_prefix = top ? prefix : prefix + (last ? "    " : "|   ");
  const Merge& m = tree.merge_of(node);
  ascii_node(tree, m.left, child_prefix, false, false, out);
  ascii_node(tree, m.right, child_prefix, true, false, out);
}

}  // namespace

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::kSingle;
  if (name == "complete") return Linkage::kComplete;
  if (name == "average") return Linkage::kAverage;
  throw std::invalid_argument("unknown linkage: " + std::string(name));
}

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::kSingle: return "single";
    case Linkage::kComplete: return "complete";
    case Linkage::kAverage: return "average";
  }
  return "average";
}

TreeFormat parse_tree_format(std::string_view name) {
  if (name == "newick") return TreeFormat::kNewick;
  if (name == "json") return TreeFormat::kJson;
  if (name == "ascii") return TreeFormat::kAscii;
  throw std::invalid_argument("unknown tree format: " + std::string(name));
}

Dendrogram::Dendrogram(std::vector<std::string> leaves, std::vector<Merge> merges)
    : leaves_(std::move(leaves)), merges_(std::move(merges)) {
  validate();
}

void Dendrogram::validate() const {
  const std::size_t n = leaves_.size();
  if (n == 0) throw std::invalid_argument("dendrogram: no leaves");
  if (merges_.size() != n - 1) throw std::invalid_argument("dendrogram: need L-1 merges");
  std::vector<bool> used(2 * n - 1, false);
  for (std::size_t s = 0; s < merges_.size(); ++s) {
    const Merge& m = merges_[s];
    if (m.node != n + s) throw std::invalid_argument("dendrogram: merge node ids out of order");
    for (std::size_t child : {m.left, m.right}) {
      if (child >= m.node || used[child]) {
        throw std::invalid_argument("dendrogram: invalid or reused child node");
      }
      used[child] = true;
    }
    if (m.left == m.right) throw std::invalid_argument("dendrogram: self merge");
    if (!std::isfinite(m.height)) throw std::invalid_argument("dendrogram: non-finite height");
  }
}

double Dendrogram::height(std::size_t node) const {
  return is_leaf(node) ? 0.0 : merge_of(node).height;
}

std::size_t Dendrogram::min_leaf(std::size_t node) const {
  while (!is_leaf(node)) node = merge_of(node).left;
  return node;
}

std::vector<std::vector<std::string>> Partition::groups() const {
  std::vector<std::vector<std::string>> out(k);
  for (std::size_t i = 0; i < words.size(); ++i) out[cluster[i]].push_back(words[i]);
  return out;
}

Dendrogram agglomerate(const DistanceMatrix& d, Linkage linkage) {
  check_matrix(d);
  const std::size_t n = d.size();

  // Working distances are indexed by slot; a merged cluster reuses the slot
  // of one child.
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = d(i, j);
  }
  std::vector<std::size_t> node_of(n);
  std::iota(node_of.begin(), node_of.end(), 0);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> min_leaf(n);
  std::iota(min_leaf.begin(), min_leaf.end(), 0);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);

  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 0;
    std::tuple<double, std::size_t, std::size_t> best{INFINITY, 0, 0};
    for (std::size_t x = 0; x < active.size(); ++x) {
      const std::size_t a = active[x];
      const double* row = &dist[a * n];
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const std::size_t b = active[y];
        const double dab = row[b];
        if (dab > std::get<0>(best)) continue;
        const auto key = std::make_tuple(dab, std::min(node_of[a], node_of[b]),
                                         std::max(node_of[a], node_of[b]));
        if (key < best) {
          best = key;
          best_a = a;
          best_b = b;
        }
      }
    }

    const std::size_t a = best_a, b = best_b;
    Merge m;
    m.height = std::get<0>(best);
    m.node = n + step;
    if (min_leaf[a] < min_leaf[b]) {
      m.left = node_of[a], m.right = node_of[b];
    } else {
      m.left = node_of[b], m.right = node_of[a];
    }
    merges.push_back(m);

    const double na = static_cast<double>(size[a]);
    const double nb = static_cast<double>(size[b]);
    for (std::size_t k : active) {
      if (k == a || k == b) continue;
      const double dka = dist[k * n + a];
      const double dkb = dist[k * n + b];
      double merged = 0.0;
      switch (linkage) {
        case Linkage::kSingle: merged = std::min(dka, dkb); break;
        case Linkage::kComplete: merged = std::max(dka, dkb); break;
        case Linkage::kAverage: merged = (na * dka + nb * dkb) / (na + nb); break;
      }
      dist[k * n + a] = merged;
      dist[a * n + k] = merged;
    }
    node_of[a] = m.node;
    size[a] += size[b];
    min_leaf[a] = std::min(min_leaf[a], min_leaf[b]);
    active.erase(std::find(active.begin(), active.end(), b));
  }
  return Dendrogram(d.labels(), std::move(merges));
}

Partition cut(const Dendrogram& tree, std::size_t k) {
  const std::size_t n = tree.num_leaves();
  if (k < 1 || k > n) {
    throw std::invalid_argument("cut: k must be in [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t s = 0; s < n - k; ++s) {
    const Merge& m = tree.merges()[s];
    parent[m.left] = m.node;
    parent[m.right] = m.node;
  }
  auto find_root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  Partition p;
  p.words = tree.leaves();
  p.cluster.resize(n);
  std::vector<std::size_t> id_of_root(2 * n - 1, static_cast<std::size_t>(-1));
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    auto& id = id_of_root[find_root(leaf)];
    if (id == static_cast<std::size_t>(-1)) id = p.k++;
    p.cluster[leaf] = id;
  }
  return p;
}

std::string to_newick(const Dendrogram& tree) {
  std::string out;
  newick_node(tree, tree.root(), out);
  out += ';';
  return out;
}

std::string to_json(const Dendrogram& tree) { return json_node(tree, tree.root()).dump(); }

Dendrogram dendrogram_from_json(std::string_view text) {
  const json root = json::parse(text);
  std::vector<std::pair<std::size_t, std::string>> leaves;
  std::vector<Merge> merges;
  // Iterative walk so deep chains cannot overflow the stack.
  std::vector<const json*> stack{&root};
  while (!stack.empty()) {
    const json& node = *stack.back();
    stack.pop_back();
    const auto id = node.at("id").get<std::size_t>();
    if (node.contains("label")) {
      leaves.emplace_back(id, node.at("label").get<std::string>());
      continue;
    }
    const json& children = node.at("children");
    if (!children.is_array() || children.size() != 2) {
      throw std::invalid_argument("dendrogram json: internal node needs two children");
    }
    Merge m;
    m.node = id;
    m.height = node.at("height").get<double>();
    m.left = children[0].at("id").get<std::size_t>();
    m.right = children[1].at("id").get<std::size_t>();
    merges.push_back(m);
    stack.push_back(&children[1]);
    stack.push_back(&children[0]);
  }
  std::sort(leaves.begin(), leaves.end());
  std::sort(merges.begin(), merges.end(),
            [](const Merge& a, const Merge& b) { return a.node < b.node; });
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].first != i) throw std::invalid_argument("dendrogram json: leaf ids not dense");
    labels.push_back(std::move(leaves[i].second));
  }
  return Dendrogram(std::move(labels), std::move(merges));
}

std::string to_ascii(const Dendrogram& tree) {
  std::string out;
  ascii_node(tree, tree.root(), "", true, true, out);
  return out;
}

std::string export_tree(const Dendrogram& tree, TreeFormat format) {
  switch (format) {
    case TreeFormat::kNewick: return to_newick(tree);
    case TreeFormat::kJson: return to_json(tree);
    case TreeFormat::kAscii: return to_ascii(tree);
  }
  return {};
}

}  // namespace wordgroup
