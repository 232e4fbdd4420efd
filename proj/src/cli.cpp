#include "wordgroup/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "wordgroup/cooccur.hpp"
#include "wordgroup/corpus.hpp"
#include "wordgroup/elman.hpp"
#include "wordgroup/evaluate.hpp"
#include "wordgroup/format.hpp"
#include "wordgroup/hcluster.hpp"
#include "wordgroup/metrics.hpp"

namespace wordgroup::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Artifacts are written to a sibling staging directory which replaces the
// destination only on commit(); an abandoned staging directory is removed.
class StagedDir {
 public:
  explicit StagedDir(const std::string& out) : final_(out), staging_(out + ".partial") {
    if (final_.empty()) throw ConfigError("--out is required");
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;
  ~StagedDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  fs::path path(const std::string& name) const { return staging_ / name; }

  void write(const std::string& name, const std::string& content) const {
    const fs::path p = path(name);
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("failed writing " + p.string());
  }

  void commit() {
    fs::remove_all(final_);
    fs::rename(staging_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path staging_;
  bool committed_ = false;
};

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

std::string report_text(const ojson& report, int indent = 0) {
  std::string out;
  for (const auto& [key, value] : report.items()) {
    out += std::string(indent, ' ') + key + ":";
    if (value.is_object()) {
      out += "\n" + report_text(value, indent + 2);
      continue;
    }
    if (value.is_number_float()) {
      out += " " + format_shortest(value.get<double>());
    } else if (value.is_string()) {
      out += " " + value.get<std::string>();
    } else {
      out += " " + value.dump();
    }
    out += "\n";
  }
  return out;
}

void require_file(const std::string& path, const char* what) {
  if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

template <typename Fn>
auto as_config_error(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void check_corpus_paths(const RunConfig& c) {
  if (c.corpus.empty()) throw ConfigError("at least one --corpus path is required");
  for (const auto& p : c.corpus) require_file(p, "corpus");
}

TokenStream read_corpora(const RunConfig& c) {
  TokenStream tokens;
  for (const auto& p : c.corpus) {
    auto part = tokenize_file(p);
    tokens.insert(tokens.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return tokens;
}

WindowConfig window_of(const RunConfig& c) {
  WindowConfig w{c.side_length, c.gap};
  as_config_error([&] { w.validate(); });
  return w;
}

LabeledCorpus load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels file: " + path);
  return read_labels(in);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> read_tsv_rows(const std::string& path,
                                                    std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, '\t');) fields.push_back(f);
    if (fields.size() != columns) {
      throw std::runtime_error(path + ": expected " + std::to_string(columns) +
                               " tab-separated columns: " + line);
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::size_t parse_index(const std::string& text) {
  std::size_t used = 0;
  const auto v = std::stoull(text, &used);
  if (used != text.size()) throw std::runtime_error("not an integer: " + text);
  return static_cast<std::size_t>(v);
}

// Gold groups from --gold, or derived from --labels categories.
std::optional<GoldGroups> load_gold(const RunConfig& c) {
  if (!c.gold.empty()) return GoldGroups::from_file(c.gold);
  if (!c.labels.empty()) return gold_from_labels(load_labels(c.labels));
  return std::nullopt;
}

void add_partition_scores(ojson& report, const Partition& partition, const GoldGroups& gold,
                          std::ostream& log) {
  auto filtered = filter_gold(gold, partition.words);
  for (const auto& w : filtered.warnings) log << "warning: " << w << '\n';
  report["gold_groups"] = filtered.gold.groups.size();
  report["gold_words"] = filtered.gold.words().size();
  if (filtered.gold.groups.empty()) {
    report["warnings"] = filtered.warnings;
    return;
  }
  report["purity"] = purity(partition, filtered.gold);
  const auto f1 = group_f1(partition, filtered.gold);
  report["macro_f1"] = f1.macro;
  ojson per_group = ojson::object();
  for (const auto& [name, value] : f1.per_group) per_group[name] = value;
  report["group_f1"] = per_group;
  report["warnings"] = filtered.warnings;
}

std::string partition_tsv(const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.words.size(); ++i) {
    out += p.words[i] + '\t' + std::to_string(p.cluster[i]) + '\n';
  }
  return out;
}

void finish_report(StagedDir& dir, const ojson& report) {
  dir.write("report.json", report.dump(2) + "\n");
  dir.write("report.txt", report_text(report));
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  ojson j;
  j["corpus"] = corpus;
  j["n_targets"] = n_targets;
  j["n_contexts"] = n_contexts;
  j["side_length"] = side_length;
  j["gap"] = gap;
  j["metric"] = metric;
  j["linkage"] = linkage;
  j["k"] = k;
  j["gold"] = gold;
  j["labels"] = labels;
  j["num_units"] = num_units;
  j["winner_rule"] = winner_rule;
  j["learning_rate_initial"] = learning_rate_initial;
  j["learning_rate_final"] = learning_rate_final;
  j["epochs"] = epochs;
  j["num_sentences"] = num_sentences;
  j["boundary_token"] = boundary_token;
  j["partition"] = partition;
  j["assignments"] = assignments;
  j["seed"] = seed;
  j["out"] = out;
  return j;
}

void RunConfig::merge_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "corpus") {
        corpus = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                               : v.get<std::vector<std::string>>();
      } else if (key == "n_targets") {
        n_targets = v.get<std::size_t>();
      } else if (key == "n_contexts") {
        n_contexts = v.get<std::size_t>();
      } else if (key == "side_length") {
        side_length = v.get<int>();
      } else if (key == "gap") {
        gap = v.get<int>();
      } else if (key == "metric") {
        metric = v.get<std::string>();
      } else if (key == "linkage") {
        linkage = v.get<std::string>();
      } else if (key == "k") {
        k = v.get<std::size_t>();
      } else if (key == "gold") {
        gold = v.get<std::string>();
      } else if (key == "labels") {
        labels = v.get<std::string>();
      } else if (key == "num_units") {
        num_units = v.get<std::size_t>();
      } else if (key == "winner_rule") {
        winner_rule = v.get<std::string>();
      } else if (key == "learning_rate_initial") {
        learning_rate_initial = v.get<double>();
      } else if (key == "learning_rate_final") {
        learning_rate_final = v.get<double>();
      } else if (key == "epochs") {
        epochs = v.get<int>();
      } else if (key == "num_sentences") {
        num_sentences = v.get<std::size_t>();
      } else if (key == "boundary_token") {
        boundary_token = v.get<std::string>();
      } else if (key == "partition") {
        partition = v.get<std::string>();
      } else if (key == "assignments") {
        assignments = v.get<std::string>();
      } else if (key == "seed") {
        seed = v.get<std::uint64_t>();
      } else if (key == "out") {
        out = v.get<std::string>();
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

NetworkConfig RunConfig::network() const {
  NetworkConfig n;
  n.num_units = num_units;
  n.winner_rule = parse_winner_rule(winner_rule);
  n.learning_rate_initial = learning_rate_initial;
  n.learning_rate_final = learning_rate_final;
  n.epochs = epochs;
  n.seed = seed;
  return n;
}

void cmd_cluster(const RunConfig& c, std::ostream& log) {
  check_corpus_paths(c);
  if (c.n_targets < 1) throw ConfigError("n_targets must be >= 1");
  const WindowConfig window = window_of(c);
  const Metric metric = as_config_error([&] { return parse_metric(c.metric); });
  const Linkage linkage = as_config_error([&] { return parse_linkage(c.linkage); });
  if (!c.gold.empty()) require_file(c.gold, "gold groups file");
  if (!c.labels.empty()) require_file(c.labels, "labels file");

  StagedDir dir(c.out);
  dir.write("config.json", c.to_json().dump(2) + "\n");

  const TokenStream tokens = read_corpora(c);
  const Vocabulary vocab = build_vocabulary(tokens);
  const WordList targets = select_top(vocab, c.n_targets);
  const WordList contexts = select_top(vocab, c.n_contexts ? c.n_contexts : c.n_targets);
  dir.write("vocab.tsv", render([&](std::ostream& s) { vocab.write_tsv(s); }));

  const auto table = count(tokens, targets, contexts, window);
  dir.write("counts.tsv", render([&](std::ostream& s) { table.write_tsv(s); }));
  const auto vectors = to_vectors(table);
  dir.write("vectors.tsv", render([&](std::ostream& s) { vectors.write_tsv(s); }));

  const auto distances = pairwise(vectors, metric);
  dir.write("distances.tsv", render([&](std::ostream& s) { distances.write_tsv(s); }));
  const auto tree = agglomerate(distances, linkage);
  dir.write("tree.nwk", to_newick(tree) + "\n");
  dir.write("tree.json", to_json(tree) + "\n");
  dir.write("tree.txt", to_ascii(tree));

  ojson report;
  report["tokens"] = tokens.size();
  report["vocabulary"] = vocab.size();
  report["targets"] = targets.size();
  report["contexts"] = contexts.size();
  report["usable_targets"] = distances.size();
  ojson flagged = ojson::array();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors.flagged(i)) flagged.push_back(vectors.targets()[i]);
  }
  report["flagged_targets"] = flagged;

  const auto gold = load_gold(c);
  std::size_t k = c.k;
  if (k == 0 && gold) {
    k = filter_gold(*gold, distances.labels()).gold.groups.size();
  }
  if (k > 0) {
    k = std::min(k, tree.num_leaves());
    const Partition partition = cut(tree, k);
    dir.write("partition.tsv", partition_tsv(partition));
    report["k"] = partition.k;
    if (gold) add_partition_scores(report, partition, *gold, log);
  }
  finish_report(dir, report);
  dir.commit();
  log << "cluster: " << distances.size() << " targets clustered into " << c.out << '\n';
}

void cmd_nn(const RunConfig& c, std::ostream& log) {
  check_corpus_paths(c);
  if (c.n_targets < 1) throw ConfigError("n_targets must be >= 1");
  const WindowConfig window = window_of(c);
  const NetworkConfig net_config = as_config_error([&] { return c.network(); });
  as_config_error([&] { net_config.validate(); });
  if (!c.labels.empty()) require_file(c.labels, "labels file");

  StagedDir dir(c.out);
  dir.write("config.json", c.to_json().dump(2) + "\n");

  const TokenStream tokens = read_corpora(c);
  std::optional<LabeledCorpus> labeled;
  if (!c.labels.empty()) {
    labeled = load_labels(c.labels);
    if (labeled->tokens != tokens) {
      throw std::runtime_error("labels file does not match the corpus token stream");
    }
  }
  const Vocabulary vocab = build_vocabulary(tokens);
  const WordList targets = select_top(vocab, c.n_targets);
  const WordList contexts = select_top(vocab, c.n_contexts ? c.n_contexts : c.n_targets);
  const auto occurrences = encode_occurrences(tokens, targets, contexts, window);
  std::vector<InputVector> inputs;
  inputs.reserve(occurrences.size());
  for (const auto& o : occurrences) inputs.push_back(o.input);
  if (inputs.size() < net_config.num_units) {
    throw ConfigError("num_units (" + std::to_string(net_config.num_units) +
                      ") exceeds the number of occurrences (" + std::to_string(inputs.size()) +
                      ")");
  }

  auto net = CompetitiveNetwork::init(net_config, targets.size() + contexts.size(), inputs);
  dir.write("snapshots/initial.json", net.snapshot_json() + "\n");
  const auto log_data = train(net, inputs, net_config.epochs);
  for (std::size_t e = 0; e < log_data.snapshots.size(); ++e) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshots/epoch_%04zu.json", e + 1);
    dir.write(name, log_data.snapshots[e] + "\n");
  }
  dir.write("weights.json", net.snapshot_json() + "\n");
  dir.write("training_log.tsv", render([&](std::ostream& s) { log_data.write_tsv(s); }));

  const auto units = classify(net, inputs);
  std::string assignments;
  std::map<std::string, std::vector<std::uint64_t>> word_units;
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    const auto& word = targets[occurrences[i].word];
    assignments += std::to_string(occurrences[i].position) + '\t' + word + '\t' +
                   std::to_string(units[i]) + '\n';
    auto& hist = word_units[word];
    hist.resize(net.num_units(), 0);
    ++hist[units[i]];
  }
  dir.write("assignments.tsv", assignments);

  ojson report;
  report["tokens"] = tokens.size();
  report["occurrences"] = occurrences.size();
  report["input_dim"] = net.input_dim();
  report["units"] = net.num_units();
  report["steps"] = net.step();
  if (labeled) {
    std::vector<std::string> categories;
    categories.reserve(occurrences.size());
    for (const auto& o : occurrences) categories.push_back(labeled->labels[o.position]);
    report["category_accuracy"] = category_accuracy(units, categories);
  }
  std::size_t split = 0;
  ojson words = ojson::object();
  for (const auto& [word, hist] : word_units) {
    words[word] = hist;
    split += std::count_if(hist.begin(), hist.end(), [](auto n) { return n > 0; }) > 1;
  }
  report["words_in_several_units"] = split;
  report["word_units"] = words;
  finish_report(dir, report);
  dir.commit();
  log << "nn: trained " << net.num_units() << " units on " << inputs.size()
      << " occurrences into " << c.out << '\n';
}

void cmd_elman(const RunConfig& c, std::ostream& log) {
  if (c.num_sentences < 1) throw ConfigError("num_sentences must be >= 1");
  StagedDir dir(c.out);
  dir.write("config.json", c.to_json().dump(2) + "\n");
  GenerateOptions options;
  if (!c.boundary_token.empty()) options.boundary_token = c.boundary_token;
  const auto corpus = generate(default_grammar(), c.num_sentences, c.seed, options);
  dir.write("corpus.txt", render([&](std::ostream& s) { corpus.write_text(s); }));
  dir.write("labels.tsv", render([&](std::ostream& s) { corpus.write_labels(s); }));
  dir.commit();
  log << "elman: " << c.num_sentences << " sentences, " << corpus.tokens.size()
      << " tokens into " << c.out << '\n';
}

void cmd_eval(const RunConfig& c, std::ostream& report_out, std::ostream& log) {
  ojson report;
  if (!c.partition.empty()) {
    require_file(c.partition, "partition file");
    if (c.gold.empty() && c.labels.empty()) throw ConfigError("eval needs --gold or --labels");
    if (!c.gold.empty()) require_file(c.gold, "gold groups file");
    if (!c.labels.empty()) require_file(c.labels, "labels file");
    Partition p;
    std::set<std::size_t> ids;
    for (const auto& row : read_tsv_rows(c.partition, 2)) {
      p.words.push_back(row[0]);
      p.cluster.push_back(parse_index(row[1]));
      ids.insert(p.cluster.back());
    }
    p.k = ids.size();
    if (!ids.empty() && *ids.rbegin() + 1 != p.k) {
      throw std::runtime_error("partition cluster ids must be dense from 0");
    }
    report["k"] = p.k;
    add_partition_scores(report, p, *load_gold(c), log);
  } else if (!c.assignments.empty()) {
    require_file(c.assignments, "assignments file");
    if (c.labels.empty()) throw ConfigError("eval --assignments needs --labels");
    require_file(c.labels, "labels file");
    const auto labeled = load_labels(c.labels);
    std::vector<std::size_t> units;
    std::vector<std::string> categories;
    for (const auto& row : read_tsv_rows(c.assignments, 3)) {
      const std::size_t pos = parse_index(row[0]);
      if (pos >= labeled.tokens.size() || labeled.tokens[pos] != row[1]) {
        throw std::runtime_error("assignment at position " + row[0] + " does not match labels");
      }
      units.push_back(parse_index(row[2]));
      categories.push_back(labeled.labels[pos]);
    }
    report["occurrences"] = units.size();
    report["category_accuracy"] = category_accuracy(units, categories);
  } else {
    throw ConfigError("eval needs --partition or --assignments");
  }
  report_out << report.dump(2) << '\n';
  if (!c.out.empty()) {
    StagedDir dir(c.out);
    dir.write("config.json", c.to_json().dump(2) + "\n");
    finish_report(dir, report);
    dir.commit();
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributional word grouping: context vectors, clustering, competitive network"};
  app.require_subcommand(1);
  std::string config_path;
  RunConfig flags;

  // Options shared by several subcommands; registered per subcommand so that
  // they can appear after the subcommand name.
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    sub->add_option("--seed", flags.seed, "Random seed");
    sub->add_option("--out", flags.out, "Output directory");
  };
  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", flags.corpus, "Plain-text corpus file(s)");
    sub->add_option("--n-targets", flags.n_targets, "Number of most frequent words to represent");
    sub->add_option("--n-contexts", flags.n_contexts, "Context word set size (0 = n-targets)");
    sub->add_option("--side-length", flags.side_length, "Window positions per side");
    sub->add_option("--gap", flags.gap, "Excluded positions adjacent to the target, per side");
  };
  auto add_gold = [&](CLI::App* sub) {
    sub->add_option("--gold", flags.gold, "Gold groups JSON {name: [words]}");
    sub->add_option("--labels", flags.labels, "Per-token labels TSV (token, category)");
  };

  auto* cluster = app.add_subcommand("cluster", "Hierarchical clustering of context vectors");
  add_common(cluster);
  add_corpus(cluster);
  add_gold(cluster);
  cluster->add_option("--metric", flags.metric, "euclidean | spearman");
  cluster->add_option("--linkage", flags.linkage, "average | single | complete");
  cluster->add_option("--k", flags.k, "Clusters in the flat cut (0 = gold group count or none)");

  auto* nn = app.add_subcommand("nn", "Online competitive network over word occurrences");
  add_common(nn);
  add_corpus(nn);
  nn->add_option("--labels", flags.labels, "Per-token labels TSV for accuracy");
  nn->add_option("--num-units", flags.num_units, "Output units");
  nn->add_option("--winner-rule", flags.winner_rule, "dot | euclidean");
  nn->add_option("--learning-rate-initial", flags.learning_rate_initial, "Initial learning rate");
  nn->add_option("--learning-rate-final", flags.learning_rate_final, "Final learning rate");
  nn->add_option("--epochs", flags.epochs, "Passes over the corpus");

  auto* elman = app.add_subcommand("elman", "Generate a labeled artificial noun/verb corpus");
  add_common(elman);
  elman->add_option("--num-sentences", flags.num_sentences, "Sentences to generate");
  elman->add_option("--boundary-token", flags.boundary_token, "Token appended to each sentence");

  auto* eval = app.add_subcommand("eval", "Score a partition or unit assignments");
  add_common(eval);
  add_gold(eval);
  eval->add_option("--partition", flags.partition, "Partition TSV (word, cluster)");
  eval->add_option("--assignments", flags.assignments, "Assignments TSV (position, token, unit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file: " + config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
      }
      config.merge_json(j);
    }
    // Explicit flags win over the config file.
    const nlohmann::json flag_json = flags.to_json();
    nlohmann::json overrides = nlohmann::json::object();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--config") continue;
      std::string key = opt->get_name().substr(2);
      std::replace(key.begin(), key.end(), '-', '_');
      overrides[key] = flag_json.at(key);
    }
    config.merge_json(overrides);

    const std::string name = sub->get_name();
    if (name == "cluster") {
      cmd_cluster(config, err);
    } else if (name == "nn") {
      cmd_nn(config, err);
    } else if (name == "elman") {
      cmd_elman(config, err);
    } else {
      cmd_eval(config, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"wordgroup"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace wordgroup::cli
