#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordgroup/compnet.hpp"

namespace wordgroup::cli {

/// Bad flags, config values or missing input paths. Exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

/// Every knob of every subcommand. JSON keys are the field names; command
/// line flags are the same names in kebab-case.
struct RunConfig {
  std::vector<std::string> corpus;
  std::size_t n_targets = 1000;
  std::size_t n_contexts = 0;  // 0: same as n_targets
  int side_length = 1;
  int gap = 0;
  std::string metric = "euclidean";
  std::string linkage = "average";
  std::size_t k = 0;  // 0: no flat cut unless gold groups are given
  std::string gold;
  std::string labels;
  std::size_t num_units = 2;
  std::string winner_rule = "dot";
  double learning_rate_initial = 0.3;
  double learning_rate_final = 0.01;
  int epochs = 3;
  std::size_t num_sentences = 5000;
  std::string boundary_token;
  std::string partition;
  std::string assignments;
  std::uint64_t seed = 1;
  std::string out;

  nlohmann::ordered_json to_json() const;
  /// Overlays the keys present in `j` onto this config. Unknown keys throw
  /// ConfigError.
  void merge_json(const nlohmann::json& j);

  NetworkConfig network() const;
};

/// Full pipeline: vocabulary, counts, vectors, distances, dendrogram,
/// optional cut and gold evaluation. Throws ConfigError or data errors.
void cmd_cluster(const RunConfig& config, std::ostream& log);
/// Trains the competitive network on per-occurrence inputs and classifies.
void cmd_nn(const RunConfig& config, std::ostream& log);
/// Writes a generated labeled corpus.
void cmd_elman(const RunConfig& config, std::ostream& log);
/// Scores an existing partition or unit assignment file; the report goes to
/// `report` and, when config.out is set, to that directory.
void cmd_eval(const RunConfig& config, std::ostream& report, std::ostream& log);

/// Parses arguments, dispatches, and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wordgroup::cli
