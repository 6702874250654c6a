#pragma once

// Config-driven experiment runner. Replications are independent: replication
// r draws everything from seeds derived from mix_seed(master_seed, r), so
// output does not depend on the number of worker threads.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tbcavi/fit.hpp"
#include "tbcavi/graph.hpp"
#include "tbcavi/spectral.hpp"

namespace tbcavi {

enum class ModelKind { sbm, dcsbm };
enum class Algorithm { t_bcavi, bcavi, mv, pmv };
enum class ThetaKind { beta, ones };

struct InitSpec {
  enum class Kind { perturb, split_spectral };
  Kind kind = Kind::perturb;
  double eps = 0.2;
  double tau = 0.5;
  std::optional<SpectralFlavor> flavor;  // defaults by model when unset
};

struct ExperimentConfig {
  ModelKind model = ModelKind::sbm;
  std::size_t n = 600;
  int K = 2;
  std::vector<std::size_t> sizes;  // empty: balanced
  std::optional<double> d;
  std::optional<double> p;
  std::optional<double> q;
  double ratio = 10.0 / 3.0;
  InitSpec init;
  std::vector<Algorithm> algorithms{Algorithm::t_bcavi, Algorithm::bcavi, Algorithm::mv,
                                    Algorithm::pmv};
  Mode mode = Mode::general;
  int iters = 10;
  int replications = 1;
  std::uint64_t master_seed = 1;
  bool rescale = false;
  ThetaKind theta = ThetaKind::beta;
  bool record_timing = false;

  /// Fills sizes when empty and checks every invariant; throws ConfigError
  /// naming the offending field.
  void validate();
  std::vector<std::size_t> community_sizes() const;
  PlantedParams planted() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ResultRow {
  std::string model;
  std::size_t n = 0;
  int K = 0;
  std::optional<double> d;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> ratio;
  std::string init;
  std::optional<double> eps;
  std::optional<double> tau;
  std::string mode;
  int replication = 0;
  std::string algorithm;
  int iteration = 0;
  std::optional<double> accuracy;
  std::optional<double> p_hat;
  std::optional<double> q_hat;
  std::optional<double> rel_p;
  std::optional<double> rel_q;
  std::optional<double> rel_ratio;
  std::optional<double> elbo;
  std::string flags;
  std::string input_hash;
  std::optional<double> wall_time;
};

/// Column names in output order.
const std::vector<std::string>& result_columns();

/// Header plus one line per row. RFC 4180 quoting, 17 significant digits,
/// empty fields for missing values.
std::string to_csv(const std::vector<ResultRow>& rows);

/// threads == 0 picks TBCAVI_THREADS from the environment, else 1.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

struct RealDataConfig {
  int K = 2;
  double tau = 0.5;
  ModelKind model = ModelKind::sbm;
  std::optional<SpectralFlavor> flavor;  // defaults by model
  std::vector<Algorithm> algorithms{Algorithm::t_bcavi, Algorithm::bcavi, Algorithm::mv,
                                    Algorithm::pmv};
  Mode mode = Mode::general;
  int iters = 10;
  int replications = 1;
  std::uint64_t master_seed = 1;
  bool rescale = false;
  bool record_timing = false;

  void validate() const;
};

RealDataConfig parse_realdata_config(const std::string& json_text);

/// Network plus labels restricted to its largest connected component.
struct LabeledNetwork {
  Graph graph;
  Membership truth;
  std::vector<std::int64_t> original_ids;
};

/// Remaps ids densely, keeps the largest component, and attaches labels.
/// Throws DomainError listing component nodes without a label.
LabeledNetwork prepare_labeled_network(const EdgeListResult& edges,
                                       const std::vector<LabelEntry>& labels);

std::vector<ResultRow> run_realdata(const LabeledNetwork& network, const RealDataConfig& cfg,
                                    unsigned threads = 0);
std::vector<ResultRow> run_realdata(const std::filesystem::path& edges_path,
                                    const std::filesystem::path& labels_path,
                                    const RealDataConfig& cfg, unsigned threads = 0);

/// FNV-1a over n, the canonical edges, and the initial labels.
std::uint64_t hash_inputs(const Graph& g, const Membership& init);

unsigned resolve_threads(unsigned requested);

const char* to_string(ModelKind m);
const char* to_string(Algorithm a);
const char* to_string(SpectralFlavor f);
Algorithm parse_algorithm(const std::string& name);

}  // namespace tbcavi
