#include "tbcavi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"
#include "tbcavi/baselines.hpp"
#include "tbcavi/block_models.hpp"
#include "tbcavi/errors.hpp"
#include "tbcavi/evaluation.hpp"
#include "tbcavi/vi_dcsbm.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace tbcavi {

using nlohmann::json;

const char* to_string(ModelKind m) { return m == ModelKind::sbm ? "sbm" : "dcsbm"; }

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::t_bcavi: return "t_bcavi";
    case Algorithm::bcavi: return "bcavi";
    case Algorithm::mv: return "mv";
    case Algorithm::pmv: return "pmv";
  }
  return "?";
}

const char* to_string(SpectralFlavor f) { return f == SpectralFlavor::standard ? "standard" : "regularized"; }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "t_bcavi") return Algorithm::t_bcavi;
  if (name == "bcavi") return Algorithm::bcavi;
  if (name == "mv") return Algorithm::mv;
  if (name == "pmv") return Algorithm::pmv;
  throw ConfigError("algorithms", "unknown algorithm '" + name + "'");
}

namespace {

// Seed streams inside one replication.
enum Stream : std::uint64_t { kThetaStream = 1, kGraphStream = 2, kInitStream = 3, kSpectralStream = 4 };

SpectralFlavor default_flavor(ModelKind m) {
  return m == ModelKind::sbm ? SpectralFlavor::standard : SpectralFlavor::regularized;
}

// ---- JSON helpers ---------------------------------------------------------

template <typename T>
T get_field(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

std::string enum_field(const json& obj, const std::string& field, std::initializer_list<const char*> allowed) {
  const auto value = get_field<std::string>(obj.at(field), field);
  for (const char* a : allowed) {
    if (value == a) return value;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError(field, "must be one of {" + list + "}, got '" + value + "'");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& prefix = "") {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }) == known.end()) {
      throw ConfigError(prefix + it.key(), "unknown field");
    }
  }
}

json parse_json_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  return j;
}

std::vector<Algorithm> parse_algorithms(const json& j) {
  if (!j.is_array()) throw ConfigError("algorithms", "must be an array of names");
  std::vector<Algorithm> out;
  for (const auto& item : j) out.push_back(parse_algorithm(get_field<std::string>(item, "algorithms")));
  return out;
}

SpectralFlavor parse_flavor(const json& obj, const std::string& field) {
  return enum_field(obj, field, {"standard", "regularized"}) == "standard" ? SpectralFlavor::standard
                                                                              : SpectralFlavor::regularized;
}

Mode parse_mode(const json& obj) {
  return enum_field(obj, "mode", {"general", "planted"}) == "general" ? Mode::general : Mode::planted;
}

ModelKind parse_model(const json& obj) {
  return enum_field(obj, "model", {"sbm", "dcsbm"}) == "sbm" ? ModelKind::sbm : ModelKind::dcsbm;
}

void validate_algorithms(const std::vector<Algorithm>& algorithms) {
  if (algorithms.empty()) throw ConfigError("algorithms", "must not be empty");
  std::set<Algorithm> seen(algorithms.begin(), algorithms.end());
  if (seen.size() != algorithms.size()) throw ConfigError("algorithms", "contains duplicates");
}

}  // namespace

// ---- experiment config ----------------------------------------------------

void ExperimentConfig::validate() {
  if (n < 2) throw ConfigError("n", "must be at least 2");
  if (K < 2) throw ConfigError("K", "must be at least 2");
  if (n <= static_cast<std::size_t>(K)) throw ConfigError("n", "must exceed K");
  if (sizes.empty()) {
    sizes = Membership::balanced(n, K).community_sizes();
  } else {
    if (sizes.size() != static_cast<std::size_t>(K)) throw ConfigError("sizes", "must have K entries");
    std::size_t total = 0;
    for (std::size_t s : sizes) {
      if (s == 0) throw ConfigError("sizes", "entries must be positive");
      total += s;
    }
    if (total != n) throw ConfigError("sizes", "must sum to n");
  }
  const bool has_pq = p.has_value() || q.has_value();
  if (d.has_value() == has_pq) throw ConfigError("d", "give exactly one of d or (p, q)");
  if (d) {
    if (!(*d > 0.0)) throw ConfigError("d", "must be positive");
    if (!(ratio > 1.0)) throw ConfigError("ratio", "must exceed 1");
    try {
      (void)planted();
    } catch (const DomainError& e) {
      throw ConfigError("d", e.what());
    }
  } else {
    if (!p || !q) throw ConfigError(p ? "q" : "p", "p and q must be given together");
    if (!(*q > 0.0 && *q < *p && *p <= 1.0)) throw ConfigError("p", "need 0 < q < p <= 1");
  }
  const double bound = static_cast<double>(K - 1) / static_cast<double>(K);
  if (init.kind == InitSpec::Kind::perturb) {
    if (!(init.eps >= 0.0 && init.eps < bound)) throw ConfigError("init.eps", "must lie in [0, (K-1)/K)");
  } else if (!(init.tau >= 0.0 && init.tau <= 1.0)) {
    throw ConfigError("init.tau", "must lie in [0, 1]");
  }
  validate_algorithms(algorithms);
  if (iters < 1) throw ConfigError("iters", "must be at least 1");
  if (replications < 1) throw ConfigError("replications", "must be at least 1");
}

std::vector<std::size_t> ExperimentConfig::community_sizes() const {
  return sizes.empty() ? Membership::balanced(n, K).community_sizes() : sizes;
}

PlantedParams ExperimentConfig::planted() const {
  const auto s = community_sizes();
  if (d) {
    const bool balanced = std::all_of(s.begin(), s.end(), [&](std::size_t v) { return v == s.front(); });
    return balanced ? solve_planted(n, K, *d, ratio) : solve_planted(s, *d, ratio);
  }
  return {p.value_or(0.0), q.value_or(0.0), n, K};
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = parse_json_object(json_text);
  reject_unknown(j, {"model", "n", "K", "sizes", "d", "p", "q", "ratio", "init", "algorithms", "mode", "iters",
                     "replications", "master_seed", "rescale", "theta", "record_timing"});
  ExperimentConfig cfg;
  if (j.contains("model")) cfg.model = parse_model(j);
  if (j.contains("n")) cfg.n = get_field<std::size_t>(j["n"], "n");
  if (j.contains("K")) cfg.K = get_field<int>(j["K"], "K");
  if (j.contains("sizes")) cfg.sizes = get_field<std::vector<std::size_t>>(j["sizes"], "sizes");
  if (j.contains("d")) cfg.d = get_field<double>(j["d"], "d");
  if (j.contains("p")) cfg.p = get_field<double>(j["p"], "p");
  if (j.contains("q")) cfg.q = get_field<double>(j["q"], "q");
  if (j.contains("ratio")) cfg.ratio = get_field<double>(j["ratio"], "ratio");
  if (j.contains("init")) {
    const json& init = j["init"];
    if (!init.is_object()) throw ConfigError("init", "must be an object");
    reject_unknown(init, {"kind", "eps", "tau", "flavor"}, "init.");
    if (!init.contains("kind")) throw ConfigError("init.kind", "is required");
    cfg.init.kind = enum_field(init, "kind", {"perturb", "split_spectral"}) == "perturb"
                        ? InitSpec::Kind::perturb
                        : InitSpec::Kind::split_spectral;
    if (init.contains("eps")) cfg.init.eps = get_field<double>(init["eps"], "init.eps");
    if (init.contains("tau")) cfg.init.tau = get_field<double>(init["tau"], "init.tau");
    if (init.contains("flavor")) cfg.init.flavor = parse_flavor(init, "flavor");
  }
  if (j.contains("algorithms")) cfg.algorithms = parse_algorithms(j["algorithms"]);
  if (j.contains("mode")) cfg.mode = parse_mode(j);
  if (j.contains("iters")) cfg.iters = get_field<int>(j["iters"], "iters");
  if (j.contains("replications")) cfg.replications = get_field<int>(j["replications"], "replications");
  if (j.contains("master_seed")) cfg.master_seed = get_field<std::uint64_t>(j["master_seed"], "master_seed");
  if (j.contains("rescale")) cfg.rescale = get_field<bool>(j["rescale"], "rescale");
  if (j.contains("theta")) {
    cfg.theta = enum_field(j, "theta", {"beta", "ones"}) == "beta" ? ThetaKind::beta : ThetaKind::ones;
  }
  if (j.contains("record_timing")) cfg.record_timing = get_field<bool>(j["record_timing"], "record_timing");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path));
}

void RealDataConfig::validate() const {
  if (K < 2) throw ConfigError("K", "must be at least 2");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau", "must lie in [0, 1]");
  validate_algorithms(algorithms);
  if (iters < 1) throw ConfigError("iters", "must be at least 1");
  if (replications < 1) throw ConfigError("replications", "must be at least 1");
}

RealDataConfig parse_realdata_config(const std::string& json_text) {
  const json j = parse_json_object(json_text);
  reject_unknown(j, {"K", "tau", "model", "flavor", "algorithms", "mode", "iters", "replications", "master_seed",
                     "rescale", "record_timing"});
  RealDataConfig cfg;
  if (j.contains("K")) cfg.K = get_field<int>(j["K"], "K");
  if (j.contains("tau")) cfg.tau = get_field<double>(j["tau"], "tau");
  if (j.contains("model")) cfg.model = parse_model(j);
  if (j.contains("flavor")) cfg.flavor = parse_flavor(j, "flavor");
  if (j.contains("algorithms")) cfg.algorithms = parse_algorithms(j["algorithms"]);
  if (j.contains("mode")) cfg.mode = parse_mode(j);
  if (j.contains("iters")) cfg.iters = get_field<int>(j["iters"], "iters");
  if (j.contains("replications")) cfg.replications = get_field<int>(j["replications"], "replications");
  if (j.contains("master_seed")) cfg.master_seed = get_field<std::uint64_t>(j["master_seed"], "master_seed");
  if (j.contains("rescale")) cfg.rescale = get_field<bool>(j["rescale"], "rescale");
  if (j.contains("record_timing")) cfg.record_timing = get_field<bool>(j["record_timing"], "record_timing");
  cfg.validate();
  return cfg;
}

// ---- CSV ------------------------------------------------------------------

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns{
      "model", "n",         "K",         "d",     "p",     "q",         "ratio",    "init",
      "eps",   "tau",       "mode",      "replication", "algorithm", "iteration", "accuracy", "p_hat",
      "q_hat", "rel_p",     "rel_q",     "rel_ratio",   "elbo",      "flags",     "input_hash", "wall_time"};
  return columns;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out;
  const auto& cols = result_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
  out += '\n';
  for (const ResultRow& r : rows) {
    const std::string fields[] = {csv_escape(r.model),
                                  std::to_string(r.n),
                                  std::to_string(r.K),
                                  fmt(r.d),
                                  fmt(r.p),
                                  fmt(r.q),
                                  fmt(r.ratio),
                                  csv_escape(r.init),
                                  fmt(r.eps),
                                  fmt(r.tau),
                                  csv_escape(r.mode),
                                  std::to_string(r.replication),
                                  csv_escape(r.algorithm),
                                  std::to_string(r.iteration),
                                  fmt(r.accuracy),
                                  fmt(r.p_hat),
                                  fmt(r.q_hat),
                                  fmt(r.rel_p),
                                  fmt(r.rel_q),
                                  fmt(r.rel_ratio),
                                  fmt(r.elbo),
                                  csv_escape(r.flags),
                                  csv_escape(r.input_hash),
                                  fmt(r.wall_time)};
    bool first = true;
    for (const auto& f : fields) {
      if (!first) out += ',';
      out += f;
      first = false;
    }
    out += '\n';
  }
  return out;
}

// ---- runners --------------------------------------------------------------

std::uint64_t hash_inputs(const Graph& g, const Membership& init) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t value, int bytes) {
    for (int b = 0; b < bytes; ++b) {
      h ^= (value >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(g.num_nodes(), 8);
  for (const Edge& e : g.edges()) {
    mix(static_cast<std::uint32_t>(e.u), 4);
    mix(static_cast<std::uint32_t>(e.v), 4);
  }
  for (int l : init.labels) mix(static_cast<std::uint32_t>(l), 4);
  return h;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TBCAVI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

namespace {

// Runs job(r) for r in [0, count) on `threads` workers; results by index.
template <typename Row, typename Job>
std::vector<Row> run_ordered(int count, unsigned threads, Job&& job) {
  std::vector<std::vector<Row>> buckets(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        buckets[static_cast<std::size_t>(r)] = job(r);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Row> out;
  for (auto& b : buckets) {
    out.insert(out.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  }
  return out;
}

struct RunContext {
  ResultRow echo;  // config echo fields filled in
  ModelKind model;
  std::vector<Algorithm> algorithms;
  Mode mode;
  int K;
  int iters;
  bool rescale;
  bool record_timing;
  std::optional<PlantedParams> truth_params;
};

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string error_flag(const std::exception& e) {
  std::string msg = e.what();
  for (char& c : msg) {
    if (c == '|' || c == '\n' || c == '\r') c = ' ';
  }
  return "error=" + msg;
}

void fill_estimates(ResultRow& row, const PlantedEstimates& est, const RunContext& ctx) {
  row.p_hat = est.p_hat;
  row.q_hat = est.q_hat;
  if (ctx.truth_params) {
    const auto err = param_errors(est, *ctx.truth_params);
    row.rel_p = err.rel_p;
    row.rel_q = err.rel_q;
    row.rel_ratio = err.rel_ratio;
  }
}

// Rows for one replication: the init pseudo-row, then every algorithm on the
// same graph from the same initial labels.
std::vector<ResultRow> run_algorithms(const RunContext& ctx, const Graph& g, const Membership& init,
                                      const Membership& truth, int replication) {
  ResultRow base = ctx.echo;
  base.replication = replication;
  base.input_hash = hex(hash_inputs(g, init));
  std::vector<ResultRow> rows;

  {
    ResultRow row = base;
    row.algorithm = "init";
    row.iteration = 0;
    row.accuracy = matched_accuracy(init, truth).accuracy;
    Diagnostics diag;
    try {
      const SoftAssignment psi = SoftAssignment::from_labels(init);
      const PlantedEstimates est = ctx.model == ModelKind::sbm
                                       ? planted_params(g, psi, &diag)
                                       : planted_params_dc(g, psi, init_theta(g, &diag), &diag);
      fill_estimates(row, est, ctx);
      row.flags = diag.to_string();
    } catch (const std::exception& e) {
      row.flags = error_flag(e);
    }
    rows.push_back(std::move(row));
  }

  const SoftAssignment psi0 = SoftAssignment::from_labels(init);
  for (const Algorithm alg : ctx.algorithms) {
    ResultRow head = base;
    head.algorithm = to_string(alg);
    const auto start = std::chrono::steady_clock::now();
    FitResult fit;
    try {
      if (alg == Algorithm::mv || alg == Algorithm::pmv) {
        fit = iterate_baseline(g, init, ctx.iters, alg == Algorithm::mv ? BaselineRule::mv : BaselineRule::pmv,
                               &truth);
      } else {
        const Variant variant = alg == Algorithm::t_bcavi ? Variant::t_bcavi : Variant::bcavi;
        if (ctx.model == ModelKind::sbm) {
          FitOptions opts;
          opts.iterations = ctx.iters;
          opts.variant = variant;
          opts.mode = ctx.mode;
          fit = fit_sbm(g, psi0, opts, &truth);
        } else {
          DcsbmFitOptions opts;
          opts.iterations = ctx.iters;
          opts.variant = variant;
          opts.mode = ctx.mode;
          opts.rescale = ctx.rescale;
          fit = fit_dcsbm(g, psi0, opts, &truth);
        }
      }
    } catch (const std::exception& e) {
      // Degenerate inputs (for example an empty graph under the DCSBM) still
      // produce a row so that every replication reports every algorithm.
      head.iteration = 1;
      head.flags = error_flag(e);
      rows.push_back(std::move(head));
      continue;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const IterationRecord& rec : fit.trace) {
      ResultRow row = head;
      row.iteration = rec.iteration;
      row.accuracy = rec.accuracy;
      if (rec.estimates) fill_estimates(row, *rec.estimates, ctx);
      row.elbo = rec.elbo;
      row.flags = rec.diagnostics.to_string();
      if (ctx.record_timing) row.wall_time = seconds;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& input, unsigned threads) {
  ExperimentConfig cfg = input;
  cfg.validate();
  const PlantedParams params = cfg.planted();
  const auto sizes = cfg.community_sizes();
  const Membership truth = Membership::contiguous(sizes);
  const Eigen::MatrixXd B = params.block_matrix();
  const SpectralFlavor flavor = cfg.init.flavor.value_or(default_flavor(cfg.model));

  RunContext ctx;
  ctx.model = cfg.model;
  ctx.algorithms = cfg.algorithms;
  ctx.mode = cfg.mode;
  ctx.K = cfg.K;
  ctx.iters = cfg.iters;
  ctx.rescale = cfg.rescale;
  ctx.record_timing = cfg.record_timing;
  ctx.truth_params = params;
  ResultRow& echo = ctx.echo;
  echo.model = to_string(cfg.model);
  echo.n = cfg.n;
  echo.K = cfg.K;
  echo.d = expected_average_degree(sizes, params.p, params.q);
  echo.p = params.p;
  echo.q = params.q;
  echo.ratio = params.ratio();
  echo.mode = to_string(cfg.mode);
  if (cfg.init.kind == InitSpec::Kind::perturb) {
    echo.init = "perturb";
    echo.eps = cfg.init.eps;
  } else {
    echo.init = std::string("split_spectral:") + to_string(flavor);
    echo.tau = cfg.init.tau;
  }

  return run_ordered<ResultRow>(cfg.replications, resolve_threads(threads), [&](int r) {
    const std::uint64_t seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
    Rng graph_rng(mix_seed(seed, kGraphStream));
    Graph g;
    if (cfg.model == ModelKind::sbm) {
      g = sample_sbm(B, truth, graph_rng);
    } else {
      Rng theta_rng(mix_seed(seed, kThetaStream));
      const DegreeParams theta =
          cfg.theta == ThetaKind::beta ? sample_theta(cfg.n, theta_rng) : DegreeParams::ones(cfg.n);
      g = sample_dcsbm(B, truth, theta, graph_rng);
    }
    Rng init_rng(mix_seed(seed, kInitStream));
    if (cfg.init.kind == InitSpec::Kind::perturb) {
      const Membership init = perturb_labels(truth, cfg.init.eps, init_rng);
      return run_algorithms(ctx, g, init, truth, r);
    }
    auto [g_init, g_rest] = split_edges(g, cfg.init.tau, init_rng);
    Rng spectral_rng(mix_seed(seed, kSpectralStream));
    const Membership init = spectral_init(g_init, cfg.K, flavor, spectral_rng);
    return run_algorithms(ctx, g_rest, init, truth, r);
  });
}

LabeledNetwork prepare_labeled_network(const EdgeListResult& edges, const std::vector<LabelEntry>& labels) {
  std::map<std::int64_t, int> label_of;
  for (const LabelEntry& e : labels) {
    const auto [it, inserted] = label_of.emplace(e.id, e.label);
    if (!inserted && it->second != e.label) {
      throw DomainError("node " + std::to_string(e.id) + " has conflicting labels");
    }
  }
  const Subgraph lcc = largest_connected_component(edges.graph);
  LabeledNetwork out;
  out.graph = lcc.graph;
  std::vector<std::int64_t> missing;
  int max_label = -1;
  for (NodeId parent : lcc.parent_ids) {
    const std::int64_t id =
        edges.original_ids.empty() ? parent : edges.original_ids[static_cast<std::size_t>(parent)];
    out.original_ids.push_back(id);
    const auto it = label_of.find(id);
    if (it == label_of.end()) {
      missing.push_back(id);
      out.truth.labels.push_back(0);
    } else {
      out.truth.labels.push_back(it->second);
      max_label = std::max(max_label, it->second);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t k = 0; k < missing.size() && k < 20; ++k) list += (k ? ", " : "") + std::to_string(missing[k]);
    if (missing.size() > 20) list += ", ...";
    throw DomainError(std::to_string(missing.size()) + " node(s) in the largest component have no label: " + list);
  }
  out.truth.K = max_label + 1;
  return out;
}

std::vector<ResultRow> run_realdata(const LabeledNetwork& network, const RealDataConfig& cfg, unsigned threads) {
  cfg.validate();
  Membership truth = network.truth;
  if (truth.K > cfg.K) {
    throw DomainError("labels use " + std::to_string(truth.K) + " communities but K = " + std::to_string(cfg.K));
  }
  truth.K = cfg.K;
  const Graph& g = network.graph;
  if (g.num_nodes() < static_cast<std::size_t>(cfg.K)) throw DomainError("network has fewer nodes than K");
  const SpectralFlavor flavor = cfg.flavor.value_or(default_flavor(cfg.model));

  RunContext ctx;
  ctx.model = cfg.model;
  ctx.algorithms = cfg.algorithms;
  ctx.mode = cfg.mode;
  ctx.K = cfg.K;
  ctx.iters = cfg.iters;
  ctx.rescale = cfg.rescale;
  ctx.record_timing = cfg.record_timing;
  ResultRow& echo = ctx.echo;
  echo.model = to_string(cfg.model);
  echo.n = g.num_nodes();
  echo.K = cfg.K;
  echo.d = degree_stats(g).avg;
  echo.init = std::string("split_spectral:") + to_string(flavor);
  echo.tau = cfg.tau;
  echo.mode = to_string(cfg.mode);

  return run_ordered<ResultRow>(cfg.replications, resolve_threads(threads), [&](int r) {
    const std::uint64_t seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
    Rng init_rng(mix_seed(seed, kInitStream));
    auto [g_init, g_rest] = split_edges(g, cfg.tau, init_rng);
    Rng spectral_rng(mix_seed(seed, kSpectralStream));
    const Membership init = spectral_init(g_init, cfg.K, flavor, spectral_rng);
    return run_algorithms(ctx, g_rest, init, truth, r);
  });
}

std::vector<ResultRow> run_realdata(const std::filesystem::path& edges_path, const std::filesystem::path& labels_path,
                                    const RealDataConfig& cfg, unsigned threads) {
  const EdgeListResult edges = load_edge_list_file(edges_path, IdMapping::remap);
  const auto labels = load_labels_file(labels_path);
  return run_realdata(prepare_labeled_network(edges, labels), cfg, threads);
}

}  // namespace tbcavi
