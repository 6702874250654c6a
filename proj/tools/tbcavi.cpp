#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "selftest.hpp"
#include "tbcavi/baselines.hpp"
#include "tbcavi/block_models.hpp"
#include "tbcavi/errors.hpp"
#include "tbcavi/evaluation.hpp"
#include "tbcavi/graph.hpp"
#include "tbcavi/harness.hpp"
#include "tbcavi/spectral.hpp"
#include "tbcavi/vi_dcsbm.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace {

using namespace tbcavi;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 0;
  std::string config;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + g.out + " for writing");
  f << text;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// generate --------------------------------------------------------------

struct GenerateArgs {
  std::string model = "sbm";
  std::size_t n = 600;
  int K = 2;
  std::optional<double> d, p, q;
  double ratio = 10.0 / 3.0;
  std::string theta = "beta";
  std::string labels_out;
};

int run_generate(const Globals& glob, const GenerateArgs& a) {
  ExperimentConfig cfg;
  if (!glob.config.empty()) {
    cfg = load_experiment_config(glob.config);
  } else {
    cfg.model = a.model == "dcsbm" ? ModelKind::dcsbm : ModelKind::sbm;
    cfg.n = a.n;
    cfg.K = a.K;
    cfg.d = a.d;
    cfg.p = a.p;
    cfg.q = a.q;
    if (!a.d && !a.p && !a.q) cfg.d = 8.0;
    cfg.ratio = a.ratio;
    cfg.theta = a.theta == "ones" ? ThetaKind::ones : ThetaKind::beta;
  }
  if (glob.seed) cfg.master_seed = *glob.seed;
  cfg.validate();

  // Same streams as replication 0 of `experiment` with this config.
  const std::uint64_t seed = mix_seed(cfg.master_seed, 0);
  const Membership truth = Membership::contiguous(cfg.community_sizes());
  const Eigen::MatrixXd B = cfg.planted().block_matrix();
  Rng graph_rng(mix_seed(seed, 2));
  Graph g;
  if (cfg.model == ModelKind::sbm) {
    g = sample_sbm(B, truth, graph_rng);
  } else {
    Rng theta_rng(mix_seed(seed, 1));
    const DegreeParams theta =
        cfg.theta == ThetaKind::beta ? sample_theta(cfg.n, theta_rng) : DegreeParams::ones(cfg.n);
    g = sample_dcsbm(B, truth, theta, graph_rng);
  }
  emit(glob, serialize_edge_list(g));
  if (!a.labels_out.empty()) {
    std::ofstream f(a.labels_out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + a.labels_out + " for writing");
    for (std::size_t i = 0; i < truth.size(); ++i) f << i << ' ' << truth[i] << '\n';
  }
  return 0;
}

// fit -------------------------------------------------------------------

struct FitArgs {
  std::string edges;
  std::string labels;
  int K = 0;
  std::string algorithm = "t_bcavi";
  std::string model = "sbm";
  std::string mode = "general";
  int iters = 10;
  std::string init = "spectral";
  double eps = 0.2;
  bool rescale = false;
};

int run_fit(const Globals& glob, const FitArgs& a) {
  const EdgeListResult loaded = load_edge_list_file(a.edges);
  const Graph& g = loaded.graph;
  const std::size_t n = g.num_nodes();

  std::optional<Membership> truth;
  if (!a.labels.empty()) {
    Membership z;
    z.labels.assign(n, -1);
    for (const LabelEntry& e : load_labels_file(a.labels)) {
      if (e.id < 0 || static_cast<std::size_t>(e.id) >= n) {
        throw DomainError("label for node " + std::to_string(e.id) + " outside the graph");
      }
      z.labels[static_cast<std::size_t>(e.id)] = e.label;
      z.K = std::max(z.K, e.label + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (z.labels[i] < 0) throw DomainError("node " + std::to_string(i) + " has no label");
    }
    truth = std::move(z);
  }
  const int K = a.K > 0 ? a.K : (truth ? truth->K : 0);
  if (K < 1) throw CLI::ValidationError("--K", "required when no --labels are given");
  if (truth) {
    if (truth->K > K) throw DomainError("labels use more than K communities");
    truth->K = K;
  }

  const std::uint64_t seed = glob.seed.value_or(1);
  const ModelKind model = a.model == "dcsbm" ? ModelKind::dcsbm : ModelKind::sbm;
  Membership init;
  if (a.init == "perturb") {
    if (!truth) throw CLI::ValidationError("--init", "perturb needs --labels");
    Rng rng(mix_seed(seed, 3));
    init = perturb_labels(*truth, a.eps, rng);
  } else {
    Rng rng(mix_seed(seed, 4));
    init = spectral_init(g, K, model == ModelKind::sbm ? SpectralFlavor::standard
                                                      : SpectralFlavor::regularized, rng);
  }

  const Algorithm algo = parse_algorithm(a.algorithm);
  const Membership* truth_ptr = truth ? &*truth : nullptr;
  FitResult res;
  if (algo == Algorithm::mv || algo == Algorithm::pmv) {
    res = iterate_baseline(g, init, a.iters, algo == Algorithm::mv ? BaselineRule::mv : BaselineRule::pmv,
                           truth_ptr);
  } else {
    const Variant variant = algo == Algorithm::t_bcavi ? Variant::t_bcavi : Variant::bcavi;
    const Mode mode = a.mode == "planted" ? Mode::planted : Mode::general;
    const SoftAssignment psi0 = SoftAssignment::from_labels(init);
    if (model == ModelKind::sbm) {
      res = fit_sbm(g, psi0, {a.iters, variant, mode, false}, truth_ptr);
    } else {
      DcsbmFitOptions opt;
      opt.iterations = a.iters;
      opt.variant = variant;
      opt.mode = mode;
      opt.rescale = a.rescale;
      res = fit_dcsbm(g, psi0, opt, truth_ptr);
    }
  }

  std::ostringstream os;
  os << "algorithm " << a.algorithm << '\n' << "model " << a.model << '\n';
  os << "nodes " << n << '\n' << "edges " << g.num_edges() << '\n';
  os << "iterations " << res.iterations() << '\n';
  if (truth) os << "accuracy " << num(matched_accuracy(res.labels, *truth).accuracy) << '\n';
  if (res.estimates) {
    os << "p_hat " << num(res.estimates->p_hat) << '\n' << "q_hat " << num(res.estimates->q_hat) << '\n';
    os << "t " << num(res.estimates->t) << '\n' << "lambda " << num(res.estimates->lambda) << '\n';
  }
  if (res.params) {
    for (Eigen::Index r = 0; r < res.params->B.rows(); ++r) {
      os << "B";
      for (Eigen::Index c = 0; c < res.params->B.cols(); ++c) os << ' ' << num(res.params->B(r, c));
      os << '\n';
    }
    os << "pi";
    for (double v : res.params->pi) os << ' ' << num(v);
    os << '\n';
  }
  os << "flags " << res.diagnostics.to_string() << '\n';
  os << "labels\n";
  for (std::size_t i = 0; i < res.labels.size(); ++i) os << i << ' ' << res.labels[i] << '\n';
  emit(glob, os.str());
  return 0;
}

// experiment / realdata -------------------------------------------------

int run_experiment_cmd(const Globals& glob) {
  if (glob.config.empty()) throw CLI::ValidationError("--config", "experiment needs a config file");
  ExperimentConfig cfg = load_experiment_config(glob.config);
  if (glob.seed) cfg.master_seed = *glob.seed;
  emit(glob, to_csv(run_experiment(cfg, glob.threads)));
  return 0;
}

struct RealDataArgs {
  std::string edges;
  std::string labels;
  std::optional<int> K;
  std::optional<double> tau;
};

int run_realdata_cmd(const Globals& glob, const RealDataArgs& a) {
  RealDataConfig cfg;
  if (!glob.config.empty()) cfg = parse_realdata_config(read_text_file(glob.config));
  if (glob.seed) cfg.master_seed = *glob.seed;
  if (a.K) cfg.K = *a.K;
  if (a.tau) cfg.tau = *a.tau;
  emit(glob, to_csv(run_realdata(a.edges, a.labels, cfg, glob.threads)));
  return 0;
}

// selftest --------------------------------------------------------------

int run_selftest(const Globals& glob, int instances) {
  const std::uint64_t seed = glob.seed.value_or(1);
  bool ok = true;
  std::ostringstream os;
  for (const auto& rep : {oracle::check_updates(instances, seed), oracle::check_cavi(instances, seed + 1),
                          oracle::check_planted_consistency(instances, seed + 2)}) {
    char line[200];
    std::snprintf(line, sizeof line, "%-5s %-22s instances=%d checks=%ld failures=%ld worst=%.3g time=%.2fs\n",
                  rep.ok() ? "PASS" : "FAIL", rep.name.c_str(), rep.instances, rep.checks, rep.failures,
                  rep.worst, rep.seconds);
    os << line;
    for (const auto& m : rep.messages) os << "  " << m << '\n';
    ok = ok && rep.ok();
  }
  emit(glob, os.str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold BCAVI community detection"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals glob;
  app.add_option("--seed", glob.seed, "master seed");
  app.add_option("--out", glob.out, "output file (stdout when omitted)");
  app.add_option("--threads", glob.threads, "worker threads (default: TBCAVI_THREADS or 1)");
  app.add_option("--config", glob.config, "JSON config file");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample a planted graph as an edge list");
  generate->add_option("--model", gen.model)->check(CLI::IsMember({"sbm", "dcsbm"}));
  generate->add_option("--n", gen.n);
  generate->add_option("--K", gen.K);
  generate->add_option("--d", gen.d, "expected average degree");
  generate->add_option("--p", gen.p);
  generate->add_option("--q", gen.q);
  generate->add_option("--ratio", gen.ratio, "p/q when --d is given");
  generate->add_option("--theta", gen.theta)->check(CLI::IsMember({"beta", "ones"}));
  generate->add_option("--labels-out", gen.labels_out, "write the planted labels here");

  FitArgs fit;
  auto* fitcmd = app.add_subcommand("fit", "fit one algorithm to one graph");
  fitcmd->add_option("--edges", fit.edges)->required()->check(CLI::ExistingFile);
  fitcmd->add_option("--labels", fit.labels, "ground truth for accuracy")->check(CLI::ExistingFile);
  fitcmd->add_option("--K", fit.K);
  fitcmd->add_option("--algorithm", fit.algorithm)->check(CLI::IsMember({"t_bcavi", "bcavi", "mv", "pmv"}));
  fitcmd->add_option("--model", fit.model)->check(CLI::IsMember({"sbm", "dcsbm"}));
  fitcmd->add_option("--mode", fit.mode)->check(CLI::IsMember({"general", "planted"}));
  fitcmd->add_option("--iters", fit.iters)->check(CLI::PositiveNumber);
  fitcmd->add_option("--init", fit.init)->check(CLI::IsMember({"spectral", "perturb"}));
  fitcmd->add_option("--eps", fit.eps);
  fitcmd->add_flag("--rescale", fit.rescale);

  auto* experiment = app.add_subcommand("experiment", "run a config grid and write CSV");

  RealDataArgs rd;
  auto* realdata = app.add_subcommand("realdata", "run the split/spectral pipeline on a labeled network");
  realdata->add_option("--edges", rd.edges)->required()->check(CLI::ExistingFile);
  realdata->add_option("--labels", rd.labels)->required()->check(CLI::ExistingFile);
  realdata->add_option("--K", rd.K);
  realdata->add_option("--tau", rd.tau);

  int instances = 200;
  auto* selftest = app.add_subcommand("selftest", "compare the updates against brute-force formulas");
  selftest->add_option("--instances", instances)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*generate) return run_generate(glob, gen);
    if (*fitcmd) return run_fit(glob, fit);
    if (*experiment) return run_experiment_cmd(glob);
    if (*realdata) return run_realdata_cmd(glob, rd);
    if (*selftest) return run_selftest(glob, instances);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const tbcavi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
