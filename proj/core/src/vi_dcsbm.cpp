#include "tbcavi/vi_dcsbm.hpp"

#include <cmath>
#include <numeric>

#include "pair_sums.hpp"
#include "planted_common.hpp"
#include "tbcavi/evaluation.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace tbcavi {

using detail::clamp_positive;

namespace {

void check_theta(const Graph& g, const DegreeParams& theta) {
  if (theta.size() != g.num_nodes()) throw DomainError("theta length differs from graph size");
  for (double t : theta.theta) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("theta entries must be positive");
  }
}

void check_block(const SoftAssignment& psi, const Eigen::MatrixXd& B) {
  if (B.rows() != psi.K() || B.cols() != psi.K()) {
    throw DomainError("block matrix dimension differs from soft assignment K");
  }
}

// Edges per unit of sum_{i<j} theta_i theta_j.
double global_rate(const Graph& g, const DegreeParams& theta) {
  double sum = 0.0, sq = 0.0;
  for (double t : theta.theta) {
    sum += t;
    sq += t * t;
  }
  const double pairs = 0.5 * (sum * sum - sq);
  return pairs > 0.0 ? static_cast<double>(g.num_edges()) / pairs : 0.0;
}

Eigen::MatrixXd clamped(const Eigen::MatrixXd& B, Diagnostics* diag) {
  Eigen::MatrixXd out = B;
  for (Eigen::Index k = 0; k < out.size(); ++k) out.data()[k] = clamp_positive(out.data()[k], diag);
  return out;
}

}  // namespace

double elbo_dc_likelihood(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                          const Eigen::MatrixXd& B, Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_theta(g, theta);
  check_block(psi, B);
  const Eigen::MatrixXd& P = psi.matrix();
  const Eigen::MatrixXd Bc = clamped(B, diag);
  const auto s = detail::pair_sums(g, P, theta.theta);
  const Eigen::VectorXd rows = P.rowwise().sum();
  double edge_theta = 0.0;
  for (const Edge& e : g.edges()) {
    edge_theta += (std::log(theta[e.u]) + std::log(theta[e.v])) * rows(e.u) * rows(e.v);
  }
  const Eigen::MatrixXd pairs = s.S * s.S.transpose() - s.Q;
  return edge_theta + 0.5 * s.M.cwiseProduct(Bc.array().log().matrix()).sum() -
         0.5 * pairs.cwiseProduct(Bc).sum();
}

double elbo_dc(const Graph& g, const DcsbmState& state, Diagnostics* diag) {
  const SoftAssignment& psi = state.psi;
  if (static_cast<int>(state.params.pi.size()) != psi.K()) throw DomainError("pi length differs from K");
  double total = elbo_dc_likelihood(g, psi, state.theta, state.params.B, diag);
  const Eigen::MatrixXd& P = psi.matrix();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index a = 0; a < P.cols(); ++a) {
      const double v = P(i, a);
      if (v > 0.0) total += v * (std::log(state.params.pi[static_cast<std::size_t>(a)]) - std::log(v));
    }
  }
  return total;
}

DegreeParams init_theta(const Graph& g, Diagnostics* diag) {
  if (g.num_edges() == 0) throw DomainError("init_theta: graph has no edges");
  const double n = static_cast<double>(g.num_nodes());
  const double total = 2.0 * static_cast<double>(g.num_edges());
  DegreeParams theta;
  theta.theta.resize(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const double d = static_cast<double>(g.degree(static_cast<NodeId>(i)));
    if (d == 0.0) {
      theta.theta[i] = kThetaFloor;
      if (diag) ++diag->theta_floor;
    } else {
      theta.theta[i] = d * n / total;
    }
  }
  return theta;
}

Eigen::MatrixXd update_block_matrix_dc(const Graph& g, const SoftAssignment& psi,
                                       const DegreeParams& theta, const Eigen::MatrixXd* previous,
                                       Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_theta(g, theta);
  const int K = psi.K();
  if (previous && (previous->rows() != K || previous->cols() != K)) {
    throw DomainError("previous block matrix has the wrong dimension");
  }
  const auto s = detail::pair_sums(g, psi.matrix(), theta.theta);
  Eigen::MatrixXd B(K, K);
  for (int a = 0; a < K; ++a) {
    for (int b = a; b < K; ++b) {
      const double num = a == b ? 0.5 * s.M(a, a) : s.M(a, b);
      const double den = a == b ? 0.5 * (s.S(a) * s.S(a) - s.Q(a, a)) : s.S(a) * s.S(b) - s.Q(a, b);
      double value;
      if (den < kEmptyDenominator) {
        value = previous ? (*previous)(a, b) : global_rate(g, theta);
        if (diag) ++diag->empty_community;
      } else {
        value = num / den;
      }
      B(a, b) = B(b, a) = value;
    }
  }
  return B;
}

Eigen::MatrixXd psi_logits_dc(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                              const SbmParams& params, Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_theta(g, theta);
  check_block(psi, params.B);
  if (static_cast<int>(params.pi.size()) != psi.K()) throw DomainError("pi length differs from K");
  const Eigen::MatrixXd& P = psi.matrix();
  const Eigen::MatrixXd Bc = clamped(params.B, diag);
  const Eigen::MatrixXd logB = Bc.array().log().matrix();
  const auto s = detail::pair_sums(g, P, theta.theta);
  const Eigen::VectorXd rows = P.rowwise().sum();
  const Eigen::Map<const Eigen::VectorXd> th(theta.theta.data(), P.rows());

  // sum over neighbors j of sum_b Psi_jb (log theta_i + log theta_j); constant in a.
  Eigen::VectorXd theta_logs = Eigen::VectorXd::Zero(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const double li = std::log(th(i));
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) theta_logs(i) += rows(j) * (li + std::log(th(j)));
  }
  // sum_{j != i} theta_j Psi_jb = T_b - theta_i Psi_ib.
  const Eigen::MatrixXd others = (-(th.asDiagonal() * P)).rowwise() + s.S.transpose();
  Eigen::MatrixXd L = s.N * logB.transpose() - th.asDiagonal() * (others * Bc.transpose());
  L.colwise() += theta_logs;
  for (Eigen::Index a = 0; a < L.cols(); ++a) L.col(a).array() += std::log(params.pi[static_cast<std::size_t>(a)]);
  return L;
}

SoftAssignment update_psi_dc(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                             const SbmParams& params, Diagnostics* diag) {
  return softmax_rows(psi_logits_dc(g, psi, theta, params, diag));
}

DegreeParams update_theta(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                          const Eigen::MatrixXd& B, Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_theta(g, theta);
  check_block(psi, B);
  const Eigen::MatrixXd& P = psi.matrix();
  const Eigen::Map<const Eigen::VectorXd> th(theta.theta.data(), P.rows());
  const Eigen::RowVectorXd T = (th.asDiagonal() * P).colwise().sum();
  const Eigen::MatrixXd others = (-(th.asDiagonal() * P)).rowwise() + T;
  // RHS_i = sum_a Psi_ia sum_b B_ab (T_b - theta_i Psi_ib).
  const Eigen::VectorXd rhs = (P.cwiseProduct(others * B.transpose())).rowwise().sum();
  DegreeParams out;
  out.theta.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double d = static_cast<double>(g.degree(static_cast<NodeId>(i)));
    const auto ii = static_cast<Eigen::Index>(i);
    if (d == 0.0) {
      out.theta[i] = kThetaFloor;
      if (diag) ++diag->theta_floor;
    } else if (!(rhs(ii) > kEmptyDenominator)) {
      throw NumericError("update_theta: right-hand side " + std::to_string(rhs(ii)) +
                         " vanishes for node " + std::to_string(i) + " with degree " +
                         std::to_string(static_cast<std::size_t>(d)));
    } else {
      out.theta[i] = d / rhs(ii);
    }
  }
  return out;
}

DegreeParams rescale_theta(const DegreeParams& theta, const Membership& labels, Diagnostics* diag) {
  labels.validate();
  if (theta.size() != labels.size()) throw DomainError("theta length differs from label count");
  const auto K = static_cast<std::size_t>(labels.K);
  std::vector<double> sums(K, 0.0);
  std::vector<std::size_t> counts(K, 0);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sums[static_cast<std::size_t>(labels[i])] += theta[i];
    ++counts[static_cast<std::size_t>(labels[i])];
  }
  const double target = static_cast<double>(theta.size()) / static_cast<double>(K);
  for (std::size_t a = 0; a < K; ++a) {
    if (counts[a] == 0 && diag) ++diag->rescale_skipped;
  }
  DegreeParams out = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto a = static_cast<std::size_t>(labels[i]);
    out.theta[i] = theta[i] * target / sums[a];
  }
  return out;
}

PlantedEstimates planted_params_dc(const Graph& g, const SoftAssignment& psi,
                                   const DegreeParams& theta, Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_theta(g, theta);
  const auto s = detail::pair_sums(g, psi.matrix(), theta.theta);
  return detail::planted_from_sums(s, global_rate(g, theta), detail::PlantedLink::poisson, diag);
}

Eigen::MatrixXd planted_psi_logits_dc(const Graph& g, const SoftAssignment& psi,
                                      const DegreeParams& theta, const PlantedEstimates& est) {
  detail::check_psi(g, psi);
  check_theta(g, theta);
  const Eigen::MatrixXd& P = psi.matrix();
  const Eigen::Map<const Eigen::VectorXd> th(theta.theta.data(), P.rows());
  const Eigen::MatrixXd N = detail::neighbor_sums(g, P);
  const Eigen::RowVectorXd T = (th.asDiagonal() * P).colwise().sum();
  const Eigen::MatrixXd others = (-(th.asDiagonal() * P)).rowwise() + T;
  return 2.0 * est.t * (N - est.lambda * (th.asDiagonal() * others));
}

SoftAssignment planted_psi_update_dc(const Graph& g, const SoftAssignment& psi,
                                     const DegreeParams& theta, const PlantedEstimates& est) {
  return softmax_rows(planted_psi_logits_dc(g, psi, theta, est));
}

FitResult fit_dcsbm(const Graph& g, const SoftAssignment& psi0, const DcsbmFitOptions& options,
                    const Membership* truth) {
  detail::check_fit_inputs(g, psi0, options, truth);
  FitResult result;
  SoftAssignment psi = psi0;
  DegreeParams theta = init_theta(g, &result.diagnostics);
  std::optional<Eigen::MatrixXd> previous_B;
  Membership previous_labels = psi0.labels();
  const int K = psi0.K();

  for (int s = 1; s <= options.iterations; ++s) {
    IterationRecord rec;
    rec.iteration = s;
    const PlantedEstimates est = planted_params_dc(g, psi, theta, &rec.diagnostics);
    SoftAssignment next;
    Eigen::MatrixXd B;
    if (options.mode == Mode::general) {
      SbmParams params;
      params.B = update_block_matrix_dc(g, psi, theta, previous_B ? &*previous_B : nullptr,
                                        &rec.diagnostics);
      params.pi = update_pi(psi);
      previous_B = params.B;
      next = update_psi_dc(g, psi, theta, params, &rec.diagnostics);
      B = params.B;
      rec.params = std::move(params);
    } else {
      next = planted_psi_update_dc(g, psi, theta, est);
      B = planted_block_matrix(K, est.p_hat, est.q_hat);
    }
    if (options.variant == Variant::t_bcavi) next = hard_threshold(next);
    // Isolated nodes were already counted by init_theta.
    theta = update_theta(g, psi, theta, B);
    psi = std::move(next);
    rec.labels = psi.labels();
    if (options.rescale) theta = rescale_theta(theta, rec.labels, &rec.diagnostics);
    if (rec.params) rec.elbo = elbo_dc(g, DcsbmState{psi, theta, *rec.params});
    rec.estimates = est;
    if (truth) rec.accuracy = matched_accuracy(rec.labels, *truth).accuracy;
    result.diagnostics += rec.diagnostics;
    const bool unchanged = rec.labels == previous_labels;
    previous_labels = rec.labels;
    result.trace.push_back(std::move(rec));
    if (options.early_stop && options.variant == Variant::t_bcavi && unchanged) break;
  }

  const IterationRecord& last = result.trace.back();
  result.labels = last.labels;
  result.params = last.params;
  result.estimates = last.estimates;
  result.theta = std::move(theta);
  result.psi = std::move(psi);
  return result;
}

}  // namespace tbcavi
