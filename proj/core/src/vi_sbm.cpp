#include "tbcavi/vi_sbm.hpp"

#include <cmath>
#include <limits>

#include "pair_sums.hpp"
#include "planted_common.hpp"
#include "tbcavi/evaluation.hpp"

namespace tbcavi {

using detail::clamp_prob;

namespace {

double global_density(const Graph& g) {
  const double n = static_cast<double>(g.num_nodes());
  if (n < 2.0) return 0.0;
  return static_cast<double>(g.num_edges()) / (0.5 * n * (n - 1.0));
}

Eigen::MatrixXd clamped_logs(const Eigen::MatrixXd& B, Diagnostics* diag, bool complement) {
  Eigen::MatrixXd out(B.rows(), B.cols());
  for (Eigen::Index a = 0; a < B.rows(); ++a) {
    for (Eigen::Index b = 0; b < B.cols(); ++b) {
      // Count each clamp once, on the log B pass.
      const double c = clamp_prob(B(a, b), complement ? nullptr : diag);
      out(a, b) = complement ? std::log1p(-c) : std::log(c);
    }
  }
  return out;
}

void check_params(const SoftAssignment& psi, const SbmParams& params) {
  if (params.B.rows() != psi.K() || params.B.cols() != psi.K()) {
    throw DomainError("block matrix dimension differs from soft assignment K");
  }
  if (static_cast<int>(params.pi.size()) != psi.K()) throw DomainError("pi length differs from K");
}

double entropy_term(const Eigen::MatrixXd& psi, const std::vector<double>& pi) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < psi.rows(); ++i) {
    for (Eigen::Index a = 0; a < psi.cols(); ++a) {
      const double v = psi(i, a);
      if (v > 0.0) total += v * (std::log(pi[static_cast<std::size_t>(a)]) - std::log(v));
    }
  }
  return total;
}

}  // namespace

double elbo(const Graph& g, const SoftAssignment& psi, const SbmParams& params, Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_params(psi, params);
  const auto sums = detail::pair_sums(g, psi.matrix());
  const Eigen::MatrixXd LB = clamped_logs(params.B, diag, false);
  const Eigen::MatrixXd L1 = clamped_logs(params.B, diag, true);
  const Eigen::MatrixXd pairs = sums.S * sums.S.transpose() - sums.Q;
  const double likelihood =
      0.5 * (pairs.cwiseProduct(L1).sum() + sums.M.cwiseProduct(LB - L1).sum());
  return likelihood + entropy_term(psi.matrix(), params.pi);
}

Eigen::MatrixXd update_block_matrix(const Graph& g, const SoftAssignment& psi,
                                    const Eigen::MatrixXd* previous, Diagnostics* diag) {
  detail::check_psi(g, psi);
  const int K = psi.K();
  if (previous && (previous->rows() != K || previous->cols() != K)) {
    throw DomainError("previous block matrix has the wrong dimension");
  }
  const auto s = detail::pair_sums(g, psi.matrix());
  Eigen::MatrixXd B(K, K);
  for (int a = 0; a < K; ++a) {
    for (int b = a; b < K; ++b) {
      const double num = a == b ? 0.5 * s.M(a, a) : s.M(a, b);
      const double den = a == b ? 0.5 * (s.S(a) * s.S(a) - s.Q(a, a)) : s.S(a) * s.S(b) - s.Q(a, b);
      double value;
      if (den < kEmptyDenominator) {
        value = previous ? (*previous)(a, b) : global_density(g);
        if (diag) ++diag->empty_community;
      } else {
        value = num / den;
      }
      B(a, b) = B(b, a) = value;
    }
  }
  return B;
}

std::vector<double> update_pi(const SoftAssignment& psi) {
  const Eigen::VectorXd col = psi.matrix().colwise().sum().transpose();
  const double total = col.sum();
  if (!(total > 0.0)) throw DomainError("update_pi: soft assignment has no mass");
  std::vector<double> pi(static_cast<std::size_t>(col.size()));
  for (Eigen::Index a = 0; a < col.size(); ++a) pi[static_cast<std::size_t>(a)] = col(a) / total;
  return pi;
}

Eigen::MatrixXd psi_logits(const Graph& g, const SoftAssignment& psi, const SbmParams& params,
                           Diagnostics* diag) {
  detail::check_psi(g, psi);
  check_params(psi, params);
  const Eigen::MatrixXd& P = psi.matrix();
  const Eigen::MatrixXd LB = clamped_logs(params.B, diag, false);
  const Eigen::MatrixXd L1 = clamped_logs(params.B, diag, true);
  const Eigen::MatrixXd N = detail::neighbor_sums(g, P);
  const Eigen::RowVectorXd S = P.colwise().sum();
  // sum_{j != i} Psi_jb = S_b - Psi_ib.
  const Eigen::MatrixXd others = (-P).rowwise() + S;
  Eigen::MatrixXd L = N * (LB - L1).transpose() + others * L1.transpose();
  for (Eigen::Index a = 0; a < L.cols(); ++a) L.col(a).array() += std::log(params.pi[static_cast<std::size_t>(a)]);
  return L;
}

SoftAssignment update_psi(const Graph& g, const SoftAssignment& psi, const SbmParams& params,
                          Diagnostics* diag) {
  return softmax_rows(psi_logits(g, psi, params, diag));
}

PlantedEstimates planted_params(const Graph& g, const SoftAssignment& psi, Diagnostics* diag) {
  detail::check_psi(g, psi);
  const auto s = detail::pair_sums(g, psi.matrix());
  return detail::planted_from_sums(s, global_density(g), detail::PlantedLink::bernoulli, diag);
}

Eigen::MatrixXd planted_psi_logits(const Graph& g, const SoftAssignment& psi,
                                   const PlantedEstimates& est) {
  detail::check_psi(g, psi);
  const Eigen::MatrixXd& P = psi.matrix();
  const Eigen::MatrixXd N = detail::neighbor_sums(g, P);
  const Eigen::RowVectorXd S = P.colwise().sum();
  const Eigen::MatrixXd others = (-P).rowwise() + S;
  return 2.0 * est.t * (N - est.lambda * others);
}

SoftAssignment planted_psi_update(const Graph& g, const SoftAssignment& psi,
                                  const PlantedEstimates& est) {
  return softmax_rows(planted_psi_logits(g, psi, est));
}

FitResult fit_sbm(const Graph& g, const SoftAssignment& psi0, const FitOptions& options,
                  const Membership* truth) {
  detail::check_fit_inputs(g, psi0, options, truth);
  FitResult result;
  SoftAssignment psi = psi0;
  std::optional<Eigen::MatrixXd> previous_B;
  Membership previous_labels = psi0.labels();

  for (int s = 1; s <= options.iterations; ++s) {
    IterationRecord rec;
    rec.iteration = s;
    PlantedEstimates est = planted_params(g, psi, &rec.diagnostics);
    if (options.mode == Mode::general) {
      SbmParams params;
      params.B = update_block_matrix(g, psi, previous_B ? &*previous_B : nullptr, &rec.diagnostics);
      params.pi = update_pi(psi);
      previous_B = params.B;
      psi = update_psi(g, psi, params, &rec.diagnostics);
      if (options.variant == Variant::t_bcavi) psi = hard_threshold(psi);
      rec.elbo = elbo(g, psi, params);
      rec.params = std::move(params);
    } else {
      psi = planted_psi_update(g, psi, est);
      if (options.variant == Variant::t_bcavi) psi = hard_threshold(psi);
    }
    rec.estimates = est;
    rec.labels = psi.labels();
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
  result.psi = std::move(psi);
  return result;
}

}  // namespace tbcavi
