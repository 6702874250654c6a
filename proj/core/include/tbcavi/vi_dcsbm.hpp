#pragma once

// BCAVI and threshold BCAVI for the degree-corrected block model, using the
// Poisson approximation of the Bernoulli likelihood.

#include "tbcavi/block_models.hpp"
#include "tbcavi/fit.hpp"
#include "tbcavi/graph.hpp"
#include "tbcavi/soft_assignment.hpp"

namespace tbcavi {

struct DcsbmState {
  SoftAssignment psi;
  DegreeParams theta;
  SbmParams params;
};

/// sum_{i<j} sum_{a,b} Psi_ia Psi_jb [A_ij log(theta_i theta_j B_ab) - theta_i theta_j B_ab]
/// + sum_i sum_a Psi_ia log(pi_a / Psi_ia). log(A_ij!) vanishes for binary A.
double elbo_dc(const Graph& g, const DcsbmState& state, Diagnostics* diag = nullptr);

/// The pair (likelihood) term of elbo_dc alone.
double elbo_dc_likelihood(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                          const Eigen::MatrixXd& B, Diagnostics* diag = nullptr);

/// theta_i = D_i n / sum_j D_j; zero-degree nodes get kThetaFloor.
/// Throws DomainError on a graph without edges.
DegreeParams init_theta(const Graph& g, Diagnostics* diag = nullptr);

Eigen::MatrixXd update_block_matrix_dc(const Graph& g, const SoftAssignment& psi,
                                       const DegreeParams& theta,
                                       const Eigen::MatrixXd* previous = nullptr,
                                       Diagnostics* diag = nullptr);

/// L_ia = log pi_a + sum_{j != i} sum_b Psi_jb [A_ij log(theta_i theta_j B_ab) - theta_i theta_j B_ab].
Eigen::MatrixXd psi_logits_dc(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                              const SbmParams& params, Diagnostics* diag = nullptr);

SoftAssignment update_psi_dc(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                             const SbmParams& params, Diagnostics* diag = nullptr);

/// Solves D_i / theta_i = sum_{j != i} sum_{a,b} Psi_ia Psi_jb theta_j B_ab for
/// every i from the previous theta. Throws NumericError when the right-hand
/// side vanishes for a node with edges.
DegreeParams update_theta(const Graph& g, const SoftAssignment& psi, const DegreeParams& theta,
                          const Eigen::MatrixXd& B, Diagnostics* diag = nullptr);

/// Scales theta inside each community of `labels` so that it sums to n/K.
/// Empty communities are skipped and counted.
DegreeParams rescale_theta(const DegreeParams& theta, const Membership& labels,
                           Diagnostics* diag = nullptr);

/// p_hat, q_hat with theta_i theta_j weighted denominators, then
///   t = 1/2 log(p/q),  lambda = (p - q) / (2t).
PlantedEstimates planted_params_dc(const Graph& g, const SoftAssignment& psi,
                                   const DegreeParams& theta, Diagnostics* diag = nullptr);

/// 2t sum_{j != i} Psi_ja (A_ij - theta_i theta_j lambda).
Eigen::MatrixXd planted_psi_logits_dc(const Graph& g, const SoftAssignment& psi,
                                      const DegreeParams& theta, const PlantedEstimates& est);

SoftAssignment planted_psi_update_dc(const Graph& g, const SoftAssignment& psi,
                                     const DegreeParams& theta, const PlantedEstimates& est);

struct DcsbmFitOptions : FitOptions {
  bool rescale = false;
};

/// Per iteration: B (or p_hat, q_hat, t, lambda), pi, Psi and threshold, theta,
/// then the optional rescaling. theta^(s) is solved from Psi^(s-1), theta^(s-1)
/// and the block parameters of iteration s.
FitResult fit_dcsbm(const Graph& g, const SoftAssignment& psi0, const DcsbmFitOptions& options,
                    const Membership* truth = nullptr);

}  // namespace tbcavi
