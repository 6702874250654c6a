#pragma once

// Batch coordinate-ascent variational inference for the stochastic block
// model, with and without the posterior hard threshold.
//
// Every update reads only the previous iterate, and all sums over pairs are
// evaluated in O(|E| K + n K^2) using column sums of Psi:
//   sum_{j != i} Psi_jb = S_b - Psi_ib.

#include "tbcavi/fit.hpp"
#include "tbcavi/graph.hpp"
#include "tbcavi/soft_assignment.hpp"

namespace tbcavi {

/// ELBO(Q) = sum_{i<j} sum_{a,b} Psi_ia Psi_jb [A_ij log B_ab + (1 - A_ij) log(1 - B_ab)]
///         + sum_i sum_a Psi_ia log(pi_a / Psi_ia),    with 0 log 0 = 0.
/// B is clamped into [kProbFloor, 1 - kProbFloor]; clamps are counted in `diag`.
double elbo(const Graph& g, const SoftAssignment& psi, const SbmParams& params,
            Diagnostics* diag = nullptr);

/// Closed-form maximizer of the ELBO in B for fixed Psi. Entries whose
/// denominator is below kEmptyDenominator keep `previous(a, b)`, or the
/// global edge density when no previous matrix is given.
Eigen::MatrixXd update_block_matrix(const Graph& g, const SoftAssignment& psi,
                                    const Eigen::MatrixXd* previous = nullptr,
                                    Diagnostics* diag = nullptr);

/// pi_a = sum_i Psi_ia / sum_{i,b} Psi_ib.
std::vector<double> update_pi(const SoftAssignment& psi);

/// L_ia = log pi_a + sum_{j != i} sum_b Psi_jb [A_ij log B_ab + (1 - A_ij) log(1 - B_ab)].
Eigen::MatrixXd psi_logits(const Graph& g, const SoftAssignment& psi, const SbmParams& params,
                           Diagnostics* diag = nullptr);

/// Row-wise softmax of psi_logits.
SoftAssignment update_psi(const Graph& g, const SoftAssignment& psi, const SbmParams& params,
                          Diagnostics* diag = nullptr);

/// p_hat, q_hat from within/between pair weights, then
///   t = 1/2 log[p(1-q) / (q(1-p))],  lambda = log[(1-q)/(1-p)] / (2t).
/// p_hat <= q_hat sets `inverted`; t == 0 sets `degenerate` and lambda = q_hat.
PlantedEstimates planted_params(const Graph& g, const SoftAssignment& psi,
                                Diagnostics* diag = nullptr);

/// 2t sum_{j != i} Psi_ja (A_ij - lambda).
Eigen::MatrixXd planted_psi_logits(const Graph& g, const SoftAssignment& psi,
                                   const PlantedEstimates& est);

SoftAssignment planted_psi_update(const Graph& g, const SoftAssignment& psi,
                                  const PlantedEstimates& est);

/// Algorithm loop: parameters from Psi^(s-1), then Psi^(s), then the hard
/// threshold when variant == t_bcavi. Planted mode fixes pi = 1/K.
FitResult fit_sbm(const Graph& g, const SoftAssignment& psi0, const FitOptions& options,
                  const Membership* truth = nullptr);

}  // namespace tbcavi
