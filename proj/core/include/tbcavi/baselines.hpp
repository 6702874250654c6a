#pragma once

#include "tbcavi/block_models.hpp"
#include "tbcavi/fit.hpp"
#include "tbcavi/graph.hpp"

namespace tbcavi {

/// Every node moves to the label most common among its neighbors (batch,
/// ties to the lowest label). Isolated nodes keep their label.
Membership majority_vote_step(const Graph& g, const Membership& z);

/// Batch update maximizing  #neighbors in a  -  rho * n_a,  where n_a is the
/// current size of community a and rho = (p_hat + q_hat) / 2 is re-estimated
/// from the current labels. Ties to the lowest label; isolated nodes keep
/// their label.
Membership penalized_majority_vote_step(const Graph& g, const Membership& z);

enum class BaselineRule { mv, pmv };

/// `steps` batch updates (steps >= 1). Trace rows carry the labels, the
/// planted estimates of the current labels, and accuracy when truth is given.
FitResult iterate_baseline(const Graph& g, const Membership& z0, int steps, BaselineRule rule,
                           const Membership* truth = nullptr);

}  // namespace tbcavi
