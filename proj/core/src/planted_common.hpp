#pragma once

#include <cmath>
#include <string>

#include "pair_sums.hpp"
#include "tbcavi/fit.hpp"

namespace tbcavi::detail {

enum class PlantedLink { bernoulli, poisson };

// |t| below this is treated as t == 0.
inline constexpr double kDegenerateT = 1e-12;

/// Within/between estimates from pair sums, clamped, then (t, lambda).
/// `fallback` replaces an estimate whose denominator vanishes.
inline PlantedEstimates planted_from_sums(const PairSums& s, double fallback, PlantedLink link,
                                          Diagnostics* diag) {
  const Eigen::Index K = s.S.size();
  double within_num = 0.0, within_den = 0.0, between_num = 0.0, between_den = 0.0;
  for (Eigen::Index a = 0; a < K; ++a) {
    within_num += 0.5 * s.M(a, a);
    within_den += 0.5 * (s.S(a) * s.S(a) - s.Q(a, a));
    for (Eigen::Index b = a + 1; b < K; ++b) {
      between_num += s.M(a, b);
      between_den += s.S(a) * s.S(b) - s.Q(a, b);
    }
  }
  auto ratio = [&](double num, double den) {
    if (den < kEmptyDenominator) {
      if (diag) ++diag->empty_community;
      return fallback;
    }
    return num / den;
  };

  PlantedEstimates est;
  est.p_hat = clamp_prob(ratio(within_num, within_den), diag);
  est.q_hat = clamp_prob(ratio(between_num, between_den), diag);
  const double p = est.p_hat;
  const double q = est.q_hat;
  est.inverted = p <= q;
  if (link == PlantedLink::bernoulli) {
    est.t = 0.5 * (std::log(p) + std::log1p(-q) - std::log(q) - std::log1p(-p));
  } else {
    est.t = 0.5 * (std::log(p) - std::log(q));
  }
  if (std::abs(est.t) < kDegenerateT) {
    est.degenerate = true;
    est.lambda = q;  // limit of both lambda formulas as p -> q
  } else if (link == PlantedLink::bernoulli) {
    est.lambda = (std::log1p(-q) - std::log1p(-p)) / (2.0 * est.t);
  } else {
    est.lambda = (p - q) / (2.0 * est.t);
  }
  if (diag) {
    if (est.inverted) ++diag->inverted;
    if (est.degenerate) ++diag->degenerate;
  }
  return est;
}

inline void check_fit_inputs(const Graph& g, const SoftAssignment& psi0, const FitOptions& options,
                             const Membership* truth) {
  check_psi(g, psi0);
  if (options.iterations < 1) throw DomainError("iterations must be at least 1");
  if (!psi0.is_row_stochastic(1e-9)) throw DomainError("initial soft assignment is not row-stochastic");
  if (truth && truth->size() != g.num_nodes()) throw DomainError("truth size differs from graph size");
}

}  // namespace tbcavi::detail
