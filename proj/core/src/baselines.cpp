#include "tbcavi/baselines.hpp"

#include <string>

#include "tbcavi/errors.hpp"
#include "tbcavi/evaluation.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace tbcavi {

namespace {

template <typename Penalty>
Membership vote(const Graph& g, const Membership& z, Penalty&& penalty) {
  z.validate();
  if (z.size() != g.num_nodes()) throw DomainError("label count differs from graph size");
  Membership out = z;
  std::vector<double> score(static_cast<std::size_t>(z.K));
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const auto nb = g.neighbors(static_cast<NodeId>(i));
    if (nb.empty()) continue;
    for (int a = 0; a < z.K; ++a) score[static_cast<std::size_t>(a)] = -penalty(a);
    for (NodeId j : nb) score[static_cast<std::size_t>(z.labels[static_cast<std::size_t>(j)])] += 1.0;
    int best = 0;
    for (int a = 1; a < z.K; ++a) {
      if (score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(best)]) best = a;
    }
    out.labels[i] = best;
  }
  return out;
}

}  // namespace

Membership majority_vote_step(const Graph& g, const Membership& z) {
  return vote(g, z, [](int) { return 0.0; });
}

Membership penalized_majority_vote_step(const Graph& g, const Membership& z) {
  if (z.K < 2) throw DomainError("penalized majority vote needs K >= 2");
  if (z.size() != g.num_nodes()) throw DomainError("label count differs from graph size");
  const PlantedEstimates est = planted_params(g, SoftAssignment::from_labels(z));
  const double rho = 0.5 * (est.p_hat + est.q_hat);
  const auto sizes = z.community_sizes();
  return vote(g, z, [&](int a) { return rho * static_cast<double>(sizes[static_cast<std::size_t>(a)]); });
}

FitResult iterate_baseline(const Graph& g, const Membership& z0, int steps, BaselineRule rule,
                           const Membership* truth) {
  if (steps < 1) throw DomainError("baseline needs at least one step, got " + std::to_string(steps));
  if (truth && truth->size() != g.num_nodes()) throw DomainError("truth size differs from graph size");
  FitResult result;
  Membership z = z0;
  for (int s = 1; s <= steps; ++s) {
    IterationRecord rec;
    rec.iteration = s;
    // Estimates of the labels entering this step, as in the VI trace.
    rec.estimates = planted_params(g, SoftAssignment::from_labels(z), &rec.diagnostics);
    z = rule == BaselineRule::mv ? majority_vote_step(g, z) : penalized_majority_vote_step(g, z);
    rec.labels = z;
    if (truth) rec.accuracy = matched_accuracy(z, *truth).accuracy;
    result.diagnostics += rec.diagnostics;
    result.trace.push_back(std::move(rec));
  }
  result.labels = z;
  result.psi = SoftAssignment::from_labels(z);
  result.estimates = result.trace.back().estimates;
  return result;
}

}  // namespace tbcavi
