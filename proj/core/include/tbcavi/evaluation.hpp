#pragma once

#include <cstddef>
#include <vector>

#include "tbcavi/block_models.hpp"
#include "tbcavi/fit.hpp"

namespace tbcavi {

struct AccuracyReport {
  double accuracy = 0.0;
  // best_permutation[estimated label] = matched truth label
  std::vector<int> best_permutation;
  double l1_error = 0.0;  // || Psi_hat - phi(Z) ||_1 = 2 * (#mismatched nodes)
};

enum class MatchMethod { automatic, enumerate, hungarian };

/// Best-permutation accuracy. `automatic` enumerates all K! bijections for
/// K <= 8 and solves the assignment problem on the confusion matrix otherwise.
AccuracyReport matched_accuracy(const Membership& estimate, const Membership& truth,
                                MatchMethod method = MatchMethod::automatic);

/// Maximum-weight perfect matching on a square matrix (Hungarian algorithm).
/// Returns assignment[row] = column.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

/// Standard normal quantile, |error| < 1e-12 after refinement.
double normal_quantile(double prob);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
  double half_width() const { return 0.5 * (upper - lower); }
};

struct ConfidenceIntervals {
  Interval p;
  Interval q;
};

/// Plug-in intervals from the limiting law
///   n (p_hat - p) / sqrt(p) -> N(0, 2K),   n (q_hat - q) / sqrt(q) -> N(0, 2K/(K-1)).
ConfidenceIntervals gaussian_ci(double p_hat, double q_hat, std::size_t n, int K, double level);

struct ParamErrorReport {
  double rel_p = 0.0;
  double rel_q = 0.0;
  double rel_ratio = 0.0;
};

ParamErrorReport param_errors(const PlantedEstimates& est, const PlantedParams& truth);

}  // namespace tbcavi
