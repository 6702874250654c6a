#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tbcavi/graph.hpp"
#include "tbcavi/rng.hpp"

namespace tbcavi {

/// Hard community labels in [0, K).
struct Membership {
  std::vector<int> labels;
  int K = 0;

  std::size_t size() const noexcept { return labels.size(); }
  int operator[](std::size_t i) const { return labels[i]; }

  /// Nodes 0..sizes[0]-1 in block 0, the next sizes[1] in block 1, ...
  static Membership contiguous(std::span<const std::size_t> sizes);
  static Membership balanced(std::size_t n, int K);

  std::vector<std::size_t> community_sizes() const;
  Eigen::MatrixXd one_hot() const;

  // Throws DomainError if K < 1 or a label falls outside [0, K).
  void validate() const;

  friend bool operator==(const Membership&, const Membership&) = default;
};

struct SbmParams {
  Eigen::MatrixXd B;
  std::vector<double> pi;

  int K() const { return static_cast<int>(B.rows()); }
  void validate() const;
};

/// Symmetric two-parameter block model: p within, q between.
struct PlantedParams {
  double p = 0.0;
  double q = 0.0;
  std::size_t n = 0;
  int K = 0;

  Eigen::MatrixXd block_matrix() const;
  double ratio() const { return p / q; }
};

struct DegreeParams {
  std::vector<double> theta;

  std::size_t size() const noexcept { return theta.size(); }
  double operator[](std::size_t i) const { return theta[i]; }
  static DegreeParams ones(std::size_t n) { return {std::vector<double>(n, 1.0)}; }
};

Eigen::MatrixXd planted_block_matrix(int K, double p, double q);

/// Each pair i<j is an edge independently with probability B(z_i, z_j).
/// Pairs are visited in (i, j) lexicographic order, one uniform draw each.
Graph sample_sbm(const Eigen::MatrixXd& B, const Membership& z, Rng& rng);
inline Graph sample_sbm(const PlantedParams& params, const Membership& z, Rng& rng) {
  return sample_sbm(params.block_matrix(), z, rng);
}

/// Same pair order and draw stream as sample_sbm, with edge probability
/// min(1, theta_i theta_j B(z_i, z_j)). theta == 1 reproduces sample_sbm.
Graph sample_dcsbm(const Eigen::MatrixXd& B, const Membership& z, const DegreeParams& theta,
                   Rng& rng);
inline Graph sample_dcsbm(const PlantedParams& params, const Membership& z,
                          const DegreeParams& theta, Rng& rng) {
  return sample_dcsbm(params.block_matrix(), z, theta, rng);
}

/// Solves d = (n/K - 1) p + n (K-1) q / K with p = ratio * q.
PlantedParams solve_planted(std::size_t n, int K, double d, double ratio);

/// Unbalanced generalization: d = (1/n) sum_a n_a [(n_a - 1) p + (n - n_a) q].
/// Coincides with the balanced identity when all sizes are equal.
PlantedParams solve_planted(std::span<const std::size_t> sizes, double d, double ratio);

/// Expected average degree of the planted model over the given sizes.
double expected_average_degree(std::span<const std::size_t> sizes, double p, double q);

/// Keeps each label with probability 1 - eps, otherwise moves it to one of
/// the other K-1 labels uniformly. Requires 0 <= eps < (K-1)/K.
Membership perturb_labels(const Membership& z, double eps, Rng& rng);

/// n independent Beta(2, 1/3) draws.
DegreeParams sample_theta(std::size_t n, Rng& rng);

}  // namespace tbcavi
