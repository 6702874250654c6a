#include "tbcavi/block_models.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tbcavi/errors.hpp"

namespace tbcavi {

Membership Membership::contiguous(std::span<const std::size_t> sizes) {
  Membership z;
  z.K = static_cast<int>(sizes.size());
  for (std::size_t a = 0; a < sizes.size(); ++a) z.labels.insert(z.labels.end(), sizes[a], static_cast<int>(a));
  return z;
}

Membership Membership::balanced(std::size_t n, int K) {
  if (K < 1) throw DomainError("balanced membership needs K >= 1");
  const auto k = static_cast<std::size_t>(K);
  std::vector<std::size_t> sizes(k, n / k);
  for (std::size_t a = 0; a < n % k; ++a) ++sizes[a];
  return contiguous(sizes);
}

std::vector<std::size_t> Membership::community_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(K, 0)), 0);
  for (int l : labels) ++sizes.at(static_cast<std::size_t>(l));
  return sizes;
}

Eigen::MatrixXd Membership::one_hot() const {
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), K);
  for (std::size_t i = 0; i < labels.size(); ++i) Z(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return Z;
}

void Membership::validate() const {
  if (K < 1) throw DomainError("membership: K must be at least 1");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= K) {
      throw DomainError("membership: label " + std::to_string(labels[i]) + " of node " +
                        std::to_string(i) + " outside [0, " + std::to_string(K) + ")");
    }
  }
}

void SbmParams::validate() const {
  if (B.rows() != B.cols() || B.rows() < 1) throw DomainError("B must be a non-empty square matrix");
  for (Eigen::Index a = 0; a < B.rows(); ++a) {
    for (Eigen::Index b = 0; b < B.cols(); ++b) {
      if (!(B(a, b) >= 0.0 && B(a, b) <= 1.0)) throw DomainError("B entries must lie in [0, 1]");
      if (std::abs(B(a, b) - B(b, a)) > 1e-12) throw DomainError("B must be symmetric");
    }
  }
  if (static_cast<Eigen::Index>(pi.size()) != B.rows()) throw DomainError("pi must have length K");
  double total = 0.0;
  for (double v : pi) {
    if (!(v >= 0.0)) throw DomainError("pi entries must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("pi must sum to one");
}

Eigen::MatrixXd planted_block_matrix(int K, double p, double q) {
  if (K < 1) throw DomainError("planted block matrix needs K >= 1");
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(K, K, q);
  B.diagonal().setConstant(p);
  return B;
}

Eigen::MatrixXd PlantedParams::block_matrix() const { return planted_block_matrix(K, p, q); }

namespace {

void check_block_matrix(const Eigen::MatrixXd& B, const Membership& z) {
  z.validate();
  if (B.rows() != z.K || B.cols() != z.K) {
    throw DomainError("block matrix is " + std::to_string(B.rows()) + "x" +
                      std::to_string(B.cols()) + " but membership has K=" + std::to_string(z.K));
  }
  for (Eigen::Index a = 0; a < B.rows(); ++a) {
    for (Eigen::Index b = 0; b < B.cols(); ++b) {
      if (!(B(a, b) >= 0.0)) throw DomainError("block matrix entries must be non-negative");
      if (B(a, b) != B(b, a)) throw DomainError("block matrix must be symmetric");
    }
  }
}

template <typename ProbFn>
Graph sample_pairs(std::size_t n, ProbFn&& prob, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < prob(i, j)) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

Graph sample_sbm(const Eigen::MatrixXd& B, const Membership& z, Rng& rng) {
  check_block_matrix(B, z);
  for (Eigen::Index a = 0; a < B.size(); ++a) {
    if (B.data()[a] > 1.0) throw DomainError("block matrix entries must not exceed 1");
  }
  return sample_pairs(
      z.size(), [&](std::size_t i, std::size_t j) { return B(z.labels[i], z.labels[j]); }, rng);
}

Graph sample_dcsbm(const Eigen::MatrixXd& B, const Membership& z, const DegreeParams& theta,
                   Rng& rng) {
  check_block_matrix(B, z);
  if (theta.size() != z.size()) throw DomainError("theta length differs from membership size");
  for (double t : theta.theta) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("theta entries must be positive");
  }
  return sample_pairs(
      z.size(),
      [&](std::size_t i, std::size_t j) {
        return std::min(1.0, theta[i] * theta[j] * B(z.labels[i], z.labels[j]));
      },
      rng);
}

namespace {

void check_planted_inputs(double d, double ratio) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("average degree must be positive");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw DomainError("ratio p/q must exceed 1");
}

PlantedParams finish_planted(double q, double ratio, std::size_t n, int K) {
  const double p = ratio * q;
  if (p > 1.0) throw DomainError("solved p = " + std::to_string(p) + " exceeds 1");
  return {p, q, n, K};
}

}  // namespace

PlantedParams solve_planted(std::size_t n, int K, double d, double ratio) {
  if (K < 2) throw DomainError("planted model needs K >= 2");
  if (n <= static_cast<std::size_t>(K)) throw DomainError("planted model needs n > K");
  check_planted_inputs(d, ratio);
  const double nn = static_cast<double>(n);
  const double k = static_cast<double>(K);
  const double q = d / (ratio * (nn / k - 1.0) + nn * (k - 1.0) / k);
  return finish_planted(q, ratio, n, K);
}

double expected_average_degree(std::span<const std::size_t> sizes, double p, double q) {
  const double n = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  if (n == 0.0) return 0.0;
  double total = 0.0;
  for (std::size_t s : sizes) {
    const double na = static_cast<double>(s);
    total += na * ((na - 1.0) * p + (n - na) * q);
  }
  return total / n;
}

PlantedParams solve_planted(std::span<const std::size_t> sizes, double d, double ratio) {
  const int K = static_cast<int>(sizes.size());
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (K < 2) throw DomainError("planted model needs K >= 2");
  if (n <= static_cast<std::size_t>(K)) throw DomainError("planted model needs n > K");
  for (std::size_t s : sizes) {
    if (s == 0) throw DomainError("community sizes must be positive");
  }
  check_planted_inputs(d, ratio);
  // d is linear in q once p = ratio q.
  const double q = d / expected_average_degree(sizes, ratio, 1.0);
  return finish_planted(q, ratio, n, K);
}

Membership perturb_labels(const Membership& z, double eps, Rng& rng) {
  z.validate();
  const double bound = static_cast<double>(z.K - 1) / static_cast<double>(z.K);
  if (!(eps >= 0.0) || (eps > 0.0 && !(eps < bound))) {
    throw DomainError("perturbation rate must lie in [0, (K-1)/K)");
  }
  Membership out = z;
  if (eps == 0.0) return out;
  for (int& label : out.labels) {
    if (rng.uniform() < eps) {
      int other = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(z.K - 1)));
      if (other >= label) ++other;
      label = other;
    }
  }
  return out;
}

DegreeParams sample_theta(std::size_t n, Rng& rng) {
  if (n < 1) throw DomainError("sample_theta needs n >= 1");
  // Beta(a, b) = X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
  std::gamma_distribution<double> gx(2.0, 1.0);
  std::gamma_distribution<double> gy(1.0 / 3.0, 1.0);
  DegreeParams out;
  out.theta.resize(n);
  for (double& t : out.theta) {
    const double x = gx(rng);
    const double y = gy(rng);
    double v = x / (x + y);
    if (!(v < 1.0)) v = std::nextafter(1.0, 0.0);
    if (!(v > 0.0)) v = std::numeric_limits<double>::min();
    t = v;
  }
  return out;
}

}  // namespace tbcavi
