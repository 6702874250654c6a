#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tbcavi/block_models.hpp"
#include "tbcavi/graph.hpp"
#include "tbcavi/rng.hpp"

namespace tbcavi {

/// y = M x for a symmetric operator M.
using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

struct EigenPairs {
  std::vector<double> values;  // sorted by decreasing |value|
  Eigen::MatrixXd vectors;     // n x K, orthonormal columns
  int iterations = 0;
};

struct EigenOptions {
  double tol = 1e-8;  // on ||Mv - lambda v|| / max(1, |lambda|)
  int max_iter = 5000;
};

/// Leading K eigenpairs by magnitude: subspace (block power) iteration on
/// min(n, 2K + 8) vectors with Rayleigh-Ritz extraction, so pairs such as
/// +l and -l are separated. Throws ConvergenceError with the residuals if
/// max_iter is exhausted.
EigenPairs top_k_eigen(const MatVec& op, std::size_t n, int K, Rng& rng,
                       const EigenOptions& options = {});

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
  double tol = 1e-9;  // relative WCSS change
};

struct KMeansResult {
  Membership labels;
  double wcss = 0.0;
  // WCSS after every Lloyd iteration of the returned restart.
  std::vector<double> history;
};

/// Lloyd's algorithm from k-means++ seeds; best of `restarts` by WCSS.
/// Clusters that empty out are re-seeded at the point farthest from its center.
KMeansResult kmeans(const Eigen::MatrixXd& points, int K, Rng& rng,
                    const KMeansOptions& options = {});

/// k-means on the rows of the top-K adjacency eigenvectors (unscaled).
Membership spectral_clustering(const Graph& g, int K, Rng& rng);

/// Regularized spectral clustering: top-K eigenvectors of
/// D_tau^{-1/2} A D_tau^{-1/2} with tau the average degree, rows normalized
/// to unit length (zero rows left at zero), then k-means.
Membership regularized_spectral_clustering(const Graph& g, int K, Rng& rng);

enum class SpectralFlavor { standard, regularized };

Membership spectral_init(const Graph& g, int K, SpectralFlavor flavor, Rng& rng);

}  // namespace tbcavi
