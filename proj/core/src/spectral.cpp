#include "tbcavi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "tbcavi/errors.hpp"

namespace tbcavi {

namespace {

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& Y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
}

void apply(const MatVec& op, const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) {
  const auto n = static_cast<std::size_t>(X.rows());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    op(std::span<const double>(X.col(c).data(), n), std::span<double>(Y.col(c).data(), n));
  }
}

}  // namespace

EigenPairs top_k_eigen(const MatVec& op, std::size_t n, int K, Rng& rng, const EigenOptions& options) {
  if (K < 1 || static_cast<std::size_t>(K) > n) throw DomainError("top_k_eigen: need 1 <= K <= n");
  const auto rows = static_cast<Eigen::Index>(n);
  const Eigen::Index m = std::min<Eigen::Index>(rows, 2 * K + 8);

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd X(rows, m);
  for (Eigen::Index k = 0; k < X.size(); ++k) X.data()[k] = normal(rng);
  X = orthonormalize(X);
  Eigen::MatrixXd Y(rows, m);
  std::vector<double> residuals(static_cast<std::size_t>(K));

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    apply(op, X, Y);
    Eigen::MatrixXd H = X.transpose() * Y;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd& theta = eig.eigenvalues();
    // Decreasing magnitude; for equal magnitude the positive value first.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double fa = std::abs(theta(a)), fb = std::abs(theta(b));
      if (fa != fb) return fa > fb;
      return theta(a) > theta(b);
    });

    Eigen::MatrixXd W(m, K);
    for (int k = 0; k < K; ++k) W.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    const Eigen::MatrixXd V = X * W;
    const Eigen::MatrixXd AV = Y * W;
    bool converged = true;
    for (int k = 0; k < K; ++k) {
      const double lambda = theta(order[static_cast<std::size_t>(k)]);
      const double r = (AV.col(k) - lambda * V.col(k)).norm();
      residuals[static_cast<std::size_t>(k)] = r;
      if (!(r <= options.tol * std::max(1.0, std::abs(lambda)))) converged = false;
    }
    if (converged) {
      EigenPairs out;
      out.iterations = iter;
      out.vectors = V;
      for (int k = 0; k < K; ++k) out.values.push_back(theta(order[static_cast<std::size_t>(k)]));
      return out;
    }
    X = orthonormalize(Y);
  }
  throw ConvergenceError("top_k_eigen: no convergence after " + std::to_string(options.max_iter) +
                             " iterations",
                         residuals);
}

namespace {

struct Lloyd {
  const Eigen::MatrixXd& X;
  int K;

  double dist2(Eigen::Index i, const Eigen::MatrixXd& C, int c) const {
    return (X.row(i) - C.row(c)).squaredNorm();
  }

  Eigen::MatrixXd seed(Rng& rng) const {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd C(K, X.cols());
    C.row(0) = X.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))));
    std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    for (int c = 1; c < K; ++c) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        auto& b = best[static_cast<std::size_t>(i)];
        b = std::min(b, dist2(i, C, c - 1));
        total += b;
      }
      Eigen::Index pick;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += best[static_cast<std::size_t>(i)];
          if (acc > target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      }
      C.row(c) = X.row(pick);
    }
    return C;
  }

  void assign(const Eigen::MatrixXd& C, std::vector<int>& labels) const {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      int best = 0;
      double bd = dist2(i, C, 0);
      for (int c = 1; c < K; ++c) {
        const double d = dist2(i, C, c);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      labels[static_cast<std::size_t>(i)] = best;
    }
  }

  // Moves the point farthest from its center into each empty cluster.
  void reseed_empty(Eigen::MatrixXd& C, std::vector<int>& labels) const {
    for (;;) {
      std::vector<std::size_t> counts(static_cast<std::size_t>(K), 0);
      for (int l : labels) ++counts[static_cast<std::size_t>(l)];
      const auto empty = std::find(counts.begin(), counts.end(), std::size_t{0});
      if (empty == counts.end()) return;
      Eigen::Index far = -1;
      double fd = -1.0;
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(l)] < 2) continue;
        const double d = dist2(i, C, l);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      const int c = static_cast<int>(empty - counts.begin());
      labels[static_cast<std::size_t>(far)] = c;
      C.row(c) = X.row(far);
    }
  }

  void update(Eigen::MatrixXd& C, const std::vector<int>& labels) const {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(K, X.cols());
    std::vector<double> counts(static_cast<std::size_t>(K), 0.0);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      sum.row(l) += X.row(i);
      counts[static_cast<std::size_t>(l)] += 1.0;
    }
    for (int c = 0; c < K; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0.0) C.row(c) = sum.row(c) / counts[static_cast<std::size_t>(c)];
    }
  }

  double wcss(const Eigen::MatrixXd& C, const std::vector<int>& labels) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) total += dist2(i, C, labels[static_cast<std::size_t>(i)]);
    return total;
  }
};

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int K, Rng& rng, const KMeansOptions& options) {
  if (K < 1) throw DomainError("kmeans: K must be positive");
  if (points.rows() < K) throw DomainError("kmeans: fewer points than clusters");
  if (options.restarts < 1 || options.max_iter < 1) throw DomainError("kmeans: restarts and max_iter must be positive");
  const Lloyd lloyd{points, K};
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();

  for (int r = 0; r < options.restarts; ++r) {
    Eigen::MatrixXd C = lloyd.seed(rng);
    std::vector<int> labels(static_cast<std::size_t>(points.rows()), 0);
    std::vector<double> history;
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_iter; ++it) {
      lloyd.assign(C, labels);
      lloyd.reseed_empty(C, labels);
      lloyd.update(C, labels);
      const double cur = lloyd.wcss(C, labels);
      history.push_back(cur);
      if (cur == 0.0 || std::abs(previous - cur) <= options.tol * previous) break;
      previous = cur;
    }
    if (history.back() < best.wcss) {
      best.wcss = history.back();
      best.labels = Membership{labels, K};
      best.history = std::move(history);
    }
  }
  return best;
}

namespace {

Eigen::MatrixXd adjacency_vectors(const Graph& g, int K, Rng& rng, std::span<const double> scale) {
  const MatVec op = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      double acc = 0.0;
      for (NodeId j : g.neighbors(static_cast<NodeId>(i))) acc += scale.empty() ? x[j] : scale[j] * x[j];
      y[i] = scale.empty() ? acc : scale[i] * acc;
    }
  };
  return top_k_eigen(op, g.num_nodes(), K, rng).vectors;
}

void check_spectral(const Graph& g, int K) {
  if (K < 2) throw DomainError("spectral clustering needs K >= 2");
  if (g.num_nodes() < static_cast<std::size_t>(K)) throw DomainError("spectral clustering needs n >= K");
}

}  // namespace

Membership spectral_clustering(const Graph& g, int K, Rng& rng) {
  check_spectral(g, K);
  const Eigen::MatrixXd U = adjacency_vectors(g, K, rng, {});
  return kmeans(U, K, rng).labels;
}

Membership regularized_spectral_clustering(const Graph& g, int K, Rng& rng) {
  check_spectral(g, K);
  const std::size_t n = g.num_nodes();
  const double tau = degree_stats(g).avg;
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(g.degree(static_cast<NodeId>(i))) + tau;
    scale[i] = dt > 0.0 ? 1.0 / std::sqrt(dt) : 0.0;
  }
  Eigen::MatrixXd U = adjacency_vectors(g, K, rng, scale);
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    // Isolated nodes have numerically zero rows; keep them at zero.
    const double norm = U.row(i).norm();
    if (norm > 1e-12) {
      U.row(i) /= norm;
    } else {
      U.row(i).setZero();
    }
  }
  return kmeans(U, K, rng).labels;
}

Membership spectral_init(const Graph& g, int K, SpectralFlavor flavor, Rng& rng) {
  return flavor == SpectralFlavor::standard ? spectral_clustering(g, K, rng)
                                            : regularized_spectral_clustering(g, K, rng);
}

}  // namespace tbcavi
