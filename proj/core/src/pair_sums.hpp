#pragma once

// Sufficient statistics shared by the SBM and DCSBM updates. With weights
// w_i (1 for SBM, theta_i for DCSBM):
//   N = A Psi                       neighbor mass per block
//   M = Psi^T A Psi                 sum over ordered edges (i, j) of Psi_ia Psi_jb
//   S_a = sum_i w_i Psi_ia
//   Q_ab = sum_i w_i^2 Psi_ia Psi_ib
// so that sum_{i != j} w_i w_j Psi_ia Psi_jb = S_a S_b - Q_ab.

#include <algorithm>
#include <span>

#include <Eigen/Core>

#include "tbcavi/errors.hpp"
#include "tbcavi/fit.hpp"
#include "tbcavi/graph.hpp"
#include "tbcavi/soft_assignment.hpp"

namespace tbcavi::detail {

inline Eigen::MatrixXd neighbor_sums(const Graph& g, const Eigen::MatrixXd& psi) {
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(psi.rows(), psi.cols());
  for (Eigen::Index i = 0; i < psi.rows(); ++i) {
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) N.row(i) += psi.row(j);
  }
  return N;
}

struct PairSums {
  Eigen::MatrixXd N;
  Eigen::MatrixXd M;
  Eigen::VectorXd S;
  Eigen::MatrixXd Q;
};

inline PairSums pair_sums(const Graph& g, const Eigen::MatrixXd& psi,
                          std::span<const double> weights = {}) {
  PairSums out;
  out.N = neighbor_sums(g, psi);
  out.M = psi.transpose() * out.N;
  if (weights.empty()) {
    out.S = psi.colwise().sum().transpose();
    out.Q = psi.transpose() * psi;
  } else {
    const Eigen::Map<const Eigen::VectorXd> w(weights.data(), static_cast<Eigen::Index>(weights.size()));
    const Eigen::MatrixXd wpsi = w.asDiagonal() * psi;
    out.S = wpsi.colwise().sum().transpose();
    out.Q = wpsi.transpose() * wpsi;
  }
  return out;
}

inline void check_psi(const Graph& g, const SoftAssignment& psi) {
  if (psi.num_nodes() != g.num_nodes()) {
    throw DomainError("soft assignment has " + std::to_string(psi.num_nodes()) +
                      " rows but the graph has " + std::to_string(g.num_nodes()) + " nodes");
  }
  if (psi.K() < 1) throw DomainError("soft assignment needs at least one column");
}

inline double clamp_prob(double v, Diagnostics* diag) {
  const double c = std::clamp(v, kProbFloor, 1.0 - kProbFloor);
  if (c != v && diag) ++diag->clamped;
  return c;
}

inline double clamp_positive(double v, Diagnostics* diag) {
  if (v >= kProbFloor) return v;
  if (diag) ++diag->clamped;
  return kProbFloor;
}

}  // namespace tbcavi::detail
