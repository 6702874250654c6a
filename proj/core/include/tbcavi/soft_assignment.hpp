#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "tbcavi/block_models.hpp"

namespace tbcavi {

/// Variational posterior over memberships: an n x K row-stochastic matrix.
class SoftAssignment {
 public:
  SoftAssignment() = default;
  explicit SoftAssignment(Eigen::MatrixXd psi) : psi_(std::move(psi)) {}

  static SoftAssignment from_labels(const Membership& z) { return SoftAssignment(z.one_hot()); }
  static SoftAssignment uniform(std::size_t n, int K);

  std::size_t num_nodes() const { return static_cast<std::size_t>(psi_.rows()); }
  int K() const { return static_cast<int>(psi_.cols()); }

  double operator()(std::size_t i, int a) const { return psi_(static_cast<Eigen::Index>(i), a); }
  const Eigen::MatrixXd& matrix() const noexcept { return psi_; }

  bool is_row_stochastic(double tol = 1e-9) const;
  bool is_one_hot() const;

  /// Row-wise argmax, ties to the lowest column.
  Membership labels() const;

 private:
  Eigen::MatrixXd psi_;
};

/// Sets the largest entry of every row to one and the rest to zero. Ties go
/// to the lowest column index.
SoftAssignment hard_threshold(const SoftAssignment& psi);

/// Numerically stable row-wise softmax of a logit matrix (max subtraction).
/// -inf logits map to exactly zero.
SoftAssignment softmax_rows(const Eigen::MatrixXd& logits);

}  // namespace tbcavi
