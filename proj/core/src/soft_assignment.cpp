#include "tbcavi/soft_assignment.hpp"

#include <cmath>
#include <limits>

#include "tbcavi/errors.hpp"

namespace tbcavi {

SoftAssignment SoftAssignment::uniform(std::size_t n, int K) {
  if (K < 1) throw DomainError("soft assignment needs K >= 1");
  return SoftAssignment(Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), K, 1.0 / K));
}

bool SoftAssignment::is_row_stochastic(double tol) const {
  for (Eigen::Index i = 0; i < psi_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index a = 0; a < psi_.cols(); ++a) {
      const double v = psi_(i, a);
      if (!(v >= -tol) || !std::isfinite(v)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool SoftAssignment::is_one_hot() const {
  for (Eigen::Index i = 0; i < psi_.rows(); ++i) {
    int ones = 0;
    for (Eigen::Index a = 0; a < psi_.cols(); ++a) {
      const double v = psi_(i, a);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return true;
}

namespace {

int row_argmax(const Eigen::MatrixXd& m, Eigen::Index i) {
  int best = 0;
  for (Eigen::Index a = 1; a < m.cols(); ++a) {
    if (m(i, a) > m(i, best)) best = static_cast<int>(a);
  }
  return best;
}

}  // namespace

Membership SoftAssignment::labels() const {
  Membership z;
  z.K = K();
  z.labels.resize(num_nodes());
  for (Eigen::Index i = 0; i < psi_.rows(); ++i) z.labels[static_cast<std::size_t>(i)] = row_argmax(psi_, i);
  return z;
}

SoftAssignment hard_threshold(const SoftAssignment& psi) { return SoftAssignment::from_labels(psi.labels()); }

SoftAssignment softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    if (m == kNegInf) {
      out.row(i).setConstant(1.0 / static_cast<double>(logits.cols()));
      continue;
    }
    double sum = 0.0;
    for (Eigen::Index a = 0; a < logits.cols(); ++a) {
      const double e = logits(i, a) == kNegInf ? 0.0 : std::exp(logits(i, a) - m);
      out(i, a) = e;
      sum += e;
    }
    out.row(i) /= sum;
  }
  return SoftAssignment(std::move(out));
}

}  // namespace tbcavi
