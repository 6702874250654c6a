#include "tbcavi/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "tbcavi/errors.hpp"

namespace tbcavi {

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const std::size_t n = weight.size();
  for (const auto& row : weight) {
    if (row.size() != n) throw DomainError("assignment matrix must be square");
  }
  if (n == 0) return {};
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& row : weight) top = std::max(top, *std::max_element(row.begin(), row.end()));
  // Shortest augmenting paths with potentials on cost = top - weight (1-based).
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - weight[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = static_cast<int>(j - 1);
  return assignment;
}

AccuracyReport matched_accuracy(const Membership& estimate, const Membership& truth,
                                MatchMethod method) {
  if (estimate.size() != truth.size()) {
    throw DomainError("labelings have different lengths (" + std::to_string(estimate.size()) +
                      " vs " + std::to_string(truth.size()) + ")");
  }
  if (estimate.K != truth.K) throw DomainError("labelings have different K");
  if (estimate.size() == 0) throw DomainError("labelings are empty");
  estimate.validate();
  truth.validate();
  const int K = truth.K;
  const auto k = static_cast<std::size_t>(K);
  std::vector<std::vector<double>> confusion(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    confusion[static_cast<std::size_t>(estimate[i])][static_cast<std::size_t>(truth[i])] += 1.0;
  }

  if (method == MatchMethod::automatic) method = K <= 8 ? MatchMethod::enumerate : MatchMethod::hungarian;
  std::vector<int> best;
  if (method == MatchMethod::enumerate) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (std::size_t a = 0; a < k; ++a) score += confusion[a][static_cast<std::size_t>(perm[a])];
      if (score > best_score) {
        best_score = score;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    best = max_weight_assignment(confusion);
  }

  double matched = 0.0;
  for (std::size_t a = 0; a < k; ++a) matched += confusion[a][static_cast<std::size_t>(best[a])];
  const double n = static_cast<double>(truth.size());
  AccuracyReport report;
  report.accuracy = matched / n;
  report.best_permutation = std::move(best);
  report.l1_error = 2.0 * (n - matched);
  return report;
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("normal_quantile: probability must lie in (0, 1)");
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x;
  if (prob < low) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - low) {
    const double q = prob - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

ConfidenceIntervals gaussian_ci(double p_hat, double q_hat, std::size_t n, int K, double level) {
  if (!(p_hat > 0.0 && p_hat < 1.0) || !(q_hat > 0.0 && q_hat < 1.0)) {
    throw DomainError("gaussian_ci: estimates must lie in (0, 1)");
  }
  if (!(level >= 0.0 && level < 1.0)) throw DomainError("gaussian_ci: level must lie in [0, 1)");
  if (K < 2) throw DomainError("gaussian_ci: K must be at least 2");
  if (n == 0) throw DomainError("gaussian_ci: n must be positive");
  const double z = level == 0.0 ? 0.0 : normal_quantile(0.5 * (1.0 + level));
  const double nn = static_cast<double>(n);
  const double k = static_cast<double>(K);
  const double hp = z * std::sqrt(2.0 * k * p_hat) / nn;
  const double hq = z * std::sqrt(2.0 * k / (k - 1.0) * q_hat) / nn;
  return {{p_hat - hp, p_hat + hp}, {q_hat - hq, q_hat + hq}};
}

ParamErrorReport param_errors(const PlantedEstimates& est, const PlantedParams& truth) {
  if (!(truth.p > 0.0) || !(truth.q > 0.0)) throw DomainError("param_errors: true p and q must be positive");
  ParamErrorReport r;
  r.rel_p = (est.p_hat - truth.p) / truth.p;
  r.rel_q = (est.q_hat - truth.q) / truth.q;
  const double ratio = truth.p / truth.q;
  r.rel_ratio = (est.p_hat / est.q_hat - ratio) / ratio;
  return r;
}

}  // namespace tbcavi
