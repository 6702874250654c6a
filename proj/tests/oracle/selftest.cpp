#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "tbcavi/block_models.hpp"
#include "tbcavi/vi_dcsbm.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace tbcavi::oracle {

bool close(double a, double b, double tol, double* rel) {
  const double diff = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  if (rel) *rel = scale > 0.0 ? diff / scale : 0.0;
  return diff <= tol * scale || diff <= 1e-14;
}

namespace {

class Checker {
 public:
  Checker(SuiteReport& report, double tol) : report_(report), tol_(tol) {}

  void scalar(const std::string& what, int instance, double got, double want) {
    ++report_.checks;
    double rel = 0.0;
    const bool ok = close(got, want, tol_, &rel) && std::isfinite(got);
    if (std::abs(got - want) > 1e-14) report_.worst = std::max(report_.worst, rel);
    if (!ok) fail(what, instance, got, want);
  }

  void matrix(const std::string& what, int instance, const Dense& got, const Dense& want) {
    if (got.rows() != want.rows() || got.cols() != want.cols()) {
      ++report_.checks;
      fail(what + " (shape)", instance, 0, 0);
      return;
    }
    for (Eigen::Index k = 0; k < got.size(); ++k) scalar(what, instance, got.data()[k], want.data()[k]);
  }

  void vector(const std::string& what, int instance, const std::vector<double>& got,
              const std::vector<double>& want) {
    matrix(what, instance,
           Eigen::Map<const Dense>(got.data(), static_cast<Eigen::Index>(got.size()), 1),
           Eigen::Map<const Dense>(want.data(), static_cast<Eigen::Index>(want.size()), 1));
  }

  void fail(const std::string& what, int instance, double got, double want) {
    ++report_.failures;
    if (report_.messages.size() < 10) {
      std::ostringstream os;
      os.precision(17);
      os << what << " on instance " << instance << ": got " << got << ", expected " << want;
      report_.messages.push_back(os.str());
    }
  }

 private:
  SuiteReport& report_;
  double tol_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SuiteReport check_updates(int instances, std::uint64_t seed, double tol) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "oracle equivalence of updates";
  report.instances = instances;
  Checker check(report, tol);
  Rng rng(seed);
  for (int k = 0; k < instances; ++k) {
    const Instance inst = random_instance(rng, 8, 3, k % 4 == 3);
    const Dense A = adjacency(inst.graph);
    const SoftAssignment psi(inst.psi);
    const SbmParams params{inst.B, inst.pi};
    const DegreeParams theta{inst.theta};

    check.matrix("B", k, update_block_matrix(inst.graph, psi), block_matrix(A, inst.psi));
    check.vector("pi", k, update_pi(psi), pi(inst.psi));
    const Dense L = psi_logits(A, inst.psi, inst.B, inst.pi);
    check.matrix("Psi logits", k, psi_logits(inst.graph, psi, params), L);
    check.matrix("Psi", k, update_psi(inst.graph, psi, params).matrix(), softmax(L));
    check.scalar("ELBO", k, elbo(inst.graph, psi, params), elbo(A, inst.psi, inst.B, inst.pi));

    const Planted pl = planted(A, inst.psi);
    const PlantedEstimates est = planted_params(inst.graph, psi);
    check.scalar("p_hat", k, est.p_hat, pl.p);
    check.scalar("q_hat", k, est.q_hat, pl.q);
    check.scalar("t", k, est.t, pl.t);
    check.scalar("lambda", k, est.lambda, pl.lambda);
    const Dense PL = planted_logits(A, inst.psi, pl.t, pl.lambda);
    check.matrix("planted logits", k, planted_psi_logits(inst.graph, psi, est), PL);
    check.matrix("planted Psi", k, planted_psi_update(inst.graph, psi, est).matrix(), softmax(PL));

    check.matrix("B (dc)", k, update_block_matrix_dc(inst.graph, psi, theta), block_matrix_dc(A, inst.psi, inst.theta));
    const Dense LD = psi_logits_dc(A, inst.psi, inst.theta, inst.B, inst.pi);
    check.matrix("Psi logits (dc)", k, psi_logits_dc(inst.graph, psi, theta, params), LD);
    check.matrix("Psi (dc)", k, update_psi_dc(inst.graph, psi, theta, params).matrix(), softmax(LD));
    check.vector("theta", k, update_theta(inst.graph, psi, theta, inst.B).theta,
                 theta_update(A, inst.psi, inst.theta, inst.B));
    check.scalar("ELBO (dc)", k, elbo_dc(inst.graph, DcsbmState{psi, theta, params}),
                 elbo_dc(A, inst.psi, inst.theta, inst.B, inst.pi));

    const Planted pd = planted_dc(A, inst.psi, inst.theta);
    const PlantedEstimates estd = planted_params_dc(inst.graph, psi, theta);
    check.scalar("p_hat (dc)", k, estd.p_hat, pd.p);
    check.scalar("q_hat (dc)", k, estd.q_hat, pd.q);
    check.scalar("t (dc)", k, estd.t, pd.t);
    check.scalar("lambda (dc)", k, estd.lambda, pd.lambda);
    const Dense PD = planted_logits_dc(A, inst.psi, inst.theta, pd.t, pd.lambda);
    check.matrix("planted logits (dc)", k, planted_psi_logits_dc(inst.graph, psi, theta, estd), PD);
    check.matrix("planted Psi (dc)", k, planted_psi_update_dc(inst.graph, psi, theta, estd).matrix(), softmax(PD));
  }
  report.seconds = seconds_since(start);
  return report;
}

SuiteReport check_cavi(int instances, std::uint64_t seed, double tol) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "single-row coordinate ascent";
  report.instances = instances;
  Checker check(report, 0.0);
  Rng rng(seed);
  auto record = [&](const std::string& what, int k, double before, double after) {
    ++report.checks;
    report.worst = std::max(report.worst, before - after);
    if (after < before - tol) check.fail(what, k, after, before);
  };
  for (int k = 0; k < instances; ++k) {
    const Instance inst = random_instance(rng, 8, 3, false);
    const SoftAssignment psi(inst.psi);
    const SbmParams params{inst.B, inst.pi};
    const DegreeParams theta{inst.theta};
    const Dense sbm_rows = update_psi(inst.graph, psi, params).matrix();
    const Dense dc_rows = update_psi_dc(inst.graph, psi, theta, params).matrix();
    const double base = elbo(inst.graph, psi, params);
    const double base_dc = elbo_dc(inst.graph, DcsbmState{psi, theta, params});
    for (Eigen::Index i = 0; i < inst.psi.rows(); ++i) {
      Dense one = inst.psi;
      one.row(i) = sbm_rows.row(i);
      record("SBM ELBO after row update", k, base, elbo(inst.graph, SoftAssignment(one), params));
      Dense one_dc = inst.psi;
      one_dc.row(i) = dc_rows.row(i);
      record("DCSBM ELBO after row update", k, base_dc,
             elbo_dc(inst.graph, DcsbmState{SoftAssignment(one_dc), theta, params}));
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

SuiteReport check_planted_consistency(int instances, std::uint64_t seed, double tol) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "planted versus general updates";
  report.instances = instances;
  Rng rng(seed);
  auto compare = [&](const std::string& what, int k, const Dense& a, const Dense& b) {
    for (Eigen::Index e = 0; e < a.size(); ++e) {
      ++report.checks;
      const double diff = std::abs(a.data()[e] - b.data()[e]);
      report.worst = std::max(report.worst, diff);
      if (!(diff <= tol)) {
        ++report.failures;
        if (report.messages.size() < 10) report.messages.push_back(what + " differs on instance " + std::to_string(k));
      }
    }
  };
  for (int k = 0; k < instances; ++k) {
    const Instance inst = random_instance(rng, 8, 3, k % 2 == 1);
    const SoftAssignment psi(inst.psi);
    const int K = psi.K();
    const std::vector<double> flat(static_cast<std::size_t>(K), 1.0 / K);
    const DegreeParams theta{inst.theta};

    const PlantedEstimates est = planted_params(inst.graph, psi);
    const SbmParams planted_b{planted_block_matrix(K, est.p_hat, est.q_hat), flat};
    compare("SBM", k, planted_psi_update(inst.graph, psi, est).matrix(),
            update_psi(inst.graph, psi, planted_b).matrix());

    const PlantedEstimates estd = planted_params_dc(inst.graph, psi, theta);
    const SbmParams planted_dc{planted_block_matrix(K, estd.p_hat, estd.q_hat), flat};
    compare("DCSBM", k, planted_psi_update_dc(inst.graph, psi, theta, estd).matrix(),
            update_psi_dc(inst.graph, psi, theta, planted_dc).matrix());
  }
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace tbcavi::oracle
