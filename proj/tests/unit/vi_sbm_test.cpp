#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tbcavi/errors.hpp"
#include "tbcavi/evaluation.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace tbcavi {
namespace {

// n = 6, z = (0,0,0,1,1,1), edges (0,1) (1,2) (3,4) (0,3).
Graph six_node() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {3, 4}, {0, 3}};
  return Graph::from_edges(6, e);
}
const Membership kSixLabels{{0, 0, 0, 1, 1, 1}, 2};

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({NodeId(i), NodeId(j)});
  return Graph::from_edges(n, e);
}

SoftAssignment random_psi(std::size_t n, int K, Rng& rng) {
  Eigen::MatrixXd m(n, K);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 0.05 + rng.uniform();
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
  return SoftAssignment(m);
}

TEST(Elbo, TwoNodeHandValue) {
  const std::vector<Edge> e{{0, 1}};
  const Graph g = Graph::from_edges(2, e);
  Eigen::MatrixXd B(2, 2);
  B << 0.5, 0.2, 0.2, 0.3;
  const SoftAssignment psi = SoftAssignment::from_labels({{0, 0}, 2});
  EXPECT_NEAR(elbo(g, psi, {B, {0.5, 0.5}}), 3 * std::log(0.5), 1e-14);
  EXPECT_NEAR(elbo(g, psi, {B, {0.5, 0.5}}), -2.0794415416798357, 1e-14);
}

TEST(Elbo, UniformPsiConstantB) {
  const Graph g = six_node();
  const double c = 0.3;
  const SbmParams params{Eigen::MatrixXd::Constant(3, 3, c), {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  // 15 pairs, 4 edges; the entropy term vanishes for uniform psi and pi.
  const double expected = 4 * std::log(c) + 11 * std::log(1 - c);
  EXPECT_NEAR(elbo(g, SoftAssignment::uniform(6, 3), params), expected, 1e-12);
}

TEST(Elbo, ZeroOneEntriesAreClampedAndCounted) {
  const Graph g = six_node();
  Eigen::MatrixXd B(2, 2);
  B << 1.0, 0.0, 0.0, 1.0;
  Diagnostics diag;
  const double v = elbo(g, SoftAssignment::from_labels(kSixLabels), {B, {0.5, 0.5}}, &diag);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(diag.clamped, 0u);
}

TEST(UpdateBlockMatrix, SixNodeHandCount) {
  const Eigen::MatrixXd B = update_block_matrix(six_node(), SoftAssignment::from_labels(kSixLabels));
  EXPECT_NEAR(B(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(B(1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(B(0, 1), 1.0 / 9.0, 1e-15);
  EXPECT_EQ(B(1, 0), B(0, 1));
}

TEST(UpdateBlockMatrix, CompleteAndEmptyGraphs) {
  Rng rng(4);
  const SoftAssignment psi = random_psi(7, 3, rng);
  const Eigen::MatrixXd full = update_block_matrix(complete(7), psi);
  EXPECT_TRUE(full.isApprox(Eigen::MatrixXd::Ones(3, 3), 1e-12));
  const Eigen::MatrixXd none = update_block_matrix(Graph(7), psi);
  EXPECT_EQ(none, Eigen::MatrixXd::Zero(3, 3));
}

TEST(UpdateBlockMatrix, EmptyCommunityFallsBack) {
  // Nobody in block 1: its row uses the previous matrix.
  const SoftAssignment psi = SoftAssignment::from_labels({{0, 0, 0, 0, 0, 0}, 2});
  Eigen::MatrixXd prev = Eigen::MatrixXd::Constant(2, 2, 0.25);
  Diagnostics diag;
  const Eigen::MatrixXd B = update_block_matrix(six_node(), psi, &prev, &diag);
  EXPECT_EQ(B(1, 1), 0.25);
  EXPECT_EQ(B(0, 1), 0.25);
  EXPECT_NEAR(B(0, 0), 4.0 / 15.0, 1e-15);
  EXPECT_EQ(diag.empty_community, 2u);
  const Eigen::MatrixXd global = update_block_matrix(six_node(), psi);
  EXPECT_NEAR(global(1, 1), 4.0 / 15.0, 1e-15);
}

TEST(UpdatePi, Examples) {
  EXPECT_EQ(update_pi(SoftAssignment::from_labels(Membership::balanced(6, 2))), (std::vector<double>{0.5, 0.5}));
  const auto u = update_pi(SoftAssignment::uniform(5, 4));
  for (double v : u) EXPECT_NEAR(v, 0.25, 1e-15);
  const auto c = update_pi(SoftAssignment::from_labels({{0, 1, 0, 0}, 2}));
  EXPECT_NEAR(c[0], 0.75, 1e-15);
  EXPECT_NEAR(c[1], 0.25, 1e-15);
}

TEST(UpdatePsi, FlatBReturnsPrior) {
  Rng rng(2);
  const SoftAssignment psi = random_psi(6, 3, rng);
  const SbmParams params{Eigen::MatrixXd::Constant(3, 3, 0.4), {0.2, 0.3, 0.5}};
  const SoftAssignment out = update_psi(six_node(), psi, params);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(out(i, 0), 0.2, 1e-12);
    EXPECT_NEAR(out(i, 1), 0.3, 1e-12);
    EXPECT_NEAR(out(i, 2), 0.5, 1e-12);
  }
}

TEST(UpdatePsi, TwoNodeHandValue) {
  const std::vector<Edge> e{{0, 1}};
  const Graph g = Graph::from_edges(2, e);
  Eigen::MatrixXd B(2, 2);
  B << 0.6, 0.2, 0.2, 0.4;
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.5, 0.3, 0.7;
  const SoftAssignment out = update_psi(g, SoftAssignment(m), {B, {0.4, 0.6}});
  const double l0 = std::log(0.4) + 0.3 * std::log(0.6) + 0.7 * std::log(0.2);
  const double l1 = std::log(0.6) + 0.3 * std::log(0.2) + 0.7 * std::log(0.4);
  EXPECT_NEAR(out(0, 0), 1.0 / (1.0 + std::exp(l1 - l0)), 1e-14);
  EXPECT_NEAR(out(0, 0), 0.3632965765488718, 1e-14);
}

TEST(UpdatePsi, BlockPermutationEquivariance) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = oracle::random_instance(rng, 8, 3);
    const int K = int(inst.B.rows());
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[0], perm[K - 1]);
    Eigen::MatrixXd psi_p(inst.psi.rows(), K), B_p(K, K);
    std::vector<double> pi_p(K);
    for (int a = 0; a < K; ++a) {
      psi_p.col(perm[a]) = inst.psi.col(a);
      pi_p[perm[a]] = inst.pi[a];
      for (int b = 0; b < K; ++b) B_p(perm[a], perm[b]) = inst.B(a, b);
    }
    const SoftAssignment out = update_psi(inst.graph, SoftAssignment(inst.psi), {inst.B, inst.pi});
    const SoftAssignment out_p = update_psi(inst.graph, SoftAssignment(psi_p), {B_p, pi_p});
    for (std::size_t i = 0; i < out.num_nodes(); ++i)
      for (int a = 0; a < K; ++a) EXPECT_NEAR(out_p(i, perm[a]), out(i, a), 1e-13);
    EXPECT_TRUE(out.is_row_stochastic(1e-12));
  }
}

TEST(HardThreshold, Rows) {
  Eigen::MatrixXd m(3, 3);
  m << 0.3, 0.7, 0.0, 0.5, 0.5, 0.0, 0.2, 0.5, 0.3;
  const SoftAssignment h = hard_threshold(SoftAssignment(m));
  Eigen::MatrixXd want(3, 3);
  want << 0, 1, 0, 1, 0, 0, 0, 1, 0;
  EXPECT_EQ(h.matrix(), want);
  EXPECT_EQ(hard_threshold(h).matrix(), h.matrix());
}

TEST(SoftmaxRows, NegativeInfinityMapsToZero) {
  Eigen::MatrixXd l(2, 3);
  const double inf = std::numeric_limits<double>::infinity();
  l << 0.0, -inf, 0.0, -inf, -inf, -inf;
  const SoftAssignment s = softmax_rows(l);
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(s(0, 0), 0.5);
  EXPECT_TRUE(s.is_row_stochastic());
}

TEST(PlantedParams, SixNodeHandValues) {
  Diagnostics diag;
  const PlantedEstimates est = planted_params(six_node(), SoftAssignment::from_labels(kSixLabels), &diag);
  EXPECT_NEAR(est.p_hat, 0.5, 1e-15);
  EXPECT_NEAR(est.q_hat, 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(est.t, 0.5 * std::log(8.0), 1e-14);
  EXPECT_NEAR(est.t, 1.0397, 1e-4);
  EXPECT_NEAR(est.lambda, std::log(16.0 / 9.0) / std::log(8.0), 1e-14);
  EXPECT_NEAR(est.lambda, 0.2767, 1e-4);
  EXPECT_FALSE(est.inverted);
  EXPECT_FALSE(diag.any());
}

TEST(PlantedParams, UniformPsiCollapsesToDensity) {
  Rng rng(3);
  const Graph g = sample_sbm(solve_planted(60, 2, 8.0, 4.0), Membership::balanced(60, 2), rng);
  Diagnostics diag;
  const PlantedEstimates est = planted_params(g, SoftAssignment::uniform(60, 2), &diag);
  const double density = double(g.num_edges()) / (60.0 * 59 / 2);
  EXPECT_NEAR(est.p_hat, density, 1e-12);
  EXPECT_NEAR(est.q_hat, density, 1e-12);
  EXPECT_TRUE(est.inverted || est.degenerate);
  if (est.degenerate) {
    EXPECT_EQ(est.lambda, est.q_hat);
  }
}

TEST(PlantedParams, LambdaBetweenQAndP) {
  const Membership z = Membership::balanced(300, 2);
  const PlantedParams pp = solve_planted(300, 2, 10.0, 4.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(mix_seed(8, seed));
    const PlantedEstimates est = planted_params(sample_sbm(pp, z, rng), SoftAssignment::from_labels(z));
    EXPECT_LT(est.q_hat, est.lambda) << seed;
    EXPECT_LT(est.lambda, est.p_hat) << seed;
  }
}

// Path 0-1-2-3 with z = (0,0,1,1). For node 1:
//   L_10 = 2t (A_10 - lambda) = 2t (1 - lambda)
//   L_11 = 2t [(A_12 - lambda) + (A_13 - lambda)] = 2t (1 - 2 lambda)
Graph path4() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}};
  return Graph::from_edges(4, e);
}

TEST(PlantedPsiUpdate, FourNodeHandValue) {
  PlantedEstimates est;
  est.t = 0.7;
  est.lambda = 0.3;
  const SoftAssignment psi = SoftAssignment::from_labels({{0, 0, 1, 1}, 2});
  const Eigen::MatrixXd L = planted_psi_logits(path4(), psi, est);
  EXPECT_NEAR(L(1, 0), 0.98, 1e-14);
  EXPECT_NEAR(L(1, 1), 0.56, 1e-14);
  const SoftAssignment out = planted_psi_update(path4(), psi, est);
  EXPECT_NEAR(out(1, 0), 1.0 / (1.0 + std::exp(-0.42)), 1e-14);
}

TEST(PlantedPsiUpdate, LargePenaltyFavoursSmallerBlock) {
  PlantedEstimates est;
  est.t = 0.5;
  est.lambda = 2.0;
  const SoftAssignment psi = SoftAssignment::from_labels({{0, 0, 1, 1}, 2});
  const Eigen::MatrixXd L = planted_psi_logits(path4(), psi, est);
  EXPECT_NEAR(L(1, 0), -1.0, 1e-14);
  EXPECT_NEAR(L(1, 1), -3.0, 1e-14);
}

TEST(PlantedPsiUpdate, ZeroScaleGivesUniformRows) {
  PlantedEstimates est;
  est.t = 0.0;
  est.lambda = 0.2;
  const SoftAssignment out = planted_psi_update(six_node(), SoftAssignment::from_labels(kSixLabels), est);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(out(i, 0), 0.5);
}

TEST(FitSbm, DisjointCliquesFromPerturbedInit) {
  std::vector<Edge> e;
  for (int base : {0, 10})
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) e.push_back({base + i, base + j});
  const Graph g = Graph::from_edges(20, e);
  const Membership truth = Membership::balanced(20, 2);
  for (Mode mode : {Mode::general, Mode::planted}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      const Membership init = perturb_labels(truth, 0.2, rng);
      const FitResult r = fit_sbm(g, SoftAssignment::from_labels(init), {5, Variant::t_bcavi, mode}, &truth);
      EXPECT_EQ(*r.trace.back().accuracy, 1.0);
      EXPECT_TRUE(r.psi.is_one_hot());
    }
  }
}

TEST(FitSbm, DenseRegimeExactRecovery) {
  const Membership truth = Membership::balanced(200, 2);
  const PlantedParams pp{0.5, 0.05, 200, 2};
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(mix_seed(61, seed));
    const Graph g = sample_sbm(pp, truth, rng);
    const Membership init = perturb_labels(truth, 0.2, rng);
    const FitResult r = fit_sbm(g, SoftAssignment::from_labels(init), {5, Variant::t_bcavi, Mode::planted}, &truth);
    exact += matched_accuracy(r.labels, truth).accuracy == 1.0;
  }
  EXPECT_GE(exact, 19);
}

TEST(FitSbm, BcaviDriftsToSaddle) {
  const Membership truth = Membership::balanced(600, 2);
  const PlantedParams pp = solve_planted(600, 2, 8.0, 10.0 / 3.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(mix_seed(62, seed));
    const Graph g = sample_sbm(pp, truth, rng);
    const Membership init = perturb_labels(truth, 0.4, rng);
    const FitResult r = fit_sbm(g, SoftAssignment::from_labels(init), {50, Variant::bcavi, Mode::planted});
    const auto& est = *r.trace.back().estimates;
    EXPECT_LT(std::abs(est.p_hat - est.q_hat) / est.p_hat, 0.05) << seed;
  }
}

TEST(FitSbm, TraceShapeAndRowStochasticity) {
  Rng rng(12);
  const Membership truth = Membership::balanced(80, 2);
  const Graph g = sample_sbm(solve_planted(80, 2, 8.0, 4.0), truth, rng);
  const SoftAssignment psi0 = SoftAssignment::from_labels(perturb_labels(truth, 0.2, rng));
  for (Variant v : {Variant::bcavi, Variant::t_bcavi}) {
    const FitResult gen = fit_sbm(g, psi0, {6, v, Mode::general}, &truth);
    ASSERT_EQ(gen.iterations(), 6);
    for (const auto& rec : gen.trace) {
      EXPECT_TRUE(rec.params.has_value());
      EXPECT_TRUE(rec.elbo.has_value());
      EXPECT_TRUE(rec.accuracy.has_value());
      EXPECT_TRUE(rec.estimates.has_value());
    }
    EXPECT_TRUE(gen.psi.is_row_stochastic());
    EXPECT_EQ(gen.psi.is_one_hot(), v == Variant::t_bcavi);
    const FitResult pl = fit_sbm(g, psi0, {6, v, Mode::planted}, &truth);
    EXPECT_FALSE(pl.trace.back().elbo.has_value());
    EXPECT_TRUE(pl.psi.is_row_stochastic());
  }
}

TEST(FitSbm, EarlyStopOnFixedLabels) {
  std::vector<Edge> e;
  for (int base : {0, 6})
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) e.push_back({base + i, base + j});
  const Graph g = Graph::from_edges(12, e);
  FitOptions opt{30, Variant::t_bcavi, Mode::planted, true};
  const FitResult r = fit_sbm(g, SoftAssignment::from_labels(Membership::balanced(12, 2)), opt);
  EXPECT_LT(r.iterations(), 30);
}

TEST(FitSbm, LabelPermutationEquivariance) {
  Rng rng(14);
  const Membership truth = Membership::balanced(90, 3);
  const Graph g = sample_sbm(solve_planted(90, 3, 10.0, 5.0), truth, rng);
  const Membership init = perturb_labels(truth, 0.2, rng);
  const std::vector<int> perm{2, 0, 1};
  Membership init_p = init;
  for (int& l : init_p.labels) l = perm[l];
  for (Mode mode : {Mode::general, Mode::planted}) {
    const FitResult a = fit_sbm(g, SoftAssignment::from_labels(init), {8, Variant::t_bcavi, mode});
    const FitResult b = fit_sbm(g, SoftAssignment::from_labels(init_p), {8, Variant::t_bcavi, mode});
    for (std::size_t i = 0; i < 90; ++i) EXPECT_EQ(b.labels[i], perm[a.labels[i]]);
  }
}

TEST(FitSbm, RejectsBadInputs) {
  const Graph g = six_node();
  EXPECT_THROW(fit_sbm(g, SoftAssignment::uniform(6, 2), {0}), DomainError);
  EXPECT_THROW(fit_sbm(g, SoftAssignment::uniform(5, 2), {3}), DomainError);
  const Membership short_truth{{0, 1}, 2};
  EXPECT_THROW(fit_sbm(g, SoftAssignment::uniform(6, 2), {3}, &short_truth), DomainError);
}

}  // namespace
}  // namespace tbcavi
