#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "scq/circuit.hpp"
#include "scq/ghz.hpp"
#include "scq/simulator.hpp"

using namespace scq;
using std::numbers::pi;

namespace {

ParityCurve synthetic(int n, double c, double psi, double noise = 0.0, std::uint64_t seed = 0) {
  ParityCurve curve;
  curve.n = n;
  curve.gammas = default_parity_scan().points();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, noise > 0 ? noise : 1.0);
  for (double g : curve.gammas) curve.parities.push_back(c * std::cos(n * g + psi) + (noise > 0 ? nd(rng) : 0.0));
  return curve;
}

}  // namespace

TEST(Population, Values) {
  const auto ghz = run_exact(build_ghz(4));
  EXPECT_NEAR(ghz_population(ghz), 1.0, 1e-12);
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> q(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
    const Eigen::Index dim = Eigen::Index{1} << n;
    const ProbabilityTable uniform(q, Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim)));
    EXPECT_NEAR(ghz_population(uniform), 2.0 / static_cast<double>(dim), 1e-15);
  }
}

TEST(Parity, Values) {
  EXPECT_EQ(parity(ProbabilityTable({0, 1}, Eigen::Vector4d(1, 0, 0, 0))), 1.0);
  EXPECT_EQ(parity(ProbabilityTable({0, 1}, Eigen::Vector4d(0, 0, 1, 0))), -1.0);
  EXPECT_EQ(parity(ProbabilityTable({0, 1}, Eigen::Vector4d(0.25, 0.25, 0.25, 0.25))), 0.0);
}

TEST(FitParity, ExactCosine) {
  const auto fit = fit_parity(synthetic(6, 1.0, 0.0));
  EXPECT_NEAR(fit.coherence, 1.0, 1e-10);
  EXPECT_NEAR(fit.phase, 0.0, 1e-10);
  EXPECT_LT(fit.rmse, 1e-12);
}

TEST(FitParity, AmplitudeAndPhase) {
  const auto fit = fit_parity(synthetic(10, 0.777, 0.3));
  EXPECT_NEAR(fit.coherence, 0.777, 1e-9);
  EXPECT_NEAR(fit.phase, 0.3, 1e-9);
}

TEST(FitParity, RobustToNoise) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> ph(-pi, pi);
  for (int t = 0; t < 200; ++t) {
    const double c = amp(rng);
    const int n = 2 + t % 9;
    const auto fit = fit_parity(synthetic(n, c, ph(rng), 0.01, static_cast<std::uint64_t>(t)));
    EXPECT_LE(std::abs(fit.coherence - c), 0.01);
  }
}

TEST(FitParity, Degenerate) {
  ParityCurve curve{{0.0, 2 * pi / 3, 4 * pi / 3}, {1, 1, 1}, 3};
  EXPECT_THROW(fit_parity(curve), std::domain_error);
  EXPECT_THROW(fit_parity(ParityCurve{{0.0, 1.0}, {1, 1}, 1}), std::invalid_argument);
  EXPECT_THROW(fit_parity(ParityCurve{{0.0, 1.0, 2.0}, {1, 1, 1}, 0}), std::invalid_argument);
}

TEST(FitParity, IdealGhzEight) {
  const Circuit c = append_parity_stage(build_ghz(8), default_parity_scan());
  ParityCurve curve{c.scan()->points(), {}, 8};
  for (int k = 0; k < 51; ++k) curve.parities.push_back(parity(run_exact(instantiate(c, k))));
  EXPECT_GE(fit_parity(curve).coherence, 1 - 1e-6);
}

TEST(Report, Combines) {
  const auto ideal = ghz_report({0, 4}, 1.0, ParityFit{1.0, 0.0, 0.0});
  EXPECT_EQ(ideal.fidelity, 1.0);
  EXPECT_TRUE(ideal.genuine_entanglement);
  const auto lab = ghz_report({0, 10}, 0.801, ParityFit{0.756, 0.1, 0.02});
  EXPECT_DOUBLE_EQ(lab.fidelity, (0.801 + 0.756) / 2);
  EXPECT_NEAR(lab.fidelity, 0.7785, 1e-12);
  EXPECT_TRUE(lab.genuine_entanglement);
  const auto weak = ghz_report({0, 3}, 0.5, ParityFit{0.4, 0.0, 0.0});
  EXPECT_NEAR(weak.fidelity, 0.45, 1e-15);
  EXPECT_FALSE(weak.genuine_entanglement);
  const auto edge = ghz_report({0, 3}, 0.5, ParityFit{0.5, 0.0, 0.0});
  EXPECT_FALSE(edge.genuine_entanglement);
}

TEST(Report, FromTables) {
  const auto pop = run_exact(build_ghz(3));
  const auto r = ghz_report({2, 3}, pop, synthetic(3, 0.9, 0.0));
  EXPECT_NEAR(r.fidelity, 0.95, 1e-10);
  EXPECT_EQ(r.block, (GhzBlock{2, 3}));
  EXPECT_THROW(ghz_report({2, 4}, pop, synthetic(3, 0.9, 0.0)), std::invalid_argument);
}

TEST(Bootstrap, SpreadMatchesBinomialScale) {
  // Population histogram with p = 0.8 over 2000 shots: σ_P ≈ √(p(1−p)/N).
  GhzCounts counts;
  counts.population = {800, 100, 100, 800};
  const auto curve = synthetic(2, 0.8, 0.0);
  for (std::size_t k = 0; k < curve.gammas.size(); ++k) {
    const double even = (1 + curve.parities[k]) / 2;
    const auto e = static_cast<std::uint64_t>(std::lround(even * 2000));
    counts.parity.push_back({e / 2, (2000 - e) / 2, (2000 - e) - (2000 - e) / 2, e - e / 2});
    counts.gammas.push_back(curve.gammas[k]);
  }
  const auto s = bootstrap_ghz(counts, 2, {}, 200, 1);
  const double binomial = std::sqrt(0.8 * 0.2 / 1800);
  EXPECT_GT(s.population, 0.5 * binomial);
  EXPECT_LT(s.population, 2.0 * binomial);
  EXPECT_GT(s.coherence, 0.0);
  EXPECT_LT(s.coherence, 0.02);
  const auto again = bootstrap_ghz(counts, 2, {}, 200, 1);
  EXPECT_EQ(s.fidelity, again.fidelity);
}
