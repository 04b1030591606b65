#include "scq/ghz.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "scq/readout.hpp"
#include "scq/rng.hpp"

namespace scq {

double ghz_population(const ProbabilityTable& probs) {
  if (probs.size() == 0) throw std::invalid_argument("empty probability table");
  return probs[0] + (probs.size() > 1 ? probs[probs.size() - 1] : 0.0);
}

double parity(const ProbabilityTable& probs) {
  double even = 0.0;
  double odd = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    (std::popcount(i) % 2 == 0 ? even : odd) += probs[i];
  }
  return even - odd;
}

ParityFit fit_parity(const ParityCurve& curve) { return fit_parity(curve, curve.n); }

ParityFit fit_parity(const ParityCurve& curve, int n) {
  if (curve.gammas.size() != curve.parities.size()) {
    throw std::invalid_argument("gammas and parities differ in length");
  }
  if (curve.gammas.size() < 3) throw std::invalid_argument("parity fit needs at least 3 points");
  if (n < 1) throw std::invalid_argument("parity fit needs n >= 1");

  const auto k = static_cast<Eigen::Index>(curve.gammas.size());
  Eigen::MatrixXd design(k, 2);
  Eigen::VectorXd y(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double g = curve.gammas[static_cast<std::size_t>(i)];
    design(i, 0) = std::cos(n * g);
    design(i, 1) = std::sin(n * g);
    y(i) = curve.parities[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 2) {
    throw std::domain_error("degenerate parity design: scan angles do not resolve cos and sin at n = " +
                            std::to_string(n));
  }
  const Eigen::Vector2d ab = qr.solve(y);
  ParityFit fit;
  fit.coherence = std::hypot(ab(0), ab(1));
  fit.phase = std::atan2(-ab(1), ab(0));
  fit.rmse = std::sqrt((design * ab - y).squaredNorm() / static_cast<double>(k));
  return fit;
}

GhzReport ghz_report(GhzBlock block, double population, const ParityFit& fit) {
  GhzReport r;
  r.block = block;
  r.population = population;
  r.coherence = fit.coherence;
  r.phase = fit.phase;
  r.fidelity = (population + fit.coherence) / 2.0;
  r.genuine_entanglement = r.fidelity > 0.5;
  r.fit_rmse = fit.rmse;
  return r;
}

GhzReport ghz_report(GhzBlock block, const ProbabilityTable& population_table,
                     const ParityCurve& curve) {
  if (curve.n != block.n) throw std::invalid_argument("parity curve and block sizes differ");
  return ghz_report(block, ghz_population(population_table), fit_parity(curve));
}

namespace {

/// Empirical histogram ready for repeated multinomial redraws.
struct Histogram {
  explicit Histogram(const std::vector<std::uint64_t>& counts) : bins(counts.size()) {
    std::vector<double> weights(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      shots += counts[i];
      weights[i] = static_cast<double>(counts[i]);
    }
    table = AliasTable(weights);
    const int width = std::countr_zero(counts.size());
    for (int i = 0; i < width; ++i) axes.push_back(i);
  }

  ProbabilityTable redraw(SplitMix64& rng) const {
    std::vector<std::uint64_t> drawn(bins, 0);
    for (std::uint64_t s = 0; s < shots; ++s) ++drawn[table.sample(rng.uniform())];
    return ProbabilityTable::from_counts(axes, drawn);
  }

  std::size_t bins;
  std::uint64_t shots = 0;
  AliasTable table;
  std::vector<int> axes;
};

double stddev(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

GhzUncertainty bootstrap_ghz(const GhzCounts& counts, int n, std::span<const Confusion> confusion,
                             int resamples, std::uint64_t seed) {
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");
  if (counts.parity.size() != counts.gammas.size()) {
    throw std::invalid_argument("parity histograms and angles differ in length");
  }
  auto correct = [&](const ProbabilityTable& t) {
    return confusion.empty() ? t : readout_correct(t, confusion);
  };
  const Histogram population(counts.population);
  std::vector<Histogram> scan;
  for (const auto& h : counts.parity) scan.emplace_back(h);
  std::vector<double> ps, cs, fs;
  for (int r = 0; r < resamples; ++r) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    const double p = ghz_population(correct(population.redraw(rng)));
    ParityCurve curve{counts.gammas, {}, n};
    for (const auto& h : scan) curve.parities.push_back(parity(correct(h.redraw(rng))));
    const double c = fit_parity(curve).coherence;
    ps.push_back(p);
    cs.push_back(c);
    fs.push_back((p + c) / 2.0);
  }
  return {stddev(ps), stddev(cs), stddev(fs)};
}

}  // namespace scq
