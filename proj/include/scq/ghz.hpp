#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scq/noise.hpp"
#include "scq/probability_table.hpp"

namespace scq {

/// p(0…0) + p(1…1).
double ghz_population(const ProbabilityTable& probs);

/// Σ_even p − Σ_odd p, where even/odd counts the ones in the outcome.
double parity(const ProbabilityTable& probs);

/// Parity measured against the scan angle for an n-qubit block.
struct ParityCurve {
  std::vector<double> gammas;
  std::vector<double> parities;
  int n = 0;
};

/// Least-squares fit of parity = A cos(nγ) + B sin(nγ) = C cos(nγ + ψ).
struct ParityFit {
  double coherence = 0.0;  ///< C = √(A² + B²)
  double phase = 0.0;      ///< ψ = atan2(−B, A)
  double rmse = 0.0;
};

/// Throws std::invalid_argument for fewer than 3 points or n < 1, and
/// std::domain_error when the angles cannot separate cos from sin.
ParityFit fit_parity(const ParityCurve& curve);

/// Same fit at an explicit frequency, ignoring curve.n.
ParityFit fit_parity(const ParityCurve& curve, int n);

struct GhzBlock {
  int offset = 0;
  int n = 0;
  bool operator==(const GhzBlock&) const = default;
};

/// One-sigma bootstrap spreads.
struct GhzUncertainty {
  double population = 0.0;
  double coherence = 0.0;
  double fidelity = 0.0;
};

struct GhzReport {
  GhzBlock block;
  double population = 0.0;
  double coherence = 0.0;
  double phase = 0.0;
  double fidelity = 0.0;  ///< (P + C) / 2
  bool genuine_entanglement = false;  ///< F > 0.5
  double fit_rmse = 0.0;
  std::optional<GhzUncertainty> sigma;
};

GhzReport ghz_report(GhzBlock block, double population, const ParityFit& fit);
GhzReport ghz_report(GhzBlock block, const ProbabilityTable& population_table,
                     const ParityCurve& curve);

/// Counts behind one GHZ block measurement: the population run and every
/// point of the parity scan, all over the block's qubits.
struct GhzCounts {
  std::vector<std::uint64_t> population;
  std::vector<double> gammas;
  std::vector<std::vector<std::uint64_t>> parity;
};

/// Nonparametric bootstrap over shots: each resample redraws every
/// histogram from its empirical distribution, applies `confusion`
/// correction when non-empty and refits. Returns the sample standard
/// deviations of P, C and F.
GhzUncertainty bootstrap_ghz(const GhzCounts& counts, int n, std::span<const Confusion> confusion,
                             int resamples, std::uint64_t seed);

}  // namespace scq
