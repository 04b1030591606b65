#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scq/circuit.hpp"
#include "scq/noise.hpp"
#include "scq/probability_table.hpp"

namespace scq {

inline constexpr int kMaxStateQubits = 14;
inline constexpr int kMaxDensityQubits = 6;

/// Binds the scan variable: every Scanned(m) becomes Literal(m · γ_k) and the
/// scan declaration is dropped. A circuit without a scan accepts k = 0 only.
Circuit instantiate(const Circuit& circuit, int k);

/// Measured qubits in ascending order: the axis order of every table the
/// simulator returns.
std::vector<int> measured_ascending(const Circuit& circuit);

/// Noiseless marginal over the measured qubits of a concrete circuit.
ProbabilityTable run_exact(const Circuit& circuit);

/// Exact noisy marginal: density-matrix evolution through the gates and the
/// depolarizing channels of `noise`, followed by readout confusion.
ProbabilityTable run_density_exact(const Circuit& circuit, const NoiseModel& noise);

struct ScanPoint {
  int index = 0;
  double gamma = 0.0;
  std::vector<std::uint64_t> counts;  ///< dense, indexed like ProbabilityTable
  ProbabilityTable probs_raw;
  std::optional<ProbabilityTable> probs_exact;  ///< noiseless runs only
};

struct RunResult {
  std::vector<int> measured;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  bool scanned = false;
  std::vector<ScanPoint> points;
};

/// Sampled execution of every scan point.
///
/// Point k uses the stream seed mix_seed(seed, k) and shot s of that point
/// draws from SplitMix64(mix_seed(seed_k, s)) in a fixed order: one uniform
/// per noisy gate (plus one Pauli choice on an error), one uniform for the
/// outcome, one uniform per measured qubit with imperfect readout. Results
/// therefore depend only on the arguments.
RunResult run_shots(const Circuit& circuit, std::uint64_t shots, const NoiseModel& noise,
                    std::uint64_t seed);

}  // namespace scq
