#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scq {

struct DeviceSpec;

/// Readout assignment fidelities of one qubit.
struct Confusion {
  double f0 = 1.0;  ///< P(read 0 | 0)
  double f1 = 1.0;  ///< P(read 1 | 1)

  /// M = [[f0, 1 - f1], [1 - f0, f1]]; column = prepared, row = read.
  Eigen::Matrix2d matrix() const;
  bool is_identity() const noexcept { return f0 == 1.0 && f1 == 1.0; }
  bool operator==(const Confusion&) const = default;
};

enum class NoiseMode { Ideal, Calibrated };

/// Pauli-stochastic gate errors plus per-qubit readout confusion.
///
/// p1[q] and p2[j] are the probabilities of inserting a uniformly random
/// non-identity Pauli after a gate on qubit q, resp. after a CZ on the pair
/// (j, j+1). The equivalent depolarizing channel is
/// ρ → (1 − p) ρ + p/(d² − 1) Σ_{P ≠ I} P ρ P.
struct NoiseModel {
  NoiseMode mode = NoiseMode::Ideal;
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<Confusion> readout;

  static NoiseModel ideal(int num_qubits);

  /// Channels matched to the device calibration: a single-qubit channel whose
  /// average gate fidelity equals the X-gate fidelity and a two-qubit channel
  /// whose process fidelity equals the CZ process fidelity.
  static NoiseModel calibrated(const DeviceSpec& device);

  /// No gate errors, device readout confusion only.
  static NoiseModel readout_only(const DeviceSpec& device);

  int num_qubits() const noexcept { return static_cast<int>(p1.size()); }

  /// Error probability of a two-qubit gate on chain neighbours (a, b);
  /// throws std::invalid_argument for non-adjacent pairs.
  double pair_error(int a, int b) const;

  /// Model over the listed qubits only, relabelled 0..k-1; listed qubits
  /// must be consecutive chain sites for the pair rates to carry over.
  NoiseModel restrict(std::span<const int> qubits) const;

  /// Readout confusions of `qubits`, in order.
  std::vector<Confusion> confusions(std::span<const int> qubits) const;

  /// Throws std::invalid_argument unless sizes agree and rates lie in [0, 1].
  void check() const;
};

}  // namespace scq
