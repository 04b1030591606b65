#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scq/noise.hpp"
#include "scq/probability_table.hpp"

namespace scq {

struct DeviceSpec;

/// Applies one 2×2 matrix per table axis: ops[i] acts on the bit of
/// table.qubits[i]. Equivalent to multiplying by ⊗ ops without forming the
/// 2ᵐ×2ᵐ product.
ProbabilityTable apply_per_qubit(const ProbabilityTable& table,
                                 std::span<const Eigen::Matrix2d> ops);

/// Forward readout model: observed = (⊗ M_j) · actual.
ProbabilityTable confuse(const ProbabilityTable& actual, std::span<const Confusion> confusion);

/// Inverts the readout model. The result may hold small negative entries;
/// it sums to the input's total. Throws std::domain_error when some
/// f0 + f1 ≤ 1.
ProbabilityTable readout_correct(const ProbabilityTable& raw, std::span<const Confusion> confusion);

/// Uses the device confusion of each qubit in raw.qubits.
ProbabilityTable readout_correct(const ProbabilityTable& raw, const DeviceSpec& device);

/// Euclidean projection onto the probability simplex.
ProbabilityTable project_to_simplex(const ProbabilityTable& table);

}  // namespace scq
