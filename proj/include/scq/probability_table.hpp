#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace scq {

/// Bitstring of `index` over `width` measured qubits: character i is bit i,
/// so strings read qubit-ascending left to right.
std::string bitstring(std::size_t index, int width);

/// Inverse of `bitstring`; throws std::invalid_argument on bad characters.
std::size_t bitstring_index(std::string_view bits);

/// Dense distribution over the outcomes of the measured qubits. Entry i
/// holds the probability of the outcome whose bit k is the state of
/// qubits[k].
struct ProbabilityTable {
  std::vector<int> qubits;
  Eigen::VectorXd probs;

  ProbabilityTable() = default;
  ProbabilityTable(std::vector<int> measured, Eigen::VectorXd p);

  /// All-zero table over `measured`.
  static ProbabilityTable zeros(std::vector<int> measured);
  /// Normalised histogram.
  static ProbabilityTable from_counts(std::vector<int> measured,
                                      const std::vector<std::uint64_t>& counts);

  int width() const noexcept { return static_cast<int>(qubits.size()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(probs.size()); }
  double operator[](std::size_t i) const { return probs(static_cast<Eigen::Index>(i)); }
  double at(std::string_view bits) const;
  double sum() const { return probs.sum(); }
};

}  // namespace scq
