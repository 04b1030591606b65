#include "scq/probability_table.hpp"

#include <stdexcept>

namespace scq {

std::string bitstring(std::size_t index, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((index >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::size_t bitstring_index(std::string_view bits) {
  if (bits.size() > 63) throw std::invalid_argument("bitstring too long");
  std::size_t index = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      index |= std::size_t{1} << i;
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bitstring must contain only '0' and '1'");
    }
  }
  return index;
}

ProbabilityTable::ProbabilityTable(std::vector<int> measured, Eigen::VectorXd p)
    : qubits(std::move(measured)), probs(std::move(p)) {
  if (qubits.size() > 30 || probs.size() != (Eigen::Index{1} << qubits.size())) {
    throw std::invalid_argument("probability table size does not match measured qubits");
  }
}

ProbabilityTable ProbabilityTable::zeros(std::vector<int> measured) {
  const Eigen::Index dim = Eigen::Index{1} << measured.size();
  return {std::move(measured), Eigen::VectorXd::Zero(dim)};
}

ProbabilityTable ProbabilityTable::from_counts(std::vector<int> measured,
                                               const std::vector<std::uint64_t>& counts) {
  ProbabilityTable t = zeros(std::move(measured));
  if (counts.size() != t.size()) throw std::invalid_argument("count vector size mismatch");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("no shots recorded");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    t.probs(static_cast<Eigen::Index>(i)) = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return t;
}

double ProbabilityTable::at(std::string_view bits) const {
  if (bits.size() != qubits.size()) throw std::invalid_argument("bitstring width mismatch");
  return (*this)[bitstring_index(bits)];
}

}  // namespace scq
