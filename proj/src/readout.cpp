#include "scq/readout.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "scq/device.hpp"

namespace scq {

ProbabilityTable apply_per_qubit(const ProbabilityTable& table,
                                 std::span<const Eigen::Matrix2d> ops) {
  if (ops.size() != table.qubits.size()) {
    throw std::invalid_argument("one 2x2 operator per measured qubit required");
  }
  ProbabilityTable out = table;
  Eigen::VectorXd& p = out.probs;
  const std::size_t dim = out.size();
  for (std::size_t axis = 0; axis < ops.size(); ++axis) {
    const Eigen::Matrix2d& m = ops[axis];
    const std::size_t mask = std::size_t{1} << axis;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & mask) continue;
      const auto i0 = static_cast<Eigen::Index>(i);
      const auto i1 = static_cast<Eigen::Index>(i | mask);
      const double a = p(i0);
      const double b = p(i1);
      p(i0) = m(0, 0) * a + m(0, 1) * b;
      p(i1) = m(1, 0) * a + m(1, 1) * b;
    }
  }
  return out;
}

ProbabilityTable confuse(const ProbabilityTable& actual, std::span<const Confusion> confusion) {
  std::vector<Eigen::Matrix2d> ops;
  ops.reserve(confusion.size());
  for (const Confusion& c : confusion) ops.push_back(c.matrix());
  return apply_per_qubit(actual, ops);
}

ProbabilityTable readout_correct(const ProbabilityTable& raw, std::span<const Confusion> confusion) {
  std::vector<Eigen::Matrix2d> ops;
  ops.reserve(confusion.size());
  for (std::size_t i = 0; i < confusion.size(); ++i) {
    const Confusion& c = confusion[i];
    const double det = c.f0 + c.f1 - 1.0;  // det M
    if (!(det > 0.0)) {
      throw std::domain_error("confusion matrix of qubit " +
                              (i < raw.qubits.size() ? std::to_string(raw.qubits[i]) : std::to_string(i)) +
                              " is not invertible (f0 + f1 <= 1)");
    }
    Eigen::Matrix2d inv;
    inv << c.f1, -(1.0 - c.f1), -(1.0 - c.f0), c.f0;
    ops.push_back(inv / det);
  }
  return apply_per_qubit(raw, ops);
}

ProbabilityTable readout_correct(const ProbabilityTable& raw, const DeviceSpec& device) {
  std::vector<Confusion> confusion;
  confusion.reserve(raw.qubits.size());
  for (int q : raw.qubits) {
    if (q < 0 || q >= device.num_qubits()) {
      throw std::invalid_argument("qubit " + std::to_string(q) + " has no readout calibration");
    }
    const QubitSpec& spec = device.qubits[static_cast<std::size_t>(q)];
    confusion.push_back({spec.f0.value(), spec.f1.value()});
  }
  return readout_correct(raw, confusion);
}

ProbabilityTable project_to_simplex(const ProbabilityTable& table) {
  // Sort-and-threshold projection (Held, Wolfe & Crowder).
  std::vector<double> sorted(table.probs.data(), table.probs.data() + table.probs.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  ProbabilityTable out = table;
  out.probs = (table.probs.array() - theta).max(0.0).matrix();
  return out;
}

}  // namespace scq
