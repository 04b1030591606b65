#include "scq/noise.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "scq/device.hpp"

namespace scq {

Eigen::Matrix2d Confusion::matrix() const {
  Eigen::Matrix2d m;
  m << f0, 1.0 - f1, 1.0 - f0, f1;
  return m;
}

NoiseModel NoiseModel::ideal(int num_qubits) {
  if (num_qubits < 0) throw std::invalid_argument("negative qubit count");
  NoiseModel m;
  m.mode = NoiseMode::Ideal;
  m.p1.assign(static_cast<std::size_t>(num_qubits), 0.0);
  m.p2.assign(static_cast<std::size_t>(num_qubits > 0 ? num_qubits - 1 : 0), 0.0);
  m.readout.assign(static_cast<std::size_t>(num_qubits), Confusion{});
  return m;
}

NoiseModel NoiseModel::readout_only(const DeviceSpec& device) {
  NoiseModel m = ideal(device.num_qubits());
  m.mode = NoiseMode::Calibrated;
  for (const QubitSpec& q : device.qubits) {
    m.readout[static_cast<std::size_t>(q.index)] = {q.f0.value(), q.f1.value()};
  }
  return m;
}

NoiseModel NoiseModel::calibrated(const DeviceSpec& device) {
  NoiseModel m = readout_only(device);
  // Depolarizing λ with average gate fidelity F has λ = 2(1 - F); the
  // non-identity insertion probability is 3λ/4.
  for (const QubitSpec& q : device.qubits) {
    m.p1[static_cast<std::size_t>(q.index)] = 1.5 * (1.0 - q.x_gate_fidelity.value());
  }
  // Process fidelity of the insertion channel is 1 - p.
  for (const CouplerSpec& c : device.couplers) {
    m.p2[static_cast<std::size_t>(c.pair.first)] = 1.0 - c.cz_process_fidelity.value();
  }
  m.check();
  return m;
}

double NoiseModel::pair_error(int a, int b) const {
  if (std::abs(a - b) != 1 || a < 0 || b < 0) {
    throw std::invalid_argument("non-adjacent pair (" + std::to_string(a) + "," +
                                std::to_string(b) + ")");
  }
  const auto j = static_cast<std::size_t>(std::min(a, b));
  if (j >= p2.size()) throw std::invalid_argument("pair outside noise model");
  return p2[j];
}

NoiseModel NoiseModel::restrict(std::span<const int> qubits) const {
  NoiseModel out = ideal(static_cast<int>(qubits.size()));
  out.mode = mode;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const int q = qubits[i];
    if (q < 0 || q >= num_qubits()) throw std::invalid_argument("qubit outside noise model");
    out.p1[i] = p1[static_cast<std::size_t>(q)];
    out.readout[i] = readout[static_cast<std::size_t>(q)];
    if (i + 1 < qubits.size() && std::abs(qubits[i + 1] - q) == 1) {
      out.p2[i] = pair_error(q, qubits[i + 1]);
    }
  }
  return out;
}

std::vector<Confusion> NoiseModel::confusions(std::span<const int> qubits) const {
  std::vector<Confusion> out;
  out.reserve(qubits.size());
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits()) throw std::invalid_argument("qubit outside noise model");
    out.push_back(readout[static_cast<std::size_t>(q)]);
  }
  return out;
}

void NoiseModel::check() const {
  const std::size_t n = p1.size();
  if (readout.size() != n || p2.size() != (n > 0 ? n - 1 : 0)) {
    throw std::invalid_argument("noise model sizes disagree");
  }
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  for (double p : p1)
    if (!in_unit(p)) throw std::invalid_argument("single-qubit error rate outside [0, 1]");
  for (double p : p2)
    if (!in_unit(p)) throw std::invalid_argument("two-qubit error rate outside [0, 1]");
  for (const Confusion& c : readout)
    if (!in_unit(c.f0) || !in_unit(c.f1)) throw std::invalid_argument("readout fidelity outside [0, 1]");
}

}  // namespace scq
