#include "scq/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "scq/device.hpp"

namespace scq {

std::string_view mnemonic(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::CNOT: return "cnot";
    case GateKind::CZ: return "cz";
    case GateKind::Measure: return "measure";
  }
  return "?";
}

bool is_rotation(GateKind kind) noexcept {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

bool is_two_qubit(GateKind kind) noexcept {
  return kind == GateKind::CNOT || kind == GateKind::CZ;
}

double ScanSpec::at(int k) const {
  if (k < 0 || k >= count) {
    throw std::out_of_range("scan index " + std::to_string(k) + " outside [0, " +
                            std::to_string(count) + ")");
  }
  if (k == 0) return start;
  if (k == count - 1) return stop;
  // Weighted form keeps symmetric scans exactly symmetric (midpoint is 0).
  const double span = count - 1;
  return (start * (span - k) + stop * k) / span;
}

std::vector<double> ScanSpec::points() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) out.push_back(at(k));
  return out;
}

ScanSpec default_parity_scan() {
  return {-std::numbers::pi / 2, std::numbers::pi / 2, 51};
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << '\n';
    const auto& v = violations[i];
    if (v.gate_index) os << "gate " << *v.gate_index << ": ";
    os << v.message;
  }
  return os.str();
}

std::vector<int> Circuit::measured() const {
  if (!gates_.empty() && gates_.back().kind == GateKind::Measure) return gates_.back().qubits;
  return {};
}

bool Circuit::has_scanned_params() const noexcept {
  return std::any_of(gates_.begin(), gates_.end(), [](const Gate& g) { return g.is_scanned(); });
}

void Circuit::require_qubit(int q) const {
  if (q < 0 || q >= n_) {
    throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
  }
}

Circuit& Circuit::add_single(GateKind kind, int q) {
  require_qubit(q);
  return push(Gate::single(kind, q));
}

Circuit& Circuit::add_rotation(GateKind kind, int q, ParamExpr p) {
  require_qubit(q);
  return push(Gate::rotation(kind, q, p));
}

Circuit& Circuit::add_two(GateKind kind, int control, int target) {
  require_qubit(control);
  require_qubit(target);
  if (control == target) throw std::invalid_argument("two-qubit gate operands must differ");
  return push(Gate::two(kind, control, target));
}

Circuit& Circuit::measure(std::vector<int> qubits) {
  if (qubits.empty()) throw std::invalid_argument("measure needs at least one qubit");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    require_qubit(qubits[i]);
    if (std::find(qubits.begin(), qubits.begin() + static_cast<std::ptrdiff_t>(i), qubits[i]) !=
        qubits.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw std::invalid_argument("qubit " + std::to_string(qubits[i]) + " measured twice");
    }
  }
  return push(Gate::measure(std::move(qubits)));
}

ValidationReport Circuit::check() const {
  ValidationReport report;
  auto fail = [&](std::optional<std::size_t> i, std::string msg) {
    report.violations.push_back({i, std::move(msg)});
  };

  if (n_ < 1) fail(std::nullopt, "circuit must have at least one qubit");
  if (scan_) {
    if (scan_->count < 1) fail(std::nullopt, "scan count must be positive");
    if (!(scan_->start <= scan_->stop)) fail(std::nullopt, "scan start must not exceed stop");
    if (!std::isfinite(scan_->start) || !std::isfinite(scan_->stop))
      fail(std::nullopt, "scan bounds must be finite");
  }

  std::optional<std::size_t> measure_at;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    if (measure_at) {
      fail(i, g.kind == GateKind::Measure ? "multiple measure statements" : "gate after measure");
    }
    for (int q : g.qubits) {
      if (q < 0 || q >= n_) fail(i, "qubit index " + std::to_string(q) + " out of range");
    }
    auto sorted = g.qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(i, "duplicate qubit operand");

    const std::size_t arity = g.qubits.size();
    if (g.kind == GateKind::Measure) {
      if (arity < 1) fail(i, "measure needs at least one qubit");
      measure_at = i;
    } else if (is_two_qubit(g.kind)) {
      if (arity != 2) fail(i, std::string(mnemonic(g.kind)) + " takes exactly two qubits");
    } else if (arity != 1) {
      fail(i, std::string(mnemonic(g.kind)) + " takes exactly one qubit");
    }

    if (is_rotation(g.kind)) {
      if (!g.param) {
        fail(i, "rotation without an angle");
      } else if (const auto* lit = std::get_if<Literal>(&*g.param)) {
        if (!std::isfinite(lit->radians)) fail(i, "angle must be finite");
      } else {
        const double m = std::get<Scanned>(*g.param).multiplier;
        if (!std::isfinite(m) || m == 0.0) fail(i, "scan multiplier must be finite and nonzero");
        if (!scan_) fail(i, "scanned parameter without a scan declaration");
      }
    } else if (g.param) {
      fail(i, std::string(mnemonic(g.kind)) + " takes no angle");
    }
  }
  return report;
}

std::vector<Gate> LayeredCircuit::flatten() const {
  std::vector<Gate> out;
  for (const auto& layer : layers) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

ValidationReport validate(const Circuit& circuit, const DeviceSpec& device) {
  ValidationReport report = circuit.check();
  if (circuit.num_qubits() > device.num_qubits()) {
    report.violations.push_back(
        {std::nullopt, "circuit width " + std::to_string(circuit.num_qubits()) +
                           " exceeds device qubit count " + std::to_string(device.num_qubits())});
  }
  const auto& gates = circuit.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (!is_two_qubit(g.kind) || g.qubits.size() != 2) continue;
    const int a = g.qubits[0];
    const int b = g.qubits[1];
    if (a == b) continue;
    if (!device.coupler(a, b)) {
      report.violations.push_back(
          {i, "non-adjacent pair (" + std::to_string(a) + "," + std::to_string(b) + ")"});
    }
  }
  return report;
}

Circuit decompose_cnot(const Circuit& circuit) {
  constexpr double half_pi = std::numbers::pi / 2;
  Circuit out(circuit.num_qubits());
  out.set_scan(circuit.scan());
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::CNOT) {
      const int c = g.qubits.at(0);
      const int t = g.qubits.at(1);
      out.push(Gate::rotation(GateKind::RY, t, Literal{-half_pi}));
      out.push(Gate::two(GateKind::CZ, c, t));
      out.push(Gate::rotation(GateKind::RY, t, Literal{half_pi}));
    } else if (g.kind == GateKind::H) {
      const int q = g.qubits.at(0);
      out.push(Gate::rotation(GateKind::RZ, q, Literal{std::numbers::pi}));
      out.push(Gate::rotation(GateKind::RY, q, Literal{half_pi}));
    } else {
      out.push(g);
    }
  }
  return out;
}

LayeredCircuit schedule(const Circuit& circuit) {
  LayeredCircuit out;
  out.num_qubits = circuit.num_qubits();
  // Per-layer bookkeeping: sites touched by two-qubit gates.
  std::vector<std::vector<int>> two_qubit_sites;
  std::vector<int> next_free(static_cast<std::size_t>(std::max(circuit.num_qubits(), 0)), 0);

  auto conflicts = [&](std::size_t layer, const Gate& g) {
    if (!is_two_qubit(g.kind) || layer >= two_qubit_sites.size()) return false;
    for (int s : two_qubit_sites[layer]) {
      for (int q : g.qubits) {
        if (std::abs(s - q) <= 1) return true;
      }
    }
    return false;
  };

  for (const Gate& g : circuit.gates()) {
    std::size_t layer = 0;
    for (int q : g.qubits) layer = std::max(layer, static_cast<std::size_t>(next_free.at(q)));
    while (conflicts(layer, g)) ++layer;
    if (layer >= out.layers.size()) {
      out.layers.resize(layer + 1);
      two_qubit_sites.resize(layer + 1);
    }
    out.layers[layer].push_back(g);
    if (is_two_qubit(g.kind)) {
      two_qubit_sites[layer].insert(two_qubit_sites[layer].end(), g.qubits.begin(), g.qubits.end());
    }
    for (int q : g.qubits) next_free.at(q) = static_cast<int>(layer) + 1;
  }
  return out;
}

Circuit build_ghz(int n, int offset, int width) {
  if (width == 0) width = offset + n;
  if (n < 1 || offset < 0 || offset + n > width) {
    throw std::invalid_argument("GHZ block [" + std::to_string(offset) + ", " +
                                std::to_string(offset + n) + ") does not fit a chain of " +
                                std::to_string(width) + " qubits");
  }
  Circuit c(width);
  const int ini = n / 2;
  c.h(offset + ini);
  for (int i = ini; i > 0; --i) c.cnot(offset + i, offset + i - 1);
  for (int i = ini; i < n - 1; ++i) c.cnot(offset + i, offset + i + 1);
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) block[static_cast<std::size_t>(i)] = offset + i;
  c.measure(std::move(block));
  return c;
}

Circuit append_parity_stage(const Circuit& circuit, const ScanSpec& scan) {
  const auto& gates = circuit.gates();
  if (gates.empty() || gates.back().kind != GateKind::Measure) {
    throw std::invalid_argument("append_parity_stage: circuit must end with a measure");
  }
  Circuit out(circuit.num_qubits());
  out.set_scan(scan);
  for (std::size_t i = 0; i + 1 < gates.size(); ++i) out.push(gates[i]);
  const auto& measured = gates.back().qubits;
  for (int q : measured) out.push(Gate::rotation(GateKind::RZ, q, Scanned{-1.0}));
  for (int q : measured) out.push(Gate::rotation(GateKind::RX, q, Literal{std::numbers::pi / 2}));
  out.push(gates.back());
  return out;
}

}  // namespace scq
