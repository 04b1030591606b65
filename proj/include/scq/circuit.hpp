#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scq {

struct DeviceSpec;

/// A fixed rotation angle in radians.
struct Literal {
  double radians = 0.0;
  bool operator==(const Literal&) const = default;
};

/// An angle bound to the circuit's scan variable: multiplier × γ_k.
struct Scanned {
  double multiplier = 1.0;
  bool operator==(const Scanned&) const = default;
};

using ParamExpr = std::variant<Literal, Scanned>;

enum class GateKind { H, X, Y, Z, RX, RY, RZ, CNOT, CZ, Measure };

std::string_view mnemonic(GateKind kind) noexcept;
bool is_rotation(GateKind kind) noexcept;
bool is_two_qubit(GateKind kind) noexcept;

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;  ///< (control, target) for CNOT/CZ
  std::optional<ParamExpr> param;

  bool operator==(const Gate&) const = default;

  static Gate single(GateKind kind, int q) { return {kind, {q}, std::nullopt}; }
  static Gate rotation(GateKind kind, int q, ParamExpr p) { return {kind, {q}, p}; }
  static Gate two(GateKind kind, int control, int target) {
    return {kind, {control, target}, std::nullopt};
  }
  static Gate measure(std::vector<int> qubits) {
    return {GateKind::Measure, std::move(qubits), std::nullopt};
  }

  bool is_scanned() const noexcept {
    return param && std::holds_alternative<Scanned>(*param);
  }
};

/// γ_k = linspace(start, stop, count), endpoints inclusive.
struct ScanSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double at(int k) const;
  std::vector<double> points() const;

  bool operator==(const ScanSpec&) const = default;
};

/// One structural problem found in a circuit. `gate_index` is empty for
/// circuit-level problems.
struct Violation {
  std::optional<std::size_t> gate_index;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

/// Gate-level program on `n` qubits with at most one trailing measurement
/// and an optional scan variable.
///
/// The fluent builders check operand ranges and throw std::invalid_argument;
/// `push` appends without checks so that malformed circuits can still be
/// represented and reported by `validate`.
class Circuit {
public:
  explicit Circuit(int num_qubits = 0) : n_(num_qubits) {}

  int num_qubits() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::optional<ScanSpec>& scan() const noexcept { return scan_; }

  /// Qubits of the trailing MEASURE, or empty.
  std::vector<int> measured() const;
  bool has_scanned_params() const noexcept;
  /// Number of concrete circuits this program stands for.
  int instance_count() const noexcept { return scan_ ? scan_->count : 1; }

  Circuit& push(Gate g) {
    gates_.push_back(std::move(g));
    return *this;
  }
  Circuit& set_scan(std::optional<ScanSpec> scan) {
    scan_ = scan;
    return *this;
  }

  Circuit& h(int q) { return add_single(GateKind::H, q); }
  Circuit& x(int q) { return add_single(GateKind::X, q); }
  Circuit& y(int q) { return add_single(GateKind::Y, q); }
  Circuit& z(int q) { return add_single(GateKind::Z, q); }
  Circuit& rx(int q, ParamExpr p) { return add_rotation(GateKind::RX, q, p); }
  Circuit& ry(int q, ParamExpr p) { return add_rotation(GateKind::RY, q, p); }
  Circuit& rz(int q, ParamExpr p) { return add_rotation(GateKind::RZ, q, p); }
  Circuit& rx(int q, double radians) { return rx(q, Literal{radians}); }
  Circuit& ry(int q, double radians) { return ry(q, Literal{radians}); }
  Circuit& rz(int q, double radians) { return rz(q, Literal{radians}); }
  Circuit& cnot(int control, int target) { return add_two(GateKind::CNOT, control, target); }
  Circuit& cz(int control, int target) { return add_two(GateKind::CZ, control, target); }
  Circuit& measure(std::vector<int> qubits);

  /// Device-independent invariants: operand ranges and distinctness,
  /// parameter presence, MEASURE placement, scan presence.
  ValidationReport check() const;

  bool operator==(const Circuit&) const = default;

private:
  Circuit& add_single(GateKind kind, int q);
  Circuit& add_rotation(GateKind kind, int q, ParamExpr p);
  Circuit& add_two(GateKind kind, int control, int target);
  void require_qubit(int q) const;

  int n_ = 0;
  std::vector<Gate> gates_;
  std::optional<ScanSpec> scan_;
};

/// Gates grouped into parallel layers.
struct LayeredCircuit {
  int num_qubits = 0;
  std::vector<std::vector<Gate>> layers;

  std::size_t depth() const noexcept { return layers.size(); }
  std::vector<Gate> flatten() const;
};

/// Structural checks plus device constraints: width fits and every
/// two-qubit gate joins chain neighbours.
ValidationReport validate(const Circuit& circuit, const DeviceSpec& device);

/// Rewrites CNOT and H into the native set {RX, RY, RZ, CZ}:
/// CNOT(c,t) -> RY(-π/2)@t, CZ(c,t), RY(π/2)@t and H -> RZ(π), RY(π/2).
Circuit decompose_cnot(const Circuit& circuit);

/// Greedy earliest-layer packing. A gate goes into the first layer after the
/// last one touching its qubits, bumped further while that layer holds a
/// two-qubit gate on a neighbouring site (two-qubit gates only).
LayeredCircuit schedule(const Circuit& circuit);

/// GHZ preparation on the block [offset, offset + n) of a chain with
/// `width` qubits (0 means offset + n): H on the block's qubit n/2, CNOT
/// fan-out towards both ends, then MEASURE over the block.
Circuit build_ghz(int n, int offset = 0, int width = 0);

/// Inserts RZ(-γ) on every measured qubit followed by RX(π/2) before the
/// trailing MEASURE and attaches `scan`. Requires a trailing MEASURE.
Circuit append_parity_stage(const Circuit& circuit, const ScanSpec& scan);

/// The scan used throughout for parity oscillations: linspace(-π/2, π/2, 51).
ScanSpec default_parity_scan();

}  // namespace scq
