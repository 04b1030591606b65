#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scq/decimal.hpp"

namespace scq {

/// Calibrated parameters of one transmon on the chain. Frequencies in GHz,
/// coherence times in microseconds, fidelities as probabilities.
struct QubitSpec {
  int index = 0;
  Decimal omega_sweet;
  Decimal omega_idle;
  Decimal omega_readout;
  Decimal anharmonicity;
  Decimal t1;
  Decimal t2_star;
  Decimal f0;  ///< P(read 0 | prepared 0)
  Decimal f1;  ///< P(read 1 | prepared 1)
  Decimal x_gate_fidelity;
  Decimal x_half_gate_fidelity;

  bool operator==(const QubitSpec&) const = default;
};

/// Coupling element between chain neighbours (j, j+1).
struct CouplerSpec {
  std::pair<int, int> pair{0, 1};
  Decimal g;                   ///< MHz
  Decimal omega_interact_fwd;  ///< GHz, interaction point of the lower qubit
  Decimal omega_interact_rev;  ///< GHz, interaction point of the upper qubit
  Decimal cz_duration;         ///< ns
  std::optional<Decimal> qpt_initial_state_fidelity;
  std::optional<Decimal> qpt_final_state_fidelity;
  Decimal cz_process_fidelity;

  bool operator==(const CouplerSpec&) const = default;
};

/// Z-line crosstalk. Entry (i, j) is the bias qubit j senses per unit bias
/// applied on qubit i's line.
struct CrosstalkMatrix {
  Eigen::MatrixXd m;
  std::vector<std::string> records;  ///< row-major decimal text of `m`

  int size() const noexcept { return static_cast<int>(m.rows()); }
  bool operator==(const CrosstalkMatrix& o) const { return records == o.records; }
};

struct DeviceSpec {
  std::string name;
  std::string description;
  std::vector<QubitSpec> qubits;
  std::vector<CouplerSpec> couplers;  ///< couplers[j] joins qubits j and j+1
  CrosstalkMatrix crosstalk;
  Decimal single_gate_duration;  ///< ns
  Decimal avg_single_gate_fidelity;
  Decimal avg_cz_fidelity;

  int num_qubits() const noexcept { return static_cast<int>(qubits.size()); }

  /// Coupler joining chain neighbours a and b (either order); nullptr if the
  /// pair is not adjacent on this device.
  const CouplerSpec* coupler(int a, int b) const noexcept;

  bool operator==(const DeviceSpec&) const = default;
};

/// Load failure; `path()` names the offending document field.
class DeviceSpecError : public std::runtime_error {
public:
  DeviceSpecError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

DeviceSpec load_device_spec(std::string_view document);
DeviceSpec load_device_spec_file(const std::filesystem::path& path);

/// The bundled calibration of the 10-qubit chain.
const DeviceSpec& default_device();
std::string_view default_device_document();

std::string serialize_device_spec(const DeviceSpec& device);

/// Bias to apply on each line so that the qubits sense `z_actual`:
/// solves M^z · z_applied = z_actual with partial-pivot LU.
Eigen::VectorXd crosstalk_compensate(const CrosstalkMatrix& ct,
                                     const Eigen::Ref<const Eigen::VectorXd>& z_actual);

}  // namespace scq
