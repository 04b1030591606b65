#pragma once

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "scq/circuit.hpp"
#include "scq/gates.hpp"
#include "scq/probability_table.hpp"

namespace scq {

using Matrix16c = Eigen::Matrix<std::complex<double>, 16, 16>;

/// Two-qubit process in the χ representation,
/// ε(ρ) = Σ_nm χ_nm E_n ρ E_m†, with E_{4i+j} = σ_i ⊗ σ_j drawn from
/// {I, X, −iY, Z}; σ_i acts on the pair's lower-index qubit.
struct ProcessMatrix {
  Matrix16c chi = Matrix16c::Zero();
};

/// Operator basis element E_n in the local two-qubit index convention.
Matrix4c<double> process_basis(int n);

/// χ of the unitary channel ρ → U ρ U†.
ProcessMatrix chi_from_unitary(const Matrix4c<double>& u);

/// Re Tr(χ_exp · χ_ideal). `imaginary`, when given, receives Im of the trace.
double process_fidelity(const ProcessMatrix& experimental, const ProcessMatrix& ideal,
                        double* imaginary = nullptr);

/// Runs a concrete circuit and returns the (readout-corrected) distribution
/// over its measured qubits in ascending order.
using CircuitExecutor = std::function<ProbabilityTable(const Circuit&)>;

/// The 144 state-preparation/measurement circuits of a two-qubit process
/// tomography run on chain neighbours `pair` of a `width`-qubit register.
struct QptDesign {
  int width = 2;
  std::pair<int, int> pair{0, 1};
  GateKind gate = GateKind::CZ;

  /// Circuit for input state `prep` (0..15) and measurement setting
  /// `setting` (0..8).
  Circuit circuit(int prep, int setting) const;
};

/// Full QPT: executes every design circuit, reconstructs each output state by
/// linear inversion over the 9 Pauli settings, inverts the process map for χ,
/// then makes it Hermitian with unit trace.
ProcessMatrix qpt_two_qubit(const CircuitExecutor& executor, const QptDesign& design);

}  // namespace scq
