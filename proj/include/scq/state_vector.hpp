#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "scq/gates.hpp"

namespace scq {

// Amplitude layout: bit q of the basis index is the state of qubit q
// (qubit 0 is the least significant bit).

namespace kernels {

template <typename Scalar>
void apply_1q(std::span<std::complex<Scalar>> amps, int q, const Matrix2c<Scalar>& u) {
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = amps.size();
  const auto u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (std::size_t hi = 0; hi < dim; hi += 2 * mask) {
    for (std::size_t i = hi; i < hi + mask; ++i) {
      const auto a0 = amps[i];
      const auto a1 = amps[i | mask];
      amps[i] = u00 * a0 + u01 * a1;
      amps[i | mask] = u10 * a0 + u11 * a1;
    }
  }
}

template <typename Scalar>
void apply_2q(std::span<std::complex<Scalar>> amps, int q0, int q1, const Matrix4c<Scalar>& u) {
  const std::size_t m0 = std::size_t{1} << q0;
  const std::size_t m1 = std::size_t{1} << q1;
  const std::size_t dim = amps.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (m0 | m1)) continue;
    const std::size_t idx[4] = {i, i | m0, i | m1, i | m0 | m1};
    std::complex<Scalar> in[4];
    for (int k = 0; k < 4; ++k) in[k] = amps[idx[k]];
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = u(r, 0) * in[0] + u(r, 1) * in[1] + u(r, 2) * in[2] + u(r, 3) * in[3];
    }
  }
}

/// Pauli 1 = X, 2 = Y, 3 = Z on qubit q.
template <typename Scalar>
void apply_pauli(std::span<std::complex<Scalar>> amps, int q, int pauli) {
  using C = std::complex<Scalar>;
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = amps.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    C& a0 = amps[i];
    C& a1 = amps[i | mask];
    switch (pauli) {
      case 1: std::swap(a0, a1); break;
      case 2: {
        const C t = a0;
        a0 = C(0, -1) * a1;
        a1 = C(0, 1) * t;
        break;
      }
      case 3: a1 = -a1; break;
      default: break;
    }
  }
}

template <typename Scalar>
void apply_cz(std::span<std::complex<Scalar>> amps, int q0, int q1) {
  const std::size_t both = (std::size_t{1} << q0) | (std::size_t{1} << q1);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & both) == both) amps[i] = -amps[i];
  }
}

/// Dispatches a concrete (non-measure) gate onto an amplitude vector.
template <typename Scalar>
void apply_gate(std::span<std::complex<Scalar>> amps, const Gate& g) {
  switch (g.kind) {
    case GateKind::Measure: return;
    case GateKind::X: return apply_pauli<Scalar>(amps, g.qubits[0], 1);
    case GateKind::Y: return apply_pauli<Scalar>(amps, g.qubits[0], 2);
    case GateKind::Z: return apply_pauli<Scalar>(amps, g.qubits[0], 3);
    case GateKind::CZ: return apply_cz<Scalar>(amps, g.qubits[0], g.qubits[1]);
    case GateKind::CNOT:
      return apply_2q<Scalar>(amps, g.qubits[0], g.qubits[1], two_qubit_unitary<Scalar>(g.kind));
    default:
      return apply_1q<Scalar>(amps, g.qubits[0],
                              single_qubit_unitary<Scalar>(g.kind, static_cast<Scalar>(literal_angle(g))));
  }
}

}  // namespace kernels

/// Dense pure state of `n` qubits, initialised to |0…0⟩.
template <typename Scalar = double>
class BasicStateVector {
public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  explicit BasicStateVector(int num_qubits)
      : n_(num_qubits), amps_(Vector::Zero(std::size_t{1} << num_qubits)) {
    if (num_qubits < 0 || num_qubits > 30) throw std::invalid_argument("unsupported qubit count");
    amps_(0) = 1;
  }

  int num_qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const noexcept { return amps_; }
  std::span<Complex> span() noexcept { return {amps_.data(), dimension()}; }

  BasicStateVector& apply(const Gate& g) {
    kernels::apply_gate<Scalar>(span(), g);
    return *this;
  }
  BasicStateVector& apply(int q, const Matrix2c<Scalar>& u) {
    kernels::apply_1q<Scalar>(span(), q, u);
    return *this;
  }
  BasicStateVector& apply(int q0, int q1, const Matrix4c<Scalar>& u) {
    kernels::apply_2q<Scalar>(span(), q0, q1, u);
    return *this;
  }
  BasicStateVector& apply_pauli(int q, int pauli) {
    kernels::apply_pauli<Scalar>(span(), q, pauli);
    return *this;
  }

  Scalar norm_squared() const { return amps_.squaredNorm(); }

  /// |amplitude|² for every basis state.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probabilities() const { return amps_.cwiseAbs2(); }

private:
  int n_;
  Vector amps_;
};

using StateVector = BasicStateVector<double>;

/// Sums a full basis distribution down to the given qubits. Bit i of the
/// result index is the state of qubits[i].
template <typename Derived>
Eigen::VectorXd marginalize(const Eigen::MatrixBase<Derived>& full, std::span<const int> qubits) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index{1} << qubits.size());
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      idx |= ((static_cast<std::size_t>(i) >> qubits[k]) & 1u) << k;
    }
    out(static_cast<Eigen::Index>(idx)) += full(i);
  }
  return out;
}

}  // namespace scq
