#pragma once

#include <complex>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "scq/state_vector.hpp"

namespace scq {

/// Dense mixed state of `n` qubits with the same index layout as
/// BasicStateVector. Meant for small widths (4ⁿ storage).
template <typename Scalar = double>
class BasicDensityMatrix {
public:
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  explicit BasicDensityMatrix(int num_qubits) : n_(num_qubits) {
    if (num_qubits < 0 || num_qubits > 12) throw std::invalid_argument("unsupported qubit count");
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    rho_ = Matrix::Zero(dim, dim);
    rho_(0, 0) = 1;
  }

  int num_qubits() const noexcept { return n_; }
  const Matrix& matrix() const noexcept { return rho_; }

  /// ρ → U ρ U† for a concrete gate.
  BasicDensityMatrix& apply(const Gate& g) {
    if (g.kind == GateKind::Measure) return *this;
    conjugate([&](std::span<Complex> col) { kernels::apply_gate<Scalar>(col, g); });
    return *this;
  }

  /// ρ → (1 − p) ρ + p/3 Σ_{P ∈ {X,Y,Z}} P ρ P on qubit q.
  BasicDensityMatrix& depolarize(int q, Scalar p) {
    if (p == 0) return *this;
    Matrix acc = Matrix::Zero(rho_.rows(), rho_.cols());
    for (int k = 1; k < 4; ++k) {
      Matrix term = rho_;
      conjugate(term, [&](std::span<Complex> col) { kernels::apply_pauli<Scalar>(col, q, k); });
      acc += term;
    }
    rho_ = (1 - p) * rho_ + (p / 3) * acc;
    return *this;
  }

  /// Two-qubit analogue over the 15 non-identity Pauli pairs.
  BasicDensityMatrix& depolarize(int q0, int q1, Scalar p) {
    if (p == 0) return *this;
    Matrix acc = Matrix::Zero(rho_.rows(), rho_.cols());
    for (int k = 1; k < 16; ++k) {
      Matrix term = rho_;
      conjugate(term, [&](std::span<Complex> col) {
        kernels::apply_pauli<Scalar>(col, q0, k % 4);
        kernels::apply_pauli<Scalar>(col, q1, k / 4);
      });
      acc += term;
    }
    rho_ = (1 - p) * rho_ + (p / 15) * acc;
    return *this;
  }

  Complex trace() const { return rho_.trace(); }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probabilities() const { return rho_.diagonal().real(); }

private:
  template <typename Fn>
  static void conjugate(Matrix& m, Fn&& left) {
    // U ρ U† = U (U ρ)† when ρ is Hermitian.
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      left(std::span<Complex>(m.col(c).data(), static_cast<std::size_t>(m.rows())));
    }
    m.adjointInPlace();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      left(std::span<Complex>(m.col(c).data(), static_cast<std::size_t>(m.rows())));
    }
  }

  template <typename Fn>
  void conjugate(Fn&& left) {
    conjugate(rho_, std::forward<Fn>(left));
  }

  int n_;
  Matrix rho_;
};

using DensityMatrix = BasicDensityMatrix<double>;

}  // namespace scq
