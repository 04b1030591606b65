#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "scq/circuit.hpp"

namespace scq {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

// Two-qubit matrices act on the local index b0 + 2*b1, where b0 is the bit
// of the first operand (control) and b1 the bit of the second (target).

namespace gates {

template <typename Scalar = double>
Matrix2c<Scalar> identity() {
  return Matrix2c<Scalar>::Identity();
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_x() {
  Matrix2c<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_y() {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_z() {
  Matrix2c<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

/// I, X, Y, Z for index 0..3.
template <typename Scalar = double>
Matrix2c<Scalar> pauli(int index) {
  switch (index) {
    case 0: return identity<Scalar>();
    case 1: return pauli_x<Scalar>();
    case 2: return pauli_y<Scalar>();
    case 3: return pauli_z<Scalar>();
  }
  throw std::out_of_range("pauli index must be 0..3");
}

template <typename Scalar = double>
Matrix2c<Scalar> hadamard() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2c<Scalar> m;
  m << r, r, r, -r;
  return m;
}

/// exp(-i θ X / 2)
template <typename Scalar = double>
Matrix2c<Scalar> rx(Scalar theta) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  Matrix2c<Scalar> m;
  m << C(c), C(0, -s), C(0, -s), C(c);
  return m;
}

/// exp(-i θ Y / 2)
template <typename Scalar = double>
Matrix2c<Scalar> ry(Scalar theta) {
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  Matrix2c<Scalar> m;
  m << c, -s, s, c;
  return m;
}

/// exp(-i θ Z / 2)
template <typename Scalar = double>
Matrix2c<Scalar> rz(Scalar theta) {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  m << std::polar(Scalar(1), -theta / 2), C(0), C(0), std::polar(Scalar(1), theta / 2);
  return m;
}

template <typename Scalar = double>
Matrix4c<Scalar> cz() {
  Matrix4c<Scalar> m = Matrix4c<Scalar>::Identity();
  m(3, 3) = -1;
  return m;
}

template <typename Scalar = double>
Matrix4c<Scalar> cnot() {
  Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
  // control = b0: |b0=1, b1> <-> |b0=1, 1-b1>, i.e. local 1 <-> 3
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(3, 1) = 1;
  m(1, 3) = 1;
  return m;
}

/// Kronecker product of single-qubit operators placed on (operand 0,
/// operand 1) in the local two-qubit index convention above.
template <typename Scalar = double>
Matrix4c<Scalar> on_pair(const Matrix2c<Scalar>& first, const Matrix2c<Scalar>& second) {
  Matrix4c<Scalar> m;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int r0 = 0; r0 < 2; ++r0)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c0 = 0; c0 < 2; ++c0) m(r0 + 2 * r1, c0 + 2 * c1) = first(r0, c0) * second(r1, c1);
  return m;
}

}  // namespace gates

/// Unitary of a concrete single-qubit gate (`angle` used by rotations).
template <typename Scalar = double>
Matrix2c<Scalar> single_qubit_unitary(GateKind kind, Scalar angle = 0) {
  switch (kind) {
    case GateKind::H: return gates::hadamard<Scalar>();
    case GateKind::X: return gates::pauli_x<Scalar>();
    case GateKind::Y: return gates::pauli_y<Scalar>();
    case GateKind::Z: return gates::pauli_z<Scalar>();
    case GateKind::RX: return gates::rx<Scalar>(angle);
    case GateKind::RY: return gates::ry<Scalar>(angle);
    case GateKind::RZ: return gates::rz<Scalar>(angle);
    default: break;
  }
  throw std::invalid_argument("not a single-qubit gate");
}

template <typename Scalar = double>
Matrix4c<Scalar> two_qubit_unitary(GateKind kind) {
  switch (kind) {
    case GateKind::CZ: return gates::cz<Scalar>();
    case GateKind::CNOT: return gates::cnot<Scalar>();
    default: break;
  }
  throw std::invalid_argument("not a two-qubit gate");
}

/// Angle of a concrete rotation; throws if the parameter is still scanned.
inline double literal_angle(const Gate& g) {
  if (!g.param) return 0.0;
  if (const auto* lit = std::get_if<Literal>(&*g.param)) return lit->radians;
  throw std::invalid_argument("gate has an unbound scan parameter; instantiate the circuit first");
}

}  // namespace scq
