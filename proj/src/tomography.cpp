#include "scq/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scq/state_vector.hpp"

namespace scq {

namespace {

using C = std::complex<double>;
using Matrix4cd = Matrix4c<double>;
using Vector16c = Eigen::Matrix<C, 16, 1>;
constexpr double kHalfPi = std::numbers::pi / 2;

/// σ_0..σ_3 with −iY in place of Y.
Matrix2c<double> chi_sigma(int i) {
  Matrix2c<double> s = gates::pauli<double>(i);
  if (i == 2) s *= C(0, -1);
  return s;
}

/// Input states |0⟩, |1⟩, (|0⟩+|1⟩)/√2, (|0⟩−i|1⟩)/√2.
void prepare(Circuit& c, int q, int which) {
  switch (which) {
    case 0: break;
    case 1: c.x(q); break;
    case 2: c.ry(q, kHalfPi); break;
    case 3: c.rx(q, kHalfPi); break;
  }
}

/// Rotates Pauli `basis` (1 = X, 2 = Y, 3 = Z) onto Z.
void rotate_to_z(Circuit& c, int q, int basis) {
  switch (basis) {
    case 1: c.ry(q, -kHalfPi); break;
    case 2: c.rx(q, kHalfPi); break;
    default: break;
  }
}

Matrix4cd ideal_input(int prep) {
  Circuit c(2);
  prepare(c, 0, prep % 4);
  prepare(c, 1, prep / 4);
  StateVector sv(2);
  for (const Gate& g : c.gates()) sv.apply(g);
  const auto& psi = sv.amplitudes();
  return psi * psi.adjoint();
}

Vector16c vec(const Matrix4cd& m) { return Eigen::Map<const Vector16c>(m.data()); }

/// Linear-inversion state tomography from the 9 settings (a, b), a and b in
/// {X, Y, Z}; setting s measures a = 1 + s % 3 on the lower qubit.
Matrix4cd reconstruct(const std::array<ProbabilityTable, 9>& tables) {
  double t[4][4] = {};
  int samples[4][4] = {};
  t[0][0] = 1.0;
  for (int s = 0; s < 9; ++s) {
    const int a = 1 + s % 3;
    const int b = 1 + s / 3;
    const ProbabilityTable& p = tables[static_cast<std::size_t>(s)];
    double za = 0.0, zb = 0.0, zab = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double sa = (i & 1u) ? -1.0 : 1.0;
      const double sb = (i & 2u) ? -1.0 : 1.0;
      za += sa * p[i];
      zb += sb * p[i];
      zab += sa * sb * p[i];
    }
    t[a][0] += za;
    ++samples[a][0];
    t[0][b] += zb;
    ++samples[0][b];
    t[a][b] += zab;
    ++samples[a][b];
  }
  Matrix4cd rho = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double value = samples[i][j] ? t[i][j] / samples[i][j] : t[i][j];
      rho += value * gates::on_pair<double>(gates::pauli<double>(i), gates::pauli<double>(j));
    }
  }
  return rho / 4.0;
}

}  // namespace

Matrix4cd process_basis(int n) {
  if (n < 0 || n > 15) throw std::out_of_range("process basis index must be 0..15");
  return gates::on_pair<double>(chi_sigma(n / 4), chi_sigma(n % 4));
}

ProcessMatrix chi_from_unitary(const Matrix4cd& u) {
  Vector16c c;
  for (int n = 0; n < 16; ++n) c(n) = (process_basis(n).adjoint() * u).trace() / 4.0;
  return {c * c.adjoint()};
}

double process_fidelity(const ProcessMatrix& experimental, const ProcessMatrix& ideal,
                        double* imaginary) {
  const C tr = (experimental.chi * ideal.chi).trace();
  if (imaginary) *imaginary = tr.imag();
  return tr.real();
}

Circuit QptDesign::circuit(int prep, int setting) const {
  if (prep < 0 || prep > 15 || setting < 0 || setting > 8) {
    throw std::out_of_range("qpt circuit index out of range");
  }
  const int lo = std::min(pair.first, pair.second);
  const int hi = std::max(pair.first, pair.second);
  if (hi - lo != 1 || lo < 0 || hi >= width) {
    throw std::invalid_argument("qpt pair (" + std::to_string(pair.first) + "," +
                                std::to_string(pair.second) + ") is not adjacent on the register");
  }
  if (!is_two_qubit(gate)) throw std::invalid_argument("qpt gate must be a two-qubit gate");
  Circuit c(width);
  prepare(c, lo, prep % 4);
  prepare(c, hi, prep / 4);
  c.push(Gate::two(gate, pair.first, pair.second));
  rotate_to_z(c, lo, 1 + setting % 3);
  rotate_to_z(c, hi, 1 + setting / 3);
  c.measure({lo, hi});
  return c;
}

ProcessMatrix qpt_two_qubit(const CircuitExecutor& executor, const QptDesign& design) {
  // Process map columns: vec(E_n ρ_k E_m†) stacked over the 16 inputs.
  Eigen::MatrixXcd a(256, 256);
  Eigen::VectorXcd b(256);
  std::array<Matrix4cd, 16> basis;
  for (int n = 0; n < 16; ++n) basis[static_cast<std::size_t>(n)] = process_basis(n);

  for (int k = 0; k < 16; ++k) {
    std::array<ProbabilityTable, 9> tables;
    for (int s = 0; s < 9; ++s) {
      ProbabilityTable t = executor(design.circuit(k, s));
      if (t.size() != 4) throw std::runtime_error("qpt executor must return a two-qubit table");
      tables[static_cast<std::size_t>(s)] = std::move(t);
    }
    b.segment(16 * k, 16) = vec(reconstruct(tables));
    const Matrix4cd rho_in = ideal_input(k);
    for (int n = 0; n < 16; ++n) {
      const Matrix4cd left = basis[static_cast<std::size_t>(n)] * rho_in;
      for (int m = 0; m < 16; ++m) {
        a.block(16 * k, 16 * n + m, 16, 1) = vec(left * basis[static_cast<std::size_t>(m)].adjoint());
      }
    }
  }

  const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(b);
  ProcessMatrix out;
  for (int n = 0; n < 16; ++n)
    for (int m = 0; m < 16; ++m) out.chi(n, m) = x(16 * n + m);
  out.chi = (out.chi + out.chi.adjoint()).eval() / 2.0;
  out.chi /= out.chi.trace().real();
  return out;
}

}  // namespace scq
