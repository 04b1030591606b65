#pragma once

// Reference computations for the tests. Everything here is written from
// first principles on explicit dense matrices and shares no numerics with
// the library: the only library types used are the circuit containers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scq/circuit.hpp"

namespace oracle {

using cd = std::complex<double>;
using Dense = Eigen::MatrixXcd;

inline Dense m2(cd a, cd b, cd c, cd d) {
  Dense m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

inline Dense pauli(int i) {
  const cd I(0, 1);
  switch (i) {
    case 0: return m2(1, 0, 0, 1);
    case 1: return m2(0, 1, 1, 0);
    case 2: return m2(0, -I, I, 0);
    default: return m2(1, 0, 0, -1);
  }
}

/// Matrix exponential exp(-i θ P / 2) = cos(θ/2) I - i sin(θ/2) P.
inline Dense rotation(int axis, double theta) {
  return std::cos(theta / 2) * pauli(0) - cd(0, 1) * std::sin(theta / 2) * pauli(axis);
}

inline Dense single(scq::GateKind kind, double angle) {
  using scq::GateKind;
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::H: return m2(r, r, r, -r);
    case GateKind::X: return pauli(1);
    case GateKind::Y: return pauli(2);
    case GateKind::Z: return pauli(3);
    case GateKind::RX: return rotation(1, angle);
    case GateKind::RY: return rotation(2, angle);
    case GateKind::RZ: return rotation(3, angle);
    default: throw std::invalid_argument("not single");
  }
}

inline int bit(std::size_t index, int q) { return static_cast<int>((index >> q) & 1u); }

/// Lifts a 1-qubit operator onto qubit q of n (qubit 0 = least significant
/// index bit) by explicit matrix elements.
inline Dense embed1(const Dense& u, int q, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Dense out = Dense::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & ~(std::size_t{1} << q)) != (c & ~(std::size_t{1} << q))) continue;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = u(bit(r, q), bit(c, q));
    }
  }
  return out;
}

/// Controlled-Z and controlled-X on (control, target) of n qubits.
inline Dense controlled(int which, int control, int target, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Dense out = Dense::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t r = c;
    cd amp = 1;
    if (bit(c, control)) {
      if (which == 3 && bit(c, target)) amp = -1;
      if (which == 1) r = c ^ (std::size_t{1} << target);
    }
    out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = amp;
  }
  return out;
}

inline double literal(const scq::Gate& g) {
  return g.param ? std::get<scq::Literal>(*g.param).radians : 0.0;
}

inline Dense gate_unitary(const scq::Gate& g, int n) {
  using scq::GateKind;
  if (g.kind == GateKind::CZ) return controlled(3, g.qubits[0], g.qubits[1], n);
  if (g.kind == GateKind::CNOT) return controlled(1, g.qubits[0], g.qubits[1], n);
  return embed1(single(g.kind, literal(g)), g.qubits[0], n);
}

inline Dense circuit_unitary(const scq::Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits();
  Dense u = Dense::Identity(dim, dim);
  for (const scq::Gate& g : c.gates()) {
    if (g.kind == scq::GateKind::Measure) continue;
    u = gate_unitary(g, c.num_qubits()) * u;
  }
  return u;
}

/// |⟨U1, U2⟩| / dim: 1 iff the unitaries agree up to global phase.
inline double phase_insensitive_overlap(const Dense& a, const Dense& b) {
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

/// Sums full-register probabilities down to `qubits` (bit k of the
/// result = qubits[k]).
inline std::vector<double> marginal(const Eigen::VectorXd& full, const std::vector<int>& qubits) {
  std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      if (bit(static_cast<std::size_t>(i), qubits[k])) idx += std::size_t{1} << k;
    }
    out[idx] += full(i);
  }
  return out;
}

/// Noiseless outcome distribution of the circuit's measured qubits (sorted).
inline std::vector<double> probabilities(const scq::Circuit& c) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << c.num_qubits());
  psi(0) = 1;
  psi = circuit_unitary(c) * psi;
  std::vector<int> q = c.measured();
  std::sort(q.begin(), q.end());
  return marginal(psi.cwiseAbs2(), q);
}

inline Dense kron(const Dense& a, const Dense& b) {
  Dense out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Real Kronecker product with the convention that `factors[0]` acts on
/// the least significant index bit.
inline Eigen::MatrixXd kron_lsb(const std::vector<Eigen::Matrix2d>& factors) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (const auto& f : factors) {
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) = f(i, j) * out;
    out = next;
  }
  return out;
}

/// Gaussian elimination with partial pivoting on plain arrays.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw std::domain_error("singular");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

inline Eigen::MatrixXd gauss_inverse(const Eigen::MatrixXd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  Eigen::MatrixXd inv(m.rows(), m.cols());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const auto x = gauss_solve(rows, e);
    for (std::size_t r = 0; r < n; ++r) inv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[r];
  }
  return inv;
}

inline Eigen::Matrix2d confusion(double f0, double f1) {
  Eigen::Matrix2d m;
  m << f0, 1 - f1, 1 - f0, f1;
  return m;
}

/// Density-matrix reference for a concrete circuit. `p1[q]` and `p2[j]`
/// are non-identity Pauli insertion probabilities, `readout[q]` = (f0, f1).
inline std::vector<double> noisy_probabilities(const scq::Circuit& c, const std::vector<double>& p1,
                                               const std::vector<double>& p2,
                                               const std::vector<std::pair<double, double>>& readout) {
  const int n = c.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Dense rho = Dense::Zero(dim, dim);
  rho(0, 0) = 1;
  for (const scq::Gate& g : c.gates()) {
    if (g.kind == scq::GateKind::Measure) continue;
    const Dense u = gate_unitary(g, n);
    rho = u * rho * u.adjoint();
    if (g.qubits.size() == 1) {
      const double p = p1[static_cast<std::size_t>(g.qubits[0])];
      Dense acc = Dense::Zero(dim, dim);
      for (int k = 1; k < 4; ++k) {
        const Dense P = embed1(pauli(k), g.qubits[0], n);
        acc += P * rho * P.adjoint();
      }
      rho = (1 - p) * rho + (p / 3) * acc;
    } else {
      const double p = p2[static_cast<std::size_t>(std::min(g.qubits[0], g.qubits[1]))];
      Dense acc = Dense::Zero(dim, dim);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (a == 0 && b == 0) continue;
          const Dense P = embed1(pauli(a), g.qubits[0], n) * embed1(pauli(b), g.qubits[1], n);
          acc += P * rho * P.adjoint();
        }
      rho = (1 - p) * rho + (p / 15) * acc;
    }
  }
  std::vector<int> q = c.measured();
  std::sort(q.begin(), q.end());
  const std::vector<double> actual = marginal(rho.diagonal().real(), q);
  std::vector<Eigen::Matrix2d> factors;
  for (int qq : q) {
    const auto [f0, f1] = readout[static_cast<std::size_t>(qq)];
    factors.push_back(confusion(f0, f1));
  }
  const Eigen::MatrixXd m = kron_lsb(factors);
  const Eigen::VectorXd observed = m * Eigen::Map<const Eigen::VectorXd>(actual.data(), static_cast<Eigen::Index>(actual.size()));
  return {observed.data(), observed.data() + observed.size()};
}

/// χ of U ρ U† in the basis E_{4i+j} = σ_i(first) σ_j(second) over
/// {I, X, −iY, Z}, computed as vec-coefficients of U.
inline Dense chi_of_unitary(const Dense& u4) {
  Eigen::VectorXcd c(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Dense si = pauli(i);
      Dense sj = pauli(j);
      if (i == 2) si *= cd(0, -1);
      if (j == 2) sj *= cd(0, -1);
      // first operand on the least significant bit: kron(second, first)
      const Dense e = kron(sj, si);
      c(4 * i + j) = (e.adjoint() * u4).trace() / 4.0;
    }
  return c * c.adjoint();
}

/// Identity-process χ is a single 1 at E_0 ⊗ E_0.
inline Dense chi_identity() {
  Dense chi = Dense::Zero(16, 16);
  chi(0, 0) = 1;
  return chi;
}

/// Fully depolarizing channel: ρ → Tr ρ · I/4 = (1/16) Σ_n P_n ρ P_n. With
/// −iY in the basis, E ρ E† still equals P ρ P, so χ = I/16.
inline Dense chi_depolarized() { return Dense::Identity(16, 16) / 16.0; }

}  // namespace oracle
