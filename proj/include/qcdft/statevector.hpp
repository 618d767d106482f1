#pragma once

#include <bit>
#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "qcdft/circuit.hpp"
#include "qcdft/gate.hpp"
#include "qcdft/types.hpp"

namespace qcdft {

/// Full 2^N-amplitude register state. Qubit 0 is the least-significant bit of
/// the basis index, so the ket |i0 i1 ... i(N-1)> reads qubit 0 first and maps
/// to index sum_q i_q 2^q. Gates update amplitude pairs in place with
/// stride-2^q loops. Hard-capped at 30 qubits; beyond that the exact state is
/// out of reach without distributed storage.
template <typename Scalar = double>
class StateVector {
 public:
  static constexpr int kMaxQubits = 30;

  explicit StateVector(int n_qubits, std::uint64_t basis_index = 0) : n_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("StateVector: need at least one qubit");
    if (n_qubits > kMaxQubits) {
      throw std::invalid_argument("StateVector: " + std::to_string(n_qubits) +
                                  " qubits exceeds the " + std::to_string(kMaxQubits) +
                                  "-qubit cap of exact simulation");
    }
    const std::uint64_t dim = std::uint64_t{1} << n_;
    if (basis_index >= dim) {
      throw std::invalid_argument("StateVector: basis index out of range");
    }
    amps_ = AmpVector<Scalar>::Zero(dim);
    amps_[basis_index] = Complex<Scalar>(1);
  }

  int n_qubits() const { return n_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(amps_.size()); }
  const AmpVector<Scalar>& amplitudes() const { return amps_; }
  Complex<Scalar> amplitude(std::uint64_t x) const { return amps_[x]; }

  Scalar norm_sq() const { return amps_.squaredNorm(); }

  /// Applies one gate in place.
  void apply(const Gate& g) {
    if (is_single_qubit(g.kind)) {
      apply_1q(gate_matrix_1q<Scalar>(g), g.q0);
    } else if (g.kind == GateKind::CX) {
      apply_cx(g.q0, g.q1);
    } else {
      apply_cz(g.q0, g.q1);
    }
  }

  void apply_step(const std::vector<Gate>& step) {
    for (const Gate& g : step) apply(g);
  }

  /// Probability of measuring qubit q in |1>.
  Scalar sqp(int q) const {
    check_qubit(q);
    const std::uint64_t mask = std::uint64_t{1} << q;
    Scalar p{0};
    for (std::uint64_t x = 0; x < size(); ++x) {
      if (x & mask) p += std::norm(amps_[x]);
    }
    return p;
  }

  /// All N marginals in one pass over the amplitudes.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sqps() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_);
    for (std::uint64_t x = 0; x < size(); ++x) {
      const Scalar w = std::norm(amps_[x]);
      if (w == Scalar{0}) continue;
      std::uint64_t bits = x;
      while (bits) {
        const int q = std::countr_zero(bits);
        p[q] += w;
        bits &= bits - 1;
      }
    }
    return p;
  }

  /// One-qubit reduced density matrix by partial trace over the other qubits.
  Matrix2<Scalar> rdm(int q) const {
    check_qubit(q);
    const std::uint64_t mask = std::uint64_t{1} << q;
    const std::uint64_t low = mask - 1;
    Matrix2<Scalar> rho = Matrix2<Scalar>::Zero();
    for (std::uint64_t r = 0; r < size() / 2; ++r) {
      const std::uint64_t x0 = ((r & ~low) << 1) | (r & low);
      const std::uint64_t x1 = x0 | mask;
      const Complex<Scalar> a0 = amps_[x0];
      const Complex<Scalar> a1 = amps_[x1];
      rho(0, 0) += a0 * std::conj(a0);
      rho(0, 1) += a0 * std::conj(a1);
      rho(1, 1) += a1 * std::conj(a1);
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
  }

  /// Amplitude dump as `index,re,im` rows.
  void dump_csv(std::ostream& out) const {
    out << "index,re,im\n";
    for (std::uint64_t x = 0; x < size(); ++x) {
      out << x << ',' << amps_[x].real() << ',' << amps_[x].imag() << '\n';
    }
  }

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= n_) throw std::invalid_argument("StateVector: qubit index out of range");
  }

  void apply_1q(const Matrix2<Scalar>& u, int q) {
    check_qubit(q);
    const std::uint64_t mask = std::uint64_t{1} << q;
    const std::uint64_t low = mask - 1;
    const Complex<Scalar> u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::uint64_t r = 0; r < size() / 2; ++r) {
      const std::uint64_t x0 = ((r & ~low) << 1) | (r & low);
      const std::uint64_t x1 = x0 | mask;
      const Complex<Scalar> a0 = amps_[x0];
      const Complex<Scalar> a1 = amps_[x1];
      amps_[x0] = u00 * a0 + u01 * a1;
      amps_[x1] = u10 * a0 + u11 * a1;
    }
  }

  void apply_cx(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw std::invalid_argument("StateVector: cx operands must differ");
    const std::uint64_t cmask = std::uint64_t{1} << control;
    const std::uint64_t tmask = std::uint64_t{1} << target;
    for (std::uint64_t x = 0; x < size(); ++x) {
      if ((x & cmask) && !(x & tmask)) std::swap(amps_[x], amps_[x | tmask]);
    }
  }

  void apply_cz(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw std::invalid_argument("StateVector: cz operands must differ");
    const std::uint64_t pair = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
    for (std::uint64_t x = 0; x < size(); ++x) {
      if ((x & pair) == pair) amps_[x] = -amps_[x];
    }
  }

  int n_;
  AmpVector<Scalar> amps_;
};

/// |basis_index> on n qubits (qubit 0 = least-significant bit).
inline StateVector<double> init_state(int n, std::uint64_t basis_index) {
  return StateVector<double>(n, basis_index);
}

/// Value-style gate application.
template <typename Scalar>
StateVector<Scalar> apply_gate(StateVector<Scalar> psi, const Gate& g) {
  psi.apply(g);
  return psi;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> exact_sqp(const StateVector<Scalar>& psi) {
  return psi.sqps();
}

template <typename Scalar>
Matrix2<Scalar> exact_rdm(const StateVector<Scalar>& psi, int q) {
  return psi.rdm(q);
}

/// Exact per-step SQPs of a circuit run, entry s holding the state after
/// step s (entry 0 the initial basis state).
inline SqpTrajectory exact_sqp_trajectory(const Circuit& c, std::uint64_t basis_index = 0) {
  if (auto v = validate(c); !v.empty()) {
    throw std::invalid_argument("exact_sqp_trajectory: invalid circuit: " + v.front().message);
  }
  StateVector<double> psi(c.n_qubits, basis_index);
  SqpTrajectory traj;
  traj.reserve(c.depth() + 1);
  traj.push_back(psi.sqps());
  for (const auto& step : c.steps) {
    psi.apply_step(step);
    traj.push_back(psi.sqps());
  }
  return traj;
}

}  // namespace qcdft
