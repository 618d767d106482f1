#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qcdft/circuit.hpp"
#include "qcdft/gate.hpp"
#include "qcdft/types.hpp"

namespace qcdft {

/// Detection band for the exact-case branches of the CNOT rule. SQPs under
/// these rules only ever take values produced by affine maps of {0, 0.5, 1},
/// so a narrow band cannot misclassify.
inline constexpr double kSqpBranchTol = 1e-9;

/// Single-qubit mean-field state |p+-> = sqrt(1-p)|0> +- sqrt(p)|1>, the
/// phase-averaged stand-in for a qubit of which only the SQP is known.
struct MeanFieldState {
  double p = 0.0;
  int sign = +1;

  Eigen::Vector2cd ket() const {
    Eigen::Vector2cd v;
    v << std::sqrt(1.0 - p), (sign >= 0 ? 1.0 : -1.0) * std::sqrt(p);
    return v;
  }
};

/// Local-probability update for a single-qubit gate: the closed forms of the
/// phase-averaged overlap (1/2) sum_{+-} |<1|U|p+->|^2.
/// X,Y flip; Z,S,T keep; H,SX,SY pin to 1/2; RX mixes by sin^2(theta/2).
inline double lpa_apply_1q(double p, const Gate& g) {
  switch (g.kind) {
    case GateKind::X:
    case GateKind::Y:
      return 1.0 - p;
    case GateKind::Z:
    case GateKind::S:
    case GateKind::T:
      return p;
    case GateKind::H:
    case GateKind::SX:
    case GateKind::SY:
      return 0.5;
    case GateKind::RX: {
      const double s2 = std::sin(g.theta / 2) * std::sin(g.theta / 2);
      return p * (1.0 - s2) + (1.0 - p) * s2;
    }
    default:
      throw std::invalid_argument("lpa_apply_1q: two-qubit gate");
  }
}

/// CNOT rule: the control is untouched; the target flips when the control is
/// more one than zero. At the 0.5 threshold a basis-valued target is pinned to
/// 0.5 and any other target flips, reproducing the Bell-preparation marginals
/// from every two-qubit basis state.
inline std::pair<double, double> lpa_apply_cnot(double pc, double pt) {
  if (std::abs(pc - 0.5) < kSqpBranchTol) {
    const bool basis = std::abs(pt) < kSqpBranchTol || std::abs(pt - 1.0) < kSqpBranchTol;
    return {pc, basis ? 0.5 : 1.0 - pt};
  }
  if (pc > 0.5) return {pc, 1.0 - pt};
  return {pc, pt};
}

/// CZ acts on phase only, which the SQP picture cannot see.
inline std::pair<double, double> lpa_apply_cz(double pa, double pb) { return {pa, pb}; }

/// Applies one step's gates to the SQP vector in place. Gates within a step
/// touch disjoint qubits, so application order is immaterial.
inline void lpa_apply_step(const std::vector<Gate>& step, SqpVector& p) {
  for (const Gate& g : step) {
    if (is_single_qubit(g.kind)) {
      p[g.q0] = lpa_apply_1q(p[g.q0], g);
    } else if (g.kind == GateKind::CX) {
      std::tie(p[g.q0], p[g.q1]) = lpa_apply_cnot(p[g.q0], p[g.q1]);
    } else {
      std::tie(p[g.q0], p[g.q1]) = lpa_apply_cz(p[g.q0], p[g.q1]);
    }
  }
}

namespace detail {

inline void check_evolve_args(const Circuit& c, const SqpVector& p0) {
  if (auto v = validate(c); !v.empty()) {
    throw std::invalid_argument("evolve: invalid circuit: " + v.front().message);
  }
  if (p0.size() != c.n_qubits) {
    throw std::invalid_argument("evolve: initial SQP vector has wrong length");
  }
}

}  // namespace detail

inline SqpVector zero_sqps(int n) { return SqpVector::Zero(n); }

/// SQPs of the computational basis state |basis_index> (bit q of the index).
inline SqpVector basis_sqps(int n, std::uint64_t basis_index) {
  SqpVector p = SqpVector::Zero(n);
  for (int q = 0; q < n; ++q) p[q] = (basis_index >> q) & 1 ? 1.0 : 0.0;
  return p;
}

/// Full mean-field trajectory, entry s holding the SQPs after step s.
/// O(N + gates) work per step, never 2^N.
inline SqpTrajectory evolve_lpa(const Circuit& c, SqpVector p0) {
  detail::check_evolve_args(c, p0);
  SqpTrajectory traj;
  traj.reserve(c.depth() + 1);
  traj.push_back(p0);
  for (const auto& step : c.steps) {
    lpa_apply_step(step, p0);
    traj.push_back(p0);
  }
  return traj;
}

/// Final SQPs only; O(N) memory regardless of depth.
inline SqpVector evolve_lpa_final(const Circuit& c, SqpVector p0) {
  detail::check_evolve_args(c, p0);
  for (const auto& step : c.steps) lpa_apply_step(step, p0);
  return p0;
}

}  // namespace qcdft
