#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcdft/types.hpp"

namespace qcdft {

enum class GateKind : std::uint8_t { H, X, Y, Z, S, T, SX, SY, RX, CX, CZ };

constexpr bool is_two_qubit(GateKind k) {
  return k == GateKind::CX || k == GateKind::CZ;
}
constexpr bool is_single_qubit(GateKind k) { return !is_two_qubit(k); }

/// One gate application. q0 is the target of a single-qubit gate, the control
/// of a CX, or the first operand of a CZ; q1 is the CX target / second CZ
/// operand and -1 otherwise. theta is meaningful for RX only.
struct Gate {
  GateKind kind = GateKind::H;
  std::int32_t q0 = 0;
  std::int32_t q1 = -1;
  double theta = 0.0;

  static Gate single(GateKind k, int q) {
    if (!is_single_qubit(k)) throw std::invalid_argument("Gate::single: two-qubit kind");
    if (k == GateKind::RX) throw std::invalid_argument("Gate::single: RX needs an angle");
    return Gate{k, q, -1, 0.0};
  }
  static Gate rx(double theta, int q) {
    if (!std::isfinite(theta)) throw std::invalid_argument("Gate::rx: non-finite angle");
    return Gate{GateKind::RX, q, -1, theta};
  }
  static Gate cx(int control, int target) { return Gate{GateKind::CX, control, target, 0.0}; }
  static Gate cz(int a, int b) { return Gate{GateKind::CZ, a, b, 0.0}; }

  bool operator==(const Gate&) const = default;
};

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::T: return "t";
    case GateKind::SX: return "sx";
    case GateKind::SY: return "sy";
    case GateKind::RX: return "rx";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
  }
  return "?";
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  if (name == "h") return GateKind::H;
  if (name == "x") return GateKind::X;
  if (name == "y") return GateKind::Y;
  if (name == "z") return GateKind::Z;
  if (name == "s") return GateKind::S;
  if (name == "t") return GateKind::T;
  if (name == "sx") return GateKind::SX;
  if (name == "sy") return GateKind::SY;
  if (name == "rx") return GateKind::RX;
  if (name == "cx") return GateKind::CX;
  if (name == "cz") return GateKind::CZ;
  return std::nullopt;
}

/// 2x2 unitary of a single-qubit gate. Phase conventions are frozen:
/// SX = sqrt(X) and SY = sqrt(Y) on the principal branch, RX(theta) the
/// standard x-axis rotation with cos/-i sin entries.
template <typename Scalar = double>
Matrix2<Scalar> gate_matrix_1q(const Gate& g) {
  using C = Complex<Scalar>;
  const Scalar one{1}, zero{0}, half{0.5};
  const Scalar inv_sqrt2 = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2<Scalar> m;
  switch (g.kind) {
    case GateKind::H:
      m << C(inv_sqrt2), C(inv_sqrt2), C(inv_sqrt2), C(-inv_sqrt2);
      return m;
    case GateKind::X:
      m << C(zero), C(one), C(one), C(zero);
      return m;
    case GateKind::Y:
      m << C(zero), C(zero, -one), C(zero, one), C(zero);
      return m;
    case GateKind::Z:
      m << C(one), C(zero), C(zero), C(-one);
      return m;
    case GateKind::S:
      m << C(one), C(zero), C(zero), C(zero, one);
      return m;
    case GateKind::T:
      m << C(one), C(zero), C(zero), std::polar(one, Scalar(M_PI / 4));
      return m;
    case GateKind::SX:
      m << C(half, half), C(half, -half), C(half, -half), C(half, half);
      return m;
    case GateKind::SY:
      m << C(half, half), C(-half, -half), C(half, half), C(half, half);
      return m;
    case GateKind::RX: {
      const Scalar c = std::cos(Scalar(g.theta) / 2);
      const Scalar s = std::sin(Scalar(g.theta) / 2);
      m << C(c), C(zero, -s), C(zero, -s), C(c);
      return m;
    }
    default:
      throw std::invalid_argument("gate_matrix_1q: two-qubit gate");
  }
}

/// 4x4 unitary of a two-qubit gate in the |q0 q1> tensor basis
/// (index = 2*i_q0 + i_q1, i.e. the first operand is the leading factor).
template <typename Scalar = double>
Matrix4<Scalar> gate_matrix_2q(const Gate& g) {
  using C = Complex<Scalar>;
  Matrix4<Scalar> m = Matrix4<Scalar>::Identity();
  switch (g.kind) {
    case GateKind::CX:
      m(2, 2) = C(0);
      m(3, 3) = C(0);
      m(2, 3) = C(1);
      m(3, 2) = C(1);
      return m;
    case GateKind::CZ:
      m(3, 3) = C(-1);
      return m;
    default:
      throw std::invalid_argument("gate_matrix_2q: single-qubit gate");
  }
}

/// Dynamic-size variant: 2x2 for single-qubit kinds, 4x4 for CX/CZ.
inline Eigen::MatrixXcd gate_matrix(const Gate& g) {
  if (is_single_qubit(g.kind)) return gate_matrix_1q<double>(g);
  return gate_matrix_2q<double>(g);
}

}  // namespace qcdft
