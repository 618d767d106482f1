#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qcdft {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar>
using AmpVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

/// Marginal probability of measuring |1>, one entry per qubit.
using SqpVector = Eigen::VectorXd;

/// SQP vectors indexed by step, entry 0 being the initial condition.
using SqpTrajectory = std::vector<SqpVector>;

/// 2x2 Hermitian trace-1 PSD matrix describing one qubit.
using OneQubitRdm = Eigen::Matrix2cd;

}  // namespace qcdft
