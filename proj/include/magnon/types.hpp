// types.hpp — Scalar and matrix aliases shared across the library

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace magnon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr Complex kImag{0.0, 1.0};

} // namespace magnon
