// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ddrom
{

using Index = Eigen::Index;
using Complex = std::complex<double>;

using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RSparse = Eigen::SparseMatrix<double>;
using CSparse = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kImag{0.0, 1.0};

// Selects the serial reference kernel or its OpenMP counterpart. Both produce
// the same result up to floating-point summation order.
enum class Exec
{
  Serial,
  Parallel
};

// Linear solve failed or did not meet the residual contract.
class SolveError : public std::runtime_error
{
public:
  SolveError(const std::string &what, double k, Index source)
    : std::runtime_error(what + " (k=" + std::to_string(k) + ", source=" +
                         std::to_string(source) + ")"),
      wavenumber(k), source(source)
  {
  }
  double wavenumber;
  Index source;
};

// Hermitian input has an eigenvalue at or below the admissible threshold.
class NotPositiveDefinite : public std::runtime_error
{
public:
  NotPositiveDefinite(const std::string &what, double smallest)
    : std::runtime_error(what + " (smallest eigenvalue " + std::to_string(smallest) + ")"),
      smallest_eigenvalue(smallest)
  {
  }
  double smallest_eigenvalue;
};

// Block-Lanczos could not normalize a new block.
class LanczosBreakdown : public std::runtime_error
{
public:
  LanczosBreakdown(Index step, double smallest)
    : std::runtime_error("block Lanczos breakdown at step " + std::to_string(step) +
                         " (smallest singular value " + std::to_string(smallest) + ")"),
      step(step), smallest_singular_value(smallest)
  {
  }
  Index step;
  double smallest_singular_value;
};

// Hermitian part (A + A^*)/2.
inline CMatrix hermitian_part(const CMatrix &a)
{
  return 0.5 * (a + a.adjoint());
}

}  // namespace ddrom
