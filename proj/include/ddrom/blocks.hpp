// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "ddrom/forward.hpp"
#include "ddrom/operators.hpp"

namespace ddrom
{

/// Boundary-integral data blocks, the only quantities the inversion sees.
///
///   [d_j]_rs    = int p_r phi_j^(s)
///   [dkd_j]_rs  = int p_r d/dk phi_j^(s)
///   [b_ij]_rs   = int conj(phi_i^(r)) phi_j^(s)
///   [c_j]_rs    = int -conj(phi_j^(r)) d/dk phi_j^(s) + phi_j^(s) conj(d/dk phi_j^(r))
struct DataBlocks
{
  Index n = 0;
  Index m = 0;
  std::vector<double> k;
  std::vector<CMatrix> d;
  std::vector<CMatrix> dkd;
  std::vector<CMatrix> c;
  std::vector<CMatrix> b;  // row-major over (i, j): b[i * n + j]

  static DataBlocks zeros(Index n, Index m);

  CMatrix &b_block(Index i, Index j) { return b[static_cast<std::size_t>(i * n + j)]; }
  const CMatrix &b_block(Index i, Index j) const { return b[static_cast<std::size_t>(i * n + j)]; }
  const CMatrix &d_block(Index j) const { return d[static_cast<std::size_t>(j)]; }
  const CMatrix &dkd_block(Index j) const { return dkd[static_cast<std::size_t>(j)]; }
  const CMatrix &c_block(Index j) const { return c[static_cast<std::size_t>(j)]; }

  WavenumberSet wavenumbers() const { return WavenumberSet(k); }
};

DataBlocks compute_blocks(const TraceSet &traces, const BoundaryQuadrature &quad,
                          const WavenumberSet &k);

/// Forward solve, trace extraction and block computation in one call.
DataBlocks synthesize_blocks(const Grid &grid, const DiscreteOperators &ops,
                             const WavenumberSet &k, const BoundaryQuadrature &quad,
                             Exec exec = Exec::Parallel,
                             DerivativeMode mode = DerivativeMode::Exact);

/// Relative Frobenius perturbations of the three calibrated families.
struct NoiseLevels
{
  double d = 0.0;
  double dkd = 0.0;
  double bc = 0.0;  // off-diagonal b_ij together with c_j
};

NoiseLevels realized_noise(const DataBlocks &clean, const DataBlocks &noisy);

/// Adds i.i.d. complex Gaussian noise (independent N(0, sigma^2) real and
/// imaginary parts) to d, dkd, off-diagonal b and c, with sigma calibrated per
/// family so that realized_noise() equals eps exactly. Diagonal b_jj blocks
/// do not enter the ROM and are left untouched.
DataBlocks add_noise(const DataBlocks &blocks, double eps, std::uint64_t seed);

/// Projects onto the symmetry classes: d, dkd complex-symmetric, b block
/// Hermitian (b_ij = b_ji^*), c skew-Hermitian. Idempotent.
DataBlocks symmetrize(const DataBlocks &blocks);

/// Largest relative violation of each symmetry class.
struct SymmetryDefects
{
  double d = 0.0;
  double dkd = 0.0;
  double b = 0.0;
  double c = 0.0;

  double max() const;
};

SymmetryDefects symmetry_defects(const DataBlocks &blocks);

/// Largest relative Frobenius distance between matching blocks.
double max_block_difference(const DataBlocks &a, const DataBlocks &b);

}  // namespace ddrom
