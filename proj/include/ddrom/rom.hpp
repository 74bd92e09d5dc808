// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ddrom/blocks.hpp"
#include "ddrom/forward.hpp"
#include "ddrom/operators.hpp"

namespace ddrom
{

enum class Provenance
{
  DataDriven,
  BulkOracle,
  Corrected
};

/// Galerkin stiffness and mass matrices on the snapshot space, mn x mn with
/// n x n blocks of size m x m. Block (i, j) couples wavenumbers k_i and k_j;
/// inside a block rows index sources r and columns sources s.
struct RomMatrices
{
  Index n = 0;
  Index m = 0;
  CMatrix S;
  CMatrix M;
  Provenance provenance = Provenance::DataDriven;

  auto s_block(Index i, Index j) const { return S.block(i * m, j * m, m, m); }
  auto m_block(Index i, Index j) const { return M.block(i * m, j * m, m, m); }
};

/// Mass block from boundary data:
///   i != j:  (d_i^* - d_j) / (k_i^2 - k_j^2) - i b_ij / (k_j - k_i)
///   i == j:  Re(dkd_j) / (2 k_j) + (i / 2) c_j
CMatrix rom_mass_block(const DataBlocks &blocks, Index i, Index j);

/// Stiffness block from boundary data:
///   i != j:  (k_i^2 d_i^* - k_j^2 d_j) / (k_i^2 - k_j^2)
///            + i (k_i k_j^2 + k_i^2 k_j) b_ij / (k_i^2 - k_j^2)
///   i == j:  (k_j Re(dkd_j) + 2 Re(d_j)) / 2 + (i k_j^2 / 2) c_j
CMatrix rom_stiffness_block(const DataBlocks &blocks, Index i, Index j);

/// Full data-driven matrices; the result is Hermitized exactly. Rejects
/// wavenumbers closer than 1e-12 * max(k).
CMatrix assemble_rom_mass(const DataBlocks &blocks);
CMatrix assemble_rom_stiffness(const DataBlocks &blocks);
RomMatrices assemble_rom(const DataBlocks &blocks);

/// Bulk Galerkin oracle: S = U^* (K_lap + K_pot) U, M = U^* M_fem U with
/// U = [u_1, ..., u_n]. Needs the snapshots, so it is only available on the
/// synthesis side.
RomMatrices bulk_rom(const DiscreteOperators &ops, const SnapshotSet &snapshots);

struct QuadratureErrorEstimate
{
  CMatrix E_S;
  CMatrix E_M;
};

/// Data-driven minus bulk matrices for a reference potential q0.
QuadratureErrorEstimate estimate_quadrature_error(const Grid &grid, const SourceSpec &sources,
                                                  const WavenumberSet &k, BoundaryRule rule,
                                                  const PotentialField &q0,
                                                  Exec exec = Exec::Parallel);

/// S - E_S and M - E_M, re-Hermitized.
RomMatrices apply_correction(const RomMatrices &rom, const QuadratureErrorEstimate &est);

/// ||a - ref||_F / ||ref||_F.
double relative_frobenius(const CMatrix &a, const CMatrix &ref);

}  // namespace ddrom
