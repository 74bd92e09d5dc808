// SPDX-License-Identifier: Apache-2.0

#include "ddrom/rom.hpp"

#include <cmath>
#include <string>

namespace ddrom
{

namespace
{

void check_distinct(const DataBlocks &blocks)
{
  if (static_cast<Index>(blocks.k.size()) != blocks.n)
  {
    throw std::invalid_argument("data blocks carry " + std::to_string(blocks.k.size()) +
                                " wavenumbers for n = " + std::to_string(blocks.n));
  }
  double kmax = 0.0;
  for (double k : blocks.k)
  {
    kmax = std::max(kmax, std::abs(k));
  }
  for (Index i = 0; i < blocks.n; ++i)
  {
    for (Index j = i + 1; j < blocks.n; ++j)
    {
      if (std::abs(blocks.k[static_cast<std::size_t>(i)] - blocks.k[static_cast<std::size_t>(j)]) <
          1e-12 * kmax)
      {
        throw std::invalid_argument("coincident wavenumbers at indices " + std::to_string(i) +
                                    " and " + std::to_string(j));
      }
    }
  }
}

template <class BlockFn>
CMatrix assemble_blocks(const DataBlocks &blocks, const BlockFn &block)
{
  check_distinct(blocks);
  const Index n = blocks.n;
  const Index m = blocks.m;
  CMatrix a(n * m, n * m);
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      a.block(i * m, j * m, m, m) = block(blocks, i, j);
    }
  }
  return hermitian_part(a);
}

}  // namespace

CMatrix rom_mass_block(const DataBlocks &blocks, Index i, Index j)
{
  const double ki = blocks.k[static_cast<std::size_t>(i)];
  const double kj = blocks.k[static_cast<std::size_t>(j)];
  if (i == j)
  {
    return blocks.dkd_block(j).real().cast<Complex>() / (2.0 * kj) +
           (0.5 * kImag) * blocks.c_block(j);
  }
  return (blocks.d_block(i).adjoint() - blocks.d_block(j)) / (ki * ki - kj * kj) -
         kImag * blocks.b_block(i, j) / (kj - ki);
}

CMatrix rom_stiffness_block(const DataBlocks &blocks, Index i, Index j)
{
  const double ki = blocks.k[static_cast<std::size_t>(i)];
  const double kj = blocks.k[static_cast<std::size_t>(j)];
  if (i == j)
  {
    const RMatrix re = kj * blocks.dkd_block(j).real() + 2.0 * blocks.d_block(j).real();
    return 0.5 * re.cast<Complex>() + (0.5 * kj * kj * kImag) * blocks.c_block(j);
  }
  const double denom = ki * ki - kj * kj;
  // k_i k_j^2 + k_i^2 k_j, evaluated so that swapping i and j is bitwise exact.
  const double bcoef = (ki * kj) * (ki + kj);
  return ((ki * ki) * blocks.d_block(i).adjoint() - (kj * kj) * blocks.d_block(j)) / denom +
         kImag * (bcoef / denom) * blocks.b_block(i, j);
}

CMatrix assemble_rom_mass(const DataBlocks &blocks)
{
  return assemble_blocks(blocks, rom_mass_block);
}

CMatrix assemble_rom_stiffness(const DataBlocks &blocks)
{
  return assemble_blocks(blocks, rom_stiffness_block);
}

RomMatrices assemble_rom(const DataBlocks &blocks)
{
  RomMatrices rom;
  rom.n = blocks.n;
  rom.m = blocks.m;
  rom.S = assemble_rom_stiffness(blocks);
  rom.M = assemble_rom_mass(blocks);
  rom.provenance = Provenance::DataDriven;
  return rom;
}

RomMatrices bulk_rom(const DiscreteOperators &ops, const SnapshotSet &snapshots)
{
  const CMatrix u = snapshots.stacked();
  const RSparse k = ops.stiffness();
  RomMatrices rom;
  rom.n = snapshots.num_wavenumbers();
  rom.m = snapshots.num_sources();
  rom.S = hermitian_part(u.adjoint() * (k.cast<Complex>() * u));
  rom.M = hermitian_part(u.adjoint() * (ops.mass.cast<Complex>() * u));
  rom.provenance = Provenance::BulkOracle;
  return rom;
}

QuadratureErrorEstimate estimate_quadrature_error(const Grid &grid, const SourceSpec &sources,
                                                  const WavenumberSet &k, BoundaryRule rule,
                                                  const PotentialField &q0, Exec exec)
{
  const DiscreteOperators ops = assemble_operators(grid, q0, sources, exec);
  const SnapshotSet snap = solve_snapshots(ops, k, exec);
  const BoundaryQuadrature quad = make_boundary_quadrature(grid, sources, rule);
  const RomMatrices data = assemble_rom(compute_blocks(extract_traces(grid, snap), quad, k));
  const RomMatrices bulk = bulk_rom(ops, snap);
  return {data.S - bulk.S, data.M - bulk.M};
}

RomMatrices apply_correction(const RomMatrices &rom, const QuadratureErrorEstimate &est)
{
  if (est.E_S.rows() != rom.S.rows() || est.E_S.cols() != rom.S.cols() ||
      est.E_M.rows() != rom.M.rows() || est.E_M.cols() != rom.M.cols())
  {
    throw std::invalid_argument("error estimate does not match the ROM dimensions");
  }
  RomMatrices out = rom;
  out.S = hermitian_part(rom.S - est.E_S);
  out.M = hermitian_part(rom.M - est.E_M);
  out.provenance = Provenance::Corrected;
  return out;
}

double relative_frobenius(const CMatrix &a, const CMatrix &ref)
{
  return (a - ref).norm() / ref.norm();
}

}  // namespace ddrom
