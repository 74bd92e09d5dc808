// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ddrom/blocks.hpp"
#include "ddrom/rom.hpp"

namespace ddrom
{

struct MatrixRoots
{
  CMatrix root;
  CMatrix inv_root;
};

/// Hermitian square root and inverse square root by eigendecomposition of
/// (A + A^*)/2. Throws NotPositiveDefinite if an eigenvalue is below
/// rel_tol * max|lambda|.
MatrixRoots psd_sqrt(const CMatrix &a, double rel_tol = 1e-14);

/// Block-tridiagonal T with alpha_1..alpha_r on the diagonal, beta_{j+1} in
/// block (j, j+1) and beta_{j+1}^* in block (j+1, j). beta[0] holds the
/// starting normalization beta_1.
struct BlockTridiagonal
{
  Index m = 0;
  std::vector<CMatrix> alpha;
  std::vector<CMatrix> beta;
  CMatrix Q;

  Index steps() const { return static_cast<Index>(alpha.size()); }
  CMatrix assemble() const;
};

/// Block Lanczos with full reorthogonalization at every step. Each
/// beta_{j+1} = (w^* w)^{1/2} is the PSD root of the m x m Gram. Throws
/// LanczosBreakdown if beta_1 is rank deficient relative to ||d||, or a later
/// beta has a singular value below 1e-12 ||S||.
BlockTridiagonal block_lanczos(const CMatrix &s, const CMatrix &d, Index steps);

/// Retained block count r: n if lambda_mn >= 0, otherwise the largest r with
/// lambda_{mr} >= |lambda_mn|, or 0 if no r qualifies. Eigenvalues must be
/// sorted descending.
Index stable_rank(const RVector &lambda, Index m, Index n);

/// Leading m r eigenpairs of a Hermitian matrix under the stable_rank rule.
struct StableSubspace
{
  Index m = 0;
  Index n = 0;
  Index r = 0;
  CMatrix Z;         // mn x mr
  RVector lambda;    // retained eigenvalues, descending
  RVector spectrum;  // all mn eigenvalues, descending

  CMatrix projector() const { return Z * Z.adjoint(); }
};

StableSubspace stable_subspace(const CMatrix &a, Index m, Index n);

/// [conj(d_1); ...; conj(d_n)], mn x m.
CMatrix stacked_conj_d(const DataBlocks &blocks);

/// Noiseless construction: Lanczos on M^{-1/2} S M^{-1/2} started from
/// M^{1/2} [conj(d_1); ...; conj(d_n)].
BlockTridiagonal build_T_full(const RomMatrices &rom, const DataBlocks &blocks);

struct MeasuredT
{
  BlockTridiagonal T;
  StableSubspace subspace;
};

/// Truncated construction from (possibly noisy) data: the stable subspace of M
/// defines S^r = L^{-1/2} Z^* S Z L^{-1/2} and d^r = L^{1/2} Z^* [conj(d_j)],
/// followed by r_M Lanczos steps. Throws if r_M = 0.
MeasuredT build_T_measured(const RomMatrices &rom, const DataBlocks &blocks);

/// Trial-side counterpart on a frozen measured subspace, with the projected
/// mass Z^* M Z in place of L. Throws NotPositiveDefinite if Z^* M Z is not
/// positive definite.
BlockTridiagonal build_T_trial(const RomMatrices &rom, const DataBlocks &blocks,
                               const StableSubspace &subspace);

/// Upper triangle including the diagonal, column by column:
/// (a00, a01, a11, a02, a12, a22, ...). Length N (N + 1) / 2.
CVector triu(const CMatrix &a);

}  // namespace ddrom
