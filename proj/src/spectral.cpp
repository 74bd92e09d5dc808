// SPDX-License-Identifier: Apache-2.0

#include "ddrom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace ddrom
{

namespace
{

// Eigenpairs of a Hermitian matrix, eigenvalues descending.
struct EigenDesc
{
  RVector values;
  CMatrix vectors;
};

EigenDesc hermitian_eigen(const CMatrix &a)
{
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success)
  {
    throw std::runtime_error("Hermitian eigendecomposition failed");
  }
  EigenDesc out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

double spectral_norm(const CMatrix &a)
{
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// PSD root of the Gram w^* w and its inverse, plus the smallest root
// eigenvalue.
struct GramRoot
{
  CMatrix beta;
  CMatrix beta_inv;
  double smallest;
};

GramRoot gram_root(const CMatrix &w)
{
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(w.adjoint() * w));
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  const RVector sigma = lam.cwiseSqrt();
  const CMatrix &v = es.eigenvectors();
  GramRoot g;
  g.smallest = sigma.minCoeff();
  g.beta = hermitian_part(v * sigma.cast<Complex>().asDiagonal() * v.adjoint());
  if (g.smallest > 0.0)
  {
    g.beta_inv =
        hermitian_part(v * sigma.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint());
  }
  return g;
}

CMatrix sandwich(const CMatrix &left, const CMatrix &mid)
{
  return hermitian_part(left * mid * left);
}

}  // namespace

MatrixRoots psd_sqrt(const CMatrix &a, double rel_tol)
{
  if (a.rows() != a.cols() || a.rows() == 0)
  {
    throw std::invalid_argument("psd_sqrt needs a non-empty square matrix");
  }
  const EigenDesc e = hermitian_eigen(a);
  const double smallest = e.values(e.values.size() - 1);
  const double scale = e.values.cwiseAbs().maxCoeff();
  if (!(smallest > rel_tol * scale))
  {
    throw NotPositiveDefinite("matrix square root of a non-positive-definite matrix", smallest);
  }
  const RVector s = e.values.cwiseSqrt();
  MatrixRoots out;
  out.root = hermitian_part(e.vectors * s.cast<Complex>().asDiagonal() * e.vectors.adjoint());
  out.inv_root =
      hermitian_part(e.vectors * s.cwiseInverse().cast<Complex>().asDiagonal() * e.vectors.adjoint());
  return out;
}

CMatrix BlockTridiagonal::assemble() const
{
  const Index r = steps();
  CMatrix t = CMatrix::Zero(m * r, m * r);
  for (Index j = 0; j < r; ++j)
  {
    t.block(j * m, j * m, m, m) = alpha[static_cast<std::size_t>(j)];
    if (j + 1 < r)
    {
      const CMatrix &b = beta[static_cast<std::size_t>(j + 1)];
      t.block(j * m, (j + 1) * m, m, m) = b;
      t.block((j + 1) * m, j * m, m, m) = b.adjoint();
    }
  }
  return t;
}

BlockTridiagonal block_lanczos(const CMatrix &s, const CMatrix &d, Index steps)
{
  const Index dim = s.rows();
  const Index m = d.cols();
  if (s.cols() != dim || d.rows() != dim)
  {
    throw std::invalid_argument("block_lanczos: operator is " + std::to_string(s.rows()) + "x" +
                                std::to_string(s.cols()) + ", start block has " +
                                std::to_string(d.rows()) + " rows");
  }
  if (m == 0 || steps < 1 || steps * m > dim)
  {
    throw std::invalid_argument("block_lanczos: " + std::to_string(steps) + " steps of width " +
                                std::to_string(m) + " do not fit dimension " +
                                std::to_string(dim));
  }

  const CMatrix sh = hermitian_part(s);
  const double s_norm = spectral_norm(sh);

  BlockTridiagonal t;
  t.m = m;
  t.Q = CMatrix::Zero(dim, m * steps);

  GramRoot g = gram_root(d);
  const double d_norm = std::sqrt(std::max(0.0, spectral_norm(d.adjoint() * d)));
  if (!(g.smallest > 1e-12 * d_norm))
  {
    throw LanczosBreakdown(1, g.smallest);
  }
  t.beta.push_back(g.beta);
  t.Q.leftCols(m) = d * g.beta_inv;
  CMatrix w = sh * t.Q.leftCols(m);

  for (Index j = 0; j + 1 < steps; ++j)
  {
    const auto qj = t.Q.middleCols(j * m, m);
    const CMatrix a = hermitian_part(w.adjoint() * qj);
    t.alpha.push_back(a);
    w -= qj * a;
    const auto basis = t.Q.leftCols((j + 1) * m);
    w -= basis * (basis.adjoint() * w);

    g = gram_root(w);
    if (!(g.smallest > 1e-12 * s_norm))
    {
      throw LanczosBreakdown(j + 2, g.smallest);
    }
    t.beta.push_back(g.beta);
    t.Q.middleCols((j + 1) * m, m) = w * g.beta_inv;
    w = sh * t.Q.middleCols((j + 1) * m, m) - qj * g.beta;
  }
  t.alpha.push_back(hermitian_part(w.adjoint() * t.Q.middleCols((steps - 1) * m, m)));
  return t;
}

Index stable_rank(const RVector &lambda, Index m, Index n)
{
  if (m < 1 || n < 1 || lambda.size() != m * n)
  {
    throw std::invalid_argument("stable_rank: expected " + std::to_string(m * n) +
                                " eigenvalues, got " + std::to_string(lambda.size()));
  }
  const double last = lambda(m * n - 1);
  if (last >= 0.0)
  {
    return n;
  }
  for (Index r = n; r >= 1; --r)
  {
    if (lambda(m * r - 1) >= std::abs(last))
    {
      return r;
    }
  }
  return 0;
}

StableSubspace stable_subspace(const CMatrix &a, Index m, Index n)
{
  if (a.rows() != m * n || a.cols() != m * n)
  {
    throw std::invalid_argument("stable_subspace: matrix is not " + std::to_string(m * n) +
                                " square");
  }
  const EigenDesc e = hermitian_eigen(a);
  StableSubspace sub;
  sub.m = m;
  sub.n = n;
  sub.r = stable_rank(e.values, m, n);
  sub.spectrum = e.values;
  sub.lambda = e.values.head(m * sub.r);
  sub.Z = e.vectors.leftCols(m * sub.r);
  return sub;
}

CMatrix stacked_conj_d(const DataBlocks &blocks)
{
  CMatrix out(blocks.n * blocks.m, blocks.m);
  for (Index j = 0; j < blocks.n; ++j)
  {
    out.middleRows(j * blocks.m, blocks.m) = blocks.d_block(j).conjugate();
  }
  return out;
}

BlockTridiagonal build_T_full(const RomMatrices &rom, const DataBlocks &blocks)
{
  const MatrixRoots mr = psd_sqrt(rom.M);
  const CMatrix s_tilde = sandwich(mr.inv_root, rom.S);
  const CMatrix d_tilde = mr.root * stacked_conj_d(blocks);
  return block_lanczos(s_tilde, d_tilde, rom.n);
}

MeasuredT build_T_measured(const RomMatrices &rom, const DataBlocks &blocks)
{
  MeasuredT out;
  out.subspace = stable_subspace(rom.M, rom.m, rom.n);
  const StableSubspace &sub = out.subspace;
  if (sub.r == 0)
  {
    throw NotPositiveDefinite("measured mass matrix has no stable subspace",
                              sub.spectrum(sub.spectrum.size() - 1));
  }
  const RVector l = sub.lambda;
  if (!(l.minCoeff() > 0.0))
  {
    throw NotPositiveDefinite("retained mass spectrum is not positive", l.minCoeff());
  }
  const CVector half = l.cwiseSqrt().cast<Complex>();
  const CVector inv_half = half.cwiseInverse();
  const CMatrix s_tilde = hermitian_part(inv_half.asDiagonal() *
                                         (sub.Z.adjoint() * rom.S * sub.Z) *
                                         inv_half.asDiagonal());
  const CMatrix d_tilde = half.asDiagonal() * (sub.Z.adjoint() * stacked_conj_d(blocks));
  out.T = block_lanczos(s_tilde, d_tilde, sub.r);
  return out;
}

BlockTridiagonal build_T_trial(const RomMatrices &rom, const DataBlocks &blocks,
                               const StableSubspace &subspace)
{
  if (rom.S.rows() != subspace.Z.rows())
  {
    throw std::invalid_argument("trial ROM does not match the measured subspace");
  }
  const CMatrix &z = subspace.Z;
  const MatrixRoots mr = psd_sqrt(z.adjoint() * rom.M * z);
  const CMatrix s_tilde = sandwich(mr.inv_root, z.adjoint() * rom.S * z);
  const CMatrix d_tilde = mr.root * (z.adjoint() * stacked_conj_d(blocks));
  return block_lanczos(s_tilde, d_tilde, subspace.r);
}

CVector triu(const CMatrix &a)
{
  if (a.rows() != a.cols())
  {
    throw std::invalid_argument("triu needs a square matrix");
  }
  const Index n = a.rows();
  CVector out(n * (n + 1) / 2);
  Index t = 0;
  for (Index c = 0; c < n; ++c)
  {
    for (Index r = 0; r <= c; ++r)
    {
      out(t++) = a(r, c);
    }
  }
  return out;
}

}  // namespace ddrom
