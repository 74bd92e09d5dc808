// SPDX-License-Identifier: Apache-2.0

#include "ddrom/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ddrom
{

DataBlocks DataBlocks::zeros(Index n, Index m)
{
  DataBlocks blocks;
  blocks.n = n;
  blocks.m = m;
  blocks.k.assign(static_cast<std::size_t>(n), 0.0);
  const CMatrix z = CMatrix::Zero(m, m);
  blocks.d.assign(static_cast<std::size_t>(n), z);
  blocks.dkd.assign(static_cast<std::size_t>(n), z);
  blocks.c.assign(static_cast<std::size_t>(n), z);
  blocks.b.assign(static_cast<std::size_t>(n * n), z);
  return blocks;
}

DataBlocks compute_blocks(const TraceSet &traces, const BoundaryQuadrature &quad,
                          const WavenumberSet &k)
{
  const Index n = traces.num_wavenumbers();
  const Index m = traces.num_sources();
  const Index nb = quad.pairing.rows();
  if (n != k.size())
  {
    throw std::invalid_argument("trace set has " + std::to_string(n) + " wavenumbers, expected " +
                                std::to_string(k.size()));
  }
  if (quad.source_weights.cols() != m || quad.source_weights.rows() != nb)
  {
    throw std::invalid_argument("boundary quadrature does not match the trace dimensions");
  }
  for (Index j = 0; j < n; ++j)
  {
    const auto &phi = traces.phi[static_cast<std::size_t>(j)];
    const auto &dphi = traces.dphi[static_cast<std::size_t>(j)];
    if (phi.rows() != nb || dphi.rows() != nb || phi.cols() != m || dphi.cols() != m)
    {
      throw std::invalid_argument("trace " + std::to_string(j) + " has the wrong shape");
    }
  }

  DataBlocks blocks = DataBlocks::zeros(n, m);
  blocks.k = k.values();
  const CMatrix w = quad.pairing.cast<Complex>();
  const CMatrix p = quad.source_weights.cast<Complex>();

  std::vector<CMatrix> w_phi(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j)
  {
    w_phi[static_cast<std::size_t>(j)] = w * traces.phi[static_cast<std::size_t>(j)];
  }
  for (Index j = 0; j < n; ++j)
  {
    const auto sj = static_cast<std::size_t>(j);
    const CMatrix &phi = traces.phi[sj];
    const CMatrix &dphi = traces.dphi[sj];
    blocks.d[sj] = p.transpose() * phi;
    blocks.dkd[sj] = p.transpose() * dphi;
    blocks.c[sj] = -(phi.adjoint() * (w * dphi)) + dphi.adjoint() * w_phi[sj];
    for (Index i = 0; i < n; ++i)
    {
      blocks.b_block(i, j) = traces.phi[static_cast<std::size_t>(i)].adjoint() * w_phi[sj];
    }
  }
  return blocks;
}

DataBlocks synthesize_blocks(const Grid &grid, const DiscreteOperators &ops,
                             const WavenumberSet &k, const BoundaryQuadrature &quad, Exec exec,
                             DerivativeMode mode)
{
  const SnapshotSet snap = solve_snapshots(ops, k, exec, mode);
  return compute_blocks(extract_traces(grid, snap), quad, k);
}

namespace
{

double sum_sq(const std::vector<CMatrix> &family)
{
  double s = 0.0;
  for (const auto &a : family)
  {
    s += a.squaredNorm();
  }
  return s;
}

double ratio(double num, double den)
{
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double relative(double defect, double scale)
{
  return scale > 0.0 ? defect / scale : defect;
}

std::vector<CMatrix> off_diagonal_b(const DataBlocks &blocks)
{
  std::vector<CMatrix> out;
  for (Index i = 0; i < blocks.n; ++i)
  {
    for (Index j = 0; j < blocks.n; ++j)
    {
      if (i != j)
      {
        out.push_back(blocks.b_block(i, j));
      }
    }
  }
  return out;
}

}  // namespace

NoiseLevels realized_noise(const DataBlocks &clean, const DataBlocks &noisy)
{
  auto diff_sq = [](const std::vector<CMatrix> &a, const std::vector<CMatrix> &b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t)
    {
      s += (a[t] - b[t]).squaredNorm();
    }
    return s;
  };
  NoiseLevels lv;
  lv.d = ratio(diff_sq(noisy.d, clean.d), sum_sq(clean.d));
  lv.dkd = ratio(diff_sq(noisy.dkd, clean.dkd), sum_sq(clean.dkd));
  const auto bc = off_diagonal_b(clean);
  const auto bn = off_diagonal_b(noisy);
  lv.bc = ratio(diff_sq(bn, bc) + diff_sq(noisy.c, clean.c), sum_sq(bc) + sum_sq(clean.c));
  return lv;
}

DataBlocks add_noise(const DataBlocks &blocks, double eps, std::uint64_t seed)
{
  if (!(eps >= 0.0))
  {
    throw std::invalid_argument("noise level must be non-negative");
  }
  DataBlocks noisy = blocks;
  if (eps == 0.0)
  {
    return noisy;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](Index m) {
    CMatrix e(m, m);
    for (Index c = 0; c < m; ++c)
    {
      for (Index r = 0; r < m; ++r)
      {
        const double re = normal(rng);
        const double im = normal(rng);
        e(r, c) = Complex(re, im);
      }
    }
    return e;
  };

  // Raw unit-variance draws, then one scale per family fixes the realized
  // ratio at eps.
  const Index n = blocks.n;
  const Index m = blocks.m;
  std::vector<CMatrix> ed, edk, ec, eb;
  for (Index j = 0; j < n; ++j)
  {
    ed.push_back(draw(m));
  }
  for (Index j = 0; j < n; ++j)
  {
    edk.push_back(draw(m));
  }
  for (Index j = 0; j < n; ++j)
  {
    ec.push_back(draw(m));
  }
  for (Index t = 0; t < n * (n - 1); ++t)
  {
    eb.push_back(draw(m));
  }

  auto scale = [eps](double clean_sq, double raw_sq) {
    return raw_sq > 0.0 ? eps * std::sqrt(clean_sq / raw_sq) : 0.0;
  };
  const double sd = scale(sum_sq(blocks.d), sum_sq(ed));
  const double sdk = scale(sum_sq(blocks.dkd), sum_sq(edk));
  const double sbc = scale(sum_sq(off_diagonal_b(blocks)) + sum_sq(blocks.c), sum_sq(eb) + sum_sq(ec));

  for (Index j = 0; j < n; ++j)
  {
    const auto sj = static_cast<std::size_t>(j);
    noisy.d[sj] += sd * ed[sj];
    noisy.dkd[sj] += sdk * edk[sj];
    noisy.c[sj] += sbc * ec[sj];
  }
  std::size_t t = 0;
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      if (i != j)
      {
        noisy.b_block(i, j) += sbc * eb[t++];
      }
    }
  }
  return noisy;
}

DataBlocks symmetrize(const DataBlocks &blocks)
{
  DataBlocks out = blocks;
  for (Index j = 0; j < blocks.n; ++j)
  {
    const auto sj = static_cast<std::size_t>(j);
    out.d[sj] = 0.5 * (blocks.d[sj] + blocks.d[sj].transpose());
    out.dkd[sj] = 0.5 * (blocks.dkd[sj] + blocks.dkd[sj].transpose());
    out.c[sj] = 0.5 * (blocks.c[sj] - blocks.c[sj].adjoint());
    for (Index i = 0; i <= j; ++i)
    {
      const CMatrix avg = 0.5 * (blocks.b_block(i, j) + blocks.b_block(j, i).adjoint());
      out.b_block(i, j) = avg;
      out.b_block(j, i) = avg.adjoint();
    }
  }
  return out;
}

double SymmetryDefects::max() const
{
  return std::max({d, dkd, b, c});
}

SymmetryDefects symmetry_defects(const DataBlocks &blocks)
{
  SymmetryDefects def;
  for (Index j = 0; j < blocks.n; ++j)
  {
    const auto &d = blocks.d_block(j);
    const auto &dk = blocks.dkd_block(j);
    const auto &c = blocks.c_block(j);
    def.d = std::max(def.d, relative((d - d.transpose()).norm(), d.norm()));
    def.dkd = std::max(def.dkd, relative((dk - dk.transpose()).norm(), dk.norm()));
    def.c = std::max(def.c, relative((c + c.adjoint()).norm(), c.norm()));
    for (Index i = 0; i < blocks.n; ++i)
    {
      const auto &bij = blocks.b_block(i, j);
      const auto &bji = blocks.b_block(j, i);
      def.b = std::max(def.b, relative((bij - bji.adjoint()).norm(), bij.norm()));
    }
  }
  return def;
}

double max_block_difference(const DataBlocks &a, const DataBlocks &b)
{
  if (a.n != b.n || a.m != b.m)
  {
    throw std::invalid_argument("block sets have different dimensions");
  }
  double worst = 0.0;
  auto cmp = [&worst](const std::vector<CMatrix> &x, const std::vector<CMatrix> &y) {
    for (std::size_t t = 0; t < x.size(); ++t)
    {
      worst = std::max(worst, relative((x[t] - y[t]).norm(), x[t].norm()));
    }
  };
  cmp(a.d, b.d);
  cmp(a.dkd, b.dkd);
  cmp(a.c, b.c);
  cmp(a.b, b.b);
  return worst;
}

}  // namespace ddrom
