// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "ddrom/blocks.hpp"
#include "support/oracles.hpp"

using namespace ddrom;
using namespace ddrom::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// Integrates conj(f) g edge by edge with the exact P1 edge mass h/6 [2 1; 1 2].
Complex edge_pairing(const Grid &g, const CVector &f, const CVector &gv)
{
  const Index nb = g.num_boundary();
  Complex sum = 0.0;
  for (Index b = 0; b < nb; ++b)
  {
    const Index a = b;
    const Index c = (b + 1) % nb;
    const double h = g.boundary_edge_length(b);
    sum += h / 6.0 *
           (2.0 * std::conj(f(a)) * gv(a) + std::conj(f(a)) * gv(c) + std::conj(f(c)) * gv(a) +
            2.0 * std::conj(f(c)) * gv(c));
  }
  return sum;
}

DataBlocks perturbed(const DataBlocks &base, unsigned seed)
{
  DataBlocks out = base;
  unsigned s = seed;
  for (auto *family : {&out.d, &out.dkd, &out.c, &out.b})
  {
    for (auto &a : *family)
    {
      a += 0.1 * a.norm() * random_complex(a.rows(), a.cols(), ++s);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("constant traces give the source lengths", "[blocks]")
{
  const Grid g(9, 9);
  const SourceSpec src = SourceSpec::top_edge(3, g.hx());
  const auto quad = make_boundary_quadrature(g, src, BoundaryRule::Consistent);
  TraceSet t;
  t.phi.push_back(CMatrix::Ones(g.num_boundary(), 3));
  t.dphi.push_back(CMatrix::Zero(g.num_boundary(), 3));
  const DataBlocks blocks = compute_blocks(t, quad, WavenumberSet({2.0}));
  for (Index r = 0; r < 3; ++r)
  {
    const auto seg = src.segments[static_cast<std::size_t>(r)];
    for (Index s = 0; s < 3; ++s)
    {
      CHECK_THAT(blocks.d[0](r, s).real(), WithinAbs(seg.end - seg.begin, 1e-14));
      CHECK(blocks.d[0](r, s).imag() == 0.0);
    }
  }
}

TEST_CASE("noiseless blocks satisfy the symmetries without enforcement", "[blocks]")
{
  const Grid g(17, 17);
  const Setup s(17, 4, 4, random_smooth_potential(g, 21));
  const DataBlocks blocks = s.blocks();
  const SymmetryDefects def = symmetry_defects(blocks);
  CHECK(def.d <= 1e-10);
  CHECK(def.dkd <= 1e-10);
  CHECK(def.b <= 1e-10);
  CHECK(def.c <= 1e-10);
  CHECK(max_block_difference(symmetrize(blocks), blocks) <= 1e-10);
}

TEST_CASE("b blocks match an edge-by-edge quadrature oracle", "[blocks]")
{
  const Grid g(9, 9);
  const Setup s(9, 2, 3, random_smooth_potential(g, 13));
  const SnapshotSet snaps = solve_snapshots(s.ops, s.k, Exec::Serial);
  const TraceSet t = extract_traces(g, snaps);
  const DataBlocks blocks = compute_blocks(t, s.quad, s.k);
  for (Index i = 0; i < 3; ++i)
  {
    for (Index j = 0; j < 3; ++j)
    {
      CMatrix oracle(2, 2);
      for (Index r = 0; r < 2; ++r)
      {
        for (Index c = 0; c < 2; ++c)
        {
          oracle(r, c) = edge_pairing(g, t.phi[static_cast<std::size_t>(i)].col(r),
                                      t.phi[static_cast<std::size_t>(j)].col(c));
        }
      }
      CHECK((blocks.b_block(i, j) - oracle).norm() <= 1e-12 * oracle.norm());
    }
  }
}

TEST_CASE("zero noise is the identity", "[noise]")
{
  const Grid g(9, 9);
  const DataBlocks clean = Setup(9, 2, 2, random_smooth_potential(g, 1)).blocks();
  const DataBlocks same = add_noise(clean, 0.0, 7);
  CHECK(max_block_difference(same, clean) == 0.0);
  CHECK_THROWS_AS(add_noise(clean, -0.1, 7), std::invalid_argument);
}

TEST_CASE("noise calibration is exact and seeded", "[noise]")
{
  const Grid g(17, 17);
  const DataBlocks clean = Setup(17, 4, 4, random_smooth_potential(g, 2)).blocks();
  const double eps = 2.5e-2;
  const DataBlocks noisy = add_noise(clean, eps, 42);
  const NoiseLevels lv = realized_noise(clean, noisy);
  CHECK_THAT(lv.d, WithinAbs(eps, 1e-12));
  CHECK_THAT(lv.dkd, WithinAbs(eps, 1e-12));
  CHECK_THAT(lv.bc, WithinAbs(eps, 1e-12));

  for (Index j = 0; j < 4; ++j)
  {
    CHECK(noisy.b_block(j, j) == clean.b_block(j, j));
  }

  const DataBlocks again = add_noise(clean, eps, 42);
  CHECK(max_block_difference(again, noisy) == 0.0);
  const DataBlocks other = add_noise(clean, eps, 43);
  CHECK(max_block_difference(other, noisy) > 0.0);

  // projecting onto the symmetry classes cannot raise the perturbation level
  const NoiseLevels sym = realized_noise(clean, symmetrize(noisy));
  CHECK(sym.d <= std::sqrt(2.0) * eps);
  CHECK(sym.dkd <= std::sqrt(2.0) * eps);
  CHECK(sym.bc <= std::sqrt(2.0) * eps);
}

TEST_CASE("symmetrize enforces every class exactly and is idempotent", "[blocks]")
{
  const Grid g(9, 9);
  const DataBlocks clean = Setup(9, 3, 3, random_smooth_potential(g, 3)).blocks();
  const DataBlocks messy = perturbed(clean, 100);
  CHECK(symmetry_defects(messy).max() > 1e-3);

  const DataBlocks sym = symmetrize(messy);
  for (Index j = 0; j < sym.n; ++j)
  {
    CHECK(sym.d_block(j) == CMatrix(sym.d_block(j).transpose()));
    CHECK(sym.dkd_block(j) == CMatrix(sym.dkd_block(j).transpose()));
    CHECK(sym.c_block(j) == CMatrix(-sym.c_block(j).adjoint()));
    for (Index i = 0; i < sym.n; ++i)
    {
      CHECK(sym.b_block(i, j) == CMatrix(sym.b_block(j, i).adjoint()));
    }
  }
  CHECK(symmetry_defects(sym).max() == 0.0);
  CHECK(max_block_difference(symmetrize(sym), sym) == 0.0);
}
