// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "ddrom/spectral.hpp"
#include "support/oracles.hpp"

using namespace ddrom;
using namespace ddrom::testing;

namespace
{

double rel(const CMatrix &a, const CMatrix &ref)
{
  return (a - ref).norm() / ref.norm();
}

struct Desk
{
  DataBlocks clean;
  RomMatrices rom;
};

const Desk &desk()
{
  static const Desk d = [] {
    const Grid g(33, 33);
    const Setup s(33, 4, 4, random_smooth_potential(g, 31));
    Desk out;
    out.clean = s.blocks();
    out.rom = assemble_rom(out.clean);
    return out;
  }();
  return d;
}

}  // namespace

TEST_CASE("psd_sqrt analytic cases", "[spectral]")
{
  const MatrixRoots id = psd_sqrt(CMatrix::Identity(3, 3));
  CHECK(rel(id.root, CMatrix::Identity(3, 3)) < 1e-15);
  CHECK(rel(id.inv_root, CMatrix::Identity(3, 3)) < 1e-15);

  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 4.0;
  a(1, 1) = 9.0;
  const MatrixRoots r = psd_sqrt(a);
  CHECK(std::abs(r.root(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(r.root(1, 1) - 3.0) < 1e-14);
  CHECK(std::abs(r.root(0, 1)) < 1e-14);
  CHECK(std::abs(r.inv_root(1, 1) - 1.0 / 3.0) < 1e-14);
}

TEST_CASE("psd_sqrt reconstructs random Hermitian matrices", "[spectral]")
{
  const CMatrix a = random_hermitian_pd(12, 5);
  const MatrixRoots r = psd_sqrt(a);
  CHECK(rel(r.root * r.root, a) <= 1e-10);
  CHECK(rel(r.root * r.inv_root, CMatrix::Identity(12, 12)) <= 1e-10);
  CHECK(r.root == CMatrix(r.root.adjoint()));
  CHECK(eigenvalues_desc(r.root).minCoeff() > 0.0);
}

TEST_CASE("psd_sqrt rejects indefinite input", "[spectral]")
{
  CMatrix a = CMatrix::Identity(3, 3);
  a(2, 2) = -0.5;
  try
  {
    psd_sqrt(a);
    FAIL("expected NotPositiveDefinite");
  }
  catch (const NotPositiveDefinite &e)
  {
    CHECK(e.smallest_eigenvalue == Catch::Approx(-0.5));
  }
  CHECK_THROWS_AS(psd_sqrt(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("Lanczos reproduces a tridiagonal matrix from e1", "[lanczos]")
{
  const Index n = 6;
  CMatrix s = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
  {
    s(j, j) = 1.0 + static_cast<double>(j);
    if (j + 1 < n)
    {
      s(j, j + 1) = s(j + 1, j) = 0.5 + 0.1 * static_cast<double>(j);
    }
  }
  const CMatrix e1 = CMatrix::Identity(n, 1);
  const BlockTridiagonal t = block_lanczos(s, e1, n);
  CHECK(t.steps() == n);
  CHECK(rel(t.assemble(), s) < 1e-14);
  CHECK(std::abs(t.beta[0](0, 0) - 1.0) < 1e-15);
}

TEST_CASE("Lanczos invariants at mn = 64", "[lanczos]")
{
  const Index m = 8;
  const Index n = 8;
  const CMatrix s = random_hermitian_pd(m * n, 17);
  const CMatrix d = random_complex(m * n, m, 18);
  const BlockTridiagonal t = block_lanczos(s, d, n);
  const CMatrix tm = t.assemble();

  CHECK((t.Q.adjoint() * t.Q - CMatrix::Identity(m * n, m * n)).norm() <= 1e-10);
  CHECK(rel(tm, t.Q.adjoint() * s * t.Q) <= 1e-10);
  const RVector et = eigenvalues_desc(tm);
  const RVector es = eigenvalues_desc(s);
  CHECK((et - es).cwiseAbs().maxCoeff() <= 1e-9 * es.cwiseAbs().maxCoeff());
  CHECK(tm == CMatrix(tm.adjoint()));
  CHECK(rel(t.Q.leftCols(m) * t.beta[0], d) <= 1e-12);

  for (const auto &b : t.beta)
  {
    CHECK(b == CMatrix(b.adjoint()));
    CHECK(eigenvalues_desc(b).minCoeff() > 0.0);
  }

  const BlockTridiagonal again = block_lanczos(s, d, n);
  CHECK(again.assemble() == tm);
  CHECK(again.Q == t.Q);
}

TEST_CASE("Lanczos reports breakdown", "[lanczos]")
{
  const CMatrix s = random_hermitian_pd(6, 2);
  CMatrix d = random_complex(6, 2, 3);
  d.col(1) = 2.0 * d.col(0);
  try
  {
    block_lanczos(s, d, 3);
    FAIL("expected breakdown");
  }
  catch (const LanczosBreakdown &e)
  {
    CHECK(e.step == 1);
  }

  // an invariant subspace ends the recurrence early
  CMatrix diag = CMatrix::Zero(4, 4);
  diag.diagonal() << 1.0, 2.0, 3.0, 4.0;
  CMatrix start = CMatrix::Zero(4, 1);
  start(0, 0) = 1.0;
  start(1, 0) = 1.0;
  CHECK_THROWS_AS(block_lanczos(diag, start, 3), LanczosBreakdown);
  CHECK_THROWS_AS(block_lanczos(diag, start, 5), std::invalid_argument);
}

TEST_CASE("stable rank rule", "[spectral]")
{
  RVector all(4);
  all << 4, 3, 2, 1;
  CHECK(stable_rank(all, 1, 4) == 4);

  RVector a(4);
  a << 4, 3, 2, -2;
  CHECK(stable_rank(a, 1, 4) == 3);

  RVector b(4);
  b << 4, 3, 1, -2;
  CHECK(stable_rank(b, 1, 4) == 2);

  RVector none(4);
  none << 1, 0.5, 0.2, -3;
  CHECK(stable_rank(none, 1, 4) == 0);

  RVector blocked(6);
  blocked << 9, 8, 5, 4, 1, -3;
  CHECK(stable_rank(blocked, 2, 3) == 2);

  CHECK_THROWS_AS(stable_rank(a, 2, 3), std::invalid_argument);
}

TEST_CASE("stable subspace metadata", "[spectral]")
{
  CMatrix a = CMatrix::Zero(4, 4);
  a.diagonal() << 1.0, -2.0, 4.0, 3.0;
  const StableSubspace sub = stable_subspace(a, 1, 4);
  CHECK(sub.r == 2);
  CHECK(sub.lambda.size() == 2);
  CHECK(sub.lambda(0) == Catch::Approx(4.0));
  CHECK(sub.lambda(1) == Catch::Approx(3.0));
  CHECK(sub.lambda(1) >= std::abs(sub.spectrum(3)));
  CHECK((sub.Z.adjoint() * a * sub.Z - CMatrix(sub.lambda.cast<Complex>().asDiagonal())).norm() < 1e-14);
  const CMatrix p = sub.projector();
  CHECK((p * p - p).norm() < 1e-14);
}

TEST_CASE("noiseless measured T equals the full construction", "[spectral]")
{
  const Desk &d = desk();
  const MeasuredT mt = build_T_measured(d.rom, d.clean);
  CHECK(mt.subspace.r == d.clean.n);
  const BlockTridiagonal full = build_T_full(d.rom, d.clean);
  CHECK(rel(mt.T.assemble(), full.assemble()) <= 1e-8);

  const BlockTridiagonal trial = build_T_trial(d.rom, d.clean, mt.subspace);
  CHECK(rel(trial.assemble(), mt.T.assemble()) <= 1e-8);
}

TEST_CASE("noisy measured T is truncated with a positive retained spectrum", "[spectral]")
{
  const Desk &d = desk();
  const DataBlocks noisy = symmetrize(add_noise(d.clean, 2.5e-2, 1));
  const RomMatrices rom = assemble_rom(noisy);
  const MeasuredT mt = build_T_measured(rom, noisy);
  INFO("r_M = " << mt.subspace.r);
  CHECK(mt.subspace.r < d.clean.n);
  CHECK(mt.subspace.lambda.minCoeff() > 0.0);

  const Index mr = d.clean.m * mt.subspace.r;
  const CVector inv_half = mt.subspace.lambda.cwiseSqrt().cwiseInverse().cast<Complex>();
  const CMatrix s_r = inv_half.asDiagonal() * (mt.subspace.Z.adjoint() * rom.S * mt.subspace.Z) *
                      inv_half.asDiagonal();
  const RVector et = eigenvalues_desc(mt.T.assemble());
  const RVector es = eigenvalues_desc(s_r);
  CHECK(et.size() == mr);
  CHECK((et - es).cwiseAbs().maxCoeff() <= 1e-9 * es.cwiseAbs().maxCoeff());
}

TEST_CASE("orthonormalized snapshots", "[spectral]")
{
  const Grid g(17, 17);
  const Setup s(17, 3, 3, random_smooth_potential(g, 41));
  const SnapshotSet snaps = solve_snapshots(s.ops, s.k, Exec::Serial);
  const DataBlocks blocks = compute_blocks(extract_traces(g, snaps), s.quad, s.k);
  const RomMatrices rom = assemble_rom(blocks);
  const RomMatrices bulk = bulk_rom(s.ops, snaps);
  const BlockTridiagonal t = build_T_full(rom, blocks);
  const MatrixRoots mr = psd_sqrt(rom.M);
  const CMatrix v = t.Q.adjoint() * mr.inv_root * bulk.M * mr.inv_root * t.Q;
  CHECK((v - CMatrix::Identity(9, 9)).norm() <= 1e-8);
}

TEST_CASE("triu ordering and length", "[spectral]")
{
  CMatrix one(1, 1);
  one << Complex(2.0, 1.0);
  CHECK(triu(one)(0) == Complex(2.0, 1.0));

  CMatrix two(2, 2);
  two << 1.0, 2.0, 3.0, 4.0;
  const CVector v = triu(two);
  REQUIRE(v.size() == 3);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == 2.0);
  CHECK(v(2) == 4.0);

  CHECK(triu(CMatrix::Zero(64, 64)).size() == 2080);
  CHECK_THROWS_AS(triu(CMatrix::Zero(2, 3)), std::invalid_argument);
}
