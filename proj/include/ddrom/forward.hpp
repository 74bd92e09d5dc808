// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseLU>

#include "ddrom/grid.hpp"
#include "ddrom/operators.hpp"

namespace ddrom
{

/// Strictly increasing positive sampling wavenumbers k_1 < ... < k_n.
class WavenumberSet
{
public:
  explicit WavenumberSet(std::vector<double> k);

  /// k_j = offset + spacing * j for j = 1..n.
  static WavenumberSet arithmetic(double offset, double spacing, Index n);

  Index size() const { return static_cast<Index>(k_.size()); }
  double operator[](Index j) const { return k_[static_cast<std::size_t>(j)]; }
  const std::vector<double> &values() const { return k_; }
  double max() const { return k_.back(); }

private:
  std::vector<double> k_;
};

/// LU factorization of A(k) = K - k^2 M - i k B, where K = K_lap + K_pot.
///
/// The weak form pairs conj(u) with the test function, so in nodal
/// coefficients the impedance term enters with a minus sign. One factorization
/// serves every source and the wavenumber-derivative solves.
class FactorizedSystem
{
public:
  FactorizedSystem(const DiscreteOperators &ops, double k);

  double wavenumber() const { return k_; }
  const CSparse &matrix() const { return a_; }

  /// Solves A X = rhs column by column and enforces
  /// ||A x - b|| <= 1e-10 ||b|| for every column.
  CMatrix solve(const CMatrix &rhs) const;

  /// Right-hand side of the derivative problem, 2k M u + i B u.
  CMatrix derivative_rhs(const CMatrix &u) const;

private:
  double k_;
  CSparse mass_;
  CSparse boundary_;
  CSparse a_;
  Eigen::SparseLU<CSparse, Eigen::COLAMDOrdering<int>> lu_;
};

CVector solve_wavefield(const DiscreteOperators &ops, double k, Index source);
CVector solve_derivative(const DiscreteOperators &ops, double k, const CVector &u);

enum class DerivativeMode
{
  Exact,             // solve the derivative boundary value problem
  CentralDifference  // (u(k + delta) - u(k - delta)) / (2 delta)
};

/// Wavefields u_j and k-derivatives w_j, each stored nodes x m.
struct SnapshotSet
{
  std::vector<CMatrix> u;
  std::vector<CMatrix> w;

  Index num_wavenumbers() const { return static_cast<Index>(u.size()); }
  Index num_sources() const { return u.empty() ? 0 : u.front().cols(); }

  /// Column-blocked snapshot matrix [u_1, ..., u_n], nodes x mn.
  CMatrix stacked() const;
};

/// Independent per-wavenumber solves. The Parallel variant distributes the
/// wavenumbers across OpenMP threads; results are identical to Serial.
SnapshotSet solve_snapshots(const DiscreteOperators &ops, const WavenumberSet &k,
                            Exec exec = Exec::Parallel,
                            DerivativeMode mode = DerivativeMode::Exact, double delta = 1e-3);

/// Boundary restrictions phi_j and d/dk phi_j, each stored nb x m in
/// Grid::boundary() order.
struct TraceSet
{
  std::vector<CMatrix> phi;
  std::vector<CMatrix> dphi;

  Index num_wavenumbers() const { return static_cast<Index>(phi.size()); }
  Index num_sources() const { return phi.empty() ? 0 : phi.front().cols(); }
};

TraceSet extract_traces(const Grid &grid, const SnapshotSet &snapshots);

CMatrix restrict_to_boundary(const Grid &grid, const CMatrix &field);

}  // namespace ddrom
