// SPDX-License-Identifier: Apache-2.0

#include "ddrom/forward.hpp"

#include <cmath>
#include <exception>
#include <string>

namespace ddrom
{

WavenumberSet::WavenumberSet(std::vector<double> k) : k_(std::move(k))
{
  if (k_.empty())
  {
    throw std::invalid_argument("need at least one wavenumber");
  }
  if (!(k_.front() > 0.0))
  {
    throw std::invalid_argument("wavenumbers must be positive");
  }
  for (std::size_t j = 1; j < k_.size(); ++j)
  {
    if (!(k_[j] > k_[j - 1]))
    {
      throw std::invalid_argument("wavenumbers must be strictly increasing");
    }
  }
}

WavenumberSet WavenumberSet::arithmetic(double offset, double spacing, Index n)
{
  std::vector<double> k;
  for (Index j = 1; j <= n; ++j)
  {
    k.push_back(offset + spacing * static_cast<double>(j));
  }
  return WavenumberSet(std::move(k));
}

FactorizedSystem::FactorizedSystem(const DiscreteOperators &ops, double k)
  : k_(k), mass_(ops.mass.cast<Complex>()), boundary_(ops.boundary.cast<Complex>())
{
  if (!(k > 0.0))
  {
    throw std::invalid_argument("wavenumber must be positive");
  }
  const RSparse real_part = ops.laplace + ops.potential - (k * k) * ops.mass;
  a_ = real_part.cast<Complex>() - (kImag * k) * boundary_;
  a_.makeCompressed();
  lu_.compute(a_);
  if (lu_.info() != Eigen::Success)
  {
    throw SolveError("sparse LU factorization failed: " + lu_.lastErrorMessage(), k, -1);
  }
}

CMatrix FactorizedSystem::solve(const CMatrix &rhs) const
{
  CMatrix x = lu_.solve(rhs);
  for (Index s = 0; s < rhs.cols(); ++s)
  {
    const double bnorm = rhs.col(s).norm();
    const double rnorm = (a_ * x.col(s) - rhs.col(s)).norm();
    if (!std::isfinite(rnorm) || rnorm > 1e-10 * bnorm)
    {
      throw SolveError("residual " + std::to_string(rnorm) + " exceeds 1e-10 relative", k_, s);
    }
  }
  return x;
}

CMatrix FactorizedSystem::derivative_rhs(const CMatrix &u) const
{
  return (2.0 * k_) * (mass_ * u) + kImag * (boundary_ * u);
}

CVector solve_wavefield(const DiscreteOperators &ops, double k, Index source)
{
  if (source < 0 || source >= ops.num_sources())
  {
    throw std::out_of_range("source index " + std::to_string(source) + " out of range");
  }
  FactorizedSystem sys(ops, k);
  return sys.solve(ops.sources.col(source).cast<Complex>());
}

CVector solve_derivative(const DiscreteOperators &ops, double k, const CVector &u)
{
  FactorizedSystem sys(ops, k);
  return sys.solve(sys.derivative_rhs(u));
}

CMatrix SnapshotSet::stacked() const
{
  const Index n = num_wavenumbers();
  const Index m = num_sources();
  CMatrix all(u.front().rows(), n * m);
  for (Index j = 0; j < n; ++j)
  {
    all.middleCols(j * m, m) = u[static_cast<std::size_t>(j)];
  }
  return all;
}

namespace
{

void solve_one(const DiscreteOperators &ops, double k, DerivativeMode mode, double delta,
               CMatrix &u, CMatrix &w)
{
  const CMatrix rhs = ops.sources.cast<Complex>();
  FactorizedSystem sys(ops, k);
  u = sys.solve(rhs);
  if (mode == DerivativeMode::Exact)
  {
    w = sys.solve(sys.derivative_rhs(u));
  }
  else
  {
    const CMatrix up = FactorizedSystem(ops, k + delta).solve(rhs);
    const CMatrix um = FactorizedSystem(ops, k - delta).solve(rhs);
    w = (up - um) / (2.0 * delta);
  }
}

}  // namespace

SnapshotSet solve_snapshots(const DiscreteOperators &ops, const WavenumberSet &k, Exec exec,
                            DerivativeMode mode, double delta)
{
  const Index n = k.size();
  SnapshotSet snap;
  snap.u.resize(static_cast<std::size_t>(n));
  snap.w.resize(static_cast<std::size_t>(n));
  if (exec == Exec::Serial)
  {
    for (Index j = 0; j < n; ++j)
    {
      solve_one(ops, k[j], mode, delta, snap.u[static_cast<std::size_t>(j)],
                snap.w[static_cast<std::size_t>(j)]);
    }
    return snap;
  }

  // Exceptions must not escape an OpenMP region; collect the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (Index j = 0; j < n; ++j)
  {
    try
    {
      solve_one(ops, k[j], mode, delta, snap.u[static_cast<std::size_t>(j)],
                snap.w[static_cast<std::size_t>(j)]);
    }
    catch (...)
    {
#pragma omp critical(ddrom_snapshot_failure)
      if (!failure)
      {
        failure = std::current_exception();
      }
    }
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
  return snap;
}

CMatrix restrict_to_boundary(const Grid &grid, const CMatrix &field)
{
  CMatrix trace(grid.num_boundary(), field.cols());
  const auto &bnd = grid.boundary();
  for (Index b = 0; b < grid.num_boundary(); ++b)
  {
    trace.row(b) = field.row(bnd[static_cast<std::size_t>(b)].node);
  }
  return trace;
}

TraceSet extract_traces(const Grid &grid, const SnapshotSet &snapshots)
{
  TraceSet traces;
  for (Index j = 0; j < snapshots.num_wavenumbers(); ++j)
  {
    traces.phi.push_back(restrict_to_boundary(grid, snapshots.u[static_cast<std::size_t>(j)]));
    traces.dphi.push_back(restrict_to_boundary(grid, snapshots.w[static_cast<std::size_t>(j)]));
  }
  return traces;
}

}  // namespace ddrom
