// SPDX-License-Identifier: Apache-2.0

#include "ddrom/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <omp.h>

namespace ddrom
{

namespace
{

using Local = Eigen::Matrix4d;
using Triplet = Eigen::Triplet<double>;

// 2-point Gauss rule on [0,1].
constexpr double kGaussLo = 0.5 - 0.28867513459481288225;
constexpr double kGaussHi = 0.5 + 0.28867513459481288225;
constexpr std::array<double, 2> kGaussPts{kGaussLo, kGaussHi};

// Q1 shape functions on the reference square, counterclockwise from (0,0).
Eigen::Vector4d shape(double xi, double eta)
{
  return {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
}

Eigen::Vector4d shape_dxi(double eta)
{
  return {-(1 - eta), 1 - eta, eta, -eta};
}

Eigen::Vector4d shape_deta(double xi)
{
  return {-(1 - xi), -xi, xi, 1 - xi};
}

Local local_laplace(double hx, double hy)
{
  Local a = Local::Zero();
  for (double xi : kGaussPts)
  {
    for (double eta : kGaussPts)
    {
      const Eigen::Vector4d gx = shape_dxi(eta) / hx;
      const Eigen::Vector4d gy = shape_deta(xi) / hy;
      a += 0.25 * hx * hy * (gx * gx.transpose() + gy * gy.transpose());
    }
  }
  return a;
}

// Weighted mass: int w N_a N_b with w bilinear from corner values.
Local local_weighted_mass(double hx, double hy, const Eigen::Vector4d &corner_weight)
{
  Local a = Local::Zero();
  for (double xi : kGaussPts)
  {
    for (double eta : kGaussPts)
    {
      const Eigen::Vector4d n = shape(xi, eta);
      const double w = corner_weight.dot(n);
      a += 0.25 * hx * hy * w * (n * n.transpose());
    }
  }
  return a;
}

template <class LocalFn>
void scatter(const Grid &grid, Index e, const LocalFn &local, std::vector<Triplet> &out)
{
  const auto nodes = grid.element(e);
  const Local a = local(e);
  for (int r = 0; r < 4; ++r)
  {
    for (int c = 0; c < 4; ++c)
    {
      if (a(r, c) != 0.0)
      {
        out.emplace_back(nodes[r], nodes[c], a(r, c));
      }
    }
  }
}

// Element loop. The parallel variant gives each thread a contiguous static
// chunk and concatenates in thread order, so the triplet sequence matches the
// serial loop exactly.
template <class LocalFn>
RSparse assemble_elements(const Grid &grid, const LocalFn &local, Exec exec)
{
  const Index ne = grid.num_elements();
  std::vector<Triplet> triplets;
  if (exec == Exec::Serial)
  {
    triplets.reserve(static_cast<std::size_t>(16 * ne));
    for (Index e = 0; e < ne; ++e)
    {
      scatter(grid, e, local, triplets);
    }
  }
  else
  {
    std::vector<std::vector<Triplet>> per_thread(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
      auto &mine = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
      for (Index e = 0; e < ne; ++e)
      {
        scatter(grid, e, local, mine);
      }
    }
    for (auto &chunk : per_thread)
    {
      triplets.insert(triplets.end(), chunk.begin(), chunk.end());
    }
  }
  RSparse a(grid.num_nodes(), grid.num_nodes());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

}  // namespace

SourceSpec SourceSpec::top_edge(Index m, double gap)
{
  if (m < 1)
  {
    throw std::invalid_argument("need at least one source");
  }
  if (gap < 0.0)
  {
    throw std::invalid_argument("source gap must be non-negative");
  }
  SourceSpec spec;
  for (Index s = 1; s <= m; ++s)
  {
    const double md = static_cast<double>(m);
    spec.segments.push_back({(static_cast<double>(s) - 1) / md + gap, static_cast<double>(s) / md - gap});
  }
  return spec;
}

RSparse assemble_laplace(const Grid &grid, Exec exec)
{
  const Local a = local_laplace(grid.hx(), grid.hy());
  return assemble_elements(grid, [&a](Index) { return a; }, exec);
}

RSparse assemble_mass(const Grid &grid, Exec exec)
{
  const Local a = local_weighted_mass(grid.hx(), grid.hy(), Eigen::Vector4d::Ones());
  return assemble_elements(grid, [&a](Index) { return a; }, exec);
}

RSparse assemble_potential(const Grid &grid, const PotentialField &q, Exec exec)
{
  if (q.values.size() != grid.num_nodes())
  {
    throw std::invalid_argument("potential has " + std::to_string(q.values.size()) +
                                " values for " + std::to_string(grid.num_nodes()) + " nodes");
  }
  const double hx = grid.hx();
  const double hy = grid.hy();
  auto local = [&](Index e) {
    const auto nodes = grid.element(e);
    const Eigen::Vector4d qc{q.values[nodes[0]], q.values[nodes[1]], q.values[nodes[2]],
                             q.values[nodes[3]]};
    return local_weighted_mass(hx, hy, qc);
  };
  return assemble_elements(grid, local, exec);
}

RSparse assemble_boundary_mass(const Grid &grid)
{
  std::vector<Triplet> triplets;
  const Index nb = grid.num_boundary();
  const auto &bnd = grid.boundary();
  for (Index b = 0; b < nb; ++b)
  {
    const Index p = bnd[b].node;
    const Index q = bnd[(b + 1) % nb].node;
    const double len = grid.boundary_edge_length(b);
    triplets.emplace_back(p, p, len / 3.0);
    triplets.emplace_back(q, q, len / 3.0);
    triplets.emplace_back(p, q, len / 6.0);
    triplets.emplace_back(q, p, len / 6.0);
  }
  RSparse a(grid.num_nodes(), grid.num_nodes());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

RMatrix assemble_sources(const Grid &grid, const SourceSpec &sources)
{
  const Index m = sources.count();
  if (m < 1)
  {
    throw std::invalid_argument("need at least one source");
  }
  const double h = grid.hx();
  const Index top = grid.ny() - 1;
  RMatrix p = RMatrix::Zero(grid.num_nodes(), m);
  for (Index s = 0; s < m; ++s)
  {
    const auto [a, b] = sources.segments[static_cast<std::size_t>(s)];
    if (!(b > a) || a < 0.0 || b > 1.0)
    {
      throw std::invalid_argument("source " + std::to_string(s + 1) + " segment [" +
                                  std::to_string(a) + ", " + std::to_string(b) +
                                  "] is empty or leaves the top edge");
    }
    for (Index i = 0; i + 1 < grid.nx(); ++i)
    {
      const double x0 = static_cast<double>(i) * h;
      const double x1 = x0 + h;
      const double lo = std::max(a, x0);
      const double hi = std::min(b, x1);
      // Round-off slivers where a segment ends on a node are not support.
      if (hi - lo <= 1e-12 * h)
      {
        continue;
      }
      // Hat functions are linear on the element: midpoint rule is exact.
      const double mid = 0.5 * (lo + hi);
      p(grid.node(i, top), s) += (hi - lo) * (x1 - mid) / h;
      p(grid.node(i + 1, top), s) += (hi - lo) * (mid - x0) / h;
    }
  }
  for (Index r = 0; r < p.rows(); ++r)
  {
    Index owners = 0;
    for (Index s = 0; s < m; ++s)
    {
      owners += p(r, s) != 0.0 ? 1 : 0;
    }
    if (owners > 1)
    {
      throw std::invalid_argument("source supports overlap at node " + std::to_string(r));
    }
  }
  return p;
}

DiscreteOperators assemble_operators(const Grid &grid, const PotentialField &q,
                                     const SourceSpec &sources, Exec exec)
{
  DiscreteOperators ops;
  ops.laplace = assemble_laplace(grid, exec);
  ops.potential = assemble_potential(grid, q, exec);
  ops.mass = assemble_mass(grid, exec);
  ops.boundary = assemble_boundary_mass(grid);
  ops.sources = assemble_sources(grid, sources);
  return ops;
}

BoundaryQuadrature make_boundary_quadrature(const Grid &grid, const SourceSpec &sources,
                                            BoundaryRule rule)
{
  const Index nb = grid.num_boundary();
  const auto &bnd = grid.boundary();
  const RMatrix p = assemble_sources(grid, sources);
  const RSparse bfull = assemble_boundary_mass(grid);

  BoundaryQuadrature quad;
  quad.rule = rule;
  quad.pairing = RMatrix::Zero(nb, nb);
  quad.source_weights = RMatrix::Zero(nb, sources.count());

  for (int outer = 0; outer < bfull.outerSize(); ++outer)
  {
    for (RSparse::InnerIterator it(bfull, outer); it; ++it)
    {
      quad.pairing(grid.boundary_position(it.row()), grid.boundary_position(it.col())) =
        it.value();
    }
  }
  for (Index b = 0; b < nb; ++b)
  {
    quad.source_weights.row(b) = p.row(bnd[b].node);
  }

  if (rule == BoundaryRule::Lumped)
  {
    const RVector weights = quad.pairing.rowwise().sum();
    quad.pairing = weights.asDiagonal();
    quad.source_weights.setZero();
    for (Index b = 0; b < nb; ++b)
    {
      if (bnd[b].node / grid.nx() != grid.ny() - 1)
      {
        continue;
      }
      const double x = grid.coord(bnd[b].node).x;
      for (Index s = 0; s < sources.count(); ++s)
      {
        const auto seg = sources.segments[static_cast<std::size_t>(s)];
        if (x >= seg.begin && x <= seg.end)
        {
          quad.source_weights(b, s) = weights[b];
        }
      }
    }
  }
  return quad;
}

}  // namespace ddrom
