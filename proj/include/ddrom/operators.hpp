// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ddrom/grid.hpp"
#include "ddrom/types.hpp"

namespace ddrom
{

/// Indicator source p_s = 1 on [begin, end] x {1} of the top edge, 0 elsewhere.
struct SourceSegment
{
  double begin;
  double end;
};

struct SourceSpec
{
  std::vector<SourceSegment> segments;

  Index count() const { return static_cast<Index>(segments.size()); }

  /// m sources, source s covering [(s-1)/m + gap, s/m - gap].
  static SourceSpec top_edge(Index m, double gap);
};

/// Sparse Galerkin matrices of the Q1 discretization. All matrices are real
/// symmetric; the complex system matrix is formed by the forward solver.
struct DiscreteOperators
{
  RSparse laplace;    // int grad f . grad g
  RSparse potential;  // int q f g
  RSparse mass;       // int f g
  RSparse boundary;   // int_{dOmega} f g
  RMatrix sources;    // column s: int_{dOmega} p_s g, one row per node

  RSparse stiffness() const { return laplace + potential; }
  Index num_sources() const { return sources.cols(); }
};

RSparse assemble_laplace(const Grid &grid, Exec exec = Exec::Parallel);
RSparse assemble_mass(const Grid &grid, Exec exec = Exec::Parallel);

/// Potential term with q interpolated bilinearly from nodal values and
/// integrated with 2x2 Gauss points per element.
RSparse assemble_potential(const Grid &grid, const PotentialField &q, Exec exec = Exec::Parallel);

/// Consistent P1 edge mass along the perimeter.
RSparse assemble_boundary_mass(const Grid &grid);

/// Exact integrals of the indicator sources against the boundary hat
/// functions. Throws if a segment is empty, leaves the top edge, or shares a
/// supporting node with another source.
RMatrix assemble_sources(const Grid &grid, const SourceSpec &sources);

DiscreteOperators assemble_operators(const Grid &grid, const PotentialField &q,
                                     const SourceSpec &sources, Exec exec = Exec::Parallel);

/// How boundary integrals of traces are evaluated by the data pipeline.
/// Consistent reuses the forward-assembly edge mass exactly; Lumped uses
/// nodal trapezoid weights and point-sampled sources, which deliberately
/// mismatches the bulk discretization.
enum class BoundaryRule
{
  Consistent,
  Lumped
};

/// Boundary pairing in trace coordinates (ordered by Grid::boundary()).
struct BoundaryQuadrature
{
  BoundaryRule rule = BoundaryRule::Consistent;
  RMatrix pairing;         // nb x nb, int conj(f) g over the boundary
  RMatrix source_weights;  // nb x m, int p_s g over the boundary
};

BoundaryQuadrature make_boundary_quadrature(const Grid &grid, const SourceSpec &sources,
                                            BoundaryRule rule);

}  // namespace ddrom
