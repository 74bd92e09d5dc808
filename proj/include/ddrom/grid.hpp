// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "ddrom/types.hpp"

namespace ddrom
{

enum class Side
{
  Bottom,
  Right,
  Top,
  Left
};

struct BoundaryNode
{
  Index node;
  Side side;
};

struct Point
{
  double x;
  double y;
};

/// Uniform tensor-product grid on the unit square [0,1]^2.
///
/// Nodes are numbered row by row, node(i, j) = j * nx + i with i along x1 and
/// j along x2. The boundary list walks the perimeter counterclockwise from the
/// origin; each corner is tagged with the side on which it is first visited.
/// Consecutive boundary entries (cyclically) form the boundary edges.
class Grid
{
public:
  Grid(Index nx, Index ny);

  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  Index num_nodes() const { return nx_ * ny_; }
  Index num_elements() const { return (nx_ - 1) * (ny_ - 1); }
  Index num_boundary() const { return static_cast<Index>(boundary_.size()); }

  Index node(Index i, Index j) const { return j * nx_ + i; }
  Point coord(Index node) const
  {
    return {static_cast<double>(node % nx_) * hx_, static_cast<double>(node / nx_) * hy_};
  }

  /// Element e covers [x_i, x_{i+1}] x [y_j, y_{j+1}], nodes counterclockwise
  /// from the lower-left corner.
  std::array<Index, 4> element(Index e) const;

  const std::vector<BoundaryNode> &boundary() const { return boundary_; }

  /// Position of a node in the boundary list, or -1 for interior nodes.
  Index boundary_position(Index node) const { return boundary_pos_[node]; }

  /// Length of the boundary edge joining boundary entries b and b+1 (cyclic).
  double boundary_edge_length(Index b) const;

private:
  Index nx_;
  Index ny_;
  double hx_;
  double hy_;
  std::vector<BoundaryNode> boundary_;
  std::vector<Index> boundary_pos_;
};

/// Node-sampled real potential q(x).
struct PotentialField
{
  RVector values;
};

inline PotentialField constant_potential(const Grid &grid, double value)
{
  return {RVector::Constant(grid.num_nodes(), value)};
}

}  // namespace ddrom
