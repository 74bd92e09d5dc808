// SPDX-License-Identifier: Apache-2.0

#include "ddrom/grid.hpp"

#include <cmath>
#include <string>

namespace ddrom
{

Grid::Grid(Index nx, Index ny) : nx_(nx), ny_(ny)
{
  if (nx < 3 || ny < 3)
  {
    throw std::invalid_argument("grid needs at least 3 nodes per axis, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  }
  hx_ = 1.0 / static_cast<double>(nx - 1);
  hy_ = 1.0 / static_cast<double>(ny - 1);

  boundary_.reserve(static_cast<std::size_t>(2 * (nx + ny) - 4));
  for (Index i = 0; i < nx; ++i)
  {
    boundary_.push_back({node(i, 0), Side::Bottom});
  }
  for (Index j = 1; j < ny; ++j)
  {
    boundary_.push_back({node(nx - 1, j), Side::Right});
  }
  for (Index i = nx - 2; i >= 0; --i)
  {
    boundary_.push_back({node(i, ny - 1), Side::Top});
  }
  for (Index j = ny - 2; j >= 1; --j)
  {
    boundary_.push_back({node(0, j), Side::Left});
  }

  boundary_pos_.assign(static_cast<std::size_t>(num_nodes()), -1);
  for (std::size_t b = 0; b < boundary_.size(); ++b)
  {
    boundary_pos_[boundary_[b].node] = static_cast<Index>(b);
  }
}

std::array<Index, 4> Grid::element(Index e) const
{
  const Index i = e % (nx_ - 1);
  const Index j = e / (nx_ - 1);
  return {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
}

double Grid::boundary_edge_length(Index b) const
{
  const Index nb = num_boundary();
  const Point p = coord(boundary_[b].node);
  const Point q = coord(boundary_[(b + 1) % nb].node);
  return std::abs(p.x - q.x) + std::abs(p.y - q.y);
}

}  // namespace ddrom
