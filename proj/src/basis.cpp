// SPDX-License-Identifier: Apache-2.0

#include "ddrom/basis.hpp"

#include <cmath>
#include <string>

namespace ddrom
{

GaussianBasis::GaussianBasis(Index per_axis, double width) : per_axis_(per_axis)
{
  if (per_axis < 1)
  {
    throw std::invalid_argument("basis lattice needs at least one center per axis");
  }
  width_ = width > 0.0 ? width : 0.5 / static_cast<double>(per_axis);
}

Point GaussianBasis::center(Index l) const
{
  const double spacing = 1.0 / static_cast<double>(per_axis_);
  return {(static_cast<double>(l % per_axis_) + 0.5) * spacing,
          (static_cast<double>(l / per_axis_) + 0.5) * spacing};
}

double GaussianBasis::eval(Index l, Point x) const
{
  const Point c = center(l);
  const double r2 = (x.x - c.x) * (x.x - c.x) + (x.y - c.y) * (x.y - c.y);
  return std::exp(-r2 / (2.0 * width_ * width_));
}

RMatrix GaussianBasis::sample(const Grid &grid) const
{
  RMatrix phi(grid.num_nodes(), size());
  for (Index l = 0; l < size(); ++l)
  {
    for (Index v = 0; v < grid.num_nodes(); ++v)
    {
      phi(v, l) = eval(l, grid.coord(v));
    }
  }
  return phi;
}

PotentialField eval_basis_potential(const GaussianBasis &basis, const RVector &y, const Grid &grid)
{
  if (y.size() != basis.size())
  {
    throw std::invalid_argument("coefficient vector has length " + std::to_string(y.size()) +
                                ", basis has " + std::to_string(basis.size()) + " functions");
  }
  return {basis.sample(grid) * y};
}

}  // namespace ddrom
