// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ddrom/grid.hpp"

namespace ddrom
{

/// Isotropic Gaussian bumps exp(-|x - c_l|^2 / (2 w^2)) centered on a uniform
/// per_axis x per_axis lattice of cell midpoints ((a + 1/2) / per_axis).
class GaussianBasis
{
public:
  /// width <= 0 selects the default, half the lattice spacing.
  GaussianBasis(Index per_axis, double width = 0.0);

  Index size() const { return per_axis_ * per_axis_; }
  Index per_axis() const { return per_axis_; }
  double width() const { return width_; }
  Point center(Index l) const;

  double eval(Index l, Point x) const;

  /// Dense node-by-basis matrix; q = matrix * y.
  RMatrix sample(const Grid &grid) const;

private:
  Index per_axis_;
  double width_;
};

PotentialField eval_basis_potential(const GaussianBasis &basis, const RVector &y, const Grid &grid);

}  // namespace ddrom
