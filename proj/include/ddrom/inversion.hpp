// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddrom/basis.hpp"
#include "ddrom/blocks.hpp"
#include "ddrom/rom.hpp"
#include "ddrom/spectral.hpp"

namespace ddrom
{

enum class ObjectiveKind
{
  S,
  T,
  FWI
};

std::string to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(const std::string &name);

/// Maps basis coefficients y to synthetic boundary data. Everything except the
/// potential term is assembled once.
class ForwardModel
{
public:
  ForwardModel(const Grid &grid, const SourceSpec &sources, const WavenumberSet &k,
               const GaussianBasis &basis, BoundaryRule rule, bool correct_quadrature,
               Exec exec = Exec::Parallel);

  const Grid &grid() const { return grid_; }
  const WavenumberSet &wavenumbers() const { return k_; }
  const BoundaryQuadrature &quadrature() const { return quad_; }
  const RMatrix &basis_matrix() const { return basis_matrix_; }
  const std::optional<QuadratureErrorEstimate> &correction() const { return correction_; }
  Index num_params() const { return basis_matrix_.cols(); }
  Index num_sources() const { return base_.num_sources(); }

  PotentialField potential(const RVector &y) const;
  DiscreteOperators operators(const RVector &y, Exec exec = Exec::Parallel) const;
  DataBlocks data(const RVector &y, Exec exec = Exec::Parallel) const;

  /// Data-driven ROM, corrected when a quadrature error estimate is held.
  RomMatrices rom(const DataBlocks &blocks) const;

private:
  Grid grid_;
  WavenumberSet k_;
  RMatrix basis_matrix_;
  DiscreteOperators base_;
  BoundaryQuadrature quad_;
  std::optional<QuadratureErrorEstimate> correction_;
};

/// Misfit between measured data and the model at y. The measured side is
/// built once, from DataBlocks only:
///   S:   Triu(P (S_meas - S(y)) P) with P the stable spectral projector of S_meas
///   T:   Triu(T_meas - T(y)) on the stable subspace of M_meas
///   FWI: Re and Im parts of d_j and dkd_j differences, stacked as a complex
///        vector with zero imaginary part
class Objective
{
public:
  Objective(ObjectiveKind kind, std::shared_ptr<const ForwardModel> model,
            const DataBlocks &measured);

  ObjectiveKind kind() const { return kind_; }
  const ForwardModel &model() const { return *model_; }
  Index residual_size() const { return residual_size_; }

  /// Retained block count r_S or r_M; n for FWI.
  Index retained_rank() const { return rank_; }
  const StableSubspace &subspace() const { return subspace_; }

  /// Throws SolveError, NotPositiveDefinite or LanczosBreakdown when the
  /// trial point cannot be evaluated.
  CVector residual(const RVector &y, Exec exec = Exec::Parallel) const;
  CVector residual_from_blocks(const DataBlocks &trial) const;

  /// Squared residual norm, +inf for a rejected trial point.
  double value(const RVector &y, Exec exec = Exec::Parallel) const;

private:
  ObjectiveKind kind_;
  std::shared_ptr<const ForwardModel> model_;
  DataBlocks measured_;
  StableSubspace subspace_;
  CMatrix s_meas_;
  CMatrix projector_;
  bool project_ = false;
  CMatrix t_meas_;
  Index rank_ = 0;
  Index residual_size_ = 0;
};

/// Forward-difference Jacobian, column l = (r(y + h_l e_l) - r0) / h_l with
/// h_l = fd_scale * (1 + |y_l|). Columns run on OpenMP threads in Parallel.
CMatrix jacobian(const Objective &objective, const RVector &y, const CVector &r0,
                 double fd_scale = 1e-4, Exec exec = Exec::Parallel);

/// (sigma_{floor(gamma N)})^2 from the singular values of J, zero-padded to N
/// and with the index clamped to at least 1.
double adaptive_mu(const CMatrix &j, double gamma);

struct GNDirection
{
  CVector x;  // (J^* J + mu I)^{-1} J^* r
  RVector z;  // -Re x
};

GNDirection gn_direction(const CMatrix &j, const CVector &r, double mu);

struct LineSearchResult
{
  double alpha = 0.0;
  double value = 0.0;
  Index evaluations = 0;
};

/// Samples alpha_i = i alpha_max / samples for i = 0..samples, then refines
/// the bracket around the best sample by golden section. Returns the best
/// point seen; alpha = 0 (value f0) is always a candidate.
LineSearchResult line_search(const std::function<double(double)> &phi, double f0,
                             double alpha_max, Index samples = 16, Index golden_iters = 12);

struct GNConfig
{
  RVector y0;
  Index n_iter = 10;
  double gamma = 0.2;
  double alpha_max = 3.0;
  double fd_scale = 1e-4;
  Index line_samples = 16;
  Index golden_iters = 12;
  Exec exec = Exec::Parallel;

  void validate(Index num_params) const;
};

struct IterationRecord
{
  Index iter = 0;
  double objective = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double step_norm = 0.0;
};

struct GNResult
{
  RVector y;
  std::vector<IterationRecord> log;  // entry 0 is the initial point
  bool stagnated = false;
};

/// Regularized Gauss-Newton. Stops early once the line search returns
/// alpha = 0, since every later iteration would repeat the same step.
GNResult gauss_newton(const Objective &objective, const GNConfig &cfg,
                      const std::function<void(const IterationRecord &)> &on_iter = {});

}  // namespace ddrom
