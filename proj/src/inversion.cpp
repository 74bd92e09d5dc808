// SPDX-License-Identifier: Apache-2.0

#include "ddrom/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ddrom
{

std::string to_string(ObjectiveKind kind)
{
  switch (kind)
  {
  case ObjectiveKind::S:
    return "S";
  case ObjectiveKind::T:
    return "T";
  case ObjectiveKind::FWI:
    return "FWI";
  }
  return "?";
}

ObjectiveKind parse_objective_kind(const std::string &name)
{
  if (name == "S")
  {
    return ObjectiveKind::S;
  }
  if (name == "T")
  {
    return ObjectiveKind::T;
  }
  if (name == "FWI")
  {
    return ObjectiveKind::FWI;
  }
  throw std::invalid_argument("unknown objective kind '" + name + "' (expected S, T or FWI)");
}

ForwardModel::ForwardModel(const Grid &grid, const SourceSpec &sources, const WavenumberSet &k,
                           const GaussianBasis &basis, BoundaryRule rule,
                           bool correct_quadrature, Exec exec)
  : grid_(grid), k_(k), basis_matrix_(basis.sample(grid)),
    base_(assemble_operators(grid, constant_potential(grid, 0.0), sources, exec)),
    quad_(make_boundary_quadrature(grid, sources, rule))
{
  if (correct_quadrature)
  {
    correction_ =
        estimate_quadrature_error(grid, sources, k, rule, constant_potential(grid, 0.0), exec);
  }
}

PotentialField ForwardModel::potential(const RVector &y) const
{
  if (y.size() != num_params())
  {
    throw std::invalid_argument("coefficient vector has length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(num_params()));
  }
  return PotentialField{basis_matrix_ * y};
}

DiscreteOperators ForwardModel::operators(const RVector &y, Exec exec) const
{
  DiscreteOperators ops = base_;
  ops.potential = assemble_potential(grid_, potential(y), exec);
  return ops;
}

DataBlocks ForwardModel::data(const RVector &y, Exec exec) const
{
  return synthesize_blocks(grid_, operators(y, exec), k_, quad_, exec);
}

RomMatrices ForwardModel::rom(const DataBlocks &blocks) const
{
  const RomMatrices raw = assemble_rom(blocks);
  return correction_ ? apply_correction(raw, *correction_) : raw;
}

Objective::Objective(ObjectiveKind kind, std::shared_ptr<const ForwardModel> model,
                     const DataBlocks &measured)
  : kind_(kind), model_(std::move(model)), measured_(symmetrize(measured))
{
  const Index n = measured_.n;
  const Index m = measured_.m;
  if (n != model_->wavenumbers().size() || m != model_->num_sources())
  {
    throw std::invalid_argument("measured data do not match the forward model dimensions");
  }
  for (Index j = 0; j < n; ++j)
  {
    if (measured_.k[static_cast<std::size_t>(j)] != model_->wavenumbers()[j])
    {
      throw std::invalid_argument("measured data were recorded at different wavenumbers");
    }
  }

  switch (kind_)
  {
  case ObjectiveKind::S:
  {
    s_meas_ = model_->rom(measured_).S;
    subspace_ = stable_subspace(s_meas_, m, n);
    rank_ = subspace_.r;
    if (rank_ == 0)
    {
      throw NotPositiveDefinite("measured stiffness matrix has no stable subspace",
                                subspace_.spectrum(m * n - 1));
    }
    project_ = rank_ < n;
    if (project_)
    {
      projector_ = subspace_.projector();
    }
    residual_size_ = m * n * (m * n + 1) / 2;
    break;
  }
  case ObjectiveKind::T:
  {
    MeasuredT mt = build_T_measured(model_->rom(measured_), measured_);
    subspace_ = std::move(mt.subspace);
    t_meas_ = mt.T.assemble();
    rank_ = subspace_.r;
    residual_size_ = m * rank_ * (m * rank_ + 1) / 2;
    break;
  }
  case ObjectiveKind::FWI:
    rank_ = n;
    residual_size_ = 4 * n * m * m;
    break;
  }
}

CVector Objective::residual_from_blocks(const DataBlocks &trial) const
{
  switch (kind_)
  {
  case ObjectiveKind::S:
  {
    const CMatrix diff = s_meas_ - model_->rom(trial).S;
    return triu(project_ ? CMatrix(projector_ * diff * projector_) : diff);
  }
  case ObjectiveKind::T:
    return triu(t_meas_ - build_T_trial(model_->rom(trial), trial, subspace_).assemble());
  case ObjectiveKind::FWI:
  {
    CVector r(residual_size_);
    Index t = 0;
    auto push = [&](const CMatrix &diff) {
      for (Index c = 0; c < diff.cols(); ++c)
      {
        for (Index row = 0; row < diff.rows(); ++row)
        {
          r(t++) = diff(row, c).real();
          r(t++) = diff(row, c).imag();
        }
      }
    };
    for (Index j = 0; j < measured_.n; ++j)
    {
      push(measured_.d_block(j) - trial.d_block(j));
      push(measured_.dkd_block(j) - trial.dkd_block(j));
    }
    return r;
  }
  }
  throw std::logic_error("unhandled objective kind");
}

CVector Objective::residual(const RVector &y, Exec exec) const
{
  return residual_from_blocks(model_->data(y, exec));
}

double Objective::value(const RVector &y, Exec exec) const
{
  try
  {
    const double v = residual(y, exec).squaredNorm();
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }
  catch (const NotPositiveDefinite &)
  {
  }
  catch (const LanczosBreakdown &)
  {
  }
  catch (const SolveError &)
  {
  }
  return std::numeric_limits<double>::infinity();
}

CMatrix jacobian(const Objective &objective, const RVector &y, const CVector &r0,
                 double fd_scale, Exec exec)
{
  const Index np = y.size();
  CMatrix j(r0.size(), np);
  auto column = [&](Index l) {
    const double h = fd_scale * (1.0 + std::abs(y(l)));
    RVector yp = y;
    yp(l) += h;
    j.col(l) = (objective.residual(yp, Exec::Serial) - r0) / h;
  };

  if (exec == Exec::Serial)
  {
    for (Index l = 0; l < np; ++l)
    {
      column(l);
    }
    return j;
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (Index l = 0; l < np; ++l)
  {
    try
    {
      column(l);
    }
    catch (...)
    {
#pragma omp critical(ddrom_jacobian_failure)
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
  return j;
}

double adaptive_mu(const CMatrix &j, double gamma)
{
  const Index np = j.cols();
  if (np == 0)
  {
    throw std::invalid_argument("Jacobian has no columns");
  }
  const RVector sv = Eigen::BDCSVD<CMatrix>(j).singularValues();
  const auto idx = std::max<Index>(1, static_cast<Index>(std::floor(gamma * static_cast<double>(np))));
  const double sigma = idx <= sv.size() ? sv(idx - 1) : 0.0;
  return sigma * sigma;
}

GNDirection gn_direction(const CMatrix &j, const CVector &r, double mu)
{
  const Index np = j.cols();
  const CMatrix a = j.adjoint() * j + mu * CMatrix::Identity(np, np);
  const CVector rhs = j.adjoint() * r;
  GNDirection dir;
  if (mu > 0.0)
  {
    dir.x = a.ldlt().solve(rhs);
  }
  else
  {
    dir.x = a.completeOrthogonalDecomposition().solve(rhs);
  }
  dir.z = -dir.x.real();
  return dir;
}

LineSearchResult line_search(const std::function<double(double)> &phi, double f0,
                             double alpha_max, Index samples, Index golden_iters)
{
  if (!(alpha_max > 0.0) || samples < 1)
  {
    throw std::invalid_argument("line search needs alpha_max > 0 and at least one sample");
  }
  LineSearchResult best{0.0, f0, 0};
  auto eval = [&](double a) {
    double v = phi(a);
    ++best.evaluations;
    if (std::isnan(v))
    {
      v = std::numeric_limits<double>::infinity();
    }
    if (v < best.value)
    {
      best.value = v;
      best.alpha = a;
    }
    return v;
  };

  const double step = alpha_max / static_cast<double>(samples);
  Index ib = 0;
  double fb = f0;
  for (Index i = 1; i <= samples; ++i)
  {
    const double v = eval(step * static_cast<double>(i));
    if (v < fb)
    {
      fb = v;
      ib = i;
    }
  }

  double lo = step * static_cast<double>(std::max<Index>(ib - 1, 0));
  double hi = step * static_cast<double>(std::min(ib + 1, samples));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  for (Index it = 0; it < golden_iters; ++it)
  {
    if (fc < fd)
    {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = eval(c);
    }
    else
    {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = eval(d);
    }
  }
  return best;
}

void GNConfig::validate(Index num_params) const
{
  if (y0.size() != num_params)
  {
    throw std::invalid_argument("initial guess has length " + std::to_string(y0.size()) +
                                ", expected " + std::to_string(num_params));
  }
  if (!(gamma > 0.0 && gamma < 1.0))
  {
    throw std::invalid_argument("gamma must lie in (0, 1)");
  }
  if (!(alpha_max > 0.0))
  {
    throw std::invalid_argument("alpha_max must be positive");
  }
  if (!(fd_scale > 0.0))
  {
    throw std::invalid_argument("finite-difference scale must be positive");
  }
  if (n_iter < 0 || line_samples < 1 || golden_iters < 0)
  {
    throw std::invalid_argument("iteration counts must be non-negative");
  }
}

GNResult gauss_newton(const Objective &objective, const GNConfig &cfg,
                      const std::function<void(const IterationRecord &)> &on_iter)
{
  cfg.validate(objective.model().num_params());
  GNResult res;
  res.y = cfg.y0;
  CVector r = objective.residual(res.y, cfg.exec);
  double f = r.squaredNorm();

  auto record = [&](const IterationRecord &rec) {
    res.log.push_back(rec);
    if (on_iter)
    {
      on_iter(rec);
    }
  };
  record({0, f, 0.0, 0.0, 0.0});

  for (Index i = 1; i <= cfg.n_iter; ++i)
  {
    const CMatrix j = jacobian(objective, res.y, r, cfg.fd_scale, cfg.exec);
    const double mu = adaptive_mu(j, cfg.gamma);
    const GNDirection dir = gn_direction(j, r, mu);
    const RVector y = res.y;
    const auto phi = [&](double a) {
      return objective.value(y + a * dir.z, cfg.exec);
    };
    const LineSearchResult ls = line_search(phi, f, cfg.alpha_max, cfg.line_samples,
                                            cfg.golden_iters);
    if (ls.alpha == 0.0)
    {
      res.stagnated = true;
      record({i, f, mu, 0.0, dir.z.norm()});
      break;
    }
    res.y = y + ls.alpha * dir.z;
    r = objective.residual(res.y, cfg.exec);
    f = r.squaredNorm();
    record({i, f, mu, ls.alpha, dir.z.norm()});
  }
  return res;
}

}  // namespace ddrom
