// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/SVD>

#include "ddrom/inversion.hpp"
#include "support/oracles.hpp"

using namespace ddrom;
using namespace ddrom::testing;

namespace
{

std::shared_ptr<const ForwardModel> small_model(Index basis_n = 3)
{
  const Grid g(17, 17);
  return std::make_shared<const ForwardModel>(g, SourceSpec::top_edge(3, g.hx()),
                                              WavenumberSet::arithmetic(4.0, 2.0, 3),
                                              GaussianBasis(basis_n), BoundaryRule::Consistent,
                                              false, Exec::Serial);
}

RVector sample_y(Index np, unsigned seed, double scale)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, scale);
  RVector y(np);
  for (Index l = 0; l < np; ++l)
  {
    y(l) = u(rng);
  }
  return y;
}

}  // namespace

TEST_CASE("objective kinds parse", "[inversion]")
{
  CHECK(parse_objective_kind("S") == ObjectiveKind::S);
  CHECK(parse_objective_kind("T") == ObjectiveKind::T);
  CHECK(parse_objective_kind("FWI") == ObjectiveKind::FWI);
  CHECK(to_string(ObjectiveKind::FWI) == "FWI");
  CHECK_THROWS_AS(parse_objective_kind("fwi"), std::invalid_argument);
}

TEST_CASE("residuals vanish at the truth", "[inversion]")
{
  const auto model = small_model();
  const RVector zero = RVector::Zero(model->num_params());
  const DataBlocks at_zero = model->data(zero, Exec::Serial);
  for (ObjectiveKind kind : {ObjectiveKind::S, ObjectiveKind::T, ObjectiveKind::FWI})
  {
    const Objective obj(kind, model, at_zero);
    CHECK(obj.retained_rank() == 3);
    CHECK(obj.residual(zero, Exec::Serial).norm() <= 1e-10);
  }

  RVector y = RVector::Zero(model->num_params());
  y(4) = 30.0;
  const DataBlocks measured = model->data(y, Exec::Serial);
  const Objective s(ObjectiveKind::S, model, measured);
  const CMatrix s_meas = model->rom(symmetrize(measured)).S;
  CHECK(s.residual(y, Exec::Serial).norm() <= 1e-6 * triu(s_meas).norm());
  const Objective t(ObjectiveKind::T, model, measured);
  CHECK(t.residual(y, Exec::Serial).norm() <= 1e-8 * triu(build_T_full(model->rom(measured), measured).assemble()).norm());
  CHECK(s.residual(zero, Exec::Serial).norm() > 1e-3 * triu(s_meas).norm());
}

TEST_CASE("objective rejects data from a different setup", "[inversion]")
{
  const auto model = small_model();
  const DataBlocks wrong_n = DataBlocks::zeros(2, 3);
  CHECK_THROWS_AS(Objective(ObjectiveKind::FWI, model, wrong_n), std::invalid_argument);
  DataBlocks wrong_k = model->data(RVector::Zero(model->num_params()), Exec::Serial);
  wrong_k.k[1] += 0.5;
  CHECK_THROWS_AS(Objective(ObjectiveKind::FWI, model, wrong_k), std::invalid_argument);
}

TEST_CASE("FWI residual matches a direct block-difference sum", "[inversion]")
{
  const auto model = small_model();
  const RVector y_meas = sample_y(model->num_params(), 3, 20.0);
  const RVector y = sample_y(model->num_params(), 4, 20.0);
  const DataBlocks measured = symmetrize(model->data(y_meas, Exec::Serial));
  const DataBlocks trial = model->data(y, Exec::Serial);
  const Objective obj(ObjectiveKind::FWI, model, measured);
  const CVector r = obj.residual(y, Exec::Serial);
  CHECK(r.size() == obj.residual_size());
  CHECK(r.imag().cwiseAbs().maxCoeff() == 0.0);

  double oracle = 0.0;
  for (Index j = measured.n - 1; j >= 0; --j)
  {
    for (const auto *fam : {&measured.d, &measured.dkd})
    {
      const auto &other = fam == &measured.d ? trial.d : trial.dkd;
      const CMatrix diff = (*fam)[static_cast<std::size_t>(j)] - other[static_cast<std::size_t>(j)];
      for (Index rr = diff.rows() - 1; rr >= 0; --rr)
      {
        for (Index cc = diff.cols() - 1; cc >= 0; --cc)
        {
          oracle += std::norm(diff(rr, cc));
        }
      }
    }
  }
  CHECK(std::abs(r.squaredNorm() - oracle) <= 1e-12 * oracle);
  CHECK(std::abs(obj.value(y, Exec::Serial) - oracle) <= 1e-12 * oracle);
}

TEST_CASE("finite-difference Jacobian is directionally consistent", "[inversion]")
{
  const auto model = small_model();
  const Index np = model->num_params();
  const DataBlocks measured = model->data(sample_y(np, 10, 30.0), Exec::Serial);
  const Objective obj(ObjectiveKind::S, model, measured);
  const RVector y = sample_y(np, 11, 30.0);
  const CVector r0 = obj.residual(y, Exec::Serial);
  const RVector v = sample_y(np, 12, 1.0).normalized();

  const double delta = 1e-4 * (1.0 + y.cwiseAbs().maxCoeff());
  const CVector central = (obj.residual(y + delta * v, Exec::Serial) -
                           obj.residual(y - delta * v, Exec::Serial)) / (2.0 * delta);

  const CMatrix j = jacobian(obj, y, r0, 1e-4, Exec::Serial);
  CHECK(j.rows() == obj.residual_size());
  const double err = (j * v - central).norm() / central.norm();
  INFO("relative error " << err);
  CHECK(err <= 1e-4);

  // forward differences are first order in the step
  const double e1 = (jacobian(obj, y, r0, 2e-3, Exec::Serial) * v - central).norm();
  const double e2 = (jacobian(obj, y, r0, 1e-3, Exec::Serial) * v - central).norm();
  INFO("ratio " << e1 / e2);
  CHECK(e1 / e2 == Catch::Approx(2.0).margin(0.3));

  CHECK(jacobian(obj, y, r0, 1e-4, Exec::Parallel) == j);
}

TEST_CASE("adaptive mu matches a dense SVD oracle", "[inversion]")
{
  const CMatrix j = random_complex(40, 12, 6);
  const RVector sv = Eigen::JacobiSVD<CMatrix>(j).singularValues();
  for (double gamma : {0.1, 0.2, 0.4, 0.9})
  {
    const auto idx = std::max<Index>(1, static_cast<Index>(std::floor(gamma * 12.0)));
    const double oracle = sv(idx - 1) * sv(idx - 1);
    CHECK(std::abs(adaptive_mu(j, gamma) - oracle) <= 1e-12 * oracle);
  }
  // index clamped to the largest singular value
  CHECK(std::abs(adaptive_mu(j, 0.05) - sv(0) * sv(0)) <= 1e-12 * sv(0) * sv(0));
  // more parameters than residuals: missing singular values are zero
  CHECK(adaptive_mu(random_complex(3, 10, 7), 0.5) == 0.0);
}

TEST_CASE("Gauss-Newton direction solves the damped normal equations", "[inversion]")
{
  const CMatrix j = random_complex(30, 8, 8);
  const CVector r = random_complex(30, 1, 9);
  const double mu = adaptive_mu(j, 0.2);
  const GNDirection dir = gn_direction(j, r, mu);
  const CVector lhs = j.adjoint() * j * dir.x + mu * dir.x;
  const CVector rhs = j.adjoint() * r;
  CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
  CHECK((dir.z + dir.x.real()).norm() == 0.0);

  const GNDirection plain = gn_direction(j, r, 0.0);
  CHECK((j.adjoint() * (j * plain.x - r)).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("line search toys", "[inversion]")
{
  const auto quad = [](double a) { return (a - 1.0) * (a - 1.0); };
  const LineSearchResult q = line_search(quad, 1.0, 3.0);
  CHECK(q.alpha >= 0.9);
  CHECK(q.alpha <= 1.1);
  CHECK(q.value <= 1.0);

  const auto descent = [](double a) { return 5.0 - a; };
  CHECK(line_search(descent, 5.0, 3.0).alpha > 0.0);

  const auto ascent = [](double a) { return 5.0 + a; };
  const LineSearchResult up = line_search(ascent, 5.0, 3.0);
  CHECK(up.alpha == 0.0);
  CHECK(up.value == 5.0);

  const auto broken = [](double a) { return a > 0.5 ? std::nan("") : 2.0 - a; };
  const LineSearchResult b = line_search(broken, 2.0, 3.0);
  CHECK(b.alpha > 0.0);
  CHECK(b.alpha <= 0.5);

  CHECK_THROWS_AS(line_search(quad, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("Gauss-Newton configuration is validated", "[inversion]")
{
  GNConfig cfg;
  cfg.y0 = RVector::Zero(4);
  CHECK_NOTHROW(cfg.validate(4));
  CHECK_THROWS_AS(cfg.validate(5), std::invalid_argument);
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(cfg.validate(4), std::invalid_argument);
  cfg.gamma = 0.2;
  cfg.alpha_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(4), std::invalid_argument);
}

TEST_CASE("Gauss-Newton moves toward a single basis bump", "[inversion][gn]")
{
  const auto model = small_model();
  const Index np = model->num_params();
  RVector y_true = RVector::Zero(np);
  y_true(4) = 25.0;
  const Objective obj(ObjectiveKind::S, model, model->data(y_true, Exec::Serial));

  GNConfig cfg;
  cfg.y0 = RVector::Zero(np);
  cfg.exec = Exec::Serial;
  std::vector<IterationRecord> streamed;
  const GNResult res = gauss_newton(obj, cfg, [&](const IterationRecord &r) { streamed.push_back(r); });

  REQUIRE(!res.log.empty());
  CHECK(streamed.size() == res.log.size());
  CHECK(res.log.front().iter == 0);
  CHECK(res.log.front().objective == Catch::Approx(obj.value(cfg.y0, Exec::Serial)));
  for (std::size_t i = 1; i < res.log.size(); ++i)
  {
    CHECK(res.log[i].objective <= res.log[i - 1].objective);
    CHECK(res.log[i].mu >= 0.0);
    CHECK(res.log[i].alpha >= 0.0);
    CHECK(res.log[i].alpha <= cfg.alpha_max);
  }
  INFO("final y " << res.y.transpose());
  CHECK(res.log.back().objective <= 0.25 * res.log.front().objective);
  Index peak = 0;
  res.y.cwiseAbs().maxCoeff(&peak);
  CHECK(peak == 4);
  CHECK(res.y(4) > 5.0);
  CHECK(res.y(4) < 25.0 + 2.5);
}
