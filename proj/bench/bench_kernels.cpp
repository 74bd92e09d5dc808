// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels against their OpenMP versions. The second argument
// of every benchmark selects the variant: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "ddrom/inversion.hpp"

using namespace ddrom;

namespace
{

Exec variant(const benchmark::State &state)
{
  return state.range(1) == 0 ? Exec::Serial : Exec::Parallel;
}

PotentialField bumpy(const Grid &g)
{
  PotentialField q{RVector(g.num_nodes())};
  for (Index p = 0; p < g.num_nodes(); ++p)
  {
    const Point x = g.coord(p);
    q.values(p) = 30.0 * std::exp(-((x.x - 0.4) * (x.x - 0.4) + (x.y - 0.6) * (x.y - 0.6)) / 0.02);
  }
  return q;
}

void BM_AssemblePotential(benchmark::State &state)
{
  const Grid g(state.range(0), state.range(0));
  const PotentialField q = bumpy(g);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(assemble_potential(g, q, variant(state)));
  }
}

void BM_AssembleLaplaceMass(benchmark::State &state)
{
  const Grid g(state.range(0), state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(assemble_laplace(g, variant(state)));
    benchmark::DoNotOptimize(assemble_mass(g, variant(state)));
  }
}

void BM_Snapshots(benchmark::State &state)
{
  const Grid g(state.range(0), state.range(0));
  const DiscreteOperators ops = assemble_operators(g, bumpy(g), SourceSpec::top_edge(4, g.hx()));
  const WavenumberSet k = WavenumberSet::arithmetic(4.0, 2.0, 4);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_snapshots(ops, k, variant(state)));
  }
}

void BM_Jacobian(benchmark::State &state)
{
  const Grid g(state.range(0), state.range(0));
  const auto model = std::make_shared<const ForwardModel>(
      g, SourceSpec::top_edge(4, g.hx()), WavenumberSet::arithmetic(4.0, 2.0, 4), GaussianBasis(4),
      BoundaryRule::Consistent, false);
  const RVector y_true = RVector::Constant(model->num_params(), 5.0);
  const Objective obj(ObjectiveKind::S, model, model->data(y_true));
  const RVector y = RVector::Zero(model->num_params());
  const CVector r0 = obj.residual(y);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(jacobian(obj, y, r0, 1e-4, variant(state)));
  }
}

}  // namespace

BENCHMARK(BM_AssemblePotential)->ArgsProduct({{33, 101}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleLaplaceMass)->ArgsProduct({{33, 101}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Snapshots)->ArgsProduct({{33, 65}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Jacobian)->ArgsProduct({{17, 33}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
