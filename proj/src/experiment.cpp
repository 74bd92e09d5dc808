// SPDX-License-Identifier: Apache-2.0

#include "ddrom/experiment.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace ddrom
{

double PhantomSpec::eval(Point x) const
{
  const double th = ridge_angle_deg * std::numbers::pi / 180.0;
  const double dx = x.x - ridge_x;
  const double dy = x.y - ridge_y;
  const double along = std::cos(th) * dx + std::sin(th) * dy;
  const double across = -std::sin(th) * dx + std::cos(th) * dy;
  const double ridge =
      ridge_amplitude * std::exp(-0.5 * (along * along / (ridge_length * ridge_length) +
                                         across * across / (ridge_width * ridge_width)));
  const double bx = x.x - bump_x;
  const double by = x.y - bump_y;
  const double bump =
      bump_amplitude * std::exp(-0.5 * (bx * bx + by * by) / (bump_radius * bump_radius));
  return ridge + bump;
}

PotentialField PhantomSpec::sample(const Grid &grid) const
{
  PotentialField q{RVector(grid.num_nodes())};
  for (Index v = 0; v < grid.num_nodes(); ++v)
  {
    q.values(v) = eval(grid.coord(v));
  }
  return q;
}

namespace
{

using Setter = std::function<void(ExperimentConfig &, const Json &)>;

template <class T>
Setter set(T ExperimentConfig::*member)
{
  return [member](ExperimentConfig &c, const Json &v) { c.*member = v.get<T>(); };
}

template <class T>
Setter set_phantom(T PhantomSpec::*member)
{
  return [member](ExperimentConfig &c, const Json &v) { c.phantom.*member = v.get<T>(); };
}

const std::map<std::string, Setter> &setters()
{
  static const std::map<std::string, Setter> table{
      {"nx", set(&ExperimentConfig::nx)},
      {"ny", set(&ExperimentConfig::ny)},
      {"k_offset", set(&ExperimentConfig::k_offset)},
      {"k_spacing", set(&ExperimentConfig::k_spacing)},
      {"n", set(&ExperimentConfig::n)},
      {"m", set(&ExperimentConfig::m)},
      {"source_gap", set(&ExperimentConfig::source_gap)},
      {"phantom_ridge_amplitude", set_phantom(&PhantomSpec::ridge_amplitude)},
      {"phantom_ridge_x", set_phantom(&PhantomSpec::ridge_x)},
      {"phantom_ridge_y", set_phantom(&PhantomSpec::ridge_y)},
      {"phantom_ridge_angle_deg", set_phantom(&PhantomSpec::ridge_angle_deg)},
      {"phantom_ridge_length", set_phantom(&PhantomSpec::ridge_length)},
      {"phantom_ridge_width", set_phantom(&PhantomSpec::ridge_width)},
      {"phantom_bump_amplitude", set_phantom(&PhantomSpec::bump_amplitude)},
      {"phantom_bump_x", set_phantom(&PhantomSpec::bump_x)},
      {"phantom_bump_y", set_phantom(&PhantomSpec::bump_y)},
      {"phantom_bump_radius", set_phantom(&PhantomSpec::bump_radius)},
      {"noise", set(&ExperimentConfig::noise)},
      {"seed", set(&ExperimentConfig::seed)},
      {"kind", set(&ExperimentConfig::kind)},
      {"gamma", set(&ExperimentConfig::gamma)},
      {"n_iter", set(&ExperimentConfig::n_iter)},
      {"alpha_max", set(&ExperimentConfig::alpha_max)},
      {"basis_n", set(&ExperimentConfig::basis_n)},
      {"basis_width", set(&ExperimentConfig::basis_width)},
      {"fd_scale", set(&ExperimentConfig::fd_scale)},
      {"line_samples", set(&ExperimentConfig::line_samples)},
      {"golden_iters", set(&ExperimentConfig::golden_iters)},
      {"quadrature", set(&ExperimentConfig::quadrature)},
      {"error_correction", set(&ExperimentConfig::error_correction)},
      {"slices", set(&ExperimentConfig::slices)},
      {"output_dir", set(&ExperimentConfig::output_dir)},
      {"dump_operators", set(&ExperimentConfig::dump_operators)},
  };
  return table;
}

void require(bool ok, const std::string &field, const std::string &rule)
{
  if (!ok)
  {
    throw std::invalid_argument("config field '" + field + "' " + rule);
  }
}

std::string format_x1(double x1)
{
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << x1;
  return s.str();
}

}  // namespace

void ExperimentConfig::validate() const
{
  require(nx >= 3, "nx", "must be at least 3");
  require(ny >= 3, "ny", "must be at least 3");
  require(k_offset + k_spacing > 0.0, "k_offset", "must give a positive first wavenumber");
  require(k_spacing > 0.0, "k_spacing", "must be positive");
  require(n >= 1, "n", "must be positive");
  require(m >= 1, "m", "must be positive");
  require(source_gap >= 0.0 && 2.0 * source_gap < 1.0 / static_cast<double>(m), "source_gap",
          "must be non-negative and leave each source a non-empty segment");
  require(phantom.ridge_amplitude >= 0.0, "phantom_ridge_amplitude", "must be non-negative");
  require(phantom.bump_amplitude >= 0.0, "phantom_bump_amplitude", "must be non-negative");
  require(phantom.ridge_length > 0.0, "phantom_ridge_length", "must be positive");
  require(phantom.ridge_width > 0.0, "phantom_ridge_width", "must be positive");
  require(phantom.bump_radius > 0.0, "phantom_bump_radius", "must be positive");
  require(noise >= 0.0, "noise", "must be non-negative");
  require(kind == "S" || kind == "T" || kind == "FWI", "kind", "must be S, T or FWI");
  require(gamma > 0.0 && gamma < 1.0, "gamma", "must lie in (0, 1)");
  require(n_iter >= 0, "n_iter", "must be non-negative");
  require(alpha_max > 0.0, "alpha_max", "must be positive");
  require(basis_n >= 1, "basis_n", "must be positive");
  require(basis_width >= 0.0, "basis_width", "must be non-negative");
  require(fd_scale > 0.0, "fd_scale", "must be positive");
  require(line_samples >= 1, "line_samples", "must be positive");
  require(golden_iters >= 0, "golden_iters", "must be non-negative");
  require(quadrature == "consistent" || quadrature == "lumped", "quadrature",
          "must be consistent or lumped");
  for (double x1 : slices)
  {
    require(x1 >= 0.0 && x1 <= 1.0, "slices", "entries must lie in [0, 1]");
  }
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

Json ExperimentConfig::to_json() const
{
  return {{"nx", nx},
          {"ny", ny},
          {"k_offset", k_offset},
          {"k_spacing", k_spacing},
          {"n", n},
          {"m", m},
          {"source_gap", source_gap},
          {"phantom_ridge_amplitude", phantom.ridge_amplitude},
          {"phantom_ridge_x", phantom.ridge_x},
          {"phantom_ridge_y", phantom.ridge_y},
          {"phantom_ridge_angle_deg", phantom.ridge_angle_deg},
          {"phantom_ridge_length", phantom.ridge_length},
          {"phantom_ridge_width", phantom.ridge_width},
          {"phantom_bump_amplitude", phantom.bump_amplitude},
          {"phantom_bump_x", phantom.bump_x},
          {"phantom_bump_y", phantom.bump_y},
          {"phantom_bump_radius", phantom.bump_radius},
          {"noise", noise},
          {"seed", seed},
          {"kind", kind},
          {"gamma", gamma},
          {"n_iter", n_iter},
          {"alpha_max", alpha_max},
          {"basis_n", basis_n},
          {"basis_width", basis_width},
          {"fd_scale", fd_scale},
          {"line_samples", line_samples},
          {"golden_iters", golden_iters},
          {"quadrature", quadrature},
          {"error_correction", error_correction},
          {"slices", slices},
          {"output_dir", output_dir},
          {"dump_operators", dump_operators}};
}

ExperimentConfig ExperimentConfig::from_json(const Json &j)
{
  if (!j.is_object())
  {
    throw FormatError("config must be a JSON object");
  }
  ExperimentConfig cfg;
  for (const auto &[key, value] : j.items())
  {
    const auto it = setters().find(key);
    if (it == setters().end())
    {
      throw std::invalid_argument("unknown config field '" + key + "'");
    }
    try
    {
      it->second(cfg, value);
    }
    catch (const Json::exception &)
    {
      throw std::invalid_argument("config field '" + key + "' has the wrong type");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path &path)
{
  return from_json(read_json_file(path));
}

Grid ExperimentConfig::grid() const
{
  return Grid(nx, ny);
}

SourceSpec ExperimentConfig::sources() const
{
  return SourceSpec::top_edge(m, source_gap);
}

WavenumberSet ExperimentConfig::wavenumbers() const
{
  return WavenumberSet::arithmetic(k_offset, k_spacing, n);
}

GaussianBasis ExperimentConfig::basis() const
{
  return GaussianBasis(basis_n, basis_width);
}

BoundaryRule ExperimentConfig::rule() const
{
  return parse_boundary_rule(quadrature);
}

ObjectiveKind ExperimentConfig::objective_kind() const
{
  return parse_objective_kind(kind);
}

GNConfig ExperimentConfig::gn_config(Index num_params) const
{
  GNConfig g;
  g.y0 = RVector::Zero(num_params);
  g.n_iter = n_iter;
  g.gamma = gamma;
  g.alpha_max = alpha_max;
  g.fd_scale = fd_scale;
  g.line_samples = line_samples;
  g.golden_iters = golden_iters;
  return g;
}

BoundaryRule parse_boundary_rule(const std::string &name)
{
  if (name == "consistent")
  {
    return BoundaryRule::Consistent;
  }
  if (name == "lumped")
  {
    return BoundaryRule::Lumped;
  }
  throw std::invalid_argument("unknown boundary quadrature '" + name + "'");
}

double relative_l2_error(const Grid &grid, const RVector &estimate, const RVector &truth)
{
  if (estimate.size() != grid.num_nodes() || truth.size() != grid.num_nodes())
  {
    throw std::invalid_argument("fields do not match the grid");
  }
  const RSparse mass = assemble_mass(grid, Exec::Serial);
  const RVector e = estimate - truth;
  const double den = truth.dot(mass * truth);
  if (!(den > 0.0))
  {
    throw std::invalid_argument("reference field has zero norm");
  }
  return std::sqrt(e.dot(mass * e) / den);
}

RVector vertical_slice(const Grid &grid, const RVector &values, double x1)
{
  if (values.size() != grid.num_nodes())
  {
    throw std::invalid_argument("field does not match the grid");
  }
  if (!(x1 >= 0.0 && x1 <= 1.0))
  {
    throw std::invalid_argument("slice position outside [0, 1]");
  }
  const double s = x1 / grid.hx();
  const Index i = std::min<Index>(static_cast<Index>(std::floor(s)), grid.nx() - 2);
  const double t = s - static_cast<double>(i);
  RVector out(grid.ny());
  for (Index j = 0; j < grid.ny(); ++j)
  {
    out(j) = (1.0 - t) * values(grid.node(i, j)) + t * values(grid.node(i + 1, j));
  }
  return out;
}

SynthesisOutput synthesize(const ExperimentConfig &cfg, Exec exec)
{
  cfg.validate();
  const Grid grid = cfg.grid();
  const SourceSpec sources = cfg.sources();
  const WavenumberSet k = cfg.wavenumbers();
  SynthesisOutput out;
  out.truth = cfg.phantom.sample(grid);
  const DiscreteOperators ops = assemble_operators(grid, out.truth, sources, exec);
  const BoundaryQuadrature quad = make_boundary_quadrature(grid, sources, cfg.rule());
  out.clean = synthesize_blocks(grid, ops, k, quad, exec);
  out.noisy = add_noise(out.clean, cfg.noise, cfg.seed);
  out.realized = realized_noise(out.clean, out.noisy);
  return out;
}

std::filesystem::path default_data_path(const ExperimentConfig &cfg)
{
  return std::filesystem::path(cfg.output_dir) /
         (cfg.noise > 0.0 ? "data_noisy.json" : "data_noiseless.json");
}

void cmd_synthesize(const ExperimentConfig &cfg)
{
  const SynthesisOutput syn = synthesize(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const Grid grid = cfg.grid();

  const Json setup = {{"nx", cfg.nx},
                      {"ny", cfg.ny},
                      {"m", cfg.m},
                      {"source_gap", cfg.source_gap},
                      {"quadrature", cfg.quadrature}};

  Json clean = blocks_to_json(syn.clean);
  clean["meta"] = {{"setup", setup}, {"noise", 0.0}};
  write_json_file(dir / "data_noiseless.json", clean);

  Json noisy = blocks_to_json(syn.noisy);
  noisy["meta"] = {{"setup", setup},
                   {"noise", cfg.noise},
                   {"realized_noise",
                    {{"d", syn.realized.d}, {"dkd", syn.realized.dkd}, {"bc", syn.realized.bc}}}};
  if (cfg.noise > 0.0)
  {
    noisy["meta"]["seed"] = cfg.seed;
  }
  write_json_file(dir / "data_noisy.json", noisy);

  write_json_file(dir / "truth.json", field_to_json(grid, syn.truth.values));

  if (cfg.dump_operators)
  {
    write_json_file(dir / "operators.json",
                    operators_to_json(assemble_operators(grid, syn.truth, cfg.sources())));
  }
}

GNResult cmd_invert(const ExperimentConfig &cfg, const std::optional<std::filesystem::path> &data_path)
{
  cfg.validate();
  const std::filesystem::path dir(cfg.output_dir);
  const DataBlocks measured = blocks_from_json(read_json_file(data_path ? *data_path : default_data_path(cfg)));

  const Grid grid = cfg.grid();
  const auto model = std::make_shared<const ForwardModel>(
      grid, cfg.sources(), cfg.wavenumbers(), cfg.basis(), cfg.rule(), cfg.error_correction);
  const ObjectiveKind kind = cfg.objective_kind();
  const Objective objective(kind, model, measured);
  const std::string tag = to_string(kind);

  std::filesystem::create_directories(dir);
  std::ofstream log(dir / ("log_" + tag + ".jsonl"));
  if (!log)
  {
    throw std::runtime_error("cannot open the iteration log for writing");
  }
  const auto on_iter = [&log](const IterationRecord &rec) {
    const Json line = {{"iter", rec.iter},
                       {"objective", rec.objective},
                       {"mu", rec.mu},
                       {"alpha", rec.alpha},
                       {"step_norm", rec.step_norm}};
    log << line.dump() << '\n' << std::flush;
  };
  const GNResult res = gauss_newton(objective, cfg.gn_config(model->num_params()), on_iter);

  write_json_file(dir / ("estimate_" + tag + ".json"),
                  field_to_json(grid, model->potential(res.y).values));
  const Json coeffs = {{"format", "ddrom.coefficients"},
                       {"kind", tag},
                       {"basis_n", cfg.basis_n},
                       {"basis_width", cfg.basis().width()},
                       {"retained_rank", objective.retained_rank()},
                       {"stagnated", res.stagnated},
                       {"objective_initial", res.log.front().objective},
                       {"objective_final", res.log.back().objective},
                       {"y", vector_to_json(res.y)}};
  write_json_file(dir / ("coeffs_" + tag + ".json"), coeffs);

  if (cfg.dump_operators)
  {
    Json measured_side = {{"format", "ddrom.measured"}, {"kind", tag}};
    if (kind != ObjectiveKind::FWI)
    {
      measured_side["subspace"] = subspace_to_json(objective.subspace());
    }
    write_json_file(dir / ("measured_" + tag + ".json"), measured_side);
  }
  return res;
}

Json cmd_report(const ExperimentConfig &cfg)
{
  cfg.validate();
  const std::filesystem::path dir(cfg.output_dir);
  Index nx = 0;
  Index ny = 0;
  const RVector truth = field_from_json(read_json_file(dir / "truth.json"), nx, ny);
  const Grid grid(nx, ny);

  Json report = {{"format", "ddrom.report"}, {"errors", Json::object()}, {"slices", Json::array()}};
  std::map<std::string, RVector> estimates;
  for (const char *tag : {"S", "T", "FWI"})
  {
    const auto path = dir / (std::string("estimate_") + tag + ".json");
    if (!std::filesystem::exists(path))
    {
      continue;
    }
    Index ex = 0;
    Index ey = 0;
    RVector est = field_from_json(read_json_file(path), ex, ey);
    if (ex != nx || ey != ny)
    {
      throw FormatError(std::string("estimate ") + tag + " is on a different grid than the truth");
    }
    report["errors"][tag] = relative_l2_error(grid, est, truth);
    estimates.emplace(tag, std::move(est));
  }
  if (estimates.empty())
  {
    throw std::runtime_error("no estimate files found in '" + dir.string() + "'");
  }

  for (double x1 : cfg.slices)
  {
    const RVector qt = vertical_slice(grid, truth, x1);
    Json files = Json::object();
    for (const auto &[tag, est] : estimates)
    {
      const RVector qe = vertical_slice(grid, est, x1);
      const std::string name = "slice_" + tag + "_x1_" + format_x1(x1) + ".csv";
      std::ofstream csv(dir / name);
      if (!csv)
      {
        throw std::runtime_error("cannot write '" + name + "'");
      }
      csv << "x2,q_true,q_est\n" << std::setprecision(17);
      for (Index j = 0; j < grid.ny(); ++j)
      {
        csv << static_cast<double>(j) * grid.hy() << ',' << qt(j) << ',' << qe(j) << '\n';
      }
      files[tag] = name;
    }
    report["slices"].push_back({{"x1", x1}, {"files", files}});
  }
  write_json_file(dir / "report.json", report);
  return report;
}

}  // namespace ddrom
