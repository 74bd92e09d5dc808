// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: synthesize data, invert it, report errors and slices.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddrom/experiment.hpp"

namespace
{

struct Overrides
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kind;
  std::optional<double> noise;
  bool dump = false;
};

void add_common(CLI::App *cmd, Overrides &o)
{
  cmd->add_option("--config", o.config, "Flat JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", o.seed, "Noise seed (overrides seed)");
  cmd->add_option("--kind", o.kind, "Objective kind")->check(CLI::IsMember({"S", "T", "FWI"}));
  cmd->add_option("--noise", o.noise, "Relative noise level (overrides noise)");
  cmd->add_flag("--dump-operators", o.dump, "Write sparse operators and measured artifacts as JSON");
}

ddrom::ExperimentConfig resolve(const Overrides &o)
{
  ddrom::ExperimentConfig cfg =
      o.config.empty() ? ddrom::ExperimentConfig{} : ddrom::ExperimentConfig::load(o.config);
  if (!o.out.empty())
  {
    cfg.output_dir = o.out;
  }
  if (o.seed)
  {
    cfg.seed = *o.seed;
  }
  if (o.kind)
  {
    cfg.kind = *o.kind;
  }
  if (o.noise)
  {
    cfg.noise = *o.noise;
  }
  cfg.dump_operators = cfg.dump_operators || o.dump;
  cfg.validate();
  return cfg;
}

int fail(const std::string &category, const std::string &message, int code)
{
  std::cerr << ddrom::Json{{"error", category}, {"message", message}}.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Data-driven ROM workbench for the 2D Schrodinger inverse scattering problem"};
  app.require_subcommand(1);

  Overrides syn_o, inv_o, rep_o;
  std::string data_path;
  auto *syn = app.add_subcommand("synthesize", "Solve the forward problems and write data blocks");
  add_common(syn, syn_o);
  auto *inv = app.add_subcommand("invert", "Run Gauss-Newton on a data file");
  add_common(inv, inv_o);
  inv->add_option("--data", data_path, "Data file (default: noisy or noiseless file in the output directory)")
      ->check(CLI::ExistingFile);
  auto *rep = app.add_subcommand("report", "Score estimates against the truth");
  add_common(rep, rep_o);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    return fail("usage", e.what(), 2);
  }

  try
  {
    if (syn->parsed())
    {
      const auto cfg = resolve(syn_o);
      ddrom::cmd_synthesize(cfg);
      std::cout << ddrom::Json{{"status", "ok"}, {"command", "synthesize"}, {"out", cfg.output_dir}}.dump()
                << std::endl;
    }
    else if (inv->parsed())
    {
      const auto cfg = resolve(inv_o);
      std::optional<std::filesystem::path> path;
      if (!data_path.empty())
      {
        path = data_path;
      }
      const auto res = ddrom::cmd_invert(cfg, path);
      std::cout << ddrom::Json{{"status", "ok"},
                               {"command", "invert"},
                               {"kind", cfg.kind},
                               {"iterations", res.log.size() - 1},
                               {"objective", res.log.back().objective}}
                       .dump()
                << std::endl;
    }
    else
    {
      const auto cfg = resolve(rep_o);
      const auto report = ddrom::cmd_report(cfg);
      std::cout << ddrom::Json{{"status", "ok"}, {"command", "report"}, {"errors", report["errors"]}}.dump()
                << std::endl;
    }
  }
  catch (const std::invalid_argument &e)
  {
    return fail("config", e.what(), 3);
  }
  catch (const ddrom::FormatError &e)
  {
    return fail("format", e.what(), 3);
  }
  catch (const ddrom::SolveError &e)
  {
    return fail("solve", e.what(), 4);
  }
  catch (const ddrom::NotPositiveDefinite &e)
  {
    return fail("not_positive_definite", e.what(), 4);
  }
  catch (const ddrom::LanczosBreakdown &e)
  {
    return fail("lanczos_breakdown", e.what(), 4);
  }
  catch (const std::exception &e)
  {
    return fail("runtime", e.what(), 1);
  }
  return EXIT_SUCCESS;
}
