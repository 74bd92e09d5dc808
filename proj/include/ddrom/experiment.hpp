// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddrom/inversion.hpp"
#include "ddrom/json_io.hpp"

namespace ddrom
{

/// Two-inclusion analytic potential: a rotated anisotropic Gaussian ridge plus
/// a circular Gaussian bump. The default numbers are our own choice.
struct PhantomSpec
{
  double ridge_amplitude = 30.0;
  double ridge_x = 0.35;
  double ridge_y = 0.45;
  double ridge_angle_deg = 35.0;
  double ridge_length = 0.25;  // standard deviation along the ridge axis
  double ridge_width = 0.08;   // standard deviation across it
  double bump_amplitude = 60.0;
  double bump_x = 0.68;
  double bump_y = 0.62;
  double bump_radius = 0.10;  // standard deviation

  double eval(Point x) const;
  PotentialField sample(const Grid &grid) const;
};

/// Flat configuration document; JSON keys match the member names.
struct ExperimentConfig
{
  Index nx = 33;
  Index ny = 33;
  double k_offset = 4.0;
  double k_spacing = 2.0;
  Index n = 4;
  Index m = 4;
  double source_gap = 0.03125;
  PhantomSpec phantom;
  double noise = 0.025;
  std::uint64_t seed = 1;
  std::string kind = "S";
  double gamma = 0.2;
  Index n_iter = 10;
  double alpha_max = 3.0;
  Index basis_n = 6;
  double basis_width = 0.0;
  double fd_scale = 1e-4;
  Index line_samples = 16;
  Index golden_iters = 12;
  std::string quadrature = "consistent";
  bool error_correction = false;
  std::vector<double> slices{0.35, 0.55, 0.75};
  std::string output_dir = "out";
  bool dump_operators = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  Json to_json() const;
  static ExperimentConfig from_json(const Json &j);
  static ExperimentConfig load(const std::filesystem::path &path);

  Grid grid() const;
  SourceSpec sources() const;
  WavenumberSet wavenumbers() const;
  GaussianBasis basis() const;
  BoundaryRule rule() const;
  ObjectiveKind objective_kind() const;
  GNConfig gn_config(Index num_params) const;
};

BoundaryRule parse_boundary_rule(const std::string &name);

/// Relative L2 error ||est - truth|| / ||truth|| with the Q1 mass matrix.
double relative_l2_error(const Grid &grid, const RVector &estimate, const RVector &truth);

/// Values along the vertical line x1 = const, one per grid row, linearly
/// interpolated in x1.
RVector vertical_slice(const Grid &grid, const RVector &values, double x1);

struct SynthesisOutput
{
  DataBlocks clean;
  DataBlocks noisy;
  NoiseLevels realized;
  PotentialField truth;
};

/// Noiseless and noisy data for the configured phantom.
SynthesisOutput synthesize(const ExperimentConfig &cfg, Exec exec = Exec::Parallel);

/// Data file the invert command reads by default: noisy when noise > 0.
std::filesystem::path default_data_path(const ExperimentConfig &cfg);

void cmd_synthesize(const ExperimentConfig &cfg);
GNResult cmd_invert(const ExperimentConfig &cfg,
                    const std::optional<std::filesystem::path> &data_path = std::nullopt);
Json cmd_report(const ExperimentConfig &cfg);

}  // namespace ddrom
