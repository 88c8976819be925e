// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_CONFIG_HPP
#define MAXWELLDD_CONFIG_HPP

#include <string>
#include <vector>

#include "maxwelldd/ddm.hpp"
#include "maxwelldd/gmres.hpp"
#include "maxwelldd/mesh.hpp"

namespace maxwelldd
{

enum class SolveMode
{
  SingleDomain,
  Ddm
};

struct RunConfig
{
  GeometrySpec geometry = GeometrySpec::block_benchmark();
  int nx = 64;
  int ny = 64;

  // Exactly one of omega / lambda must be set; omega = 2 pi / lambda.
  double omega = 0.0;
  double lambda = 0.0;
  bool has_omega = false;
  bool has_lambda = false;

  std::string precond = "block_diag"; // none | ilu0 | ssor | schur | block_diag
  SolveMode mode = SolveMode::SingleDomain;
  int px = 1;
  int py = 1;
  DdmConfig ddm{};
  GmresConfig gmres{};
  double kappa = 1.0;
  std::string out_dir = ".";
  int workers = 1;
  bool timing = true; // false: report walltime columns as 0 for reproducible output

  std::vector<double> omegas = {5.0, 10.0, 20.0, 40.0};
  std::vector<std::string> preconds = {"ilu0", "ssor", "schur", "block_diag"};
  int intensity_resolution = 128;
  int refinements = 3;

  double resolved_omega() const; // throws unless exactly one of omega/lambda is set
};

// Flat key=value configuration file ('#' starts a comment). Unknown keys and
// malformed lines raise std::invalid_argument with the line number and text.
RunConfig parse_config_file(const std::string &path);
void apply_config_line(RunConfig &cfg, const std::string &key, const std::string &value);

// Checks cross-field invariants (frequency given exactly once, divisible
// partition, known preconditioner name). Throws std::invalid_argument.
void validate_config(const RunConfig &cfg);

// Mesh cells per wavelength inside the core material; used for the
// under-resolution warning (threshold 10).
double cells_per_wavelength(const RunConfig &cfg);

} // namespace maxwelldd

#endif
