// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace maxwelldd
{

double RunConfig::resolved_omega() const
{
  if (has_omega == has_lambda)
    throw std::invalid_argument("config: exactly one of omega/lambda must be given");
  if (has_omega)
    return omega;
  if (lambda <= 0.0)
    throw std::invalid_argument("config: lambda must be positive");
  return 2.0 * std::numbers::pi / lambda;
}

namespace
{

std::vector<std::string> split_list(const std::string &value)
{
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ','))
    if (!item.empty())
      items.push_back(item);
  return items;
}

GeometryKind parse_geometry(const std::string &value)
{
  if (value == "plain" || value == "square")
    return GeometryKind::PlainSquare;
  if (value == "block")
    return GeometryKind::BlockBenchmark;
  if (value == "ybranch" || value == "y_branch")
    return GeometryKind::YBranch;
  throw std::invalid_argument("unknown geometry '" + value + "'");
}

} // namespace

void apply_config_line(RunConfig &cfg, const std::string &key, const std::string &value)
{
  const auto to_double = [&](const std::string &v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size())
      throw std::invalid_argument("expected a number, got '" + v + "'");
    return d;
  };
  const auto to_int = [&](const std::string &v) {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size())
      throw std::invalid_argument("expected an integer, got '" + v + "'");
    return i;
  };
  const auto to_bool = [&](const std::string &v) {
    if (v == "true" || v == "1" || v == "yes")
      return true;
    if (v == "false" || v == "0" || v == "no")
      return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
  };

  if (key == "geometry")
    cfg.geometry.kind = parse_geometry(value);
  else if (key == "n_core")
    cfg.geometry.n_core = to_double(value);
  else if (key == "n_cladding")
    cfg.geometry.n_cladding = to_double(value);
  else if (key == "core_half_width")
    cfg.geometry.core_half_width = to_double(value);
  else if (key == "nx")
    cfg.nx = to_int(value);
  else if (key == "ny")
    cfg.ny = to_int(value);
  else if (key == "omega")
  {
    cfg.omega = to_double(value);
    cfg.has_omega = true;
  }
  else if (key == "lambda")
  {
    cfg.lambda = to_double(value);
    cfg.has_lambda = true;
  }
  else if (key == "precond")
    cfg.precond = value;
  else if (key == "mode")
  {
    if (value == "single")
      cfg.mode = SolveMode::SingleDomain;
    else if (value == "ddm")
      cfg.mode = SolveMode::Ddm;
    else
      throw std::invalid_argument("unknown mode '" + value + "'");
  }
  else if (key == "px")
    cfg.px = to_int(value);
  else if (key == "py")
    cfg.py = to_int(value);
  else if (key == "outer")
  {
    if (value == "jacobi")
      cfg.ddm.outer = OuterSolver::JacobiFixedPoint;
    else if (value == "gmres")
      cfg.ddm.outer = OuterSolver::InterfaceGmres;
    else
      throw std::invalid_argument("unknown outer solver '" + value + "'");
  }
  else if (key == "inner")
  {
    if (value == "direct")
      cfg.ddm.inner = InnerSolver::Direct;
    else if (value == "gmres")
      cfg.ddm.inner = InnerSolver::PreconditionedGmres;
    else
      throw std::invalid_argument("unknown inner solver '" + value + "'");
  }
  else if (key == "tol")
    cfg.ddm.tol = to_double(value);
  else if (key == "max_outer")
    cfg.ddm.max_outer = to_int(value);
  else if (key == "outer_restart")
    cfg.ddm.outer_restart = to_int(value);
  else if (key == "rel_tol")
    cfg.gmres.rel_tol = to_double(value);
  else if (key == "restart")
    cfg.gmres.restart = to_int(value);
  else if (key == "max_iterations")
    cfg.gmres.max_iterations = to_int(value);
  else if (key == "inner_rel_tol")
    cfg.ddm.inner_gmres.rel_tol = to_double(value);
  else if (key == "kappa")
    cfg.kappa = to_double(value);
  else if (key == "out_dir")
    cfg.out_dir = value;
  else if (key == "workers")
    cfg.workers = to_int(value);
  else if (key == "timing")
    cfg.timing = to_bool(value);
  else if (key == "omegas")
  {
    cfg.omegas.clear();
    for (const std::string &item : split_list(value))
      cfg.omegas.push_back(to_double(item));
  }
  else if (key == "preconds")
    cfg.preconds = split_list(value);
  else if (key == "resolution")
    cfg.intensity_resolution = to_int(value);
  else if (key == "refinements")
    cfg.refinements = to_int(value);
  else
    throw std::invalid_argument("unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    // Trim whitespace.
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::size_t b = 0, e = line.size();
    while (b < e && is_space(line[b]))
      ++b;
    while (e > b && is_space(line[e - 1]))
      --e;
    if (b == e)
      continue;
    const std::string body = line.substr(b, e - b);
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + body + "'");
    std::string key = body.substr(0, eq);
    std::string value = body.substr(eq + 1);
    while (!key.empty() && is_space(key.back()))
      key.pop_back();
    std::size_t vb = 0;
    while (vb < value.size() && is_space(value[vb]))
      ++vb;
    value.erase(0, vb);
    try
    {
      apply_config_line(cfg, key, value);
    }
    catch (const std::exception &ex)
    {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return cfg;
}

void validate_config(const RunConfig &cfg)
{
  cfg.resolved_omega(); // throws on the frequency invariant
  if (cfg.nx < 1 || cfg.ny < 1)
    throw std::invalid_argument("config: nx and ny must be positive");
  if (cfg.precond != "none" && cfg.precond != "ilu0" && cfg.precond != "ssor" &&
      cfg.precond != "schur" && cfg.precond != "block_diag")
    throw std::invalid_argument("config: unknown preconditioner '" + cfg.precond + "'");
  if (cfg.mode == SolveMode::Ddm && (cfg.nx % cfg.px != 0 || cfg.ny % cfg.py != 0))
    throw std::invalid_argument("config: px/py must divide nx/ny");
  if (cfg.workers < 1)
    throw std::invalid_argument("config: workers must be positive");
}

double cells_per_wavelength(const RunConfig &cfg)
{
  const double om = cfg.resolved_omega();
  if (om <= 0.0)
    return std::numeric_limits<double>::infinity();
  // Wavelength in the core material divided by the cell size.
  const double wavelength_core = 2.0 * std::numbers::pi / (om * cfg.geometry.n_core);
  const double h = 1.0 / cfg.nx;
  return wavelength_core / h;
}

} // namespace maxwelldd
