// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "maxwelldd/bench.hpp"
#include "maxwelldd/config.hpp"

namespace
{

// One slot per flag; `count()` on the parsed subcommand tells us which were
// actually given, so config-file values survive unless overridden.
struct Flags
{
  std::string config;
  std::string geometry;
  std::string precond;
  std::string outer;
  std::string inner;
  std::string out_dir;
  std::string omegas;
  std::string preconds;
  double omega = 0.0;
  double lambda = 0.0;
  double tol = 0.0;
  double rel_tol = 0.0;
  double kappa = 0.0;
  int nx = 0;
  int ny = 0;
  int px = 0;
  int py = 0;
  int workers = 0;
  int restart = 0;
  int max_iterations = 0;
  int max_outer = 0;
  int resolution = 0;
  int refinements = 0;
  bool no_timing = false;
};

void add_common_flags(CLI::App *sub, Flags &f)
{
  sub->add_option("--config", f.config, "configuration file with key = value lines");
  sub->add_option("--geometry", f.geometry, "plain | block | ybranch");
  sub->add_option("--omega", f.omega, "angular frequency (default 5)");
  sub->add_option("--lambda", f.lambda, "vacuum wavelength; omega = 2*pi/lambda");
  sub->add_option("--nx", f.nx, "cells in x (default 64)");
  sub->add_option("--ny", f.ny, "cells in y (default 64)");
  sub->add_option("--precond", f.precond, "none | ilu0 | ssor | schur | block_diag");
  sub->add_option("--px", f.px, "subdomain grid columns");
  sub->add_option("--py", f.py, "subdomain grid rows");
  sub->add_option("--outer", f.outer, "interface iteration: jacobi | gmres");
  sub->add_option("--inner", f.inner, "subdomain solver: direct | gmres");
  sub->add_option("--tol", f.tol, "interface residual tolerance (absolute)");
  sub->add_option("--rel-tol", f.rel_tol, "GMRES relative residual tolerance");
  sub->add_option("--restart", f.restart, "GMRES restart length");
  sub->add_option("--max-iterations", f.max_iterations, "GMRES iteration cap");
  sub->add_option("--max-outer", f.max_outer, "interface iteration cap");
  sub->add_option("--workers", f.workers,
                  "parallel subdomain solves (MAXWELL_DDM_WORKERS is the fallback)");
  sub->add_option("--out-dir", f.out_dir, "directory for CSV/SVG outputs");
  sub->add_option("--resolution", f.resolution, "intensity sampling grid size");
  sub->add_option("--refinements", f.refinements, "mesh levels in the convergence study");
  sub->add_option("--kappa", f.kappa, "impedance coefficient");
  sub->add_option("--omegas", f.omegas, "comma-separated frequencies for the sweep");
  sub->add_option("--preconds", f.preconds, "comma-separated preconditioners for the sweep");
  sub->add_flag("--no-timing", f.no_timing, "write walltime columns as zero");
}

void apply_flags(maxwelldd::RunConfig &cfg, const CLI::App *sub, const Flags &f)
{
  auto given = [sub](const std::string &name) { return sub->count(name) > 0; };

  if (given("--geometry"))
    maxwelldd::apply_config_line(cfg, "geometry", f.geometry);
  if (given("--omega"))
  {
    cfg.omega = f.omega;
    cfg.has_omega = true;
  }
  if (given("--lambda"))
  {
    cfg.lambda = f.lambda;
    cfg.has_lambda = true;
  }
  if (given("--nx"))
    cfg.nx = f.nx;
  if (given("--ny"))
    cfg.ny = f.ny;
  if (given("--precond"))
    cfg.precond = f.precond;
  if (given("--px"))
    cfg.px = f.px;
  if (given("--py"))
    cfg.py = f.py;
  if (given("--outer"))
    maxwelldd::apply_config_line(cfg, "outer", f.outer);
  if (given("--inner"))
    maxwelldd::apply_config_line(cfg, "inner", f.inner);
  if (given("--tol"))
    cfg.ddm.tol = f.tol;
  if (given("--rel-tol"))
    cfg.gmres.rel_tol = f.rel_tol;
  if (given("--restart"))
  {
    cfg.gmres.restart = f.restart;
    cfg.ddm.outer_restart = f.restart;
  }
  if (given("--max-iterations"))
    cfg.gmres.max_iterations = f.max_iterations;
  if (given("--max-outer"))
    cfg.ddm.max_outer = f.max_outer;
  if (given("--workers"))
    cfg.workers = f.workers;
  if (given("--out-dir"))
    cfg.out_dir = f.out_dir;
  if (given("--resolution"))
    cfg.intensity_resolution = f.resolution;
  if (given("--refinements"))
    cfg.refinements = f.refinements;
  if (given("--kappa"))
    cfg.kappa = f.kappa;
  if (given("--omegas"))
    maxwelldd::apply_config_line(cfg, "omegas", f.omegas);
  if (given("--preconds"))
    maxwelldd::apply_config_line(cfg, "preconds", f.preconds);
  if (f.no_timing)
    cfg.timing = false;
}

void warn_if_underresolved(const maxwelldd::RunConfig &cfg, double omega)
{
  if (omega <= 0.0)
    return;
  const double wavelength_core = 2.0 * std::numbers::pi / (omega * cfg.geometry.n_core);
  const double cells = wavelength_core * static_cast<double>(cfg.nx);
  if (cells < 10.0)
  {
    std::cerr << "warning: " << cells << " cells per wavelength at omega = " << omega
              << " (need about 10 for an accurate solution)\n";
  }
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"2D time-harmonic Maxwell benchmark driver"};
  app.require_subcommand(1);

  Flags f;
  CLI::App *solve =
      app.add_subcommand("solve", "single-domain solve; writes residual history and intensity");
  CLI::App *table1 =
      app.add_subcommand("table1", "frequency x preconditioner GMRES iteration sweep");
  CLI::App *ddm = app.add_subcommand("ddm", "domain-decomposition benchmark");
  CLI::App *conv =
      app.add_subcommand("convergence", "mesh refinement study against an exact plane wave");
  CLI::App *intensity =
      app.add_subcommand("intensity", "solve and sample |E|^2 on a uniform grid");
  for (CLI::App *sub : {solve, table1, ddm, conv, intensity})
  {
    add_common_flags(sub, f);
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App *sub = app.get_subcommands().front();

  try
  {
    maxwelldd::RunConfig cfg;
    if (sub->count("--config") > 0)
    {
      cfg = maxwelldd::parse_config_file(f.config);
    }

    // The subcommand decides the solve mode; the ddm benchmark reports inner
    // GMRES statistics, so that subcommand defaults to the iterative inner
    // solver (an explicit --inner still wins).
    cfg.mode = (sub == ddm) ? maxwelldd::SolveMode::Ddm : maxwelldd::SolveMode::SingleDomain;
    if (sub == ddm)
    {
      cfg.ddm.inner = maxwelldd::InnerSolver::PreconditionedGmres;
    }

    if (const char *env = std::getenv("MAXWELL_DDM_WORKERS"))
    {
      if (sub->count("--workers") == 0)
      {
        maxwelldd::apply_config_line(cfg, "workers", env);
      }
    }

    apply_flags(cfg, sub, f);

    if (!cfg.has_omega && !cfg.has_lambda)
    {
      cfg.omega = 5.0;
      cfg.has_omega = true;
    }
    maxwelldd::validate_config(cfg);

    if (sub == table1)
    {
      for (double om : cfg.omegas)
      {
        warn_if_underresolved(cfg, om);
      }
    }
    else
    {
      warn_if_underresolved(cfg, cfg.resolved_omega());
    }

    if (sub == solve)
      return maxwelldd::run_single(cfg);
    if (sub == table1)
      return maxwelldd::run_table1(cfg);
    if (sub == ddm)
      return maxwelldd::run_ddm_bench(cfg);
    if (sub == conv)
      return maxwelldd::run_convergence(cfg);
    return maxwelldd::run_intensity(cfg);
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
