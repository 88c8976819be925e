// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_BENCH_HPP
#define MAXWELLDD_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maxwelldd/config.hpp"
#include "maxwelldd/fem.hpp"
#include "maxwelldd/gmres.hpp"
#include "maxwelldd/preconditioner.hpp"

namespace maxwelldd
{

struct BenchmarkRow
{
  double omega = 0.0;
  std::string preconditioner;
  int iterations = 0;
  bool converged = false;
  double walltime_s = 0.0;
  std::int64_t factor_nnz = 0;
  std::int64_t peak_bytes = 0;
};

struct SingleSolveResult
{
  SolveReport report;
  ComplexVector field;
  int n = 0; // complex DoF count
};

// Builds the preconditioner named by cfg.precond for the block system
// [[K,-B],[B,K]]. Names: none, ilu0, ssor, schur, block_diag.
Preconditioner make_named_preconditioner(const std::string &name, const CsrMatrix &k,
                                         const CsrMatrix &bmat);

// Assembles the single-domain benchmark system (incident plane wave from the
// left port) at the given frequency and solves it with the named
// preconditioner.
SingleSolveResult solve_single(const RunConfig &cfg, double omega,
                               const std::string &precond);

// Subcommand drivers. Each writes its CSV/SVG artifacts into cfg.out_dir and
// returns a process exit code: 0 iff every requested solve converged.
int run_single(const RunConfig &cfg);      // residual_history.csv, intensity.csv/.svg
int run_table1(const RunConfig &cfg);      // table1.csv
int run_ddm_bench(const RunConfig &cfg);   // table2.csv, outer_residuals.csv
int run_convergence(const RunConfig &cfg); // convergence.csv
int run_intensity(const RunConfig &cfg);   // intensity.csv/.svg

std::vector<BenchmarkRow> table1_rows(const RunConfig &cfg);
void write_table1_csv(const std::vector<BenchmarkRow> &rows, std::ostream &out);

} // namespace maxwelldd

#endif
