// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_GMRES_HPP
#define MAXWELLDD_GMRES_HPP

#include <cstdint>
#include <vector>

#include "maxwelldd/csr.hpp"

namespace maxwelldd
{

class Preconditioner;

struct GmresConfig
{
  double rel_tol = 1e-8;
  int restart = 50;
  int max_iterations = 1000;
};

struct SolveReport
{
  int iterations = 0;
  bool converged = false;
  // Relative residuals: initial residual first, then one Givens estimate per
  // iteration, and the true residual of the returned iterate last.
  std::vector<double> residual_history;
  double walltime_s = 0.0;
  std::int64_t factor_nnz = 0;         // preconditioner factor storage
  std::int64_t peak_bytes_estimate = 0;
};

// Restarted GMRES with right preconditioning, flexible variant: the
// preconditioned directions are stored so the preconditioner may itself be an
// inexact (iterative) solve. On entry x is the initial guess (an empty vector
// means zero); on exit x holds the best iterate. A zero right-hand side
// returns x = 0 immediately. Convergence is declared on the true relative
// residual, not the Givens estimate.
SolveReport gmres(const LinearOperator &op, const Preconditioner *precond,
                  const std::vector<double> &b, std::vector<double> &x,
                  const GmresConfig &cfg);

} // namespace maxwelldd

#endif
