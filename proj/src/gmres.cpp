// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/gmres.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "maxwelldd/preconditioner.hpp"

namespace maxwelldd
{

namespace
{

double norm2(const std::vector<double> &v)
{
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double> &a, const std::vector<double> &b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

} // namespace

SolveReport gmres(const LinearOperator &op, const Preconditioner *precond,
                  const std::vector<double> &b, std::vector<double> &x,
                  const GmresConfig &cfg)
{
  const auto t0 = std::chrono::steady_clock::now();
  const int n = op.n;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("gmres: right-hand side dimension mismatch");
  if (x.empty())
    x.assign(n, 0.0);
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("gmres: initial guess dimension mismatch");
  if (cfg.rel_tol <= 0.0 || cfg.restart < 1)
    throw std::invalid_argument("gmres: invalid configuration");

  const int m = cfg.restart;
  SolveReport report;
  report.factor_nnz = precond ? precond->storage_nnz() : 0;
  report.peak_bytes_estimate =
      (precond ? precond->storage_bytes() : 0) +
      static_cast<std::int64_t>(2 * m + 1) * n * 8 + // Krylov basis + directions
      static_cast<std::int64_t>(m + 1) * (m + 1) * 8 + // Hessenberg
      static_cast<std::int64_t>(4) * n * 8;            // x, r, w, b

  const auto finish = [&](double final_rel) {
    report.residual_history.push_back(final_rel);
    report.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const double bnorm = norm2(b);
  if (bnorm == 0.0)
  {
    x.assign(n, 0.0);
    report.converged = true;
    finish(0.0);
    return report;
  }

  std::vector<double> r(n), w(n);
  op.apply(x.data(), r.data());
  for (int i = 0; i < n; ++i)
    r[i] = b[i] - r[i];
  double beta = norm2(r);
  report.residual_history.push_back(beta / bnorm);
  if (beta / bnorm <= cfg.rel_tol)
  {
    report.converged = true;
    finish(beta / bnorm);
    return report;
  }

  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> z(m, std::vector<double>(n));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1);

  int total_it = 0;
  while (true)
  {
    for (int i = 0; i < n; ++i)
      v[0][i] = r[i] / beta;
    for (int i = 0; i <= m; ++i)
      g[i] = 0.0;
    g[0] = beta;

    int j = 0;
    bool cycle_done = false;
    for (; j < m && total_it < cfg.max_iterations && !cycle_done; ++j)
    {
      if (precond)
        precond->apply(v[j].data(), z[j].data());
      else
        z[j] = v[j];
      op.apply(z[j].data(), w.data());

      for (int i = 0; i <= j; ++i)
      {
        h[i][j] = dot(w, v[i]);
        for (int k = 0; k < n; ++k)
          w[k] -= h[i][j] * v[i][k];
      }
      h[j + 1][j] = norm2(w);
      if (h[j + 1][j] > 0.0)
        for (int k = 0; k < n; ++k)
          v[j + 1][k] = w[k] / h[j + 1][j];
      else
        cycle_done = true; // happy breakdown: the Krylov space is exhausted

      for (int i = 0; i < j; ++i)
      {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = (denom == 0.0) ? 1.0 : h[j][j] / denom;
      sn[j] = (denom == 0.0) ? 0.0 : h[j + 1][j] / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++total_it;
      const double est = std::abs(g[j + 1]) / bnorm;
      report.residual_history.push_back(est);
      if (est <= cfg.rel_tol)
        cycle_done = true;
    }

    if (j > 0)
    {
      // Back-substitute H y = g and accumulate x += Z y.
      std::vector<double> y(j);
      for (int i = j - 1; i >= 0; --i)
      {
        double s = g[i];
        for (int k = i + 1; k < j; ++k)
          s -= h[i][k] * y[k];
        y[i] = s / h[i][i];
      }
      for (int k = 0; k < j; ++k)
        for (int i = 0; i < n; ++i)
          x[i] += y[k] * z[k][i];
    }

    op.apply(x.data(), r.data());
    for (int i = 0; i < n; ++i)
      r[i] = b[i] - r[i];
    beta = norm2(r);
    const double true_rel = beta / bnorm;
    if (true_rel <= cfg.rel_tol)
      report.converged = true;
    if (report.converged || total_it >= cfg.max_iterations || j == 0)
    {
      report.iterations = total_it;
      finish(true_rel);
      return report;
    }
  }
}

} // namespace maxwelldd
