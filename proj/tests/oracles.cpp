// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace maxwelldd::test
{

DenseLu::DenseLu(std::vector<double> matrix, int n) : n_(n), a_(std::move(matrix)), perm_(n)
{
  if (static_cast<int>(a_.size()) != n * n)
  {
    throw std::invalid_argument("DenseLu: matrix size mismatch");
  }
  for (int i = 0; i < n_; ++i)
  {
    perm_[i] = i;
  }
  for (int k = 0; k < n_; ++k)
  {
    int pivot = k;
    double best = std::abs(a_[static_cast<std::size_t>(k) * n_ + k]);
    for (int i = k + 1; i < n_; ++i)
    {
      double cand = std::abs(a_[static_cast<std::size_t>(i) * n_ + k]);
      if (cand > best)
      {
        best = cand;
        pivot = i;
      }
    }
    if (best == 0.0)
    {
      throw std::runtime_error("DenseLu: singular matrix");
    }
    if (pivot != k)
    {
      for (int j = 0; j < n_; ++j)
      {
        std::swap(a_[static_cast<std::size_t>(k) * n_ + j],
                  a_[static_cast<std::size_t>(pivot) * n_ + j]);
      }
      std::swap(perm_[k], perm_[pivot]);
    }
    const double d = a_[static_cast<std::size_t>(k) * n_ + k];
    for (int i = k + 1; i < n_; ++i)
    {
      const double l = a_[static_cast<std::size_t>(i) * n_ + k] / d;
      a_[static_cast<std::size_t>(i) * n_ + k] = l;
      for (int j = k + 1; j < n_; ++j)
      {
        a_[static_cast<std::size_t>(i) * n_ + j] -= l * a_[static_cast<std::size_t>(k) * n_ + j];
      }
    }
  }
}

std::vector<double> DenseLu::solve(const std::vector<double> &b) const
{
  if (static_cast<int>(b.size()) != n_)
  {
    throw std::invalid_argument("DenseLu::solve: size mismatch");
  }
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i)
  {
    x[i] = b[perm_[i]];
  }
  for (int i = 0; i < n_; ++i)
  {
    for (int j = 0; j < i; ++j)
    {
      x[i] -= a_[static_cast<std::size_t>(i) * n_ + j] * x[j];
    }
  }
  for (int i = n_ - 1; i >= 0; --i)
  {
    for (int j = i + 1; j < n_; ++j)
    {
      x[i] -= a_[static_cast<std::size_t>(i) * n_ + j] * x[j];
    }
    x[i] /= a_[static_cast<std::size_t>(i) * n_ + i];
  }
  return x;
}

std::vector<double> dense_from_csr(const CsrMatrix &m)
{
  std::vector<double> d(static_cast<std::size_t>(m.n_rows) * m.n_cols, 0.0);
  for (int i = 0; i < m.n_rows; ++i)
  {
    for (int p = m.ptr[i]; p < m.ptr[i + 1]; ++p)
    {
      d[static_cast<std::size_t>(i) * m.n_cols + m.col[p]] += m.val[p];
    }
  }
  return d;
}

std::vector<double> dense_block2(const CsrMatrix &k, const CsrMatrix &b)
{
  const int n = k.n_rows;
  const int m = 2 * n;
  std::vector<double> dk = dense_from_csr(k);
  std::vector<double> db = dense_from_csr(b);
  std::vector<double> d(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double kv = dk[static_cast<std::size_t>(i) * n + j];
      const double bv = db[static_cast<std::size_t>(i) * n + j];
      d[static_cast<std::size_t>(i) * m + j] = kv;
      d[static_cast<std::size_t>(i) * m + n + j] = -bv;
      d[static_cast<std::size_t>(n + i) * m + j] = bv;
      d[static_cast<std::size_t>(n + i) * m + n + j] = kv;
    }
  }
  return d;
}

std::vector<double> dense_residual(const std::vector<double> &a, int n,
                                   const std::vector<double> &x,
                                   const std::vector<double> &b)
{
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i)
  {
    double acc = b[i];
    for (int j = 0; j < n; ++j)
    {
      acc -= a[static_cast<std::size_t>(i) * n + j] * x[j];
    }
    r[i] = acc;
  }
  return r;
}

namespace
{

double det2(double e1x, double e1y, double e2x, double e2y)
{
  const double det = e1x * e2y - e1y * e2x;
  if (det <= 0.0)
  {
    throw std::invalid_argument("oracle: cell must be positively oriented");
  }
  return det;
}

} // namespace

ElementMatrix oracle_curl_matrix(double e1x, double e1y, double e2x, double e2y,
                                 double mu_inv)
{
  const double det = det2(e1x, e1y, e2x, e2y);
  const std::array<double, 4> c = {1.0, -1.0, -1.0, 1.0};
  ElementMatrix a{};
  for (int u = 0; u < 4; ++u)
  {
    for (int v = 0; v < 4; ++v)
    {
      a[u][v] = mu_inv * c[u] * c[v] / det;
    }
  }
  return a;
}

ElementMatrix oracle_mass_matrix(double e1x, double e1y, double e2x, double e2y,
                                 double eps)
{
  const double det = det2(e1x, e1y, e2x, e2y);
  // G = det * J^{-1} J^{-T} for J = [e1 e2].
  // J^{-1} = (1/det) [[ e2y, -e2x], [-e1y, e1x]].
  const double g00 = (e2y * e2y + e2x * e2x) / det;
  const double g01 = -(e2y * e1y + e2x * e1x) / det;
  const double g11 = (e1y * e1y + e1x * e1x) / det;

  // Reference x-components: bottom = 1-yhat, top = yhat. Reference
  // y-components: left = 1-xhat, right = xhat. The other components vanish.
  // Exact integrals over the unit square: same-direction pairs give the
  // (1/3, 1/6) pattern, cross-direction pairs give 1/4.
  ElementMatrix m{};
  const double third = 1.0 / 3.0;
  const double sixth = 1.0 / 6.0;
  const double quarter = 0.25;

  m[0][0] = g00 * third;
  m[0][1] = g00 * sixth;
  m[1][0] = g00 * sixth;
  m[1][1] = g00 * third;

  m[2][2] = g11 * third;
  m[2][3] = g11 * sixth;
  m[3][2] = g11 * sixth;
  m[3][3] = g11 * third;

  for (int u = 0; u < 2; ++u)
  {
    for (int v = 2; v < 4; ++v)
    {
      m[u][v] = g01 * quarter;
      m[v][u] = g01 * quarter;
    }
  }
  for (int u = 0; u < 4; ++u)
  {
    for (int v = 0; v < 4; ++v)
    {
      m[u][v] *= eps;
    }
  }
  return m;
}

double urand(std::mt19937 &rng, double lo, double hi)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

} // namespace maxwelldd::test
