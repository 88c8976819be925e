// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/csr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxwelldd
{

CsrMatrix CsrMatrix::from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets)
{
  for (const Triplet &t : triplets)
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
      throw std::invalid_argument("triplet index out of range");

  std::sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b) {
    return (a.row != b.row) ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.ptr.assign(n_rows + 1, 0);
  m.col.reserve(triplets.size());
  m.val.reserve(triplets.size());
  int row_cursor = 0;
  for (const Triplet &t : triplets)
  {
    // Duplicates are adjacent after sorting; fold them into the last entry.
    if (t.row == row_cursor && static_cast<int>(m.col.size()) > m.ptr[row_cursor] &&
        m.col.back() == t.col)
    {
      m.val.back() += t.value;
      continue;
    }
    while (row_cursor < t.row)
      m.ptr[++row_cursor] = static_cast<int>(m.col.size());
    m.col.push_back(t.col);
    m.val.push_back(t.value);
  }
  while (row_cursor < n_rows)
    m.ptr[++row_cursor] = static_cast<int>(m.col.size());
  return m;
}

double CsrMatrix::max_abs() const
{
  double m = 0.0;
  for (double v : val)
    m = std::max(m, std::abs(v));
  return m;
}

void CsrMatrix::spmv(const double *x, double *y) const
{
  for (int i = 0; i < n_rows; ++i)
  {
    double sum = 0.0;
    for (int k = ptr[i]; k < ptr[i + 1]; ++k)
      sum += val[k] * x[col[k]];
    y[i] = sum;
  }
}

std::vector<double> CsrMatrix::spmv(const std::vector<double> &x) const
{
  if (static_cast<int>(x.size()) != n_cols)
    throw std::invalid_argument("spmv: dimension mismatch");
  std::vector<double> y(n_rows);
  spmv(x.data(), y.data());
  return y;
}

std::vector<double> LinearOperator::apply(const std::vector<double> &x) const
{
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("operator apply: dimension mismatch");
  std::vector<double> y(n);
  apply_fn(x.data(), y.data());
  return y;
}

LinearOperator LinearOperator::from_csr(const CsrMatrix &m)
{
  if (m.n_rows != m.n_cols)
    throw std::invalid_argument("operator requires a square matrix");
  LinearOperator op;
  op.n = m.n_rows;
  op.apply_fn = [&m](const double *x, double *y) { m.spmv(x, y); };
  return op;
}

LinearOperator LinearOperator::block2(const CsrMatrix &K, const CsrMatrix &B)
{
  if (K.n_rows != K.n_cols || B.n_rows != B.n_cols || K.n_rows != B.n_rows)
    throw std::invalid_argument("block operator requires square blocks of equal size");
  const int n = K.n_rows;
  LinearOperator op;
  op.n = 2 * n;
  op.apply_fn = [&K, &B, n](const double *x, double *y) {
    // y1 = K x1 - B x2, y2 = B x1 + K x2
    K.spmv(x, y);
    K.spmv(x + n, y + n);
    for (int i = 0; i < n; ++i)
    {
      double b1 = 0.0, b2 = 0.0;
      for (int k = B.ptr[i]; k < B.ptr[i + 1]; ++k)
      {
        b1 += B.val[k] * x[n + B.col[k]];
        b2 += B.val[k] * x[B.col[k]];
      }
      y[i] -= b1;
      y[n + i] += b2;
    }
  };
  return op;
}

CsrMatrix assemble_block_csr(const CsrMatrix &K, const CsrMatrix &B)
{
  if (K.n_rows != K.n_cols || B.n_rows != B.n_cols || K.n_rows != B.n_rows)
    throw std::invalid_argument("block assembly requires square blocks of equal size");
  const int n = K.n_rows;
  std::vector<Triplet> trips;
  trips.reserve(2 * (K.val.size() + B.val.size()));
  for (int i = 0; i < n; ++i)
  {
    for (int k = K.ptr[i]; k < K.ptr[i + 1]; ++k)
    {
      trips.push_back({i, K.col[k], K.val[k]});
      trips.push_back({n + i, n + K.col[k], K.val[k]});
    }
    for (int k = B.ptr[i]; k < B.ptr[i + 1]; ++k)
    {
      trips.push_back({i, n + B.col[k], -B.val[k]});
      trips.push_back({n + i, B.col[k], B.val[k]});
    }
  }
  return CsrMatrix::from_triplets(2 * n, 2 * n, std::move(trips));
}

CsrMatrix csr_add(const CsrMatrix &a, const CsrMatrix &b, double alpha, double beta)
{
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols)
    throw std::invalid_argument("csr_add: dimension mismatch");
  std::vector<Triplet> trips;
  trips.reserve(a.val.size() + b.val.size());
  for (int i = 0; i < a.n_rows; ++i)
  {
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k)
      trips.push_back({i, a.col[k], alpha * a.val[k]});
    for (int k = b.ptr[i]; k < b.ptr[i + 1]; ++k)
      trips.push_back({i, b.col[k], beta * b.val[k]});
  }
  return CsrMatrix::from_triplets(a.n_rows, a.n_cols, std::move(trips));
}

} // namespace maxwelldd
