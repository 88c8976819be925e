// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_CSR_HPP
#define MAXWELLDD_CSR_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace maxwelldd
{

struct Triplet
{
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed sparse row matrix with real entries. Column indices are strictly
// increasing within each row; duplicate triplets are summed on construction.
struct CsrMatrix
{
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> ptr; // size n_rows + 1
  std::vector<int> col;
  std::vector<double> val;

  static CsrMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets);

  std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }
  double max_abs() const;

  // y = A x. Throws std::invalid_argument on dimension mismatch.
  void spmv(const double *x, double *y) const;
  std::vector<double> spmv(const std::vector<double> &x) const;

  // Estimated storage following the values*8 + indices*4 counting rule.
  std::int64_t storage_bytes() const
  {
    return static_cast<std::int64_t>(val.size()) * 8 +
           static_cast<std::int64_t>(col.size() + ptr.size()) * 4;
  }
};

// Matrix-free linear operator on real vectors.
struct LinearOperator
{
  int n = 0;
  std::function<void(const double *, double *)> apply_fn;

  void apply(const double *x, double *y) const { apply_fn(x, y); }
  std::vector<double> apply(const std::vector<double> &x) const;

  // The returned operators capture the matrices by reference; the caller
  // keeps them alive for the life of the operator.
  static LinearOperator from_csr(const CsrMatrix &m);

  // The real form of the complex system (K + iB)u = f: the operator
  // [[K, -B], [B, K]] acting on stacked [Re(u); Im(u)] vectors of length 2N.
  static LinearOperator block2(const CsrMatrix &K, const CsrMatrix &B);
};

// Assembles the explicit 2N-by-2N CSR matrix [[K, -B], [B, K]].
CsrMatrix assemble_block_csr(const CsrMatrix &K, const CsrMatrix &B);

// alpha*a + beta*b with matching dimensions.
CsrMatrix csr_add(const CsrMatrix &a, const CsrMatrix &b, double alpha = 1.0,
                  double beta = 1.0);

} // namespace maxwelldd

#endif
