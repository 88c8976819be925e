// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_SPARSE_LU_HPP
#define MAXWELLDD_SPARSE_LU_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "maxwelldd/csr.hpp"

namespace maxwelldd
{

class SingularMatrixError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Sparse direct LU factorization of a square real matrix. The factorization
// is computed once and is immutable afterwards; solves are const and safe to
// run concurrently from several threads.
class SparseLu
{
public:
  explicit SparseLu(const CsrMatrix &m); // throws SingularMatrixError
  ~SparseLu();
  SparseLu(SparseLu &&) noexcept;
  SparseLu &operator=(SparseLu &&) noexcept;
  SparseLu(const SparseLu &) = delete;
  SparseLu &operator=(const SparseLu &) = delete;

  int size() const;
  std::int64_t factor_nnz() const; // nnz(L) + nnz(U)
  std::int64_t storage_bytes() const { return factor_nnz() * 8 + factor_nnz() * 4; }

  void solve(const double *b, double *x) const;
  std::vector<double> solve(const std::vector<double> &b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace maxwelldd

#endif
