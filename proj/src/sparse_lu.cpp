// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/sparse_lu.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace maxwelldd
{

struct SparseLu::Impl
{
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  int n = 0;
};

SparseLu::SparseLu(const CsrMatrix &m) : impl_(std::make_unique<Impl>())
{
  if (m.n_rows != m.n_cols)
    throw std::invalid_argument("sparse LU requires a square matrix");
  impl_->n = m.n_rows;

  Eigen::SparseMatrix<double> a(m.n_rows, m.n_cols);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m.val.size());
    for (int i = 0; i < m.n_rows; ++i)
      for (int k = m.ptr[i]; k < m.ptr[i + 1]; ++k)
        trips.emplace_back(i, m.col[k], m.val[k]);
    a.setFromTriplets(trips.begin(), trips.end());
  }
  a.makeCompressed();

  impl_->lu.analyzePattern(a);
  impl_->lu.factorize(a);
  if (impl_->lu.info() != Eigen::Success)
    throw SingularMatrixError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu &&) noexcept = default;
SparseLu &SparseLu::operator=(SparseLu &&) noexcept = default;

int SparseLu::size() const { return impl_->n; }

std::int64_t SparseLu::factor_nnz() const
{
  return static_cast<std::int64_t>(impl_->lu.nnzL()) +
         static_cast<std::int64_t>(impl_->lu.nnzU());
}

void SparseLu::solve(const double *b, double *x) const
{
  Eigen::Map<const Eigen::VectorXd> bm(b, impl_->n);
  Eigen::VectorXd xv = impl_->lu.solve(bm);
  if (impl_->lu.info() != Eigen::Success)
    throw SingularMatrixError("sparse LU solve failed");
  Eigen::Map<Eigen::VectorXd>(x, impl_->n) = xv;
}

std::vector<double> SparseLu::solve(const std::vector<double> &b) const
{
  if (static_cast<int>(b.size()) != impl_->n)
    throw std::invalid_argument("sparse LU solve: dimension mismatch");
  std::vector<double> x(b.size());
  solve(b.data(), x.data());
  return x;
}

} // namespace maxwelldd
