// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_PRECONDITIONER_HPP
#define MAXWELLDD_PRECONDITIONER_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "maxwelldd/csr.hpp"
#include "maxwelldd/gmres.hpp"
#include "maxwelldd/sparse_lu.hpp"

namespace maxwelldd
{

class PreconditionerFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class PrecondKind
{
  None,
  Ilu0,
  SsorSweep,
  SchurComplement,
  BlockDiagonal
};

// A fixed approximate inverse z = M^{-1} r. Instances are immutable, cheap to
// copy (shared state), and safe for concurrent apply calls.
class Preconditioner
{
public:
  Preconditioner() = default;

  PrecondKind kind() const;
  int size() const;
  void apply(const double *r, double *z) const;
  std::vector<double> apply(const std::vector<double> &r) const;

  std::int64_t storage_nnz() const;   // nonzeros held by factors / sweep data
  std::int64_t storage_bytes() const; // values*8 + indices*4 estimate
  int pivot_shifts() const;           // zero pivots replaced during ILU0 setup

  // False for the Schur variant, whose apply contains an inner iterative
  // solve with a stopping tolerance; true for the exactly linear variants.
  bool is_exact_linear() const;

  explicit operator bool() const { return impl_ != nullptr; }

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  friend Preconditioner make_none(int n);
  friend Preconditioner make_ilu0(const CsrMatrix &a);
  friend Preconditioner make_ssor(const CsrMatrix &a, double relaxation);
  friend Preconditioner make_schur(const CsrMatrix &k, const CsrMatrix &bmat,
                                   const GmresConfig &inner);
  friend Preconditioner make_block_diag(std::shared_ptr<const SparseLu> lu_k);
};

// Identity (no preconditioning).
Preconditioner make_none(int n);

// Zero-fill incomplete LU on the sparsity pattern of the assembled matrix.
// Zero (or near-zero) pivots are replaced by a sign-preserving shift of
// 1e-10 * max|a_ij| and counted in pivot_shifts().
Preconditioner make_ilu0(const CsrMatrix &a);

// One symmetric successive-over-relaxation sweep,
// M = w/(2-w) (D/w + L) D^{-1} (D/w + U). Throws std::invalid_argument if a
// diagonal entry is missing or zero, or if relaxation is outside (0, 2).
Preconditioner make_ssor(const CsrMatrix &a, double relaxation = 1.0);

// Block lower-triangular application for the 2N system [[K,-B],[B,K]]:
// solve K z1 = r1 approximately, then S z2 = r2 - B z1 with the Schur
// complement S = K + B K^{-1} B applied matrix-free. Approximate K solves are
// ILU0-preconditioned GMRES runs at the given (loose) inner tolerance.
// A non-finite result propagates as PreconditionerFailure.
Preconditioner make_schur(const CsrMatrix &k, const CsrMatrix &bmat,
                          const GmresConfig &inner);

// diag(K, K)^{-1} via one reusable sparse LU factorization of K, applied to
// the real and imaginary halves independently.
Preconditioner make_block_diag(std::shared_ptr<const SparseLu> lu_k);
Preconditioner make_block_diag(const CsrMatrix &k);

} // namespace maxwelldd

#endif
