// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace maxwelldd
{

struct Preconditioner::Impl
{
  PrecondKind kind = PrecondKind::None;
  int n = 0;
  std::function<void(const double *, double *)> apply_fn;
  std::int64_t nnz = 0;
  std::int64_t bytes = 0;
  int pivot_shifts = 0;
  bool exact_linear = true;
};

PrecondKind Preconditioner::kind() const { return impl_->kind; }
int Preconditioner::size() const { return impl_->n; }
std::int64_t Preconditioner::storage_nnz() const { return impl_->nnz; }
std::int64_t Preconditioner::storage_bytes() const { return impl_->bytes; }
int Preconditioner::pivot_shifts() const { return impl_->pivot_shifts; }
bool Preconditioner::is_exact_linear() const { return impl_->exact_linear; }

void Preconditioner::apply(const double *r, double *z) const { impl_->apply_fn(r, z); }

std::vector<double> Preconditioner::apply(const std::vector<double> &r) const
{
  if (static_cast<int>(r.size()) != impl_->n)
    throw std::invalid_argument("preconditioner apply: dimension mismatch");
  std::vector<double> z(r.size());
  apply(r.data(), z.data());
  return z;
}

namespace
{

// Position of the diagonal entry within each CSR row. Throws if absent.
std::vector<int> diagonal_positions(const CsrMatrix &a, const char *who)
{
  std::vector<int> pos(a.n_rows, -1);
  for (int i = 0; i < a.n_rows; ++i)
  {
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k)
      if (a.col[k] == i)
      {
        pos[i] = k;
        break;
      }
    if (pos[i] < 0)
      throw std::invalid_argument(std::string(who) + ": diagonal entry missing from pattern");
  }
  return pos;
}

} // namespace

Preconditioner make_none(int n)
{
  auto impl = std::make_shared<Preconditioner::Impl>();
  impl->kind = PrecondKind::None;
  impl->n = n;
  impl->apply_fn = [n](const double *r, double *z) { std::copy(r, r + n, z); };
  Preconditioner p;
  p.impl_ = std::move(impl);
  return p;
}

Preconditioner make_ilu0(const CsrMatrix &a)
{
  if (a.n_rows != a.n_cols)
    throw std::invalid_argument("ilu0: matrix must be square");

  struct Factor
  {
    CsrMatrix f; // L (strict lower, unit diagonal implied) and U share the pattern of A
    std::vector<int> diag;
  };
  auto fac = std::make_shared<Factor>();
  fac->f = a;
  fac->diag = diagonal_positions(fac->f, "ilu0");

  CsrMatrix &f = fac->f;
  const std::vector<int> &diag = fac->diag;
  const double shift = 1e-10 * std::max(a.max_abs(), 1e-300);
  int shifts = 0;
  const int n = f.n_rows;
  for (int i = 0; i < n; ++i)
  {
    for (int kp = f.ptr[i]; kp < f.ptr[i + 1] && f.col[kp] < i; ++kp)
    {
      const int k = f.col[kp];
      const double lik = (f.val[kp] /= f.val[diag[k]]);
      // Subtract lik * (row k, columns > k) from row i on the shared pattern.
      int p = kp + 1;
      int q = diag[k] + 1;
      while (p < f.ptr[i + 1] && q < f.ptr[k + 1])
      {
        if (f.col[p] == f.col[q])
          f.val[p++] -= lik * f.val[q++];
        else if (f.col[p] < f.col[q])
          ++p;
        else
          ++q;
      }
    }
    double &d = f.val[diag[i]];
    if (std::abs(d) < shift)
    {
      d = (d >= 0.0) ? shift : -shift;
      ++shifts;
    }
  }

  auto impl = std::make_shared<Preconditioner::Impl>();
  impl->kind = PrecondKind::Ilu0;
  impl->n = n;
  impl->nnz = f.nnz();
  impl->bytes = f.storage_bytes();
  impl->pivot_shifts = shifts;
  impl->apply_fn = [fac, n](const double *r, double *z) {
    const CsrMatrix &f = fac->f;
    const std::vector<int> &diag = fac->diag;
    // L has unit diagonal: forward substitution over columns < i.
    for (int i = 0; i < n; ++i)
    {
      double s = r[i];
      for (int k = f.ptr[i]; k < f.ptr[i + 1] && f.col[k] < i; ++k)
        s -= f.val[k] * z[f.col[k]];
      z[i] = s;
    }
    // U: backward substitution over columns > i.
    for (int i = n - 1; i >= 0; --i)
    {
      double s = z[i];
      for (int k = diag[i] + 1; k < f.ptr[i + 1]; ++k)
        s -= f.val[k] * z[f.col[k]];
      z[i] = s / f.val[diag[i]];
    }
  };
  Preconditioner p;
  p.impl_ = std::move(impl);
  return p;
}

Preconditioner make_ssor(const CsrMatrix &a, double relaxation)
{
  if (a.n_rows != a.n_cols)
    throw std::invalid_argument("ssor: matrix must be square");
  if (!(relaxation > 0.0 && relaxation < 2.0))
    throw std::invalid_argument("ssor: relaxation must lie in (0, 2)");

  struct Sweep
  {
    CsrMatrix a;
    std::vector<int> diag;
    double w;
  };
  auto sw = std::make_shared<Sweep>();
  sw->a = a;
  sw->diag = diagonal_positions(sw->a, "ssor");
  sw->w = relaxation;
  for (int i = 0; i < a.n_rows; ++i)
    if (sw->a.val[sw->diag[i]] == 0.0)
      throw std::invalid_argument("ssor: zero diagonal entry");

  const int n = a.n_rows;
  auto impl = std::make_shared<Preconditioner::Impl>();
  impl->kind = PrecondKind::SsorSweep;
  impl->n = n;
  impl->nnz = a.nnz();
  impl->bytes = a.storage_bytes();
  impl->apply_fn = [sw, n](const double *r, double *z) {
    const CsrMatrix &a = sw->a;
    const std::vector<int> &diag = sw->diag;
    const double w = sw->w;
    // M^{-1} = (2-w)/w (D/w + U)^{-1} D (D/w + L)^{-1}.
    for (int i = 0; i < n; ++i)
    {
      double s = r[i];
      for (int k = a.ptr[i]; k < a.ptr[i + 1] && a.col[k] < i; ++k)
        s -= a.val[k] * z[a.col[k]];
      z[i] = s * w / a.val[diag[i]];
    }
    for (int i = 0; i < n; ++i)
      z[i] *= a.val[diag[i]];
    for (int i = n - 1; i >= 0; --i)
    {
      double s = z[i];
      for (int k = diag[i] + 1; k < a.ptr[i + 1]; ++k)
        s -= a.val[k] * z[a.col[k]];
      z[i] = s * w / a.val[diag[i]];
    }
    const double scale = (2.0 - w) / w;
    for (int i = 0; i < n; ++i)
      z[i] *= scale;
  };
  Preconditioner p;
  p.impl_ = std::move(impl);
  return p;
}

Preconditioner make_schur(const CsrMatrix &k, const CsrMatrix &bmat, const GmresConfig &inner)
{
  if (k.n_rows != k.n_cols || bmat.n_rows != bmat.n_cols || k.n_rows != bmat.n_rows)
    throw std::invalid_argument("schur: blocks must be square and of equal size");

  struct Blocks
  {
    CsrMatrix k;
    CsrMatrix b;
    Preconditioner ilu_k;
    GmresConfig inner;
  };
  auto sb = std::make_shared<Blocks>();
  sb->k = k;
  sb->b = bmat;
  sb->ilu_k = make_ilu0(sb->k);
  sb->inner = inner;

  const int n = k.n_rows;
  auto impl = std::make_shared<Preconditioner::Impl>();
  impl->kind = PrecondKind::SchurComplement;
  impl->n = 2 * n;
  impl->nnz = sb->ilu_k.storage_nnz();
  impl->bytes = sb->ilu_k.storage_bytes();
  impl->exact_linear = false;
  impl->apply_fn = [sb, n](const double *r, double *z) {
    const LinearOperator op_k = LinearOperator::from_csr(sb->k);
    // Approximate K^{-1} via ILU0-preconditioned GMRES at the loose tolerance.
    const auto solve_k = [&](const std::vector<double> &rhs) {
      std::vector<double> sol;
      gmres(op_k, &sb->ilu_k, rhs, sol, sb->inner);
      return sol;
    };

    const std::vector<double> r1(r, r + n);
    std::vector<double> z1 = solve_k(r1);

    // r2' = r2 - B z1.
    std::vector<double> r2(n);
    sb->b.spmv(z1.data(), r2.data());
    for (int i = 0; i < n; ++i)
      r2[i] = r[n + i] - r2[i];

    // Schur complement S = K + B K^{-1} B, applied matrix-free.
    LinearOperator op_s;
    op_s.n = n;
    op_s.apply_fn = [&](const double *x, double *y) {
      std::vector<double> bx(n);
      sb->b.spmv(x, bx.data());
      const std::vector<double> kbx = solve_k(bx);
      sb->b.spmv(kbx.data(), y);
      std::vector<double> kx(n);
      sb->k.spmv(x, kx.data());
      for (int i = 0; i < n; ++i)
        y[i] += kx[i];
    };
    std::vector<double> z2;
    const SolveReport rep = gmres(op_s, &sb->ilu_k, r2, z2, sb->inner);
    (void)rep;

    for (int i = 0; i < n; ++i)
    {
      if (!std::isfinite(z1[i]) || !std::isfinite(z2[i]))
        throw PreconditionerFailure("schur: non-finite value in preconditioner application");
      z[i] = z1[i];
      z[n + i] = z2[i];
    }
  };
  Preconditioner p;
  p.impl_ = std::move(impl);
  return p;
}

Preconditioner make_block_diag(std::shared_ptr<const SparseLu> lu_k)
{
  const int n = lu_k->size();
  auto impl = std::make_shared<Preconditioner::Impl>();
  impl->kind = PrecondKind::BlockDiagonal;
  impl->n = 2 * n;
  impl->nnz = lu_k->factor_nnz();
  impl->bytes = lu_k->storage_bytes();
  impl->apply_fn = [lu = std::move(lu_k), n](const double *r, double *z) {
    lu->solve(r, z);
    lu->solve(r + n, z + n);
  };
  Preconditioner p;
  p.impl_ = std::move(impl);
  return p;
}

Preconditioner make_block_diag(const CsrMatrix &k)
{
  return make_block_diag(std::make_shared<const SparseLu>(k));
}

} // namespace maxwelldd
