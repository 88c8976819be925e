// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Reference implementations used only by the tests. Everything here is
// derived independently of the library code paths it checks: the dense LU is
// hand-rolled, and the element matrices come from closed-form integration of
// the reference basis on affine cells rather than from quadrature.

#ifndef MAXWELLDD_TESTS_ORACLES_HPP
#define MAXWELLDD_TESTS_ORACLES_HPP

#include <array>
#include <complex>
#include <random>
#include <vector>

#include "maxwelldd/csr.hpp"

namespace maxwelldd::test
{

// Dense LU with partial pivoting (row-major storage).
class DenseLu
{
public:
  DenseLu(std::vector<double> matrix, int n);

  std::vector<double> solve(const std::vector<double> &b) const;

private:
  int n_;
  std::vector<double> a_;
  std::vector<int> perm_;
};

std::vector<double> dense_from_csr(const CsrMatrix &m);
// Dense [[K, -B], [B, K]].
std::vector<double> dense_block2(const CsrMatrix &k, const CsrMatrix &b);
std::vector<double> dense_residual(const std::vector<double> &a, int n,
                                   const std::vector<double> &x,
                                   const std::vector<double> &b);

// Element matrices on an affine cell spanned from corner p0 by the edge
// vectors e1 (bottom) and e2 (left), i.e. the Jacobian is the constant matrix
// [e1 e2]. Entries follow the lexicographic local edge order bottom, top,
// left, right with tangents fixed along +x / +y.
//
// Curl-curl: with unit tangential moments the reference curls are
// (+1, -1, -1, +1) and the pulled-back curl is constant, so
//   A_uv = mu_inv * c_u * c_v / det(J).
// Mass: with G = det(J) * J^{-1} J^{-T},
//   M_uv = eps * (Ixx_uv G00 + Ixy_uv G01 + Iyy_uv G11)
// where the I blocks are the exact reference integrals of the basis
// component products (1/3, 1/6 pattern within a direction, 1/4 across).
using ElementMatrix = std::array<std::array<double, 4>, 4>;
ElementMatrix oracle_curl_matrix(double e1x, double e1y, double e2x, double e2y,
                                 double mu_inv);
ElementMatrix oracle_mass_matrix(double e1x, double e1y, double e2x, double e2y,
                                 double eps);

double urand(std::mt19937 &rng, double lo, double hi);

// max |a-b| over two equally sized vectors.
double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b);

} // namespace maxwelldd::test

#endif
