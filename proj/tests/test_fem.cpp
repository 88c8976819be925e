// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "maxwelldd/csr.hpp"
#include "maxwelldd/fem.hpp"
#include "maxwelldd/mesh.hpp"
#include "maxwelldd/sparse_lu.hpp"
#include "oracles.hpp"

using namespace maxwelldd;

namespace
{

// One-cell mesh spanned by p0, p0+e1, p0+e1+e2, p0+e2 (a parallelogram).
StructuredMesh parallelogram_mesh(Vec2 p0, Vec2 e1, Vec2 e2)
{
  StructuredMesh mesh;
  mesh.nx = 1;
  mesh.ny = 1;
  mesh.vertices = {p0, p0 + e1, p0 + e1 + e2, p0 + e2};
  mesh.cells.push_back(Cell{{0, 1, 2, 3}, kMaterialCladding});
  mesh.finalize();
  return mesh;
}

// Element matrix recovered from a single-cell global assembly, de-signed back
// to slot orientation so it is comparable with the closed-form oracle.
test::ElementMatrix designed_element_matrix(const StructuredMesh &mesh, const CsrMatrix &k)
{
  std::vector<double> dense = test::dense_from_csr(k);
  test::ElementMatrix m{};
  for (int u = 0; u < 4; ++u)
  {
    for (int v = 0; v < 4; ++v)
    {
      const int eu = mesh.cell_edges[0][u];
      const int ev = mesh.cell_edges[0][v];
      const double s = mesh.cell_edge_signs[0][u] * mesh.cell_edge_signs[0][v];
      m[u][v] = s * dense[static_cast<std::size_t>(eu) * 4 + ev];
    }
  }
  return m;
}

double max_entry_diff(const test::ElementMatrix &a, const test::ElementMatrix &b)
{
  double worst = 0.0;
  for (int u = 0; u < 4; ++u)
  {
    for (int v = 0; v < 4; ++v)
    {
      worst = std::max(worst, std::abs(a[u][v] - b[u][v]));
    }
  }
  return worst;
}

ComplexVector solve_block_direct(const BlockSystem &sys)
{
  SparseLu lu(assemble_block_csr(sys.K, sys.Bmat));
  std::vector<double> b(2 * static_cast<std::size_t>(sys.n));
  for (int i = 0; i < sys.n; ++i)
  {
    b[i] = sys.rhs.re[i];
    b[static_cast<std::size_t>(sys.n) + i] = sys.rhs.im[i];
  }
  std::vector<double> x = lu.solve(b);
  ComplexVector u;
  u.re.assign(x.begin(), x.begin() + sys.n);
  u.im.assign(x.begin() + sys.n, x.end());
  return u;
}

} // namespace

TEST_CASE("reference basis has unit tangential moments and constant curls")
{
  // Tangential moment of function u on slot e: integral over the slot edge of
  // u . tau with tau = +x (horizontal slots) or +y (vertical slots).
  auto slot_moment = [](int fn, int slot) {
    // 3-point Gauss on [0,1] integrates the linear trace exactly.
    const double g = std::sqrt(3.0 / 5.0);
    const double nodes[3] = {0.5 * (1.0 - g), 0.5, 0.5 * (1.0 + g)};
    const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double acc = 0.0;
    for (int q = 0; q < 3; ++q)
    {
      Vec2 p{};
      Vec2 tau{};
      switch (slot)
      {
      case kSlotBottom: p = {nodes[q], 0.0}; tau = {1.0, 0.0}; break;
      case kSlotTop:    p = {nodes[q], 1.0}; tau = {1.0, 0.0}; break;
      case kSlotLeft:   p = {0.0, nodes[q]}; tau = {0.0, 1.0}; break;
      default:          p = {1.0, nodes[q]}; tau = {0.0, 1.0}; break;
      }
      acc += weights[q] * dot(ref_basis(fn, p).value, tau);
    }
    return acc;
  };

  for (int fn = 0; fn < 4; ++fn)
  {
    for (int slot = 0; slot < 4; ++slot)
    {
      CHECK(slot_moment(fn, slot) == doctest::Approx(fn == slot ? 1.0 : 0.0).epsilon(1e-14));
    }
  }

  // Curls are the constants +1, -1, -1, +1.
  const double expected_curl[4] = {1.0, -1.0, -1.0, 1.0};
  std::mt19937 rng(2);
  for (int fn = 0; fn < 4; ++fn)
  {
    for (int rep = 0; rep < 5; ++rep)
    {
      Vec2 p{test::urand(rng, 0.0, 1.0), test::urand(rng, 0.0, 1.0)};
      CHECK(ref_basis(fn, p).curl == doctest::Approx(expected_curl[fn]));
    }
  }

  CHECK_THROWS_AS(ref_basis(4, Vec2{0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("element matrices match the closed-form oracle on random affine cells")
{
  std::mt19937 rng(13);
  for (int rep = 0; rep < 12; ++rep)
  {
    const Vec2 p0{test::urand(rng, -2.0, 2.0), test::urand(rng, -2.0, 2.0)};
    Vec2 e1{test::urand(rng, 0.3, 2.0), test::urand(rng, -0.4, 0.4)};
    Vec2 e2{test::urand(rng, -0.4, 0.4), test::urand(rng, 0.3, 2.0)};
    const double mu_inv = test::urand(rng, 0.5, 2.0);
    const double eps = test::urand(rng, 0.5, 3.0);

    StructuredMesh mesh = parallelogram_mesh(p0, e1, e2);
    EdgeSpace space(mesh);
    MaterialMap mat = MaterialMap::uniform(mesh, mu_inv, eps);

    test::ElementMatrix a = designed_element_matrix(mesh, assemble_A(space, mat));
    test::ElementMatrix m = designed_element_matrix(mesh, assemble_M(space, mat));
    test::ElementMatrix ao = test::oracle_curl_matrix(e1.x, e1.y, e2.x, e2.y, mu_inv);
    test::ElementMatrix mo = test::oracle_mass_matrix(e1.x, e1.y, e2.x, e2.y, eps);

    CHECK(max_entry_diff(a, ao) < 1e-12);
    CHECK(max_entry_diff(m, mo) < 1e-12);
  }
}

TEST_CASE("unit-square element matrices take their textbook values")
{
  StructuredMesh mesh = parallelogram_mesh({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
  EdgeSpace space(mesh);
  MaterialMap mat = MaterialMap::uniform(mesh);
  test::ElementMatrix a = designed_element_matrix(mesh, assemble_A(space, mat));
  test::ElementMatrix m = designed_element_matrix(mesh, assemble_M(space, mat));

  const double c[4] = {1.0, -1.0, -1.0, 1.0};
  for (int u = 0; u < 4; ++u)
  {
    for (int v = 0; v < 4; ++v)
    {
      CHECK(a[u][v] == doctest::Approx(c[u] * c[v]).epsilon(1e-14));
      // Same-direction blocks are the 1D mass (1/3, 1/6); cross blocks vanish.
      const bool same_dir = (u < 2) == (v < 2);
      const double expected = !same_dir ? 0.0 : (u == v ? 1.0 / 3.0 : 1.0 / 6.0);
      CHECK(m[u][v] == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("mass matrix anisotropic scaling under cell stretching")
{
  // Stretching x by 2 scales the vertical-edge block by hx/hy = 2 and the
  // horizontal-edge block by hy/hx = 1/2.
  StructuredMesh unit = parallelogram_mesh({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
  StructuredMesh wide = parallelogram_mesh({0.0, 0.0}, {2.0, 0.0}, {0.0, 1.0});
  EdgeSpace su(unit), sw(wide);
  MaterialMap mu = MaterialMap::uniform(unit), mw = MaterialMap::uniform(wide);
  test::ElementMatrix m1 = designed_element_matrix(unit, assemble_M(su, mu));
  test::ElementMatrix m2 = designed_element_matrix(wide, assemble_M(sw, mw));

  for (int u = 0; u < 2; ++u)
  {
    for (int v = 0; v < 2; ++v)
    {
      CHECK(m2[u][v] == doctest::Approx(0.5 * m1[u][v]));         // bottom/top
      CHECK(m2[u + 2][v + 2] == doctest::Approx(2.0 * m1[u + 2][v + 2])); // left/right
    }
  }
  // The curl matrix scales by 1/det = 1/2 uniformly.
  test::ElementMatrix a1 = designed_element_matrix(unit, assemble_A(su, mu));
  test::ElementMatrix a2 = designed_element_matrix(wide, assemble_A(sw, mw));
  for (int u = 0; u < 4; ++u)
  {
    for (int v = 0; v < 4; ++v)
    {
      CHECK(a2[u][v] == doctest::Approx(0.5 * a1[u][v]));
    }
  }
}

TEST_CASE("discrete gradients span the kernel of the curl-curl matrix")
{
  StructuredMesh mesh = build_rect_mesh(8, 8, GeometrySpec::plain_square());
  EdgeSpace space(mesh);
  MaterialMap mat = MaterialMap::uniform(mesh);
  CsrMatrix a = assemble_A(space, mat);
  const double a_norm = a.max_abs();

  // The edge interpolant of a nodal hat gradient is psi(b) - psi(a) per edge.
  for (int iy = 1; iy < 8; ++iy)
  {
    for (int ix = 1; ix < 8; ++ix)
    {
      const int center = iy * 9 + ix;
      std::vector<double> g(mesh.n_edges(), 0.0);
      double g_norm = 0.0;
      for (int e = 0; e < mesh.n_edges(); ++e)
      {
        const double pb = mesh.edges[e].b == center ? 1.0 : 0.0;
        const double pa = mesh.edges[e].a == center ? 1.0 : 0.0;
        g[e] = pb - pa;
        g_norm += g[e] * g[e];
      }
      g_norm = std::sqrt(g_norm);
      std::vector<double> ag = a.spmv(g);
      double r = 0.0;
      for (double v : ag)
      {
        r = std::max(r, std::abs(v));
      }
      CHECK(r <= 1e-12 * a_norm * g_norm);
    }
  }
}

TEST_CASE("global assembly matches a dense complex oracle on a 2x2 mesh")
{
  const double omega = 3.0, kappa = 1.0;
  StructuredMesh mesh = build_rect_mesh(2, 2, GeometrySpec::plain_square());
  EdgeSpace space(mesh);
  MaterialMap mat = MaterialMap::uniform(mesh, 1.0, 1.0, kappa);

  SystemOptions opt;
  opt.incident = IncidentMode::None;
  BlockSystem sys = build_block_system(space, mat, omega, opt);
  const int n = mesh.n_edges();

  // Independent dense assembly from the closed-form element oracle.
  std::vector<double> k_oracle(static_cast<std::size_t>(n) * n, 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    const Vec2 bl = mesh.vertices[mesh.cells[c].v[0]];
    const Vec2 e1 = mesh.vertices[mesh.cells[c].v[1]] - bl;
    const Vec2 e2 = mesh.vertices[mesh.cells[c].v[3]] - bl;
    test::ElementMatrix a = test::oracle_curl_matrix(e1.x, e1.y, e2.x, e2.y, 1.0);
    test::ElementMatrix m = test::oracle_mass_matrix(e1.x, e1.y, e2.x, e2.y, 1.0);
    for (int u = 0; u < 4; ++u)
    {
      for (int v = 0; v < 4; ++v)
      {
        const int eu = mesh.cell_edges[c][u], ev = mesh.cell_edges[c][v];
        const double s = mesh.cell_edge_signs[c][u] * mesh.cell_edge_signs[c][v];
        k_oracle[static_cast<std::size_t>(eu) * n + ev] +=
            s * (a[u][v] - omega * omega * m[u][v]);
      }
    }
  }
  std::vector<double> b_oracle(static_cast<std::size_t>(n) * n, 0.0);
  for (int e = 0; e < n; ++e)
  {
    if (mesh.edge_tags[e].kind == BoundaryKind::GammaInc ||
        mesh.edge_tags[e].kind == BoundaryKind::GammaInfty)
    {
      b_oracle[static_cast<std::size_t>(e) * n + e] = kappa * omega / mesh.edge_length(e);
    }
  }

  CHECK(test::max_abs_diff(test::dense_from_csr(sys.K), k_oracle) < 1e-12);
  CHECK(test::max_abs_diff(test::dense_from_csr(sys.Bmat), b_oracle) < 1e-12);
}

TEST_CASE("volume matrices are exactly symmetric")
{
  StructuredMesh mesh = build_rect_mesh(6, 5, GeometrySpec::block_benchmark());
  EdgeSpace space(mesh);
  MaterialMap mat = MaterialMap::from_geometry(mesh, GeometrySpec::block_benchmark());
  for (const CsrMatrix &m : {assemble_A(space, mat), assemble_M(space, mat)})
  {
    std::vector<double> d = test::dense_from_csr(m);
    const int n = m.n_rows;
    for (int i = 0; i < n; ++i)
    {
      for (int j = i + 1; j < n; ++j)
      {
        CHECK(d[static_cast<std::size_t>(i) * n + j] ==
              d[static_cast<std::size_t>(j) * n + i]);
      }
    }
  }
}

TEST_CASE("boundary tangential mass is diagonal with entry coeff / length")
{
  StructuredMesh mesh = build_rect_mesh(2, 2, GeometrySpec::plain_square());
  EdgeSpace space(mesh);
  std::vector<int> edges = boundary_edges(mesh, BoundaryKind::GammaInfty);
  const double coeff = 3.5;
  CsrMatrix b = assemble_B(space, edges, coeff);
  CHECK(b.nnz() == static_cast<int>(edges.size()));
  std::vector<double> d = test::dense_from_csr(b);
  const int n = mesh.n_edges();
  for (int e : edges)
  {
    CHECK(d[static_cast<std::size_t>(e) * n + e] == doctest::Approx(coeff / 0.5));
  }

  // Interior edges are rejected.
  std::vector<int> interior = {3};
  CHECK(mesh.edge_tags[3].kind == BoundaryKind::Interior);
  CHECK_THROWS_AS(assemble_B(space, interior, 1.0), std::invalid_argument);
}

TEST_CASE("material maps follow the geometry")
{
  GeometrySpec geom = GeometrySpec::block_benchmark();
  StructuredMesh mesh = build_rect_mesh(4, 4, geom);
  MaterialMap mat = MaterialMap::from_geometry(mesh, geom, 2.0);
  CHECK(mat.kappa == 2.0);
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    CHECK(mat.mu_inv[c] == 1.0);
    const double n = mesh.cells[c].material == kMaterialCore ? geom.n_core : geom.n_cladding;
    CHECK(mat.eps_r[c] == doctest::Approx(n * n));
  }
}

TEST_CASE("interpolation reproduces representable fields exactly")
{
  StructuredMesh mesh = build_rect_mesh(3, 4, GeometrySpec::plain_square());
  EdgeSpace space(mesh);
  // omega = 0 freezes the phase: the wave is the constant field p.
  PlaneWave constant;
  constant.polarization = {0.8, -0.4};
  ComplexVector coeffs = interpolate(space, constant, 0.0);
  std::mt19937 rng(19);
  for (int rep = 0; rep < 10; ++rep)
  {
    Vec2 p{test::urand(rng, 0.01, 0.99), test::urand(rng, 0.01, 0.99)};
    std::complex<double> ex, ey;
    evaluate_field(space, coeffs, p, ex, ey);
    CHECK(ex.real() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(ey.real() == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(std::abs(ex.imag()) < 1e-14);
    CHECK(std::abs(ey.imag()) < 1e-14);
  }
  CHECK(l2_error(space, coeffs, constant, 0.0) < 1e-13);
}

TEST_CASE("interpolant error decreases at first order for oblique waves")
{
  PlaneWave wave;
  const double th = 0.5;
  wave.direction = {std::cos(th), std::sin(th)};
  wave.polarization = {-std::sin(th), std::cos(th)};
  const double omega = 5.0;

  double prev = 0.0;
  for (int level = 0; level < 3; ++level)
  {
    const int n = 8 << level;
    StructuredMesh mesh = build_rect_mesh(n, n, GeometrySpec::plain_square());
    EdgeSpace space(mesh);
    ComplexVector coeffs = interpolate(space, wave, omega);
    const double err = l2_error(space, coeffs, wave, omega);
    if (level > 0)
    {
      const double rate = std::log2(prev / err);
      CHECK(rate > 0.85);
    }
    prev = err;
  }

  // The interpolated unit wave has unit L2 norm up to interpolation error.
  StructuredMesh mesh = build_rect_mesh(32, 32, GeometrySpec::plain_square());
  EdgeSpace space(mesh);
  ComplexVector coeffs = interpolate(space, wave, omega);
  CHECK(l2_norm(space, coeffs) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("port load equals the exact impedance data on the incoming boundary")
{
  const double omega = 4.0;
  StructuredMesh mesh = build_rect_mesh(6, 6, GeometrySpec::plain_square());
  EdgeSpace space(mesh);
  MaterialMap mat = MaterialMap::uniform(mesh);

  SystemOptions port;
  port.incident = IncidentMode::Port;
  BlockSystem sys_port = build_block_system(space, mat, omega, port);

  SystemOptions exact;
  exact.incident = IncidentMode::ExactRobin;
  BlockSystem sys_exact = build_block_system(space, mat, omega, exact);

  for (int e : boundary_edges(mesh, BoundaryKind::GammaInc))
  {
    CHECK(sys_port.rhs.re[e] == doctest::Approx(sys_exact.rhs.re[e]).epsilon(1e-12));
    CHECK(sys_port.rhs.im[e] == doctest::Approx(sys_exact.rhs.im[e]).epsilon(1e-12));
  }
  // The port load is supported on the incoming boundary only.
  for (int e = 0; e < mesh.n_edges(); ++e)
  {
    if (mesh.edge_tags[e].kind != BoundaryKind::GammaInc)
    {
      CHECK(sys_port.rhs.re[e] == 0.0);
      CHECK(sys_port.rhs.im[e] == 0.0);
    }
  }
}

TEST_CASE("manufactured solution convergence under mesh refinement")
{
  const double omega = 5.0;
  PlaneWave wave; // normal incidence
  double prev = 0.0;
  for (int level = 0; level < 3; ++level)
  {
    const int n = 8 << level;
    StructuredMesh mesh = build_rect_mesh(n, n, GeometrySpec::plain_square());
    EdgeSpace space(mesh);
    MaterialMap mat = MaterialMap::uniform(mesh);
    SystemOptions opt;
    opt.incident = IncidentMode::ExactRobin;
    opt.wave = wave;
    BlockSystem sys = build_block_system(space, mat, omega, opt);
    ComplexVector u = solve_block_direct(sys);
    const double err = l2_error(space, u, wave, omega);
    if (level > 0)
    {
      CHECK(std::log2(prev / err) > 0.9);
    }
    prev = err;
  }
}

TEST_CASE("assembly is invariant under vertex renumbering")
{
  const double omega = 4.0;
  PlaneWave wave;

  auto solve_error = [&](const StructuredMesh &mesh) {
    EdgeSpace space(mesh);
    MaterialMap mat = MaterialMap::uniform(mesh);
    SystemOptions opt;
    opt.incident = IncidentMode::ExactRobin;
    opt.wave = wave;
    BlockSystem sys = build_block_system(space, mat, omega, opt);
    ComplexVector u = solve_block_direct(sys);
    return l2_error(space, u, wave, omega);
  };

  StructuredMesh reference = build_rect_mesh(3, 3, GeometrySpec::plain_square());
  const double ref_err = solve_error(reference);

  // Same grid with a scrambled vertex numbering (reversed), so roughly half
  // of all canonical edge orientations flip relative to the reference mesh.
  StructuredMesh scrambled;
  scrambled.nx = 3;
  scrambled.ny = 3;
  const int nv = reference.n_vertices();
  scrambled.vertices.resize(nv);
  for (int v = 0; v < nv; ++v)
  {
    scrambled.vertices[nv - 1 - v] = reference.vertices[v];
  }
  for (const Cell &c : reference.cells)
  {
    Cell d = c;
    for (int k = 0; k < 4; ++k)
    {
      d.v[k] = nv - 1 - c.v[k];
    }
    scrambled.cells.push_back(d);
  }
  scrambled.finalize();
  int flipped = 0;
  for (int c = 0; c < scrambled.n_cells(); ++c)
  {
    for (int s = 0; s < 4; ++s)
    {
      flipped += scrambled.cell_edge_signs[c][s] < 0;
    }
  }
  CHECK(flipped > 0);
  // Tag the boundary by position (finalize default-tags everything interior).
  for (int e = 0; e < scrambled.n_edges(); ++e)
  {
    if (scrambled.edge_cells[e][1] >= 0)
    {
      continue;
    }
    scrambled.edge_tags[e] = scrambled.edge_midpoint(e).x == 0.0
                                 ? BoundaryTag::gamma_inc()
                                 : BoundaryTag::gamma_infty();
  }

  CHECK(solve_error(scrambled) == doctest::Approx(ref_err).epsilon(1e-10));
}
