// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/fem.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxwelldd
{

namespace
{

// 3-point Gauss rule on [0,1]; exact through degree 5, which covers every
// lowest-order integrand on affinely mapped cells.
constexpr double kGaussNode[3] = {0.5 * (1.0 - 0.7745966692414834), 0.5,
                                  0.5 * (1.0 + 0.7745966692414834)};
constexpr double kGaussWeight[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct Jacobian
{
  double j[2][2]; // d x_phys / d x_ref
  double det;
};

Jacobian cell_jacobian(const StructuredMesh &mesh, int c, Vec2 ref)
{
  const Cell &cell = mesh.cells[c];
  const Vec2 p0 = mesh.vertices[cell.v[0]];
  const Vec2 p1 = mesh.vertices[cell.v[1]];
  const Vec2 p2 = mesh.vertices[cell.v[2]];
  const Vec2 p3 = mesh.vertices[cell.v[3]];
  // Bilinear corner shape functions on [0,1]^2, corners BL, BR, TR, TL.
  const double dndx[4] = {-(1.0 - ref.y), (1.0 - ref.y), ref.y, -ref.y};
  const double dndy[4] = {-(1.0 - ref.x), -ref.x, ref.x, (1.0 - ref.x)};
  Jacobian jac;
  jac.j[0][0] = dndx[0] * p0.x + dndx[1] * p1.x + dndx[2] * p2.x + dndx[3] * p3.x;
  jac.j[0][1] = dndy[0] * p0.x + dndy[1] * p1.x + dndy[2] * p2.x + dndy[3] * p3.x;
  jac.j[1][0] = dndx[0] * p0.y + dndx[1] * p1.y + dndx[2] * p2.y + dndx[3] * p3.y;
  jac.j[1][1] = dndy[0] * p0.y + dndy[1] * p1.y + dndy[2] * p2.y + dndy[3] * p3.y;
  jac.det = jac.j[0][0] * jac.j[1][1] - jac.j[0][1] * jac.j[1][0];
  return jac;
}

Vec2 cell_map(const StructuredMesh &mesh, int c, Vec2 ref)
{
  const Cell &cell = mesh.cells[c];
  const double n0 = (1.0 - ref.x) * (1.0 - ref.y);
  const double n1 = ref.x * (1.0 - ref.y);
  const double n2 = ref.x * ref.y;
  const double n3 = (1.0 - ref.x) * ref.y;
  return n0 * mesh.vertices[cell.v[0]] + n1 * mesh.vertices[cell.v[1]] +
         n2 * mesh.vertices[cell.v[2]] + n3 * mesh.vertices[cell.v[3]];
}

// Covariant (curl-conforming) transform: value J^{-T} phi_ref, curl
// curl_ref / det. Preserves tangential edge moments.
Vec2 map_value(const Jacobian &jac, Vec2 ref_value)
{
  const double inv_det = 1.0 / jac.det;
  return {inv_det * (jac.j[1][1] * ref_value.x - jac.j[1][0] * ref_value.y),
          inv_det * (-jac.j[0][1] * ref_value.x + jac.j[0][0] * ref_value.y)};
}

// Reference-cell trace of edge slots: the fixed coordinate and the running
// parameter of each slot.
Vec2 slot_ref_point(int slot, double t)
{
  switch (slot)
  {
  case kSlotBottom:
    return {t, 0.0};
  case kSlotTop:
    return {t, 1.0};
  case kSlotLeft:
    return {0.0, t};
  default:
    return {1.0, t};
  }
}

} // namespace

RefBasisValue ref_basis(int local_index, Vec2 p)
{
  switch (local_index)
  {
  case kSlotBottom:
    return {{1.0 - p.y, 0.0}, +1.0};
  case kSlotTop:
    return {{p.y, 0.0}, -1.0};
  case kSlotLeft:
    return {{0.0, 1.0 - p.x}, -1.0};
  case kSlotRight:
    return {{0.0, p.x}, +1.0};
  default:
    throw std::invalid_argument("ref_basis: local index out of range");
  }
}

MaterialMap MaterialMap::uniform(const StructuredMesh &mesh, double mu_inv, double eps_r,
                                 double kappa)
{
  MaterialMap m;
  m.mu_inv.assign(mesh.n_cells(), mu_inv);
  m.eps_r.assign(mesh.n_cells(), eps_r);
  m.kappa = kappa;
  return m;
}

MaterialMap MaterialMap::from_geometry(const StructuredMesh &mesh, const GeometrySpec &geom,
                                       double kappa)
{
  MaterialMap m;
  m.mu_inv.assign(mesh.n_cells(), 1.0);
  m.eps_r.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    const double n = (mesh.cells[c].material == kMaterialCore) ? geom.n_core : geom.n_cladding;
    m.eps_r[c] = n * n;
  }
  m.kappa = kappa;
  return m;
}

CsrMatrix assemble_A(const EdgeSpace &space, const MaterialMap &mat)
{
  const StructuredMesh &mesh = space.mesh();
  std::vector<Triplet> trips;
  trips.reserve(16 * mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    double elem[4][4] = {};
    for (int qx = 0; qx < 3; ++qx)
      for (int qy = 0; qy < 3; ++qy)
      {
        const Vec2 ref{kGaussNode[qx], kGaussNode[qy]};
        const Jacobian jac = cell_jacobian(mesh, c, ref);
        const double w = kGaussWeight[qx] * kGaussWeight[qy] * mat.mu_inv[c] / jac.det;
        double curls[4];
        for (int k = 0; k < 4; ++k)
          curls[k] = ref_basis(k, ref).curl;
        for (int u = 0; u < 4; ++u)
          for (int v = 0; v < 4; ++v)
            elem[u][v] += w * curls[u] * curls[v];
      }
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v)
        trips.push_back({mesh.cell_edges[c][u], mesh.cell_edges[c][v],
                         mesh.cell_edge_signs[c][u] * mesh.cell_edge_signs[c][v] * elem[u][v]});
  }
  return CsrMatrix::from_triplets(space.n_dofs(), space.n_dofs(), std::move(trips));
}

CsrMatrix assemble_M(const EdgeSpace &space, const MaterialMap &mat)
{
  const StructuredMesh &mesh = space.mesh();
  std::vector<Triplet> trips;
  trips.reserve(16 * mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    double elem[4][4] = {};
    for (int qx = 0; qx < 3; ++qx)
      for (int qy = 0; qy < 3; ++qy)
      {
        const Vec2 ref{kGaussNode[qx], kGaussNode[qy]};
        const Jacobian jac = cell_jacobian(mesh, c, ref);
        const double w = kGaussWeight[qx] * kGaussWeight[qy] * mat.eps_r[c] * jac.det;
        Vec2 vals[4];
        for (int k = 0; k < 4; ++k)
          vals[k] = map_value(jac, ref_basis(k, ref).value);
        for (int u = 0; u < 4; ++u)
          for (int v = 0; v < 4; ++v)
            elem[u][v] += w * dot(vals[u], vals[v]);
      }
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v)
        trips.push_back({mesh.cell_edges[c][u], mesh.cell_edges[c][v],
                         mesh.cell_edge_signs[c][u] * mesh.cell_edge_signs[c][v] * elem[u][v]});
  }
  return CsrMatrix::from_triplets(space.n_dofs(), space.n_dofs(), std::move(trips));
}

CsrMatrix assemble_B(const EdgeSpace &space, const std::vector<int> &edges, double coeff)
{
  const StructuredMesh &mesh = space.mesh();
  std::vector<Triplet> trips;
  trips.reserve(edges.size());
  for (int e : edges)
  {
    if (mesh.edge_tags[e].kind == BoundaryKind::Interior)
      throw std::invalid_argument("assemble_B: interior edge in impedance set");
    // Lowest order: the only nonzero tangential trace on edge e is that of
    // its own basis function, constant 1/length, so the block is diagonal.
    trips.push_back({e, e, coeff / mesh.edge_length(e)});
  }
  return CsrMatrix::from_triplets(space.n_dofs(), space.n_dofs(), std::move(trips));
}

ComplexVector assemble_s(const EdgeSpace &space, const PlaneWave &inc,
                         const std::vector<int> &edges, double omega)
{
  const StructuredMesh &mesh = space.mesh();
  ComplexVector s(space.n_dofs());
  for (int e : edges)
  {
    const Vec2 tau = mesh.edge_tangent(e);
    const Vec2 a = mesh.vertices[mesh.edges[e].a];
    const Vec2 b = mesh.vertices[mesh.edges[e].b];
    // trace of phi_e along its own edge is 1/length; ds = length dt.
    std::complex<double> acc(0.0, 0.0);
    for (int q = 0; q < 3; ++q)
    {
      const Vec2 x = a + kGaussNode[q] * (b - a);
      const std::complex<double> tang = inc.field_x(x, omega) * tau.x + inc.field_y(x, omega) * tau.y;
      acc += kGaussWeight[q] * tang;
    }
    s.re[e] += acc.real();
    s.im[e] += acc.imag();
  }
  return s;
}

ComplexVector assemble_robin_load(const EdgeSpace &space, const MaterialMap &mat,
                                  const PlaneWave &exact, double omega,
                                  const std::vector<int> &edges)
{
  const StructuredMesh &mesh = space.mesh();
  ComplexVector rhs(space.n_dofs());
  const std::complex<double> i_unit(0.0, 1.0);
  for (int e : edges)
  {
    if (mesh.edge_cells[e][1] >= 0)
      throw std::invalid_argument("assemble_robin_load: edge is not a true boundary edge");
    const int c = mesh.edge_cells[e][0];
    const int slot = mesh.edge_slots[e][0];
    const double sigma = mesh.induced_sign(c, slot);
    const Vec2 tau = mesh.edge_tangent(e);
    const Vec2 a = mesh.vertices[mesh.edges[e].a];
    const Vec2 b = mesh.vertices[mesh.edges[e].b];
    std::complex<double> acc(0.0, 0.0);
    for (int q = 0; q < 3; ++q)
    {
      const Vec2 x = a + kGaussNode[q] * (b - a);
      const std::complex<double> tang =
          exact.field_x(x, omega) * tau.x + exact.field_y(x, omega) * tau.y;
      const std::complex<double> data =
          sigma * mat.mu_inv[c] * exact.curl(x, omega) + i_unit * mat.kappa * omega * tang;
      // Own-basis trace 1/len and ds = len dt cancel.
      acc += kGaussWeight[q] * data;
    }
    rhs.re[e] += acc.real();
    rhs.im[e] += acc.imag();
  }
  return rhs;
}

BlockSystem build_block_system(const EdgeSpace &space, const MaterialMap &mat,
                               double omega, const SystemOptions &opt)
{
  const StructuredMesh &mesh = space.mesh();
  BlockSystem sys;
  sys.omega = omega;
  sys.n = space.n_dofs();

  const CsrMatrix a = assemble_A(space, mat);
  const CsrMatrix m = assemble_M(space, mat);
  sys.K = csr_add(a, m, 1.0, -omega * omega);

  std::vector<int> impedance = boundary_edges(mesh, BoundaryKind::GammaInfty);
  {
    const std::vector<int> inc = boundary_edges(mesh, BoundaryKind::GammaInc);
    impedance.insert(impedance.end(), inc.begin(), inc.end());
    std::sort(impedance.begin(), impedance.end());
  }
  sys.Bmat = assemble_B(space, impedance, mat.kappa * omega);
  if (!opt.interface_edges.empty())
    sys.Bmat = csr_add(sys.Bmat, assemble_B(space, opt.interface_edges, opt.interface_coeff));

  sys.rhs = ComplexVector(sys.n);
  if (opt.incident == IncidentMode::Port)
  {
    const std::vector<int> inc_edges = boundary_edges(mesh, BoundaryKind::GammaInc);
    const ComplexVector s = assemble_s(space, opt.wave, inc_edges, omega);
    // rhs = 2 i kappa omega s.
    const double c = 2.0 * mat.kappa * omega;
    for (int k = 0; k < sys.n; ++k)
    {
      sys.rhs.re[k] = -c * s.im[k];
      sys.rhs.im[k] = c * s.re[k];
    }
  }
  else if (opt.incident == IncidentMode::ExactRobin)
  {
    std::vector<int> all = impedance;
    sys.rhs = assemble_robin_load(space, mat, opt.wave, omega, all);
  }
  return sys;
}

ComplexVector interpolate(const EdgeSpace &space, const PlaneWave &wave, double omega)
{
  const StructuredMesh &mesh = space.mesh();
  ComplexVector coeffs(space.n_dofs());
  for (int e = 0; e < mesh.n_edges(); ++e)
  {
    const Vec2 a = mesh.vertices[mesh.edges[e].a];
    const Vec2 b = mesh.vertices[mesh.edges[e].b];
    const Vec2 d = b - a; // tangent times length
    std::complex<double> acc(0.0, 0.0);
    for (int q = 0; q < 3; ++q)
    {
      const Vec2 x = a + kGaussNode[q] * (b - a);
      acc += kGaussWeight[q] * (wave.field_x(x, omega) * d.x + wave.field_y(x, omega) * d.y);
    }
    coeffs.re[e] = acc.real();
    coeffs.im[e] = acc.imag();
  }
  return coeffs;
}

namespace
{

// Shared cell loop for the L2 functionals: accumulates |E_h - E_ref|^2 with
// E_ref optionally zero.
double l2_accumulate(const EdgeSpace &space, const ComplexVector &coeffs,
                     const PlaneWave *exact, double omega)
{
  const StructuredMesh &mesh = space.mesh();
  double total = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    for (int qx = 0; qx < 3; ++qx)
      for (int qy = 0; qy < 3; ++qy)
      {
        const Vec2 ref{kGaussNode[qx], kGaussNode[qy]};
        const Jacobian jac = cell_jacobian(mesh, c, ref);
        const double w = kGaussWeight[qx] * kGaussWeight[qy] * jac.det;
        std::complex<double> ex(0.0, 0.0), ey(0.0, 0.0);
        for (int k = 0; k < 4; ++k)
        {
          const int g = mesh.cell_edges[c][k];
          const double sgn = mesh.cell_edge_signs[c][k];
          const Vec2 val = map_value(jac, ref_basis(k, ref).value);
          const std::complex<double> coeff(coeffs.re[g], coeffs.im[g]);
          ex += sgn * coeff * val.x;
          ey += sgn * coeff * val.y;
        }
        if (exact)
        {
          const Vec2 x = cell_map(mesh, c, ref);
          ex -= exact->field_x(x, omega);
          ey -= exact->field_y(x, omega);
        }
        total += w * (std::norm(ex) + std::norm(ey));
      }
  }
  return std::sqrt(total);
}

} // namespace

double l2_norm(const EdgeSpace &space, const ComplexVector &coeffs)
{
  return l2_accumulate(space, coeffs, nullptr, 0.0);
}

double l2_error(const EdgeSpace &space, const ComplexVector &coeffs,
                const PlaneWave &exact, double omega)
{
  return l2_accumulate(space, coeffs, &exact, omega);
}

void evaluate_field(const EdgeSpace &space, const ComplexVector &coeffs, Vec2 point,
                    std::complex<double> &ex, std::complex<double> &ey)
{
  const StructuredMesh &mesh = space.mesh();
  const double hx = (mesh.x1 - mesh.x0) / mesh.nx;
  const double hy = (mesh.y1 - mesh.y0) / mesh.ny;
  const int ix = std::clamp(static_cast<int>((point.x - mesh.x0) / hx), 0, mesh.nx - 1);
  const int iy = std::clamp(static_cast<int>((point.y - mesh.y0) / hy), 0, mesh.ny - 1);
  const int c = iy * mesh.nx + ix;
  const Vec2 ref{(point.x - (mesh.x0 + ix * hx)) / hx, (point.y - (mesh.y0 + iy * hy)) / hy};
  const Jacobian jac = cell_jacobian(mesh, c, ref);
  ex = ey = std::complex<double>(0.0, 0.0);
  for (int k = 0; k < 4; ++k)
  {
    const int g = mesh.cell_edges[c][k];
    const double sgn = mesh.cell_edge_signs[c][k];
    const Vec2 val = map_value(jac, ref_basis(k, ref).value);
    const std::complex<double> coeff(coeffs.re[g], coeffs.im[g]);
    ex += sgn * coeff * val.x;
    ey += sgn * coeff * val.y;
  }
}

} // namespace maxwelldd
