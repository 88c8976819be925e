// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_FEM_HPP
#define MAXWELLDD_FEM_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "maxwelldd/csr.hpp"
#include "maxwelldd/mesh.hpp"

namespace maxwelldd
{

// Value and scalar curl of a lowest-order edge function on the reference
// cell [0,1]^2. Local functions follow the slot order bottom/top/left/right;
// every slot is oriented along its reference tangent (+x horizontal, +y
// vertical), and each function has unit tangential moment on its own edge and
// zero on the others.
struct RefBasisValue
{
  Vec2 value;
  double curl = 0.0;
};

RefBasisValue ref_basis(int local_index, Vec2 ref_point);

// Lowest-order Nédélec space on a structured quadrilateral mesh: one DoF per
// edge, the tangential moment along the edge's canonical orientation. The
// per-cell local-to-global map and the +-1 orientation signs live on the mesh
// (cell_edges / cell_edge_signs).
class EdgeSpace
{
public:
  explicit EdgeSpace(const StructuredMesh &mesh) : mesh_(&mesh) {}

  const StructuredMesh &mesh() const { return *mesh_; }
  int n_dofs() const { return mesh_->n_edges(); }

private:
  const StructuredMesh *mesh_;
};

// Per-cell coefficients of Eq-style material data: inverse permeability and
// relative permittivity eps_r = n^2, plus the global impedance coefficient.
struct MaterialMap
{
  std::vector<double> mu_inv;
  std::vector<double> eps_r;
  double kappa = 1.0;

  static MaterialMap uniform(const StructuredMesh &mesh, double mu_inv = 1.0,
                             double eps_r = 1.0, double kappa = 1.0);
  // eps_r = n_core^2 or n_cladding^2 according to each cell's material id.
  static MaterialMap from_geometry(const StructuredMesh &mesh, const GeometrySpec &geom,
                                   double kappa = 1.0);
};

struct ComplexVector
{
  std::vector<double> re;
  std::vector<double> im;

  ComplexVector() = default;
  explicit ComplexVector(int n) : re(n, 0.0), im(n, 0.0) {}

  int size() const { return static_cast<int>(re.size()); }
  double norm() const
  {
    double s = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i)
      s += re[i] * re[i] + im[i] * im[i];
    return std::sqrt(s);
  }
};

// Incident field: amplitude * p * exp(-i omega d.x), divergence-free when
// p.d = 0 and a solution of the homogeneous interior equation for mu=eps=1.
struct PlaneWave
{
  Vec2 direction{1.0, 0.0};
  Vec2 polarization{0.0, 1.0};
  std::complex<double> amplitude{1.0, 0.0};

  std::complex<double> phase(Vec2 x, double omega) const
  {
    const std::complex<double> i(0.0, 1.0);
    return amplitude * std::exp(-i * omega * dot(direction, x));
  }
  // Field components as complex scalars.
  std::complex<double> field_x(Vec2 x, double omega) const { return polarization.x * phase(x, omega); }
  std::complex<double> field_y(Vec2 x, double omega) const { return polarization.y * phase(x, omega); }
  // Scalar 2D curl d1 Ey - d2 Ex = -i omega (d x p) exp(...).
  std::complex<double> curl(Vec2 x, double omega) const
  {
    const std::complex<double> i(0.0, 1.0);
    const double cross = direction.x * polarization.y - direction.y * polarization.x;
    return -i * omega * cross * phase(x, omega);
  }
};

// Volume matrices of the weak form, one DoF per edge:
//   A_uv = integral mu^{-1} curl(phi_u) curl(phi_v),
//   M_uv = integral eps_r phi_u . phi_v.
// Cells are mapped from the reference square with the covariant transform,
// which preserves tangential edge moments.
CsrMatrix assemble_A(const EdgeSpace &space, const MaterialMap &mat);
CsrMatrix assemble_M(const EdgeSpace &space, const MaterialMap &mat);

// Boundary tangential mass on the given edge set, entry coeff * integral of
// (tangential trace)^2 over each edge. The impedance weight (kappa*omega by
// default elsewhere) is folded into coeff by the caller. Diagonal in lowest
// order: entry coeff / edge length. Throws std::invalid_argument if an edge
// is neither boundary nor interface.
CsrMatrix assemble_B(const EdgeSpace &space, const std::vector<int> &edges, double coeff);

// Incident load s_u = integral over the edge set of (E_inc . tau)(phi_u . tau).
ComplexVector assemble_s(const EdgeSpace &space, const PlaneWave &inc,
                         const std::vector<int> &edges, double omega);

// Exact impedance (Robin) data of a known field on boundary edges:
//   rhs_u = integral [sigma mu^{-1} curl(E) + i kappa omega (E . tau)](phi_u . tau) ds,
// where sigma relates the canonical edge tangent to the counter-clockwise
// boundary traversal. With E the exact solution this makes the discrete
// problem consistent with it on all boundaries (manufactured solutions).
ComplexVector assemble_robin_load(const EdgeSpace &space, const MaterialMap &mat,
                                  const PlaneWave &exact, double omega,
                                  const std::vector<int> &edges);

// Real block form of the complex system (K + iB) u = rhs with
// K = A - omega^2 M_eps and B the impedance/interface tangential mass:
// [[K, -B], [B, K]] acting on [Re u; Im u].
struct BlockSystem
{
  CsrMatrix K;
  CsrMatrix Bmat;
  ComplexVector rhs;
  double omega = 0.0;
  int n = 0;
};

enum class IncidentMode
{
  None,      // no incident data, rhs = 0
  Port,      // impedance port on GammaInc: rhs = 2 i kappa omega s
  ExactRobin // manufactured exact impedance data on all physical boundaries
};

struct SystemOptions
{
  IncidentMode incident = IncidentMode::None;
  PlaneWave wave{};
  // Additional Robin (impedance) blocks on interface edges, for subdomain
  // problems; coeff is the tangential-mass weight (usually kappa*omega).
  std::vector<int> interface_edges{};
  double interface_coeff = 0.0;
};

// Assembles K, the impedance matrix over GammaInfty + GammaInc (+ interface
// edges when requested) with weight kappa*omega, and the incident load.
BlockSystem build_block_system(const EdgeSpace &space, const MaterialMap &mat,
                               double omega, const SystemOptions &opt);

// Edge-moment interpolant of the wave: coeff_e = integral E . tau over edge e.
ComplexVector interpolate(const EdgeSpace &space, const PlaneWave &wave, double omega);

// Cellwise Gauss L2 norms of the reconstructed field / error vs a wave.
double l2_norm(const EdgeSpace &space, const ComplexVector &coeffs);
double l2_error(const EdgeSpace &space, const ComplexVector &coeffs,
                const PlaneWave &exact, double omega);

// Point evaluation of the discrete field on a uniform rectangle mesh.
void evaluate_field(const EdgeSpace &space, const ComplexVector &coeffs, Vec2 point,
                    std::complex<double> &ex, std::complex<double> &ey);

} // namespace maxwelldd

#endif
