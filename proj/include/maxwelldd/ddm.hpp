// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_DDM_HPP
#define MAXWELLDD_DDM_HPP

#include <complex>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "maxwelldd/fem.hpp"
#include "maxwelldd/gmres.hpp"
#include "maxwelldd/mesh.hpp"
#include "maxwelldd/preconditioner.hpp"
#include "maxwelldd/sparse_lu.hpp"

namespace maxwelldd
{

enum class OuterSolver
{
  JacobiFixedPoint,
  InterfaceGmres
};

enum class InnerSolver
{
  Direct,             // reused sparse LU of each local block system
  PreconditionedGmres // GMRES with the reusable block-diagonal preconditioner
};

struct DdmConfig
{
  OuterSolver outer = OuterSolver::JacobiFixedPoint;
  InnerSolver inner = InnerSolver::Direct;
  double tol = 1e-6; // absolute tolerance on the interface residual
  int max_outer = 200;
  GmresConfig inner_gmres{}; // used by PreconditionedGmres local solves
  int outer_restart = 50;    // restart length of the interface GMRES
  int workers = 1;           // parallel subdomain solves per round
};

// Interface trace data, stored per ordered (producer, consumer) subdomain
// pair. Values are canonical edge moments of the transmission data: entry
// integral of (g . tau_e)(phi_e . tau_e) over each interface edge, ordered by
// the ascending global edge list of the interface. Both directions of one
// interface index the identical edge list.
using TraceState = std::map<std::pair<int, int>, std::vector<std::complex<double>>>;

// One subdomain: restricted mesh, local Robin block system (impedance on the
// local outer boundary portions and on every interface edge), incident-only
// base load, and the retained factorization or preconditioner.
struct SubdomainProblem
{
  int id = 0;
  StructuredMesh mesh;
  MaterialMap materials;
  std::vector<int> local_to_global;              // local edge -> global edge
  std::vector<int> neighbors;                    // ascending neighbor ids
  std::map<int, std::vector<int>> interface_local_edges; // neighbor -> local edges,
                                                         // ordered like the interface list
  BlockSystem sys;           // K, Bmat (with interface Robin blocks), base rhs
  CsrMatrix block;           // assembled 2n x 2n real block matrix
  std::shared_ptr<const SparseLu> direct;   // InnerSolver::Direct
  Preconditioner precond;                   // InnerSolver::PreconditionedGmres
  long long inner_iterations = 0;           // accumulated across all solves
  long long inner_solves = 0;

  EdgeSpace space() const { return EdgeSpace(mesh); }
  int n_local() const { return mesh.n_edges(); }
};

struct DdmReport
{
  int outer_iterations = 0;
  bool converged = false;
  std::vector<double> outer_residuals;       // absolute interface residuals
  std::vector<double> avg_inner_iterations;  // per subdomain, over all solves
  double walltime_s = 0.0;
};

struct DdmResult
{
  ComplexVector field; // stitched global coefficients
  DdmReport report;
};

// Non-overlapping decomposition driver with impedance (Robin, S = identity)
// transmission conditions. The outer unknown is the stacked interface trace
// vector g; one outer step solves every local Robin problem against the
// incoming traces and rewrites the outgoing ones, which is one Jacobi step of
// (1 - A) g = b. InterfaceGmres solves the same fixed-point system with
// restarted GMRES on x - A x.
class DdmSolver
{
public:
  DdmSolver(const StructuredMesh &global_mesh, const Partition &partition,
            const MaterialMap &materials, double omega, const PlaneWave &incident,
            const DdmConfig &cfg);

  const std::vector<SubdomainProblem> &problems() const { return problems_; }
  SubdomainProblem &problem(int id) { return problems_[id - 1]; }
  const std::map<std::pair<int, int>, std::vector<int>> &interfaces() const
  {
    return interfaces_;
  }
  int n_interface_edges() const { return n_interface_edges_; }
  int stacked_size() const { return 4 * n_interface_edges_; } // re+im, two directions

  TraceState zero_traces() const;

  // Solves every subproblem with zero interface data and the incident field,
  // extracting the initial traces variationally (the residual-based Neumann
  // trace). This is the right-hand side b of the fixed-point system.
  TraceState initial_solve_and_traces();

  // Local Robin solve of one subdomain against incoming traces; the returned
  // coefficients are complex edge DoFs of the local mesh.
  ComplexVector local_solve(SubdomainProblem &p, const TraceState &incoming,
                            bool with_incident) const;

  // Outgoing traces by the cheap algebraic identity
  //   g_out = -g_in - 2 i kappa omega (tangential moment of the local field),
  // valid because the local solve already enforced the Robin condition.
  void update_traces(const SubdomainProblem &p, const ComplexVector &local_field,
                     const TraceState &incoming, TraceState &outgoing) const;

  // Outgoing traces recomputed from the variational Neumann trace
  //   <g, phi_e> = (K_local u)_e - i kappa omega u_e / len_e.
  // Agrees with update_traces up to the local solve residual; used for the
  // initial traces and for cross-checks.
  void variational_traces(const SubdomainProblem &p, const ComplexVector &local_field,
                          TraceState &outgoing) const;

  // One parallel round of local solves + trace updates with zero incident
  // field: the linear operator A of the fixed-point system, on the stacked
  // real vector (interfaces in map order, direction (i->j) then (j->i), each
  // edge contributing re, im).
  std::vector<double> apply_interface_operator(const std::vector<double> &g);

  std::vector<double> stack(const TraceState &state) const;
  TraceState unstack(const std::vector<double> &g) const;

  // Full outer solve; returns the stitched global field (duplicated interface
  // DoFs averaged) and the outer/inner iteration report.
  DdmResult run();

  double omega() const { return omega_; }
  double kappa() const { return kappa_; }

private:
  void local_round(const TraceState &incoming, bool with_incident,
                   std::vector<ComplexVector> &fields, TraceState &outgoing,
                   bool variational);
  ComplexVector stitch(const std::vector<ComplexVector> &fields) const;

  std::vector<SubdomainProblem> problems_;
  std::map<std::pair<int, int>, std::vector<int>> interfaces_; // (i<j) -> global edges
  double omega_ = 0.0;
  double kappa_ = 1.0;
  PlaneWave incident_{};
  DdmConfig cfg_{};
  int n_interface_edges_ = 0;
  int n_global_edges_ = 0;
};

// Writes the trace state as debug text, one line `i j edge re im` per
// interface edge and direction (i = producer, j = consumer).
std::string dump_traces(const TraceState &state,
                        const std::map<std::pair<int, int>, std::vector<int>> &interfaces);

} // namespace maxwelldd

#endif
