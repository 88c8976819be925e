// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/ddm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace maxwelldd
{

namespace
{

double stacked_norm(const std::vector<double> &a, const std::vector<double> &b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double vec_norm(const std::vector<double> &a)
{
  double s = 0.0;
  for (double x : a)
    s += x * x;
  return std::sqrt(s);
}

} // namespace

DdmSolver::DdmSolver(const StructuredMesh &global_mesh, const Partition &partition,
                     const MaterialMap &materials, double omega, const PlaneWave &incident,
                     const DdmConfig &cfg)
    : interfaces_(partition.interfaces), omega_(omega), kappa_(materials.kappa),
      incident_(incident), cfg_(cfg), n_global_edges_(global_mesh.n_edges())
{
  for (const auto &[pair, edges] : interfaces_)
    n_interface_edges_ += static_cast<int>(edges.size());

  const int cw = global_mesh.nx / partition.px;
  const int ch = global_mesh.ny / partition.py;
  const double hx = (global_mesh.x1 - global_mesh.x0) / global_mesh.nx;
  const double hy = (global_mesh.y1 - global_mesh.y0) / global_mesh.ny;

  problems_.reserve(partition.n_subdomains);
  for (int id = 1; id <= partition.n_subdomains; ++id)
  {
    if (partition.cells_of[id - 1].empty())
      throw std::invalid_argument("ddm: empty subdomain in partition");

    const int sx = (id - 1) % partition.px;
    const int sy = (id - 1) / partition.px;

    SubdomainProblem p;
    p.id = id;
    // The subdomain of a structured grid partition is itself a structured
    // grid; rebuild it on the sub-rectangle and inherit materials and tags
    // from the global mesh below.
    p.mesh = build_rect_mesh(cw, ch, GeometrySpec::plain_square(),
                             global_mesh.x0 + sx * cw * hx, global_mesh.x0 + (sx + 1) * cw * hx,
                             global_mesh.y0 + sy * ch * hy, global_mesh.y0 + (sy + 1) * ch * hy);

    p.local_to_global.assign(p.mesh.n_edges(), -1);
    for (int ly = 0; ly < ch; ++ly)
      for (int lx = 0; lx < cw; ++lx)
      {
        const int lc = ly * cw + lx;
        const int gc = (sy * ch + ly) * global_mesh.nx + (sx * cw + lx);
        p.mesh.cells[lc].material = global_mesh.cells[gc].material;
        for (int slot = 0; slot < 4; ++slot)
        {
          const int le = p.mesh.cell_edges[lc][slot];
          const int ge = global_mesh.cell_edges[gc][slot];
          if (p.mesh.cell_edge_signs[lc][slot] != global_mesh.cell_edge_signs[gc][slot])
            throw std::logic_error("ddm: orientation mismatch between local and global mesh");
          p.local_to_global[le] = ge;
          p.mesh.edge_tags[le] = global_mesh.edge_tags[ge];
        }
      }

    p.materials.kappa = materials.kappa;
    p.materials.mu_inv.resize(p.mesh.n_cells());
    p.materials.eps_r.resize(p.mesh.n_cells());
    for (int ly = 0; ly < ch; ++ly)
      for (int lx = 0; lx < cw; ++lx)
      {
        const int lc = ly * cw + lx;
        const int gc = (sy * ch + ly) * global_mesh.nx + (sx * cw + lx);
        p.materials.mu_inv[lc] = materials.mu_inv[gc];
        p.materials.eps_r[lc] = materials.eps_r[gc];
      }

    problems_.push_back(std::move(p));
  }

  // Per-neighbor interface edge lists in local indices, ordered exactly like
  // the global interface edge lists so trace vectors line up.
  std::vector<std::map<int, int>> global_to_local(problems_.size());
  for (std::size_t k = 0; k < problems_.size(); ++k)
    for (int le = 0; le < problems_[k].mesh.n_edges(); ++le)
      global_to_local[k][problems_[k].local_to_global[le]] = le;
  for (const auto &[pair, edges] : interfaces_)
  {
    const auto [i, j] = pair;
    for (int ge : edges)
    {
      problems_[i - 1].interface_local_edges[j].push_back(global_to_local[i - 1].at(ge));
      problems_[j - 1].interface_local_edges[i].push_back(global_to_local[j - 1].at(ge));
    }
    problems_[i - 1].neighbors.push_back(j);
    problems_[j - 1].neighbors.push_back(i);
  }
  for (auto &p : problems_)
    std::sort(p.neighbors.begin(), p.neighbors.end());

  // Assemble each local Robin system and retain the reusable solver objects.
  for (auto &p : problems_)
  {
    SystemOptions opt;
    opt.incident = IncidentMode::Port;
    opt.wave = incident_;
    for (int le = 0; le < p.mesh.n_edges(); ++le)
      if (p.mesh.edge_tags[le].kind == BoundaryKind::Interface)
        opt.interface_edges.push_back(le);
    opt.interface_coeff = kappa_ * omega_;

    const EdgeSpace space = p.space();
    p.sys = build_block_system(space, p.materials, omega_, opt);
    p.block = assemble_block_csr(p.sys.K, p.sys.Bmat);
    if (cfg_.inner == InnerSolver::Direct)
      p.direct = std::make_shared<const SparseLu>(p.block);
    else
      p.precond = make_block_diag(p.sys.K);
  }
}

TraceState DdmSolver::zero_traces() const
{
  TraceState state;
  for (const auto &[pair, edges] : interfaces_)
  {
    state[{pair.first, pair.second}].assign(edges.size(), {0.0, 0.0});
    state[{pair.second, pair.first}].assign(edges.size(), {0.0, 0.0});
  }
  return state;
}

ComplexVector DdmSolver::local_solve(SubdomainProblem &p, const TraceState &incoming,
                                     bool with_incident) const
{
  const int n = p.n_local();
  std::vector<double> rhs(2 * n, 0.0);
  if (with_incident)
    for (int k = 0; k < n; ++k)
    {
      rhs[k] = p.sys.rhs.re[k];
      rhs[n + k] = p.sys.rhs.im[k];
    }
  // Incoming transmission data: the consumer load of trace moments is
  // -G_in on each interface edge DoF.
  for (const int j : p.neighbors)
  {
    const auto &values = incoming.at({j, p.id});
    const auto &locals = p.interface_local_edges.at(j);
    for (std::size_t k = 0; k < locals.size(); ++k)
    {
      rhs[locals[k]] -= values[k].real();
      rhs[n + locals[k]] -= values[k].imag();
    }
  }

  std::vector<double> x;
  if (cfg_.inner == InnerSolver::Direct)
  {
    x = p.direct->solve(rhs);
    ++p.inner_solves;
  }
  else
  {
    const LinearOperator op = LinearOperator::block2(p.sys.K, p.sys.Bmat);
    const SolveReport rep = gmres(op, &p.precond, rhs, x, cfg_.inner_gmres);
    p.inner_iterations += rep.iterations;
    ++p.inner_solves;
    if (!rep.converged)
    {
      std::ostringstream msg;
      msg << "ddm: inner GMRES failed on subdomain " << p.id << " (relative residual "
          << rep.residual_history.back() << ")";
      throw std::runtime_error(msg.str());
    }
  }

  ComplexVector field(n);
  for (int k = 0; k < n; ++k)
  {
    field.re[k] = x[k];
    field.im[k] = x[n + k];
  }
  return field;
}

void DdmSolver::update_traces(const SubdomainProblem &p, const ComplexVector &local_field,
                              const TraceState &incoming, TraceState &outgoing) const
{
  const std::complex<double> two_ikw(0.0, 2.0 * kappa_ * omega_);
  for (const int j : p.neighbors)
  {
    const auto &g_in = incoming.at({j, p.id});
    auto &g_out = outgoing[{p.id, j}];
    const auto &locals = p.interface_local_edges.at(j);
    g_out.resize(locals.size());
    for (std::size_t k = 0; k < locals.size(); ++k)
    {
      const int le = locals[k];
      const std::complex<double> u(local_field.re[le], local_field.im[le]);
      g_out[k] = -g_in[k] - two_ikw * u / p.mesh.edge_length(le);
    }
  }
}

void DdmSolver::variational_traces(const SubdomainProblem &p, const ComplexVector &local_field,
                                   TraceState &outgoing) const
{
  // <g, phi_e> = a_local(u, phi_e) - i kappa omega <u . tau, phi_e . tau>_e,
  // with a_local the volume form K = A - omega^2 M. Row e of K against the
  // complex coefficients gives the first term.
  const int n = p.n_local();
  std::vector<double> k_re(n), k_im(n);
  p.sys.K.spmv(local_field.re.data(), k_re.data());
  p.sys.K.spmv(local_field.im.data(), k_im.data());
  const std::complex<double> ikw(0.0, kappa_ * omega_);
  for (const int j : p.neighbors)
  {
    auto &g_out = outgoing[{p.id, j}];
    const auto &locals = p.interface_local_edges.at(j);
    g_out.resize(locals.size());
    for (std::size_t k = 0; k < locals.size(); ++k)
    {
      const int le = locals[k];
      const std::complex<double> u(local_field.re[le], local_field.im[le]);
      const std::complex<double> ku(k_re[le], k_im[le]);
      g_out[k] = ku - ikw * u / p.mesh.edge_length(le);
    }
  }
}

void DdmSolver::local_round(const TraceState &incoming, bool with_incident,
                            std::vector<ComplexVector> &fields, TraceState &outgoing,
                            bool variational)
{
  const int n_sub = static_cast<int>(problems_.size());
  fields.assign(n_sub, ComplexVector());
  // Preallocate the outgoing state so worker threads write disjoint slots.
  outgoing = zero_traces();

  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&](int first) {
    for (int k = first; k < n_sub; k += std::max(1, cfg_.workers))
    {
      try
      {
        fields[k] = local_solve(problems_[k], incoming, with_incident);
        if (variational)
          variational_traces(problems_[k], fields[k], outgoing);
        else
          update_traces(problems_[k], fields[k], incoming, outgoing);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };

  if (cfg_.workers <= 1 || n_sub <= 1)
    work(0);
  else
  {
    std::vector<std::thread> pool;
    pool.reserve(cfg_.workers);
    for (int w = 0; w < cfg_.workers; ++w)
      pool.emplace_back(work, w);
    for (auto &t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);
}

std::vector<double> DdmSolver::stack(const TraceState &state) const
{
  std::vector<double> g;
  g.reserve(stacked_size());
  for (const auto &[pair, edges] : interfaces_)
  {
    for (const auto &key : {std::pair<int, int>{pair.first, pair.second},
                            std::pair<int, int>{pair.second, pair.first}})
    {
      const auto &values = state.at(key);
      for (const std::complex<double> &v : values)
      {
        g.push_back(v.real());
        g.push_back(v.imag());
      }
    }
  }
  return g;
}

TraceState DdmSolver::unstack(const std::vector<double> &g) const
{
  if (static_cast<int>(g.size()) != stacked_size())
    throw std::invalid_argument("ddm: stacked trace vector has wrong length");
  TraceState state;
  std::size_t pos = 0;
  for (const auto &[pair, edges] : interfaces_)
  {
    for (const auto &key : {std::pair<int, int>{pair.first, pair.second},
                            std::pair<int, int>{pair.second, pair.first}})
    {
      auto &values = state[key];
      values.resize(edges.size());
      for (std::size_t k = 0; k < edges.size(); ++k)
      {
        values[k] = {g[pos], g[pos + 1]};
        pos += 2;
      }
    }
  }
  return state;
}

TraceState DdmSolver::initial_solve_and_traces()
{
  std::vector<ComplexVector> fields;
  TraceState traces;
  local_round(zero_traces(), true, fields, traces, true);
  return traces;
}

std::vector<double> DdmSolver::apply_interface_operator(const std::vector<double> &g)
{
  std::vector<ComplexVector> fields;
  TraceState out;
  local_round(unstack(g), false, fields, out, false);
  return stack(out);
}

ComplexVector DdmSolver::stitch(const std::vector<ComplexVector> &fields) const
{
  ComplexVector global(n_global_edges_);
  std::vector<int> count(n_global_edges_, 0);
  for (std::size_t k = 0; k < problems_.size(); ++k)
  {
    const SubdomainProblem &p = problems_[k];
    for (int le = 0; le < p.n_local(); ++le)
    {
      const int ge = p.local_to_global[le];
      global.re[ge] += fields[k].re[le];
      global.im[ge] += fields[k].im[le];
      ++count[ge];
    }
  }
  for (int e = 0; e < n_global_edges_; ++e)
    if (count[e] > 1)
    {
      global.re[e] /= count[e];
      global.im[e] /= count[e];
    }
  return global;
}

DdmResult DdmSolver::run()
{
  const auto t0 = std::chrono::steady_clock::now();
  DdmResult result;

  std::vector<ComplexVector> fields;
  TraceState b_state;
  local_round(zero_traces(), true, fields, b_state, true);

  if (interfaces_.empty())
  {
    result.field = stitch(fields);
    result.report.converged = true;
    result.report.outer_iterations = 0;
    result.report.outer_residuals = {0.0};
  }
  else if (cfg_.outer == OuterSolver::JacobiFixedPoint)
  {
    std::vector<double> g = stack(b_state);
    bool converged = false;
    int k = 0;
    while (k < cfg_.max_outer)
    {
      TraceState out;
      local_round(unstack(g), true, fields, out, false);
      const std::vector<double> g_next = stack(out);
      // ||g^{k+1} - g^k|| = ||(1 - A) g^k - b||, the fixed-point residual.
      const double res = stacked_norm(g_next, g);
      result.report.outer_residuals.push_back(res);
      g = g_next;
      ++k;
      if (res < cfg_.tol)
      {
        converged = true;
        break;
      }
    }
    result.report.outer_iterations = k;
    result.report.converged = converged;
    result.field = stitch(fields);
  }
  else
  {
    const std::vector<double> b = stack(b_state);
    const double bnorm = vec_norm(b);
    std::vector<double> g = b; // initial guess: the incident traces
    if (bnorm > 0.0)
    {
      LinearOperator op;
      op.n = stacked_size();
      op.apply_fn = [this](const double *x, double *y) {
        const std::vector<double> xv(x, x + stacked_size());
        const std::vector<double> ax = apply_interface_operator(xv);
        for (int i = 0; i < stacked_size(); ++i)
          y[i] = xv[i] - ax[i];
      };
      GmresConfig outer_cfg;
      outer_cfg.rel_tol = cfg_.tol / bnorm;
      outer_cfg.restart = cfg_.outer_restart;
      outer_cfg.max_iterations = cfg_.max_outer;
      const SolveReport rep = gmres(op, nullptr, b, g, outer_cfg);
      result.report.converged = rep.converged;
      result.report.outer_iterations = rep.iterations;
      result.report.outer_residuals.reserve(rep.residual_history.size());
      for (double r : rep.residual_history)
        result.report.outer_residuals.push_back(r * bnorm);
    }
    else
    {
      g.assign(stacked_size(), 0.0);
      result.report.converged = true;
      result.report.outer_iterations = 0;
      result.report.outer_residuals = {0.0};
    }
    // One more round with the accepted traces yields the subdomain fields.
    TraceState out;
    local_round(unstack(g), true, fields, out, false);
    result.field = stitch(fields);
  }

  result.report.avg_inner_iterations.resize(problems_.size(), 0.0);
  for (std::size_t k = 0; k < problems_.size(); ++k)
    if (problems_[k].inner_solves > 0)
      result.report.avg_inner_iterations[k] =
          static_cast<double>(problems_[k].inner_iterations) /
          static_cast<double>(problems_[k].inner_solves);

  result.report.walltime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string dump_traces(const TraceState &state,
                        const std::map<std::pair<int, int>, std::vector<int>> &interfaces)
{
  std::ostringstream out;
  out.precision(17);
  for (const auto &[key, values] : state)
  {
    const auto [i, j] = key;
    const auto it = interfaces.find({std::min(i, j), std::max(i, j)});
    if (it == interfaces.end())
      continue;
    for (std::size_t k = 0; k < values.size(); ++k)
      out << i << ' ' << j << ' ' << it->second[k] << ' ' << values[k].real() << ' '
          << values[k].imag() << '\n';
  }
  return out.str();
}

} // namespace maxwelldd
