// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxwelldd
{

namespace
{

// Corner pairs bounding each slot, oriented along the slot's reference
// tangent (+x for horizontal slots, +y for vertical ones).
constexpr int kSlotCorners[4][2] = {
    {0, 1}, // bottom: BL -> BR
    {3, 2}, // top:    TL -> TR
    {0, 3}, // left:   BL -> TL
    {1, 2}, // right:  BR -> TR
};

} // namespace

void StructuredMesh::finalize()
{
  std::map<std::pair<int, int>, int> lookup;
  for (int e = 0; e < n_edges(); ++e)
  {
    if (edges[e].a >= edges[e].b)
      throw std::invalid_argument("edge not in canonical orientation");
    auto [it, fresh] = lookup.insert({{edges[e].a, edges[e].b}, e});
    if (!fresh)
      throw std::invalid_argument("duplicate edge");
  }

  const bool enumerate = edges.empty();
  cell_edges.assign(cells.size(), {-1, -1, -1, -1});
  cell_edge_signs.assign(cells.size(), {0, 0, 0, 0});
  for (int c = 0; c < n_cells(); ++c)
  {
    for (int slot = 0; slot < 4; ++slot)
    {
      const int va = cells[c].v[kSlotCorners[slot][0]];
      const int vb = cells[c].v[kSlotCorners[slot][1]];
      const std::pair<int, int> key{std::min(va, vb), std::max(va, vb)};
      auto it = lookup.find(key);
      if (it == lookup.end())
      {
        if (!enumerate)
          throw std::invalid_argument("cell references a missing edge");
        edges.push_back({key.first, key.second});
        it = lookup.insert({key, n_edges() - 1}).first;
      }
      cell_edges[c][slot] = it->second;
      cell_edge_signs[c][slot] = (va < vb) ? +1 : -1;
    }
  }

  if (edge_tags.empty())
    edge_tags.assign(edges.size(), BoundaryTag::interior());
  if (edge_tags.size() != edges.size())
    throw std::invalid_argument("edge_tags size mismatch");

  edge_cells.assign(edges.size(), {-1, -1});
  edge_slots.assign(edges.size(), {-1, -1});
  for (int c = 0; c < n_cells(); ++c)
  {
    for (int slot = 0; slot < 4; ++slot)
    {
      const int e = cell_edges[c][slot];
      const int k = (edge_cells[e][0] < 0) ? 0 : 1;
      if (k == 1 && edge_cells[e][1] >= 0)
        throw std::invalid_argument("edge shared by more than two cells");
      edge_cells[e][k] = c;
      edge_slots[e][k] = slot;
    }
  }
}

namespace
{

int material_of_cell(const GeometrySpec &geom, Vec2 center, double x0, double x1,
                     double y0, double y1)
{
  const double height = y1 - y0;
  const double y_mid = 0.5 * (y0 + y1);
  switch (geom.kind)
  {
  case GeometryKind::PlainSquare:
    return kMaterialCladding;
  case GeometryKind::BlockBenchmark:
    return (std::abs(center.y - y_mid) < geom.core_half_width * height)
               ? kMaterialCore
               : kMaterialCladding;
  case GeometryKind::YBranch:
  {
    const double x_split = x0 + geom.split_fraction * (x1 - x0);
    const double hw = geom.branch_half_width * height;
    if (center.x < x_split)
      return (std::abs(center.y - y_mid) < hw) ? kMaterialCore : kMaterialCladding;
    // Two straight arms diverging linearly from the split point to an offset
    // of arm_offset*height at the outlet.
    const double t = (center.x - x_split) / (x1 - x_split);
    const double shift = geom.arm_offset * height * t;
    const bool upper = std::abs(center.y - (y_mid + shift)) < hw;
    const bool lower = std::abs(center.y - (y_mid - shift)) < hw;
    return (upper || lower) ? kMaterialCore : kMaterialCladding;
  }
  }
  return kMaterialCladding;
}

} // namespace

StructuredMesh build_rect_mesh(int nx, int ny, const GeometrySpec &geom,
                               double x0, double x1, double y0, double y1)
{
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rect_mesh: cell counts must be positive");

  StructuredMesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.x0 = x0;
  mesh.x1 = x1;
  mesh.y0 = y0;
  mesh.y1 = y1;

  const double hx = (x1 - x0) / nx;
  const double hy = (y1 - y0) / ny;

  mesh.vertices.reserve((nx + 1) * (ny + 1));
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix)
      mesh.vertices.push_back({x0 + ix * hx, y0 + iy * hy});

  const auto vidx = [nx](int ix, int iy) { return iy * (nx + 1) + ix; };

  mesh.cells.reserve(nx * ny);
  for (int iy = 0; iy < ny; ++iy)
  {
    for (int ix = 0; ix < nx; ++ix)
    {
      Cell cell;
      cell.v = {vidx(ix, iy), vidx(ix + 1, iy), vidx(ix + 1, iy + 1), vidx(ix, iy + 1)};
      const Vec2 center{x0 + (ix + 0.5) * hx, y0 + (iy + 0.5) * hy};
      cell.material = material_of_cell(geom, center, x0, x1, y0, y1);
      mesh.cells.push_back(cell);
    }
  }

  // Level-by-level edge numbering: the horizontal edges of vertex row iy,
  // then the vertical edges between rows iy and iy+1, and finally the top
  // horizontal row. Keeps edge indices of one cell within ~2*nx of each other.
  mesh.edges.reserve(nx * (ny + 1) + ny * (nx + 1));
  mesh.edge_tags.reserve(nx * (ny + 1) + ny * (nx + 1));
  const auto push_edge = [&](int a, int b, BoundaryTag tag) {
    mesh.edges.push_back({a, b});
    mesh.edge_tags.push_back(tag);
  };
  for (int iy = 0; iy <= ny; ++iy)
  {
    const bool hboundary = (iy == 0 || iy == ny);
    for (int ix = 0; ix < nx; ++ix)
      push_edge(vidx(ix, iy), vidx(ix + 1, iy),
                hboundary ? BoundaryTag::gamma_infty() : BoundaryTag::interior());
    if (iy == ny)
      break;
    for (int ix = 0; ix <= nx; ++ix)
    {
      BoundaryTag tag = BoundaryTag::interior();
      if (ix == 0)
        tag = BoundaryTag::gamma_inc();
      else if (ix == nx)
        tag = BoundaryTag::gamma_infty();
      push_edge(vidx(ix, iy), vidx(ix, iy + 1), tag);
    }
  }

  mesh.finalize();
  return mesh;
}

const std::vector<int> &Partition::interface_edges(int i, int j) const
{
  static const std::vector<int> empty;
  auto it = interfaces.find({std::min(i, j), std::max(i, j)});
  return (it == interfaces.end()) ? empty : it->second;
}

Partition partition_grid(StructuredMesh &mesh, int px, int py)
{
  if (px < 1 || py < 1)
    throw std::invalid_argument("partition_grid: subdomain counts must be positive");
  if (mesh.nx % px != 0 || mesh.ny % py != 0)
    throw std::invalid_argument("partition_grid: counts must divide the mesh resolution");

  Partition part;
  part.px = px;
  part.py = py;
  part.n_subdomains = px * py;

  const int cw = mesh.nx / px; // cells per subdomain along x
  const int ch = mesh.ny / py;

  part.subdomain_of_cell.resize(mesh.n_cells());
  part.cells_of.assign(part.n_subdomains, {});
  for (int c = 0; c < mesh.n_cells(); ++c)
  {
    const int ix = c % mesh.nx;
    const int iy = c / mesh.nx;
    const int id = (iy / ch) * px + (ix / cw) + 1;
    part.subdomain_of_cell[c] = id;
    part.cells_of[id - 1].push_back(c);
  }

  part.edges_of.assign(part.n_subdomains, {});
  for (int e = 0; e < mesh.n_edges(); ++e)
  {
    const int c0 = mesh.edge_cells[e][0];
    const int c1 = mesh.edge_cells[e][1];
    const int s0 = part.subdomain_of_cell[c0];
    const int s1 = (c1 >= 0) ? part.subdomain_of_cell[c1] : s0;
    part.edges_of[s0 - 1].push_back(e);
    if (s1 != s0)
    {
      part.edges_of[s1 - 1].push_back(e);
      if (mesh.edge_tags[e].kind != BoundaryKind::Interior)
        throw std::invalid_argument("partition_grid: cut crosses a non-interior edge");
      mesh.edge_tags[e] = BoundaryTag::interface(s0, s1);
      part.interfaces[{std::min(s0, s1), std::max(s0, s1)}].push_back(e);
    }
  }

  for (auto &edges : part.edges_of)
    std::sort(edges.begin(), edges.end());
  for (auto &[key, edges] : part.interfaces)
    std::sort(edges.begin(), edges.end());

  return part;
}

std::vector<int> boundary_edges(const StructuredMesh &mesh, const BoundaryTag &tag)
{
  std::vector<int> result;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge_tags[e] == tag)
      result.push_back(e);
  return result;
}

std::vector<int> boundary_edges(const StructuredMesh &mesh, BoundaryKind kind)
{
  std::vector<int> result;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge_tags[e].kind == kind)
      result.push_back(e);
  return result;
}

std::string tag_to_string(const BoundaryTag &tag)
{
  switch (tag.kind)
  {
  case BoundaryKind::Interior:
    return "interior";
  case BoundaryKind::GammaInc:
    return "gamma_inc";
  case BoundaryKind::GammaInfty:
    return "gamma_infty";
  case BoundaryKind::Interface:
    return "interface:" + std::to_string(tag.sub_i) + ":" + std::to_string(tag.sub_j);
  }
  return "interior";
}

} // namespace maxwelldd
