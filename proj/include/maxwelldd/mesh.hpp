// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_MESH_HPP
#define MAXWELLDD_MESH_HPP

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace maxwelldd
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

enum class BoundaryKind
{
  Interior,
  GammaInc,
  GammaInfty,
  Interface
};

// Tag attached to every edge. Interface tags carry the 1-based ids of the two
// subdomains sharing the edge, normalized so that sub_i < sub_j.
struct BoundaryTag
{
  BoundaryKind kind = BoundaryKind::Interior;
  int sub_i = 0;
  int sub_j = 0;

  static BoundaryTag interior() { return {BoundaryKind::Interior, 0, 0}; }
  static BoundaryTag gamma_inc() { return {BoundaryKind::GammaInc, 0, 0}; }
  static BoundaryTag gamma_infty() { return {BoundaryKind::GammaInfty, 0, 0}; }
  static BoundaryTag interface(int i, int j)
  {
    if (i > j)
      std::swap(i, j);
    return {BoundaryKind::Interface, i, j};
  }

  friend bool operator==(const BoundaryTag &, const BoundaryTag &) = default;
};

// Edge with canonical orientation: stored from the lower to the higher vertex
// index (a < b). The unit tangent always points from a to b.
struct Edge
{
  int a = -1;
  int b = -1;
};

// Quadrilateral cell. Corner order is fixed: bottom-left, bottom-right,
// top-right, top-left (counter-clockwise for a non-degenerate quad).
struct Cell
{
  std::array<int, 4> v{-1, -1, -1, -1};
  int material = 0;
};

// Local edge slots of a cell, in the fixed order used by the reference
// element: 0 = bottom, 1 = top, 2 = left, 3 = right. The reference tangent of
// a horizontal slot is +x, of a vertical slot +y (lexicographic convention).
enum : int
{
  kSlotBottom = 0,
  kSlotTop = 1,
  kSlotLeft = 2,
  kSlotRight = 3
};

class StructuredMesh
{
public:
  int nx = 0;
  int ny = 0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  std::vector<Vec2> vertices;
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  std::vector<BoundaryTag> edge_tags;

  // Derived connectivity, built by finalize().
  std::vector<std::array<int, 4>> cell_edges;    // per cell, by slot
  std::vector<std::array<int, 4>> cell_edge_signs; // +1 if canonical tangent matches the slot tangent
  std::vector<std::array<int, 2>> edge_cells;    // up to two incident cells, -1 if absent
  std::vector<std::array<int, 2>> edge_slots;    // slot of the edge within edge_cells[k]

  // Builds cell_edges / cell_edge_signs / edge_cells and validates the edge
  // list. If `edges` is empty the list is created in first-encounter order
  // scanning cells by slot; otherwise the provided numbering is kept.
  void finalize();

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  Vec2 edge_midpoint(int e) const
  {
    return 0.5 * (vertices[edges[e].a] + vertices[edges[e].b]);
  }
  double edge_length(int e) const
  {
    return norm(vertices[edges[e].b] - vertices[edges[e].a]);
  }
  // Unit tangent along the canonical orientation a -> b.
  Vec2 edge_tangent(int e) const
  {
    const Vec2 d = vertices[edges[e].b] - vertices[edges[e].a];
    return (1.0 / norm(d)) * d;
  }

  // Sign relating the canonical edge tangent to the counter-clockwise
  // traversal of the given cell's boundary. Bottom and right slots run with
  // the CCW direction, top and left against it.
  int induced_sign(int cell, int slot) const
  {
    const int ccw = (slot == kSlotBottom || slot == kSlotRight) ? +1 : -1;
    return ccw * cell_edge_signs[cell][slot];
  }
};

enum class GeometryKind
{
  PlainSquare,
  BlockBenchmark,
  YBranch
};

// Material layout of the benchmark domains. The block benchmark is a straight
// horizontal core band; the Y-branch is a band that splits into two straight
// diverging arms at a fraction of the domain length.
struct GeometrySpec
{
  GeometryKind kind = GeometryKind::PlainSquare;
  double n_core = 1.516;
  double n_cladding = 1.0;
  double core_half_width = 0.25;    // BlockBenchmark: fraction of domain height

  double branch_half_width = 1.0 / 16.0; // YBranch: arm half width, fraction of height
  double split_fraction = 0.4;           // YBranch: x-position of the split, fraction of length
  double arm_offset = 0.25;              // YBranch: arm center offset at the outlet, fraction of height

  static GeometrySpec plain_square()
  {
    GeometrySpec g;
    g.kind = GeometryKind::PlainSquare;
    return g;
  }
  static GeometrySpec block_benchmark(double half_width = 0.25)
  {
    GeometrySpec g;
    g.kind = GeometryKind::BlockBenchmark;
    g.core_half_width = half_width;
    return g;
  }
  static GeometrySpec y_branch()
  {
    GeometrySpec g;
    g.kind = GeometryKind::YBranch;
    return g;
  }
};

// Material ids used by GeometrySpec-driven meshes.
enum : int
{
  kMaterialCladding = 0,
  kMaterialCore = 1
};

// Builds an nx-by-ny grid on [x0,x1]x[y0,y1]. Vertices are numbered
// row-major bottom-up; edges level by level (all horizontal edges of a row,
// then all vertical edges of that row) to keep the matrix bandwidth small.
// The left boundary is tagged GammaInc, the rest GammaInfty.
StructuredMesh build_rect_mesh(int nx, int ny, const GeometrySpec &geom,
                               double x0 = 0.0, double x1 = 1.0,
                               double y0 = 0.0, double y1 = 1.0);

struct Partition
{
  int px = 1;
  int py = 1;
  int n_subdomains = 1;
  std::vector<int> subdomain_of_cell; // 1-based ids, row-major subdomain grid
  std::map<std::pair<int, int>, std::vector<int>> interfaces; // (i<j) -> ascending edge ids
  std::vector<std::vector<int>> cells_of; // [id-1] -> ascending cell ids
  std::vector<std::vector<int>> edges_of; // [id-1] -> ascending edge ids (incl. boundary/interface)

  const std::vector<int> &interface_edges(int i, int j) const;
};

// Splits the mesh into a px-by-py grid of equally sized subdomains and
// retags shared edges as Interface(i,j). Throws std::invalid_argument if the
// counts do not divide the mesh resolution.
Partition partition_grid(StructuredMesh &mesh, int px, int py);

// All edges carrying the given tag, ascending.
std::vector<int> boundary_edges(const StructuredMesh &mesh, const BoundaryTag &tag);
// All edges of the given kind regardless of subdomain pair, ascending.
std::vector<int> boundary_edges(const StructuredMesh &mesh, BoundaryKind kind);

std::string tag_to_string(const BoundaryTag &tag);

} // namespace maxwelldd

#endif
