// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "maxwelldd/export.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

namespace maxwelldd
{

void export_mesh(const StructuredMesh &mesh, std::ostream &out)
{
  out.precision(17);
  for (const Vec2 &v : mesh.vertices)
    out << "v " << v.x << ' ' << v.y << '\n';
  for (int e = 0; e < mesh.n_edges(); ++e)
    out << "e " << mesh.edges[e].a << ' ' << mesh.edges[e].b << ' '
        << tag_to_string(mesh.edge_tags[e]) << '\n';
  for (const Cell &c : mesh.cells)
    out << "c " << c.v[0] << ' ' << c.v[1] << ' ' << c.v[2] << ' ' << c.v[3] << ' '
        << c.material << '\n';
}

void export_matrix_coo(const CsrMatrix &m, std::ostream &out)
{
  out.precision(17);
  for (int i = 0; i < m.n_rows; ++i)
    for (int k = m.ptr[i]; k < m.ptr[i + 1]; ++k)
      out << i << ' ' << m.col[k] << ' ' << m.val[k] << '\n';
}

IntensityGrid sample_intensity(const EdgeSpace &space, const ComplexVector &field,
                               int resolution)
{
  const StructuredMesh &mesh = space.mesh();
  IntensityGrid grid;
  grid.resolution = resolution;
  grid.x0 = mesh.x0;
  grid.x1 = mesh.x1;
  grid.y0 = mesh.y0;
  grid.y1 = mesh.y1;
  grid.values.resize(static_cast<std::size_t>(resolution) * resolution);
  const double dx = (mesh.x1 - mesh.x0) / resolution;
  const double dy = (mesh.y1 - mesh.y0) / resolution;
  for (int j = 0; j < resolution; ++j)
    for (int i = 0; i < resolution; ++i)
    {
      const Vec2 p{mesh.x0 + (i + 0.5) * dx, mesh.y0 + (j + 0.5) * dy};
      std::complex<double> ex, ey;
      evaluate_field(space, field, p, ex, ey);
      grid.values[static_cast<std::size_t>(j) * resolution + i] =
          std::norm(ex) + std::norm(ey);
    }
  return grid;
}

void write_intensity_csv(const IntensityGrid &grid, std::ostream &out)
{
  out.precision(17);
  out << "x,y,intensity\n";
  const double dx = (grid.x1 - grid.x0) / grid.resolution;
  const double dy = (grid.y1 - grid.y0) / grid.resolution;
  for (int j = 0; j < grid.resolution; ++j)
    for (int i = 0; i < grid.resolution; ++i)
      out << grid.x0 + (i + 0.5) * dx << ',' << grid.y0 + (j + 0.5) * dy << ','
          << grid.values[static_cast<std::size_t>(j) * grid.resolution + i] << '\n';
}

void write_intensity_svg(const IntensityGrid &grid, std::ostream &out)
{
  const int res = grid.resolution;
  double vmax = 0.0;
  for (double v : grid.values)
    vmax = std::max(vmax, v);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << res << ' ' << res
      << "\" width=\"" << res << "\" height=\"" << res << "\" shape-rendering=\"crispEdges\">\n";
  const char *hex = "0123456789abcdef";
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i)
    {
      const double v = grid.values[static_cast<std::size_t>(j) * res + i];
      const int level =
          (vmax > 0.0) ? std::clamp(static_cast<int>(v / vmax * 255.0 + 0.5), 0, 255) : 0;
      // SVG y grows downward; flip so the domain's y grows upward.
      out << "<rect x=\"" << i << "\" y=\"" << (res - 1 - j) << "\" width=\"1\" height=\"1\" fill=\"#";
      const char c0 = hex[(level >> 4) & 0xf];
      const char c1 = hex[level & 0xf];
      out << c0 << c1 << c0 << c1 << c0 << c1 << "\"/>\n";
    }
  out << "</svg>\n";
}

} // namespace maxwelldd
