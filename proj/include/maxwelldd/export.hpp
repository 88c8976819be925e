// Copyright (c) the maxwelldd authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXWELLDD_EXPORT_HPP
#define MAXWELLDD_EXPORT_HPP

#include <iosfwd>
#include <vector>

#include "maxwelldd/csr.hpp"
#include "maxwelldd/fem.hpp"
#include "maxwelldd/mesh.hpp"

namespace maxwelldd
{

// Plain-text mesh listing: `v x y`, `e v0 v1 tag`, `c v0 v1 v2 v3 mat`.
void export_mesh(const StructuredMesh &mesh, std::ostream &out);

// Coordinate-format matrix listing `row col value`, zero-based indices.
void export_matrix_coo(const CsrMatrix &m, std::ostream &out);

// |E|^2 = |E_RE|^2 + |E_IM|^2 sampled on a uniform grid of resolution^2
// points (cell centers of the sampling grid). values are stored row-major
// with the y index outermost.
struct IntensityGrid
{
  int resolution = 0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  std::vector<double> values;
};

IntensityGrid sample_intensity(const EdgeSpace &space, const ComplexVector &field,
                               int resolution);

// CSV `x,y,intensity`, one sample per line.
void write_intensity_csv(const IntensityGrid &grid, std::ostream &out);

// Grayscale heatmap, one unit square per sample, 256 levels, normalized to
// the maximum intensity (all black if the field is zero).
void write_intensity_svg(const IntensityGrid &grid, std::ostream &out);

} // namespace maxwelldd

#endif
