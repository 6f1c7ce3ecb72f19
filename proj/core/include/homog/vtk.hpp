#pragma once

#include <memory>
#include <span>
#include <string>

#include "homog/field.hpp"
#include "homog/grid.hpp"

namespace homog {

/// Writes nodal values as legacy VTK structured points (ASCII). Masked grids
/// are written on their bounding lattice with 0 at nodes outside the domain.
void write_vtk(const std::string& path, const Grid& grid, std::span<const double> nodal,
               const std::string& field_name);

/// Reads a structured-points file produced by write_vtk for a full-box grid
/// and rebuilds it as a field on a CellGrid (unit-cell geometry).
ScalarField read_vtk_cell_field(const std::string& path);

}  // namespace homog
