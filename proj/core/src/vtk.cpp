#include "homog/vtk.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace homog {

void write_vtk(const std::string& path, const Grid& grid, std::span<const double> nodal,
               const std::string& field_name) {
  if (static_cast<int>(nodal.size()) != grid.node_count())
    throw std::invalid_argument("write_vtk: value count does not match the grid");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");

  const int nx = grid.cells()[0] + 1;
  const int ny = grid.dim() == 2 ? grid.cells()[1] + 1 : 1;
  out << "# vtk DataFile Version 3.0\n";
  out << field_name << "\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << nx << " " << ny << " 1\n";
  out << "ORIGIN 0 0 0\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", grid.spacing());
  out << "SPACING " << buf << " " << buf << " 1\n";
  out << "POINT_DATA " << nx * ny << "\n";
  out << "SCALARS " << field_name << " double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int id = grid.node_id({i, grid.dim() == 2 ? j : 0});
      std::snprintf(buf, sizeof buf, "%.17g", id >= 0 ? nodal[id] : 0.0);
      out << buf << "\n";
    }
  }
}

ScalarField read_vtk_cell_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  int nx = 0, ny = 0, nz = 0;
  long npoints = 0;
  bool in_values = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "DIMENSIONS") {
      ss >> nx >> ny >> nz;
    } else if (key == "POINT_DATA") {
      ss >> npoints;
    } else if (key == "LOOKUP_TABLE") {
      in_values = true;
    } else if (in_values && !key.empty()) {
      std::istringstream vs(line);
      double v;
      while (vs >> v) values.push_back(v);
    }
  }
  if (nx < 3 || nz != 1) throw std::runtime_error("unsupported VTK dimensions in " + path);
  const int dim = ny > 1 ? 2 : 1;
  const int m = nx - 1;
  if (dim == 2 && ny != nx) throw std::runtime_error("expected a square lattice in " + path);
  if (static_cast<long>(values.size()) != static_cast<long>(nx) * ny)
    throw std::runtime_error("value count mismatch in " + path);

  auto grid = build_cell_grid(dim, m);
  ScalarField f(grid);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int id = grid->node_id({i, dim == 2 ? j : 0});
      f.v[id] = values[static_cast<size_t>(j) * nx + i];
    }
  return f;
}

}  // namespace homog
