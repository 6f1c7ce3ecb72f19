#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace homog {

using Point = std::array<double, 2>;
using Lattice = std::array<int, 2>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Structured Q1 lattice of square cells, restricted to an active-cell mask.
/// Nodes are the lattice points touching at least one active cell. Covers the
/// unit cell (full box) and cell-aligned polygonal domains alike.
class Grid {
 public:
  struct Element {
    Lattice cell;                 // lattice coordinates of the cell
    std::array<int, 4> nodes;     // corner node ids, bit c -> offset (c&1, c>>1)
  };

  Grid(int dim, Lattice cells, double spacing, std::vector<std::uint8_t> active);
  virtual ~Grid() = default;

  int dim() const { return dim_; }
  const Lattice& cells() const { return cells_; }
  double spacing() const { return h_; }
  int corner_count() const { return 1 << dim_; }

  int node_count() const { return static_cast<int>(node_lattice_.size()); }
  int element_count() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element>& elements() const { return elements_; }

  Point node_coord(int node) const;
  const Lattice& node_lattice(int node) const { return node_lattice_[node]; }
  /// Node id at a lattice coordinate, -1 if no node there.
  int node_id(const Lattice& c) const;
  bool node_on_boundary(int node) const { return boundary_node_[node] != 0; }

  bool cell_in_range(const Lattice& c) const;
  bool cell_active(const Lattice& c) const;
  /// Element index of an active lattice cell, -1 otherwise.
  int element_at(const Lattice& c) const;

  /// Element containing x (closure); for points on shared faces any owner is
  /// valid and the lowest active one is chosen. local receives coordinates in
  /// [0,1]^dim within the element. Throws std::domain_error if x is outside.
  int locate(const Point& x, Point* local) const;

 protected:
  int dim_;
  Lattice cells_;
  double h_;
  int lat_nx_, lat_ny_;            // node lattice extents
  std::vector<std::uint8_t> active_;
  std::vector<int> cell_to_element_;
  std::vector<int> lattice_to_node_;
  std::vector<Lattice> node_lattice_;
  std::vector<std::uint8_t> boundary_node_;
  std::vector<Element> elements_;
};

/// Uniform grid on the unit cell Y = (0,1)^n with m divisions per axis.
class CellGrid : public Grid {
 public:
  CellGrid(int dim, int m);

  int divisions() const { return m_; }
  /// Number of unknowns after identifying opposite faces.
  int periodic_dof_count() const;
  /// Quotient index of a node (lattice coordinates mod m).
  int periodic_dof(int node) const;
  /// Representative node of a quotient index (lattice in [0,m)^n).
  int periodic_rep_node(int dof) const;

 private:
  int m_;
};

/// Cell-aligned domain: N x N macro cells of size eps = 1/N, each active macro
/// cell carved into s x s fine cells (h = eps/s). The mask selects the domain
/// as a union of closed macro cells; it must be nonempty and face-connected.
class DomainGrid : public Grid {
 public:
  DomainGrid(int dim, int N, int s, std::vector<std::uint8_t> macro_mask);

  double eps() const { return eps_; }
  int macro_per_axis() const { return N_; }
  int fine_per_cell() const { return s_; }

  int macro_cell_count() const { return static_cast<int>(macro_cells_.size()); }
  const std::vector<Lattice>& macro_cells() const { return macro_cells_; }
  /// Index into macro_cells(), -1 if inactive or out of range.
  int macro_index(const Lattice& c) const;
  bool macro_active(const Lattice& c) const;
  Lattice macro_of_element(int elem) const;
  /// Active macro cell owning x; for points on macro faces the lowest active
  /// owner. Throws std::domain_error outside the closure.
  int macro_locate(const Point& x) const;

  double domain_measure() const;

  struct Segment { Point a, b; };
  const std::vector<Segment>& boundary_segments() const { return segments_; }

 private:
  int N_, s_;
  double eps_;
  std::vector<std::uint8_t> macro_mask_;
  std::vector<Lattice> macro_cells_;
  std::vector<int> macro_index_;
  std::vector<Segment> segments_;
};

std::shared_ptr<const CellGrid> build_cell_grid(int dim, int m);
std::shared_ptr<const DomainGrid> build_domain_grid(int dim, int N, int s,
                                                    const std::vector<std::uint8_t>& mask);

/// Builtin macro masks: "unit_square" (all cells), "l_shape" (square minus the
/// upper-right quadrant, N even).
std::vector<std::uint8_t> make_mask(const std::string& shape, int dim, int N);

/// Exact Euclidean distance from x (in the closure) to the domain boundary.
double distance_to_boundary(const DomainGrid& grid, const Point& x);

// 2-point tensor Gauss rule on the reference element [0,1]^dim.
struct QuadratureRule {
  int points;                      // 2^dim
  std::array<Point, 4> local;      // coordinates in [0,1]^dim
  double weight;                   // equal weights, in reference measure
};
QuadratureRule quadrature(int dim);

inline double q1_value(int corner, int dim, const Point& u) {
  double v = (corner & 1) ? u[0] : 1.0 - u[0];
  if (dim == 2) v *= (corner & 2) ? u[1] : 1.0 - u[1];
  return v;
}

/// Gradient of the Q1 basis function w.r.t. physical coordinates (spacing h).
inline Point q1_grad(int corner, int dim, const Point& u, double h) {
  Point g{0.0, 0.0};
  if (dim == 1) {
    g[0] = ((corner & 1) ? 1.0 : -1.0) / h;
    return g;
  }
  const double dx = (corner & 1) ? 1.0 : -1.0;
  const double dy = (corner & 2) ? 1.0 : -1.0;
  const double fx = (corner & 1) ? u[0] : 1.0 - u[0];
  const double fy = (corner & 2) ? u[1] : 1.0 - u[1];
  g[0] = dx * fy / h;
  g[1] = dy * fx / h;
  return g;
}

}  // namespace homog
