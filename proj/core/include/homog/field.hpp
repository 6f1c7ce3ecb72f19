#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "homog/grid.hpp"

namespace homog {

/// Nodal scalar values on a grid; Q1 (multilinear) between nodes.
struct ScalarField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const Grid> g, double fill = 0.0)
      : grid(std::move(g)), v(grid->node_count(), fill) {}
};

using PointFn = std::function<double(const Point&)>;

ScalarField sample_nodal(std::shared_ptr<const Grid> grid, const PointFn& f);

double eval(const ScalarField& f, const Point& x);
double value_in_element(const ScalarField& f, int elem, const Point& local);
Point grad_in_element(const ScalarField& f, int elem, const Point& local);

/// Quadrature of a callable over the grid (2^dim Gauss points per element).
double integrate(const Grid& grid, const std::function<double(int, const Point&, const Point&)>& f_elem_x_local);
double integrate(const Grid& grid, const PointFn& f);
double integrate_field(const ScalarField& f);

/// One value per active macro cell of a DomainGrid (piecewise constant).
struct MacroCellField {
  std::shared_ptr<const DomainGrid> domain;
  std::vector<double> per_cell;

  double at_cell(int macro_index) const { return per_cell[macro_index]; }
  double eval(const Point& x) const { return per_cell[domain->macro_locate(x)]; }
};

/// Vector samples at the element Gauss points (for gradient-like data that is
/// not multilinear).
struct GaussVectorField {
  std::shared_ptr<const Grid> grid;
  int comps = 0;
  std::vector<double> v;  // [elem][gauss][comp]

  double& at(int elem, int gauss, int c) {
    return v[(static_cast<size_t>(elem) * grid->corner_count() + gauss) * comps + c];
  }
  double at(int elem, int gauss, int c) const {
    return v[(static_cast<size_t>(elem) * grid->corner_count() + gauss) * comps + c];
  }
};

GaussVectorField make_gauss_vector(std::shared_ptr<const Grid> grid, int comps);

/// L2 distance between a nodal field's gradient and Gauss-point vector samples.
double l2_gradient_error(const ScalarField& f, const GaussVectorField& g);

}  // namespace homog
