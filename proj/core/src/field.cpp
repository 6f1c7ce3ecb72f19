#include "homog/field.hpp"

#include <cmath>

namespace homog {

ScalarField sample_nodal(std::shared_ptr<const Grid> grid, const PointFn& f) {
  ScalarField out(grid);
  for (int i = 0; i < grid->node_count(); ++i) out.v[i] = f(grid->node_coord(i));
  return out;
}

double value_in_element(const ScalarField& f, int elem, const Point& local) {
  const Grid& g = *f.grid;
  const auto& e = g.elements()[elem];
  double val = 0.0;
  for (int c = 0; c < g.corner_count(); ++c) val += f.v[e.nodes[c]] * q1_value(c, g.dim(), local);
  return val;
}

Point grad_in_element(const ScalarField& f, int elem, const Point& local) {
  const Grid& g = *f.grid;
  const auto& e = g.elements()[elem];
  Point out{0.0, 0.0};
  for (int c = 0; c < g.corner_count(); ++c) {
    const Point gc = q1_grad(c, g.dim(), local, g.spacing());
    out[0] += f.v[e.nodes[c]] * gc[0];
    out[1] += f.v[e.nodes[c]] * gc[1];
  }
  return out;
}

double eval(const ScalarField& f, const Point& x) {
  Point local;
  const int elem = f.grid->locate(x, &local);
  return value_in_element(f, elem, local);
}

double integrate(const Grid& grid, const std::function<double(int, const Point&, const Point&)>& f) {
  const QuadratureRule q = quadrature(grid.dim());
  const double jac = std::pow(grid.spacing(), grid.dim()) * q.weight;
  double sum = 0.0;
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto& el = grid.elements()[e];
    for (int g = 0; g < q.points; ++g) {
      const Point x{(el.cell[0] + q.local[g][0]) * grid.spacing(),
                    grid.dim() == 2 ? (el.cell[1] + q.local[g][1]) * grid.spacing() : 0.0};
      sum += jac * f(e, x, q.local[g]);
    }
  }
  return sum;
}

double integrate(const Grid& grid, const PointFn& f) {
  return integrate(grid, [&](int, const Point& x, const Point&) { return f(x); });
}

double integrate_field(const ScalarField& f) {
  return integrate(*f.grid, [&](int e, const Point&, const Point& u) { return value_in_element(f, e, u); });
}

GaussVectorField make_gauss_vector(std::shared_ptr<const Grid> grid, int comps) {
  GaussVectorField out;
  out.comps = comps;
  out.v.assign(static_cast<size_t>(grid->element_count()) * grid->corner_count() * comps, 0.0);
  out.grid = std::move(grid);
  return out;
}

double l2_gradient_error(const ScalarField& f, const GaussVectorField& gvf) {
  const Grid& g = *f.grid;
  const QuadratureRule q = quadrature(g.dim());
  const double jac = std::pow(g.spacing(), g.dim()) * q.weight;
  double sum = 0.0;
  for (int e = 0; e < g.element_count(); ++e) {
    for (int gp = 0; gp < q.points; ++gp) {
      const Point grad = grad_in_element(f, e, q.local[gp]);
      for (int c = 0; c < g.dim(); ++c) {
        const double d = grad[c] - gvf.at(e, gp, c);
        sum += jac * d * d;
      }
    }
  }
  return std::sqrt(sum);
}

}  // namespace homog
