#include "homog/cell.hpp"

#include <cmath>

#include "homog/runtime.hpp"

namespace homog {

double HomogenizedTensor::max_abs_diff(const Matrix2& other) const {
  double best = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) best = std::max(best, std::abs(a[i][j] - other[i][j]));
  return best;
}

std::pair<double, double> HomogenizedTensor::spectrum_bounds() const {
  if (dim == 1) return {a[0][0], a[0][0]};
  const double tr = a[0][0] + a[1][1];
  const double off = 0.5 * (a[0][1] + a[1][0]);
  const double disc = std::sqrt(std::pow(0.5 * (a[0][0] - a[1][1]), 2) + off * off);
  return {0.5 * tr - disc, 0.5 * tr + disc};
}

ScalarField solve_corrector(const MatrixField& A, int direction,
                            std::shared_ptr<const CellGrid> grid, const SolverConfig& cfg,
                            double* residual, int* iterations) {
  if (direction < 0 || direction >= grid->dim())
    throw std::invalid_argument("corrector direction out of range");
  const CoefficientAt at = [&A](const Point& y) { return A.sample(y); };
  const AssembledOperator K = assemble_stiffness(*grid, at, BC::Periodic);

  // load: b_q = -int_Y A e_i . grad psi_q
  const int dim = grid->dim();
  const int nc = grid->corner_count();
  const QuadratureRule q = quadrature(dim);
  const double jac = std::pow(grid->spacing(), dim) * q.weight;
  std::vector<double> b(K.dofs.ndofs, 0.0);
  for (const auto& el : grid->elements()) {
    for (int g = 0; g < q.points; ++g) {
      const Point y{(el.cell[0] + q.local[g][0]) * grid->spacing(),
                    dim == 2 ? (el.cell[1] + q.local[g][1]) * grid->spacing() : 0.0};
      const Matrix2 a = A.sample(y);
      const Point col{a[0][direction], a[1][direction]};
      for (int c = 0; c < nc; ++c) {
        const Point gc = q1_grad(c, dim, q.local[g], grid->spacing());
        b[K.dofs.node_to_dof[el.nodes[c]]] -= jac * (col[0] * gc[0] + (dim == 2 ? col[1] * gc[1] : 0.0));
      }
    }
  }

  SolverConfig deflated = cfg;
  deflated.deflate = true;
  const CgResult res = cg_solve(K.op, b, deflated);
  if (residual) *residual = res.rel_residual;
  if (iterations) *iterations = res.iterations;

  ScalarField chi(grid);
  K.dofs.expand(res.x, chi.v);
  // quotient nodal mean equals the Y-integral mean on the uniform grid
  const double mean = integrate_field(chi);
  for (double& v : chi.v) v -= mean;
  return chi;
}

CorrectorSet solve_correctors(const MatrixField& A, std::shared_ptr<const CellGrid> grid,
                              const SolverConfig& cfg, int workers) {
  CorrectorSet set;
  set.grid = grid;
  const int n = grid->dim();
  set.chi.resize(n);
  set.residuals.assign(n, 0.0);
  set.iterations.assign(n, 0);
  parallel_for(n, workers, [&](int i) {
    set.chi[i] = solve_corrector(A, i, grid, cfg, &set.residuals[i], &set.iterations[i]);
  });
  return set;
}

HomogenizedTensor homogenized_tensor(const MatrixField& A, const CorrectorSet& correctors) {
  const CellGrid& grid = *correctors.grid;
  const int dim = grid.dim();
  const QuadratureRule q = quadrature(dim);
  const double jac = std::pow(grid.spacing(), dim) * q.weight;

  HomogenizedTensor tensor;
  tensor.dim = dim;
  for (auto& row : tensor.a) row = {0.0, 0.0};

  for (int e = 0; e < grid.element_count(); ++e) {
    const auto& el = grid.elements()[e];
    for (int g = 0; g < q.points; ++g) {
      const Point y{(el.cell[0] + q.local[g][0]) * grid.spacing(),
                    dim == 2 ? (el.cell[1] + q.local[g][1]) * grid.spacing() : 0.0};
      const Matrix2 a = A.sample(y);
      for (int i = 0; i < dim; ++i) {
        Point flux = grad_in_element(correctors.chi[i], e, q.local[g]);
        flux[i] += 1.0;
        for (int r = 0; r < dim; ++r)
          tensor.a[r][i] += jac * (a[r][0] * flux[0] + (dim == 2 ? a[r][1] * flux[1] : 0.0));
      }
    }
  }
  return tensor;
}

double corrector_flux_residual(const MatrixField& A, const ScalarField& chi, int direction) {
  auto grid = std::dynamic_pointer_cast<const CellGrid>(chi.grid);
  if (!grid) throw std::invalid_argument("corrector field must live on a CellGrid");
  const int dim = grid->dim();
  const int nc = grid->corner_count();
  const QuadratureRule q = quadrature(dim);
  const double jac = std::pow(grid->spacing(), dim) * q.weight;

  // residual r_q = int A(e_i + grad chi).grad psi_q against the quotient basis,
  // reported relative to the pure e_i load (the CG right-hand-side scale)
  std::vector<double> r(grid->periodic_dof_count(), 0.0);
  std::vector<double> load(grid->periodic_dof_count(), 0.0);
  for (int e = 0; e < grid->element_count(); ++e) {
    const auto& el = grid->elements()[e];
    for (int g = 0; g < q.points; ++g) {
      const Point y{(el.cell[0] + q.local[g][0]) * grid->spacing(),
                    dim == 2 ? (el.cell[1] + q.local[g][1]) * grid->spacing() : 0.0};
      const Matrix2 a = A.sample(y);
      Point flux = grad_in_element(chi, e, q.local[g]);
      flux[direction] += 1.0;
      const Point aflux{a[0][0] * flux[0] + a[0][1] * flux[1], a[1][0] * flux[0] + a[1][1] * flux[1]};
      const Point acol{a[0][direction], a[1][direction]};
      for (int c = 0; c < nc; ++c) {
        const Point gc = q1_grad(c, dim, q.local[g], grid->spacing());
        const int dof = grid->periodic_dof(el.nodes[c]);
        r[dof] += jac * (aflux[0] * gc[0] + (dim == 2 ? aflux[1] * gc[1] : 0.0));
        load[dof] += jac * (acol[0] * gc[0] + (dim == 2 ? acol[1] * gc[1] : 0.0));
      }
    }
  }
  double rn = 0.0, ln = 0.0;
  for (double v : r) rn += v * v;
  for (double v : load) ln += v * v;
  return ln > 0.0 ? std::sqrt(rn / ln) : std::sqrt(rn);
}

}  // namespace homog
