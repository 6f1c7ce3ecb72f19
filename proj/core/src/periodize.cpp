#include "homog/periodize.hpp"

#include <cmath>
#include <stdexcept>

#include "homog/coefficient.hpp"
#include "homog/runtime.hpp"

namespace homog {

namespace {

std::shared_ptr<const CellGrid> require_cell_grid(const ScalarField& f) {
  auto cell = std::dynamic_pointer_cast<const CellGrid>(f.grid);
  if (!cell) throw std::invalid_argument("expected a field on a CellGrid");
  return cell;
}

}  // namespace

double CutoffProfile::operator()(double t) const {
  const double a = std::abs(t);
  if (a <= 0.125) return 1.0;
  if (a >= 0.375) return 0.0;
  const double u = (a - 0.125) / 0.25;
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));  // quintic smoothstep
  return 1.0 - s;
}

double CutoffProfile::bracket(double y) const { return 0.5 * ((*this)(y) - (*this)(1.0 - y)); }

std::vector<double> face_defect(const ScalarField& phi, int axis) {
  auto cell = require_cell_grid(phi);
  const int m = cell->divisions();
  if (axis < 0 || axis >= cell->dim()) throw std::invalid_argument("face_defect: axis out of range");
  if (cell->dim() == 1) {
    return {phi.v[cell->node_id({m, 0})] - phi.v[cell->node_id({0, 0})]};
  }
  std::vector<double> d(m + 1);
  for (int t = 0; t <= m; ++t) {
    const Lattice hi = axis == 0 ? Lattice{m, t} : Lattice{t, m};
    const Lattice lo = axis == 0 ? Lattice{0, t} : Lattice{t, 0};
    d[t] = phi.v[cell->node_id(hi)] - phi.v[cell->node_id(lo)];
  }
  return d;
}

ScalarField periodize_lift(const ScalarField& phi, const CutoffProfile& theta) {
  auto cell = require_cell_grid(phi);
  const int m = cell->divisions();
  ScalarField out = phi;
  for (int axis = 0; axis < cell->dim(); ++axis) {
    const std::vector<double> d = face_defect(out, axis);
    for (int n = 0; n < cell->node_count(); ++n) {
      const Lattice& c = cell->node_lattice(n);
      const double y = static_cast<double>(c[axis]) / m;
      const int t = cell->dim() == 2 ? c[1 - axis] : 0;
      out.v[n] += theta.bracket(y) * d[t];
    }
  }
  return out;
}

PeriodicProjector::PeriodicProjector(std::shared_ptr<const CellGrid> grid, SolverConfig cfg)
    : grid_(std::move(grid)), cfg_(cfg) {
  const CoefficientAt at = [](const Point&) { return Matrix2{{{1.0, 0.0}, {0.0, 1.0}}}; };
  periodic_ = assemble_stiffness(*grid_, at, BC::Periodic);
  full_ = assemble_stiffness(*grid_, at, BC::Neumann);
  basis_integral_ = assemble_load(*grid_, periodic_.dofs, PointFn([](const Point&) { return 1.0; }));
  full_basis_integral_ = assemble_load(*grid_, full_.dofs, PointFn([](const Point&) { return 1.0; }));
  diag_ = periodic_.op.diagonal();
  for (int i = 0; i < periodic_.dofs.ndofs; ++i) diag_[i] += basis_integral_[i] * basis_integral_[i];
}

std::vector<double> PeriodicProjector::project_values(std::span<const double> nodal) const {
  const int nq = periodic_.dofs.ndofs;

  // right-hand side <phi, psi_q> = int grad phi . grad psi_q + (int phi)(int psi_q)
  std::vector<double> w(grid_->node_count(), 0.0);
  full_.op.apply(nodal, w);
  std::vector<double> b(nq, 0.0);
  for (int n = 0; n < grid_->node_count(); ++n) b[periodic_.dofs.node_to_dof[n]] += w[n];
  double integral = 0.0;
  for (int n = 0; n < grid_->node_count(); ++n) integral += full_basis_integral_[n] * nodal[n];
  for (int q = 0; q < nq; ++q) b[q] += integral * basis_integral_[q];

  LinearOperator op;
  op.n = nq;
  op.diag = diag_;
  op.apply = [this](std::span<const double> x, std::span<double> y) {
    periodic_.op.apply(x, y);
    double rx = 0.0;
    for (int i = 0; i < periodic_.dofs.ndofs; ++i) rx += basis_integral_[i] * x[i];
    for (int i = 0; i < periodic_.dofs.ndofs; ++i) y[i] += rx * basis_integral_[i];
  };
  const CgResult res = cg_solve(op, b, cfg_);

  std::vector<double> out(grid_->node_count());
  periodic_.dofs.expand(res.x, out);
  return out;
}

ScalarField PeriodicProjector::project(const ScalarField& phi) const {
  if (phi.grid.get() != grid_.get()) throw std::invalid_argument("projector grid mismatch");
  ScalarField out(grid_);
  out.v = project_values(phi.v);
  return out;
}

double PeriodicProjector::inner(std::span<const double> u, std::span<const double> v) const {
  std::vector<double> Ku(grid_->node_count(), 0.0);
  full_.op.apply(u, Ku);
  double s = 0.0;
  for (int n = 0; n < grid_->node_count(); ++n) s += Ku[n] * v[n];
  double iu = 0.0, iv = 0.0;
  for (int n = 0; n < grid_->node_count(); ++n) {
    iu += full_basis_integral_[n] * u[n];
    iv += full_basis_integral_[n] * v[n];
  }
  return s + iu * iv;
}

ScalarField periodize_project(const ScalarField& phi, const SolverConfig& cfg) {
  auto cell = require_cell_grid(phi);
  return PeriodicProjector(cell, cfg).project(phi);
}

UnfoldedField periodize_project_columns(const UnfoldedField& U, const SolverConfig& cfg, int workers) {
  if (U.comps != 1) throw std::invalid_argument("column projection expects a scalar unfolded field");
  const PeriodicProjector proj(U.ycell, cfg);
  UnfoldedField out = U;
  const int ynodes = U.ynode_count();
  parallel_for(U.domain->macro_cell_count(), workers, [&](int cell) {
    const std::span<const double> column(U.values.data() + static_cast<size_t>(cell) * ynodes, ynodes);
    const std::vector<double> p = proj.project_values(column);
    std::copy(p.begin(), p.end(), out.values.begin() + static_cast<size_t>(cell) * ynodes);
  });
  return out;
}

}  // namespace homog
