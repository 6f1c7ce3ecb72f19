#include "homog/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace homog {

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

std::vector<double> SparseOperator::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int k = ptr[r]; k < ptr[r + 1]; ++k)
      if (col[k] == r) d[r] += val[k];
  return d;
}

std::vector<double> DofMap::restrict_nodal(std::span<const double> nodal) const {
  std::vector<double> out(ndofs, 0.0);
  std::vector<int> hit(ndofs, 0);
  for (size_t n = 0; n < node_to_dof.size(); ++n) {
    const int d = node_to_dof[n];
    if (d >= 0 && !hit[d]) {
      out[d] = nodal[n];
      hit[d] = 1;
    }
  }
  return out;
}

void DofMap::expand(std::span<const double> dofs, std::span<double> nodal) const {
  for (size_t n = 0; n < node_to_dof.size(); ++n) {
    const int d = node_to_dof[n];
    nodal[n] = d >= 0 ? dofs[d] : 0.0;
  }
}

namespace {

DofMap make_dof_map(const Grid& grid, BC bc) {
  DofMap map;
  map.node_to_dof.assign(grid.node_count(), -1);
  switch (bc) {
    case BC::Neumann:
      map.ndofs = grid.node_count();
      for (int n = 0; n < grid.node_count(); ++n) map.node_to_dof[n] = n;
      break;
    case BC::Dirichlet: {
      int next = 0;
      for (int n = 0; n < grid.node_count(); ++n)
        if (!grid.node_on_boundary(n)) map.node_to_dof[n] = next++;
      map.ndofs = next;
      break;
    }
    case BC::Periodic: {
      const auto* cell = dynamic_cast<const CellGrid*>(&grid);
      if (!cell) throw std::invalid_argument("periodic assembly needs a CellGrid");
      map.ndofs = cell->periodic_dof_count();
      for (int n = 0; n < grid.node_count(); ++n) map.node_to_dof[n] = cell->periodic_dof(n);
      break;
    }
  }
  return map;
}

struct Triplet {
  int r, c;
  double v;
};

SparseOperator compress(int rows, std::vector<Triplet>& trips) {
  std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  SparseOperator op;
  op.rows = rows;
  op.ptr.assign(rows + 1, 0);
  for (size_t i = 0; i < trips.size();) {
    size_t j = i;
    double s = 0.0;
    while (j < trips.size() && trips[j].r == trips[i].r && trips[j].c == trips[i].c) s += trips[j++].v;
    op.col.push_back(trips[i].c);
    op.val.push_back(s);
    ++op.ptr[trips[i].r + 1];
    i = j;
  }
  for (int r = 0; r < rows; ++r) op.ptr[r + 1] += op.ptr[r];
  return op;
}

}  // namespace

AssembledOperator assemble_stiffness(const Grid& grid, const CoefficientAt& A, BC bc) {
  AssembledOperator out;
  out.dofs = make_dof_map(grid, bc);

  const int dim = grid.dim();
  const int nc = grid.corner_count();
  const QuadratureRule q = quadrature(dim);
  const double jac = std::pow(grid.spacing(), dim) * q.weight;

  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(grid.element_count()) * nc * nc);

  for (const auto& el : grid.elements()) {
    double ke[4][4] = {};
    for (int g = 0; g < q.points; ++g) {
      const Point x{(el.cell[0] + q.local[g][0]) * grid.spacing(),
                    dim == 2 ? (el.cell[1] + q.local[g][1]) * grid.spacing() : 0.0};
      const Matrix2 a = A(x);
      Point gb[4];
      for (int c = 0; c < nc; ++c) gb[c] = q1_grad(c, dim, q.local[g], grid.spacing());
      for (int cb = 0; cb < nc; ++cb) {
        const Point ag{a[0][0] * gb[cb][0] + a[0][1] * gb[cb][1],
                       a[1][0] * gb[cb][0] + a[1][1] * gb[cb][1]};
        for (int ca = 0; ca < nc; ++ca)
          ke[ca][cb] += jac * (ag[0] * gb[ca][0] + (dim == 2 ? ag[1] * gb[ca][1] : 0.0));
      }
    }
    for (int ca = 0; ca < nc; ++ca) {
      const int ra = out.dofs.node_to_dof[el.nodes[ca]];
      if (ra < 0) continue;
      for (int cb = 0; cb < nc; ++cb) {
        const int rb = out.dofs.node_to_dof[el.nodes[cb]];
        if (rb < 0) continue;
        trips.push_back({ra, rb, ke[ca][cb]});
      }
    }
  }
  out.op = compress(out.dofs.ndofs, trips);
  out.op.symmetric = true;
  return out;
}

std::vector<double> assemble_load(const Grid& grid, const DofMap& dofs,
                                  const std::function<double(int, const Point&, const Point&)>& f) {
  const int dim = grid.dim();
  const int nc = grid.corner_count();
  const QuadratureRule q = quadrature(dim);
  const double jac = std::pow(grid.spacing(), dim) * q.weight;
  std::vector<double> b(dofs.ndofs, 0.0);
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto& el = grid.elements()[e];
    for (int g = 0; g < q.points; ++g) {
      const Point x{(el.cell[0] + q.local[g][0]) * grid.spacing(),
                    dim == 2 ? (el.cell[1] + q.local[g][1]) * grid.spacing() : 0.0};
      const double fv = jac * f(e, x, q.local[g]);
      for (int c = 0; c < nc; ++c) {
        const int d = dofs.node_to_dof[el.nodes[c]];
        if (d >= 0) b[d] += fv * q1_value(c, dim, q.local[g]);
      }
    }
  }
  return b;
}

std::vector<double> assemble_load(const Grid& grid, const DofMap& dofs, const PointFn& f) {
  return assemble_load(grid, dofs, [&](int, const Point& x, const Point&) { return f(x); });
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void remove_mean(std::span<double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double& v : x) v -= m;
}

template <typename ApplyFn>
CgResult cg_impl(int n, const ApplyFn& apply, std::span<const double> diag,
                 std::span<const double> rhs, const SolverConfig& cfg,
                 const IterationCallback& on_iterate) {
  if (cfg.tol <= 0.0 || cfg.tol >= 1.0) throw std::invalid_argument("solver tolerance must be in (0,1)");
  if (cfg.max_iterations < 1) throw std::invalid_argument("solver needs max_iterations >= 1");

  CgResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r(rhs.begin(), rhs.end());
  const double rhs_norm = std::sqrt(dot(r, r));
  if (cfg.deflate) remove_mean(r);
  const double bnorm = std::sqrt(dot(r, r));
  // rhs numerically in the nullspace (e.g. a constant vector under deflation)
  if (bnorm <= 1e-14 * rhs_norm || bnorm == 0.0) return res;

  std::vector<double> invd(n);
  for (int i = 0; i < n; ++i) invd[i] = diag[i] != 0.0 ? 1.0 / diag[i] : 1.0;

  std::vector<double> z(n), p(n), Ap(n);
  for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
  if (cfg.deflate) remove_mean(z);
  p = z;
  double rz = dot(r, z);

  double rel = 1.0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    apply(p, std::span<double>(Ap));
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) throw SolveFailure("cg: operator not positive definite on the search space", rel, it);
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) res.x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
    rel = std::sqrt(dot(r, r)) / bnorm;
    res.iterations = it;
    if (on_iterate) on_iterate(it, res.x);
    if (rel <= cfg.tol) {
      if (cfg.deflate) remove_mean(res.x);
      res.rel_residual = rel;
      return res;
    }
    for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
    if (cfg.deflate) remove_mean(z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream msg;
  msg << "cg: no convergence after " << cfg.max_iterations << " iterations, relative residual " << rel;
  throw SolveFailure(msg.str(), rel, cfg.max_iterations);
}

}  // namespace

CgResult cg_solve(const SparseOperator& op, std::span<const double> rhs, const SolverConfig& cfg,
                  const IterationCallback& on_iterate) {
  const std::vector<double> d = op.diagonal();
  return cg_impl(
      op.rows,
      [&op](std::span<const double> x, std::span<double> y) { op.apply(x, y); },
      d, rhs, cfg, on_iterate);
}

CgResult cg_solve(const LinearOperator& op, std::span<const double> rhs, const SolverConfig& cfg,
                  const IterationCallback& on_iterate) {
  return cg_impl(op.n, op.apply, op.diag, rhs, cfg, on_iterate);
}

}  // namespace homog
