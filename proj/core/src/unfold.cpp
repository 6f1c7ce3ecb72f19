#include "homog/unfold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "homog/periodize.hpp"
#include "homog/runtime.hpp"

namespace homog {

namespace {

std::shared_ptr<const DomainGrid> require_domain(const ScalarField& f) {
  auto d = std::dynamic_pointer_cast<const DomainGrid>(f.grid);
  if (!d) throw std::invalid_argument("expected a field on a DomainGrid");
  return d;
}

// fine lattice node -> owning active macro cell (any containing one)
Lattice owning_macro_of_node(const DomainGrid& g, const Lattice& node) {
  for (int c = 0; c < (1 << g.dim()); ++c) {
    const Lattice fine{node[0] - 1 + (c & 1), g.dim() == 2 ? node[1] - 1 + ((c >> 1) & 1) : 0};
    if (g.cell_active(fine)) return {fine[0] / g.fine_per_cell(), g.dim() == 2 ? fine[1] / g.fine_per_cell() : 0};
  }
  throw std::logic_error("node without active cell");
}

}  // namespace

UnfoldedField make_unfolded(std::shared_ptr<const DomainGrid> domain, int m_y, int comps) {
  UnfoldedField u;
  u.ycell = build_cell_grid(domain->dim(), m_y);
  u.domain = std::move(domain);
  u.comps = comps;
  u.values.assign(static_cast<size_t>(u.domain->macro_cell_count()) * u.ycell->node_count() * comps, 0.0);
  return u;
}

UnfoldedField unfold(const ScalarField& phi, int m_y) {
  auto domain = require_domain(phi);
  const int s = domain->fine_per_cell();
  UnfoldedField u = make_unfolded(domain, m_y, 1);
  const CellGrid& ygrid = *u.ycell;

  for (int cell = 0; cell < domain->macro_cell_count(); ++cell) {
    const Lattice xi = domain->macro_cells()[cell];
    for (int yn = 0; yn < ygrid.node_count(); ++yn) {
      const Lattice& yl = ygrid.node_lattice(yn);
      if (m_y == s) {
        const int id = domain->node_id({xi[0] * s + yl[0], domain->dim() == 2 ? xi[1] * s + yl[1] : 0});
        u.at(cell, yn) = phi.v[id];
      } else {
        const Point x{(xi[0] + static_cast<double>(yl[0]) / m_y) * domain->eps(),
                      domain->dim() == 2 ? (xi[1] + static_cast<double>(yl[1]) / m_y) * domain->eps() : 0.0};
        u.at(cell, yn) = eval(phi, x);
      }
    }
  }
  return u;
}

UnfoldedField unfold_gradient(const ScalarField& phi, int m_y) {
  auto domain = require_domain(phi);
  const int dim = domain->dim();
  const int s = domain->fine_per_cell();
  if (s % m_y != 0 && m_y != s)
    throw std::invalid_argument("unfold_gradient needs m_y dividing the fine resolution");
  UnfoldedField u = make_unfolded(domain, m_y, dim);
  const CellGrid& ygrid = *u.ycell;

  for (int cell = 0; cell < domain->macro_cell_count(); ++cell) {
    const Lattice xi = domain->macro_cells()[cell];
    for (int yn = 0; yn < ygrid.node_count(); ++yn) {
      const Lattice& yl = ygrid.node_lattice(yn);
      // owning fine element: lower corner convention, clamped at the cell top
      Lattice fine;
      Point local;
      for (int a = 0; a < dim; ++a) {
        const int pos = yl[a] * s / m_y;  // exact, m_y | s
        const int off = std::min(pos, s - 1);
        fine[a] = xi[a] * s + off;
        local[a] = static_cast<double>(pos - off);
      }
      if (dim == 1) {
        fine[1] = 0;
        local[1] = 0.0;
      }
      const int e = domain->element_at(fine);
      const Point g = grad_in_element(phi, e, local);
      for (int c = 0; c < dim; ++c) u.at(cell, yn, c) = g[c];
    }
  }
  return u;
}

double column_value(const UnfoldedField& U, int cell, const Point& y, int c) {
  Point local;
  const int e = U.ycell->locate(y, &local);
  const auto& el = U.ycell->elements()[e];
  double v = 0.0;
  for (int k = 0; k < U.ycell->corner_count(); ++k)
    v += U.at(cell, el.nodes[k], c) * q1_value(k, U.ycell->dim(), local);
  return v;
}

Point column_grad(const UnfoldedField& U, int cell, const Point& y, int c) {
  Point local;
  const int e = U.ycell->locate(y, &local);
  const auto& el = U.ycell->elements()[e];
  Point g{0.0, 0.0};
  for (int k = 0; k < U.ycell->corner_count(); ++k) {
    const Point gk = q1_grad(k, U.ycell->dim(), local, U.ycell->spacing());
    g[0] += U.at(cell, el.nodes[k], c) * gk[0];
    g[1] += U.at(cell, el.nodes[k], c) * gk[1];
  }
  return g;
}

MacroCellField cell_mean_of(std::shared_ptr<const DomainGrid> domain,
                            const std::function<double(int, const Point&, const Point&)>& f) {
  MacroCellField out;
  out.per_cell.assign(domain->macro_cell_count(), 0.0);
  const double cell_measure = std::pow(domain->eps(), domain->dim());
  const QuadratureRule q = quadrature(domain->dim());
  const double jac = std::pow(domain->spacing(), domain->dim()) * q.weight;
  for (int e = 0; e < domain->element_count(); ++e) {
    const auto& el = domain->elements()[e];
    const int cell = domain->macro_index(domain->macro_of_element(e));
    double s = 0.0;
    for (int g = 0; g < q.points; ++g) {
      const Point x{(el.cell[0] + q.local[g][0]) * domain->spacing(),
                    domain->dim() == 2 ? (el.cell[1] + q.local[g][1]) * domain->spacing() : 0.0};
      s += jac * f(e, x, q.local[g]);
    }
    out.per_cell[cell] += s / cell_measure;
  }
  out.domain = std::move(domain);
  return out;
}

MacroCellField cell_mean(const ScalarField& phi) {
  auto domain = require_domain(phi);
  return cell_mean_of(domain,
                      [&](int e, const Point&, const Point& u) { return value_in_element(phi, e, u); });
}

namespace {

// Cell mean at a macro lattice cell, extended outside the domain by mirror
// reflection: ghost cells take the mean of their face-adjacent interior
// mirror (averaged when two exist, diagonal mirror at convex corners).
double ghost_aware_mean(const DomainGrid& g, const MacroCellField& means, const Lattice& c) {
  const int idx = g.macro_index(c);
  if (idx >= 0) return means.per_cell[idx];
  double sum = 0.0;
  int count = 0;
  const Lattice faces[4] = {{c[0] - 1, c[1]}, {c[0] + 1, c[1]}, {c[0], c[1] - 1}, {c[0], c[1] + 1}};
  for (int k = 0; k < 2 * g.dim(); ++k) {
    const int n = g.macro_index(faces[k]);
    if (n >= 0) {
      sum += means.per_cell[n];
      ++count;
    }
  }
  if (count == 0 && g.dim() == 2) {
    const Lattice diags[4] = {{c[0] - 1, c[1] - 1}, {c[0] + 1, c[1] - 1}, {c[0] - 1, c[1] + 1}, {c[0] + 1, c[1] + 1}};
    for (const Lattice& d : diags) {
      const int n = g.macro_index(d);
      if (n >= 0) {
        sum += means.per_cell[n];
        ++count;
      }
    }
  }
  if (count == 0) throw std::logic_error("ghost cell without interior neighbor");
  return sum / count;
}

}  // namespace

ScalarField q_interp_from_means(const MacroCellField& means) {
  const auto& domain = means.domain;
  const DomainGrid& g = *domain;
  const int dim = g.dim();
  const int N = g.macro_per_axis();
  const int s = g.fine_per_cell();

  // nodal values of the macro Q1 interpolant: node mu takes the mean of the
  // lattice cell whose lower corner is mu (ghost rule outside)
  const int nx = N + 1;
  const int ny = dim == 2 ? N + 1 : 1;
  std::vector<double> macro_nodal(static_cast<size_t>(nx) * ny,
                                  std::numeric_limits<double>::quiet_NaN());
  auto macro_value = [&](const Lattice& mu) -> double {
    double& slot = macro_nodal[(dim == 2 ? mu[1] : 0) * nx + mu[0]];
    if (std::isnan(slot)) slot = ghost_aware_mean(g, means, mu);
    return slot;
  };

  ScalarField out(domain);
  for (int n = 0; n < g.node_count(); ++n) {
    const Lattice& l = g.node_lattice(n);
    const Lattice xi = owning_macro_of_node(g, l);
    Point t{static_cast<double>(l[0] - xi[0] * s) / s,
            dim == 2 ? static_cast<double>(l[1] - xi[1] * s) / s : 0.0};
    double v = 0.0;
    for (int c = 0; c < (1 << dim); ++c) {
      const Lattice mu{xi[0] + (c & 1), dim == 2 ? xi[1] + ((c >> 1) & 1) : 0};
      v += macro_value(mu) * q1_value(c, dim, t);
    }
    out.v[n] = v;
  }
  return out;
}

ScalarField q_interp(const ScalarField& phi) { return q_interp_from_means(cell_mean(phi)); }

std::pair<ScalarField, ScalarField> remainder_split(const ScalarField& phi) {
  auto domain = require_domain(phi);
  ScalarField coarse = q_interp(phi);
  ScalarField under(phi.grid);
  const double inv_eps = 1.0 / domain->eps();
  for (int n = 0; n < phi.grid->node_count(); ++n) under.v[n] = (phi.v[n] - coarse.v[n]) * inv_eps;
  return {std::move(coarse), std::move(under)};
}

ScalarField average(const UnfoldedField& U) {
  const DomainGrid& g = *U.domain;
  if (U.comps != 1) throw std::invalid_argument("average expects a scalar unfolded field");
  const int dim = g.dim();
  const int s = g.fine_per_cell();
  const int my = U.ycell->divisions();
  ScalarField out(U.domain);
  for (int n = 0; n < g.node_count(); ++n) {
    const Lattice& l = g.node_lattice(n);
    const Lattice xi = owning_macro_of_node(g, l);
    const int cell = g.macro_index(xi);
    if (my == s) {
      const Lattice yl{l[0] - xi[0] * s, dim == 2 ? l[1] - xi[1] * s : 0};
      out.v[n] = U.at(cell, U.ycell->node_id(yl));
    } else {
      const Point y{static_cast<double>(l[0] - xi[0] * s) / s,
                    dim == 2 ? static_cast<double>(l[1] - xi[1] * s) / s : 0.0};
      out.v[n] = column_value(U, cell, y);
    }
  }
  return out;
}

UnfoldedField y_gradient(const UnfoldedField& U) {
  if (U.comps != 1) throw std::invalid_argument("y_gradient expects a scalar unfolded field");
  const CellGrid& ygrid = *U.ycell;
  const int dim = ygrid.dim();
  const int my = ygrid.divisions();
  UnfoldedField out = make_unfolded(U.domain, my, dim);
  for (int cell = 0; cell < U.domain->macro_cell_count(); ++cell) {
    for (int yn = 0; yn < ygrid.node_count(); ++yn) {
      const Lattice& yl = ygrid.node_lattice(yn);
      Lattice ec;
      Point local;
      for (int a = 0; a < dim; ++a) {
        ec[a] = std::min(yl[a], my - 1);
        local[a] = static_cast<double>(yl[a] - ec[a]);
      }
      if (dim == 1) {
        ec[1] = 0;
        local[1] = 0.0;
      }
      const int e = ygrid.element_at(ec);
      const auto& el = ygrid.elements()[e];
      Point grad{0.0, 0.0};
      for (int k = 0; k < ygrid.corner_count(); ++k) {
        const Point gk = q1_grad(k, dim, local, ygrid.spacing());
        grad[0] += U.at(cell, el.nodes[k]) * gk[0];
        grad[1] += U.at(cell, el.nodes[k]) * gk[1];
      }
      for (int c = 0; c < dim; ++c) out.at(cell, yn, c) = grad[c];
    }
  }
  return out;
}

void axpy(double a, const UnfoldedField& x, UnfoldedField& y) {
  if (x.values.size() != y.values.size() || x.comps != y.comps)
    throw std::invalid_argument("unfolded field shape mismatch");
  for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
}

namespace {

// integral over Y of one cell column composed with fn(value)
double column_integral(const UnfoldedField& U, int cell, int comp,
                       const std::function<double(double)>& fn) {
  const CellGrid& ygrid = *U.ycell;
  const QuadratureRule q = quadrature(ygrid.dim());
  const double jac = std::pow(ygrid.spacing(), ygrid.dim()) * q.weight;
  double sum = 0.0;
  for (const auto& el : ygrid.elements()) {
    for (int g = 0; g < q.points; ++g) {
      double v = 0.0;
      for (int k = 0; k < ygrid.corner_count(); ++k)
        v += U.at(cell, el.nodes[k], comp) * q1_value(k, ygrid.dim(), q.local[g]);
      sum += jac * fn(v);
    }
  }
  return sum;
}

}  // namespace

double integral_omega_y(const UnfoldedField& U) {
  const double cell_measure = std::pow(U.domain->eps(), U.domain->dim());
  std::vector<double> per_cell(U.domain->macro_cell_count());
  for (int cell = 0; cell < U.domain->macro_cell_count(); ++cell)
    per_cell[cell] = cell_measure * column_integral(U, cell, 0, [](double v) { return v; });
  return pairwise_sum(per_cell);
}

double l2_norm_omega_y(const UnfoldedField& U) {
  const double cell_measure = std::pow(U.domain->eps(), U.domain->dim());
  std::vector<double> per_cell(U.domain->macro_cell_count(), 0.0);
  for (int cell = 0; cell < U.domain->macro_cell_count(); ++cell)
    for (int c = 0; c < U.comps; ++c)
      per_cell[cell] += cell_measure * column_integral(U, cell, c, [](double v) { return v * v; });
  return std::sqrt(pairwise_sum(per_cell));
}

double h1y_l2x_norm(const UnfoldedField& U) {
  const UnfoldedField grad = y_gradient(U);
  const double a = l2_norm_omega_y(U);
  const double b = l2_norm_omega_y(grad);
  return std::sqrt(a * a + b * b);
}

TwoScaleDecomposition two_scale_decompose(const ScalarField& phi, int m_y, const SolverConfig& cfg,
                                          int workers) {
  auto domain = require_domain(phi);
  TwoScaleDecomposition out;
  auto [coarse, under] = remainder_split(phi);
  out.coarse = std::move(coarse);

  const UnfoldedField unfolded_under = unfold(under, m_y);
  out.micro = periodize_project_columns(unfolded_under, cfg, workers);

  UnfoldedField G = unfold_gradient(phi, m_y);
  const UnfoldedField micro_grad = y_gradient(out.micro);
  axpy(-1.0, micro_grad, G);

  const HminusOneSolver riesz(domain, cfg);
  out.defect = mixed_l2y_hminus1x_norm(G, riesz, &out.coarse, workers);
  return out;
}

}  // namespace homog
