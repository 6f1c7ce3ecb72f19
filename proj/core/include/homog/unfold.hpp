#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "homog/field.hpp"
#include "homog/norms.hpp"
#include "homog/sparse.hpp"

namespace homog {

/// Discrete function on Omega x Y: constant in x within each eps-cell, nodal
/// on a shared CellGrid in y. Gradient-like data carries dim components.
struct UnfoldedField {
  std::shared_ptr<const DomainGrid> domain;
  std::shared_ptr<const CellGrid> ycell;
  int comps = 1;
  std::vector<double> values;  // [macro cell][y node][component]

  int ynode_count() const { return ycell->node_count(); }
  double& at(int cell, int ynode, int c = 0) {
    return values[(static_cast<size_t>(cell) * ynode_count() + ynode) * comps + c];
  }
  double at(int cell, int ynode, int c = 0) const {
    return values[(static_cast<size_t>(cell) * ynode_count() + ynode) * comps + c];
  }
};

UnfoldedField make_unfolded(std::shared_ptr<const DomainGrid> domain, int m_y, int comps);

/// T_eps: per-cell restriction of phi rescaled to Y. Exact nodal copy when
/// m_y equals the fine resolution s, Q1-interpolated otherwise.
UnfoldedField unfold(const ScalarField& phi, int m_y);

/// T_eps applied to grad(phi), sampled at the y-nodes; nodes on element faces
/// take the gradient of the element whose lower corner they are (clamped at
/// the cell's top faces).
UnfoldedField unfold_gradient(const ScalarField& phi, int m_y);

/// Q1 evaluation/gradient of one cell column at y in [0,1]^dim.
double column_value(const UnfoldedField& U, int cell, const Point& y, int c = 0);
Point column_grad(const UnfoldedField& U, int cell, const Point& y, int c = 0);

/// Mean-in-cells operator M_Y^eps.
MacroCellField cell_mean(const ScalarField& phi);
MacroCellField cell_mean_of(std::shared_ptr<const DomainGrid> domain,
                            const std::function<double(int, const Point&, const Point&)>& f);

/// Scale-splitting operator Q_eps: Q1 interpolation of the cell means at the
/// macro lattice nodes, one reflected ghost ring outside the domain. The
/// result is multilinear per eps-cell and is represented exactly on the fine
/// grid.
ScalarField q_interp(const ScalarField& phi);
ScalarField q_interp_from_means(const MacroCellField& means);

/// phi = Phi + eps * under with Phi = Q_eps(phi); returns (Phi, under).
std::pair<ScalarField, ScalarField> remainder_split(const ScalarField& phi);

/// Averaging operator U_eps: evaluation of the cell column at y = {x/eps}.
ScalarField average(const UnfoldedField& U);

/// Nodal y-gradient of a scalar unfolded field (same node convention as
/// unfold_gradient).
UnfoldedField y_gradient(const UnfoldedField& U);

void axpy(double a, const UnfoldedField& x, UnfoldedField& y);

double integral_omega_y(const UnfoldedField& U);
double l2_norm_omega_y(const UnfoldedField& U);
/// H^1(Y; L^2(Omega)) norm.
double h1y_l2x_norm(const UnfoldedField& U);

struct TwoScaleDecomposition {
  ScalarField coarse;     // Q_eps(phi)
  UnfoldedField micro;    // y-periodic per-cell field from the column projection
  double defect;          // |T_eps(grad phi) - grad(coarse) - grad_y(micro)| in [L2(Y;H^-1)]^n
};

TwoScaleDecomposition two_scale_decompose(const ScalarField& phi, int m_y,
                                          const SolverConfig& cfg = {}, int workers = 1);

}  // namespace homog
