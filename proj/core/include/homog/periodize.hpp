#pragma once

#include <memory>
#include <vector>

#include "homog/field.hpp"
#include "homog/sparse.hpp"
#include "homog/unfold.hpp"

namespace homog {

/// Smooth even cutoff on [-1/2,1/2]: 1 on |t| <= 1/8, 0 on |t| >= 3/8,
/// quintic smoothstep between (fixed profile, bit-reproducible outputs).
struct CutoffProfile {
  double operator()(double t) const;
  /// 0.5 * (theta(y) - theta(1-y)) for y in [0,1].
  double bracket(double y) const;
};

/// Trace difference of phi across the faces y_axis = 1 and y_axis = 0,
/// indexed by the lattice of the face (a single value in 1-D).
std::vector<double> face_defect(const ScalarField& phi, int axis);

/// Inductive cutoff-lifting periodization: axis by axis, the trace defect is
/// lifted constantly along the normal and blended with the cutoff bracket so
/// both traces land on their mean. Axes already periodic stay periodic.
ScalarField periodize_lift(const ScalarField& phi, const CutoffProfile& theta = {});

/// Orthogonal projection onto periodic fields in the inner product
/// <u,v> = int grad u . grad v + (int u)(int v). Reused across many fields on
/// the same grid; column form applies it per macro cell of an unfolded field.
class PeriodicProjector {
 public:
  PeriodicProjector(std::shared_ptr<const CellGrid> grid, SolverConfig cfg = {});

  ScalarField project(const ScalarField& phi) const;
  std::vector<double> project_values(std::span<const double> nodal) const;

  /// <u,v> on nodal values of this grid.
  double inner(std::span<const double> u, std::span<const double> v) const;

  const CellGrid& grid() const { return *grid_; }

 private:
  std::shared_ptr<const CellGrid> grid_;
  SolverConfig cfg_;
  AssembledOperator periodic_;   // periodic stiffness, A = I
  AssembledOperator full_;       // all-node stiffness for the right-hand side
  std::vector<double> basis_integral_;       // integrals of the quotient basis
  std::vector<double> full_basis_integral_;  // integrals of the nodal basis
  std::vector<double> diag_;
};

ScalarField periodize_project(const ScalarField& phi, const SolverConfig& cfg = {});
UnfoldedField periodize_project_columns(const UnfoldedField& U, const SolverConfig& cfg = {},
                                        int workers = 1);

}  // namespace homog
