#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "homog/field.hpp"
#include "homog/grid.hpp"

namespace homog {

struct SolveFailure : std::runtime_error {
  double residual;
  int iterations;
  SolveFailure(const std::string& what, double res, int iters)
      : std::runtime_error(what), residual(res), iterations(iters) {}
};

/// Row-compressed sparse matrix.
struct SparseOperator {
  int rows = 0;
  std::vector<int> ptr, col;
  std::vector<double> val;
  bool symmetric = true;

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;
};

struct SolverConfig {
  double tol = 1e-10;       // relative residual
  int max_iterations = 50000;
  bool deflate = false;     // project out the constant nullspace
};

enum class BC { Dirichlet, Periodic, Neumann };

/// Node -> unknown mapping induced by the boundary condition. Dirichlet
/// eliminates boundary nodes (-1); Periodic folds opposite faces onto the
/// quotient unknowns; Neumann keeps every node.
struct DofMap {
  int ndofs = 0;
  std::vector<int> node_to_dof;

  std::vector<double> restrict_nodal(std::span<const double> nodal) const;
  void expand(std::span<const double> dofs, std::span<double> nodal) const;
};

struct AssembledOperator {
  SparseOperator op;
  DofMap dofs;
};

using CoefficientAt = std::function<Matrix2(const Point&)>;

AssembledOperator assemble_stiffness(const Grid& grid, const CoefficientAt& A, BC bc);

/// Load vector b_i = integral of f * hat_i; f receives (element, x, local).
std::vector<double> assemble_load(const Grid& grid, const DofMap& dofs,
                                  const std::function<double(int, const Point&, const Point&)>& f);
std::vector<double> assemble_load(const Grid& grid, const DofMap& dofs, const PointFn& f);

/// Matrix-free SPD operator (used for rank-one augmented systems).
struct LinearOperator {
  int n = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::vector<double> diag;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double rel_residual = 0.0;
};

using IterationCallback = std::function<void(int, const std::vector<double>&)>;

/// Jacobi-preconditioned conjugate gradients. With cfg.deflate the right-hand
/// side, the preconditioned residuals and the solution are kept orthogonal to
/// constants. Throws SolveFailure when max_iterations is exceeded.
CgResult cg_solve(const SparseOperator& op, std::span<const double> rhs, const SolverConfig& cfg,
                  const IterationCallback& on_iterate = {});
CgResult cg_solve(const LinearOperator& op, std::span<const double> rhs, const SolverConfig& cfg,
                  const IterationCallback& on_iterate = {});

}  // namespace homog
