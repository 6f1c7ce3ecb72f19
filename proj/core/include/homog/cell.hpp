#pragma once

#include <memory>
#include <vector>

#include "homog/coefficient.hpp"
#include "homog/field.hpp"
#include "homog/sparse.hpp"

namespace homog {

struct HomogenizedTensor {
  int dim = 2;
  Matrix2 a{};

  double max_abs_diff(const Matrix2& other) const;
  /// Eigenvalue bounds of the symmetric part.
  std::pair<double, double> spectrum_bounds() const;
};

struct CorrectorSet {
  std::shared_ptr<const CellGrid> grid;
  std::vector<ScalarField> chi;       // one per direction
  std::vector<double> residuals;      // final relative residuals
  std::vector<int> iterations;
};

/// Periodic zero-mean solution of the cell problem in the given direction:
/// int_Y A (grad chi + e_i) . grad psi = 0 for all periodic psi.
ScalarField solve_corrector(const MatrixField& A, int direction,
                            std::shared_ptr<const CellGrid> grid, const SolverConfig& cfg,
                            double* residual = nullptr, int* iterations = nullptr);

CorrectorSet solve_correctors(const MatrixField& A, std::shared_ptr<const CellGrid> grid,
                              const SolverConfig& cfg, int workers = 1);

/// Cell-average flux: column i of the tensor is int_Y A (e_i + grad chi_i).
HomogenizedTensor homogenized_tensor(const MatrixField& A, const CorrectorSet& correctors);

/// Residual of the discrete cell problem re-assembled independently of the
/// solver path: max over periodic hat functions of int_Y A(e_i+grad chi).grad psi,
/// relative to the load scale.
double corrector_flux_residual(const MatrixField& A, const ScalarField& chi, int direction);

}  // namespace homog
