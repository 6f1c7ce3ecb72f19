#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "homog/cell.hpp"
#include "homog/coefficient.hpp"
#include "homog/field.hpp"
#include "homog/sparse.hpp"

namespace homog {

/// One oscillatory homogenization problem plus its study parameters.
struct ProblemSpec {
  int dim = 2;
  std::string mask_shape = "unit_square";
  MatrixField A = MatrixField::identity(2);
  int cell_divisions = 16;                 // corrector grid resolution
  PointFn f = [](const Point&) { return 1.0; };
  std::string source_name = "constant(1)";
  bool dirichlet = true;                   // Gamma_0 = boundary; false: empty (pure Neumann)
  std::vector<double> eps_ladder{0.25, 0.125, 0.0625, 0.03125};
  int fine_per_cell = 16;                  // s
  double alpha = 1.0;                      // boundary cutoff exponent
  double meyers_q = 4.0;                   // only reported
  SolverConfig solver;

  // pass/fail thresholds for the fitted slopes
  double h1_slope_min = 0.4;
  double h1_slope_max = 1.2;
  double l2_slope_min = 0.4;
  bool require_pairwise_positive = false;

  int macro_cells_for(double eps) const;   // validates dyadic eps against the mask
};

struct StudyRow {
  double eps = 0.0, h = 0.0;
  double l2_err = 0.0;          // |phi_eps - Phi|_L2
  double h1_corr_err = 0.0;     // |grad phi_eps - corrected gradient|_L2
  double h1_plain_err = 0.0;    // |grad phi_eps - grad Phi|_L2
  double hminus1_err = 0.0;     // |phi_eps - Phi|_H^-1 diagnostic
  int cg_iters = 0;
  double seconds = 0.0;
  bool under_resolved = false;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  double slope_l2 = 0.0, slope_h1 = 0.0, slope_h1_plain = 0.0;
  bool slopes_fitted = false;
  std::vector<double> pairwise_h1_slopes;
  HomogenizedTensor tensor;
  std::vector<double> corrector_residuals;
  double alpha = 1.0, meyers_q = 4.0;
  std::string coefficient, mask_shape, source;
  bool dirichlet = true;
  int fine_per_cell = 16, cell_divisions = 16;

  bool flag_h1_slope = false;
  bool flag_l2_slope = false;
  bool flag_pairwise = true;
  bool pass = false;
};

/// Galerkin solve of the oscillatory problem with A sampled at {x/eps}.
ScalarField solve_oscillatory(const ProblemSpec& spec, double eps, int* iterations = nullptr);

/// Constant-coefficient solve with the homogenized tensor on an N-cell grid.
ScalarField solve_homogenized(const ProblemSpec& spec, const HomogenizedTensor& tensor, int N,
                              int* iterations = nullptr);

/// Nodal field min(dist(x, boundary)/eps^alpha, 1).
ScalarField cutoff_rho_eps(std::shared_ptr<const DomainGrid> grid, double eps, double alpha);

struct FirstOrderApprox {
  ScalarField field;                   // Phi + sum_i eps rho Q_eps(dPhi/dx_i) chi_i({x/eps})
  GaussVectorField corrected_gradient; // grad Phi + sum_i Q_eps(dPhi/dx_i) grad_y chi_i({x/eps})
};

FirstOrderApprox first_order_approx(const ScalarField& Phi, const CorrectorSet& correctors,
                                    double eps, double alpha);

/// Exact nodal restriction of a field to a coarser dyadically nested grid.
ScalarField restrict_to(const ScalarField& fine, std::shared_ptr<const DomainGrid> coarse);

StudyReport error_study(const ProblemSpec& spec, int workers = 1);

/// Least-squares slope of log(err) against log(eps); rows with err below the
/// degeneracy floor are skipped.
std::optional<double> fit_slope(const std::vector<double>& eps, const std::vector<double>& err);

/// Builtin sources: "constant(c)", "sine_x(k)" = sin(k pi x1),
/// "sine_xy(k1,k2)" = sin(k1 pi x1) sin(k2 pi x2), "manufactured" =
/// 2 pi^2 sin(pi x1) sin(pi x2).
PointFn parse_source(const std::string& spec);

}  // namespace homog
