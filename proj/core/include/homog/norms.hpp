#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "homog/field.hpp"
#include "homog/sparse.hpp"

namespace homog {

struct UnfoldedField;

double l2_norm(const ScalarField& f);
double h1_seminorm(const ScalarField& f);
double l2_norm(const Grid& grid, const PointFn& f);

/// Discrete H^-1(Omega) norm through the Dirichlet-Laplacian Riesz map:
/// solve -Lap z = g with z in H^1_0, return |grad z|_L2. The stiffness matrix
/// is assembled once so repeated norms on the same grid reuse it.
class HminusOneSolver {
 public:
  HminusOneSolver(std::shared_ptr<const DomainGrid> grid, SolverConfig cfg = {});

  double norm(const ScalarField& g) const;
  double norm(const std::function<double(int, const Point&, const Point&)>& g) const;
  /// The Riesz representative z itself (nodal, zero on the boundary).
  ScalarField riesz(const ScalarField& g) const;

  const DomainGrid& grid() const { return *grid_; }

 private:
  double norm_of_load(std::vector<double> b) const;
  std::shared_ptr<const DomainGrid> grid_;
  SolverConfig cfg_;
  AssembledOperator lap_;
};

double h_minus1_norm(const ScalarField& g, const SolverConfig& cfg = {});

/// H^{1/2} norm of values on a cell face, in the cosine eigenbasis of the
/// discrete 1-D Neumann Laplacian: |v|^2 = sum_k sqrt(1+lambda_k) vhat_k^2.
/// A single value (0-dimensional face) reduces to |v|.
double face_h_half_norm(std::span<const double> v);

struct FaceSpectrum {
  std::vector<double> coeff_sq;  // normalized modal energies vhat_k^2
  std::vector<double> lambda;    // discrete Neumann eigenvalues
};
FaceSpectrum face_spectrum(std::span<const double> v);

/// Norm of a vector-valued unfolded field in [L^2(Y; H^-1(Omega))]^n:
/// trapezoid quadrature over the y-nodes of per-y H^-1 norms. The optional
/// field's gradient is subtracted from the samples uniformly in y.
double mixed_l2y_hminus1x_norm(const UnfoldedField& G, const HminusOneSolver& riesz,
                               const ScalarField* subtract_gradient_of = nullptr,
                               int workers = 1);

}  // namespace homog
