#include "homog/norms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "homog/runtime.hpp"
#include "homog/unfold.hpp"

namespace homog {

double l2_norm(const ScalarField& f) {
  const double s = integrate(*f.grid, [&](int e, const Point&, const Point& u) {
    const double v = value_in_element(f, e, u);
    return v * v;
  });
  return std::sqrt(s);
}

double h1_seminorm(const ScalarField& f) {
  const double s = integrate(*f.grid, [&](int e, const Point&, const Point& u) {
    const Point g = grad_in_element(f, e, u);
    return g[0] * g[0] + g[1] * g[1];
  });
  return std::sqrt(s);
}

double l2_norm(const Grid& grid, const PointFn& f) {
  const double s = integrate(grid, PointFn([&](const Point& x) {
                               const double v = f(x);
                               return v * v;
                             }));
  return std::sqrt(s);
}

HminusOneSolver::HminusOneSolver(std::shared_ptr<const DomainGrid> grid, SolverConfig cfg)
    : grid_(std::move(grid)), cfg_(cfg) {
  const CoefficientAt identity = [](const Point&) { return Matrix2{{{1.0, 0.0}, {0.0, 1.0}}}; };
  lap_ = assemble_stiffness(*grid_, identity, BC::Dirichlet);
}

double HminusOneSolver::norm_of_load(std::vector<double> b) const {
  if (lap_.dofs.ndofs == 0) return 0.0;
  const CgResult res = cg_solve(lap_.op, b, cfg_);
  std::vector<double> Kz(lap_.dofs.ndofs, 0.0);
  lap_.op.apply(res.x, Kz);
  double s = 0.0;
  for (int i = 0; i < lap_.dofs.ndofs; ++i) s += res.x[i] * Kz[i];
  return std::sqrt(std::max(0.0, s));
}

double HminusOneSolver::norm(const ScalarField& g) const {
  return norm([&](int e, const Point&, const Point& u) { return value_in_element(g, e, u); });
}

double HminusOneSolver::norm(const std::function<double(int, const Point&, const Point&)>& g) const {
  return norm_of_load(assemble_load(*grid_, lap_.dofs, g));
}

ScalarField HminusOneSolver::riesz(const ScalarField& g) const {
  auto b = assemble_load(*grid_, lap_.dofs,
                         [&](int e, const Point&, const Point& u) { return value_in_element(g, e, u); });
  const CgResult res = cg_solve(lap_.op, b, cfg_);
  ScalarField z(grid_);
  lap_.dofs.expand(res.x, z.v);
  return z;
}

double h_minus1_norm(const ScalarField& g, const SolverConfig& cfg) {
  auto domain = std::dynamic_pointer_cast<const DomainGrid>(g.grid);
  if (!domain) throw std::invalid_argument("h_minus1_norm needs a field on a DomainGrid");
  return HminusOneSolver(domain, cfg).norm(g);
}

FaceSpectrum face_spectrum(std::span<const double> v) {
  FaceSpectrum sp;
  if (v.empty()) throw std::invalid_argument("face_spectrum: empty values");
  const int m = static_cast<int>(v.size()) - 1;
  if (m == 0) {
    sp.coeff_sq.push_back(v[0] * v[0]);
    sp.lambda.push_back(0.0);
    return sp;
  }
  const double h = 1.0 / m;
  sp.coeff_sq.resize(m + 1);
  sp.lambda.resize(m + 1);
  for (int k = 0; k <= m; ++k) {
    double a = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double w = (j == 0 || j == m) ? 0.5 * h : h;
      a += w * v[j] * std::cos(std::numbers::pi * k * j / m);
    }
    const double ck = (k == 0 || k == m) ? 1.0 : 0.5;
    sp.coeff_sq[k] = a * a / ck;
    sp.lambda[k] = 2.0 * m * static_cast<double>(m) * (1.0 - std::cos(std::numbers::pi * k / m));
  }
  return sp;
}

double face_h_half_norm(std::span<const double> v) {
  const FaceSpectrum sp = face_spectrum(v);
  double s = 0.0;
  for (size_t k = 0; k < sp.coeff_sq.size(); ++k) s += std::sqrt(1.0 + sp.lambda[k]) * sp.coeff_sq[k];
  return std::sqrt(s);
}

double mixed_l2y_hminus1x_norm(const UnfoldedField& G, const HminusOneSolver& riesz,
                               const ScalarField* subtract_gradient_of, int workers) {
  const DomainGrid& domain = *G.domain;
  if (&riesz.grid() != &domain) throw std::invalid_argument("mixed norm: Riesz solver grid mismatch");
  if (G.comps != domain.dim()) throw std::invalid_argument("mixed norm needs a vector-valued unfolded field");
  const CellGrid& ygrid = *G.ycell;
  const int my = ygrid.divisions();
  const int ynodes = ygrid.node_count();

  // macro index per element, precomputed once
  std::vector<int> macro_of(domain.element_count());
  for (int e = 0; e < domain.element_count(); ++e) macro_of[e] = domain.macro_index(domain.macro_of_element(e));

  std::vector<double> contrib(ynodes, 0.0);
  parallel_for(ynodes, workers, [&](int yn) {
    const Lattice& yl = ygrid.node_lattice(yn);
    double wy = (yl[0] == 0 || yl[0] == my) ? 0.5 : 1.0;
    if (ygrid.dim() == 2) wy *= (yl[1] == 0 || yl[1] == my) ? 0.5 : 1.0;
    wy /= std::pow(static_cast<double>(my), ygrid.dim());

    double sum = 0.0;
    for (int c = 0; c < G.comps; ++c) {
      const double n = riesz.norm([&](int e, const Point&, const Point& u) {
        double g = G.at(macro_of[e], yn, c);
        if (subtract_gradient_of) g -= grad_in_element(*subtract_gradient_of, e, u)[c];
        return g;
      });
      sum += n * n;
    }
    contrib[yn] = wy * sum;
  });
  return std::sqrt(pairwise_sum(contrib));
}

}  // namespace homog
