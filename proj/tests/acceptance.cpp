// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds and tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "homog/cell.hpp"
#include "homog/norms.hpp"
#include "homog/periodize.hpp"
#include "homog/study.hpp"
#include "homog/unfold.hpp"

using namespace homog;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%2d] %-34s %s (%s)\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double h1_full(const ScalarField& f) {
  const double a = l2_norm(f), b = h1_seminorm(f);
  return std::sqrt(a * a + b * b);
}

ScalarField random_field(std::shared_ptr<const Grid> g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(std::move(g));
  for (double& v : f.v) v = d(rng);
  return f;
}

ScalarField sine_product(std::shared_ptr<const DomainGrid> g) {
  return sample_nodal(g, [](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); });
}

double spread(const std::vector<double>& r) {
  double lo = r.front(), hi = r.front();
  for (double v : r) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

// ---- criteria ---------------------------------------------------------------

void criterion_1_identity() {
  const double t0 = now();
  auto grid = build_cell_grid(2, 64);
  const MatrixField A = MatrixField::identity(2);
  const CorrectorSet set = solve_correctors(A, grid, {});
  double chi_norm = 0.0;
  for (const ScalarField& chi : set.chi) chi_norm = std::max(chi_norm, h1_full(chi));
  const HomogenizedTensor T = homogenized_tensor(A, set);
  const double dev = T.max_abs_diff(Matrix2{{{1.0, 0.0}, {0.0, 1.0}}});
  const double dt = now() - t0;
  const bool pass = chi_norm <= 1e-9 && dev <= 1e-9 && dt < 5.0;
  report(1, "identity coefficient sanity", pass,
         fmt("|chi|_H1=%.2e |A-I|=%.2e %.2fs", chi_norm, dev, dt));
}

void criterion_2_laminate() {
  const Matrix2 exact{{{1.6, 0.0}, {0.0, 2.5}}};
  SolverConfig cfg;
  cfg.tol = 1e-11;
  const MatrixField A = MatrixField::laminate(2, 1.0, 4.0);
  double dev128, dev256;
  {
    auto g = build_cell_grid(2, 128);
    dev128 = homogenized_tensor(A, solve_correctors(A, g, cfg)).max_abs_diff(exact);
  }
  {
    auto g = build_cell_grid(2, 256);
    dev256 = homogenized_tensor(A, solve_correctors(A, g, cfg)).max_abs_diff(exact);
  }
  const bool pass = dev128 <= 2e-3 && dev256 <= 5e-4;
  report(2, "laminate tensor vs analytic", pass, fmt("m=128: %.2e m=256: %.2e", dev128, dev256));
}

void criterion_3_checkerboard() {
  SolverConfig cfg;
  cfg.tol = 1e-11;
  cfg.max_iterations = 200000;
  const MatrixField A = MatrixField::checkerboard(1.0, 100.0);
  double alpha[3];   // isotropic mean per resolution
  double aniso = 0.0, offdiag = 0.0;
  const int ms[3] = {64, 128, 256};
  for (int k = 0; k < 3; ++k) {
    auto g = build_cell_grid(2, ms[k]);
    const HomogenizedTensor T = homogenized_tensor(A, solve_correctors(A, g, cfg));
    alpha[k] = 0.5 * (T.a[0][0] + T.a[1][1]);
    if (k == 2) {
      aniso = std::abs(T.a[0][0] - T.a[1][1]) / alpha[k];
      offdiag = std::max(std::abs(T.a[0][1]), std::abs(T.a[1][0]));
    }
  }
  const double d1 = alpha[0] - alpha[1];
  const double d2 = alpha[1] - alpha[2];
  const double p = std::log2(d1 / d2);
  const double extrapolated = alpha[2] - d2 / (std::pow(2.0, p) - 1.0);
  const double agree = std::abs(extrapolated - alpha[2]) / std::abs(extrapolated);
  const bool pass = agree <= 0.02 && aniso <= 0.01 && offdiag <= 1e-6;
  report(3, "checkerboard tensor extrapolation", pass,
         fmt("a64=%.4f a128=%.4f a256=%.4f p=%.2f extrap=%.4f gap=%.2f%% aniso=%.2e offdiag=%.2e",
             alpha[0], alpha[1], alpha[2], p, extrapolated, 100.0 * agree, aniso, offdiag));
}

ProblemSpec study_spec_base() {
  ProblemSpec spec;
  spec.A = MatrixField::laminate(2, 1.0, 4.0);
  spec.cell_divisions = 16;
  spec.fine_per_cell = 16;
  spec.eps_ladder = {0.25, 0.125, 0.0625, 0.03125};
  spec.h1_slope_min = 0.4;
  spec.h1_slope_max = 1.2;
  spec.l2_slope_min = 0.4;
  return spec;
}

void criterion_4_dirichlet_rate() {
  const double t0 = now();
  ProblemSpec spec = study_spec_base();
  spec.f = parse_source("constant(1)");
  spec.source_name = "constant(1)";
  const StudyReport rep = error_study(spec);
  const double dt = now() - t0;
  const bool pass = rep.slopes_fitted && rep.slope_h1 >= 0.4 && rep.slope_h1 <= 1.2 &&
                    rep.slope_l2 >= 0.4 && dt < 600.0;
  report(4, "Dirichlet rate on the square", pass,
         fmt("slope_h1=%.3f slope_l2=%.3f %.0fs", rep.slope_h1, rep.slope_l2, dt));
}

void criterion_5_neumann_rate() {
  ProblemSpec spec = study_spec_base();
  spec.dirichlet = false;
  spec.f = parse_source("sine_x(2)");
  spec.source_name = "sine_x(2)";
  const StudyReport rep = error_study(spec);
  const bool pass =
      rep.slopes_fitted && rep.slope_h1 >= 0.4 && rep.slope_h1 <= 1.2 && rep.slope_l2 >= 0.4;
  report(5, "Neumann rate on the square", pass,
         fmt("slope_h1=%.3f slope_l2=%.3f", rep.slope_h1, rep.slope_l2));
}

void criterion_6_lshape_rate() {
  ProblemSpec spec = study_spec_base();
  spec.mask_shape = "l_shape";
  spec.f = parse_source("constant(1)");
  spec.source_name = "constant(1)";
  spec.meyers_q = 4.0;
  spec.alpha = 2.0 * spec.meyers_q / (3.0 * spec.meyers_q - 2.0);  // 0.8
  spec.require_pairwise_positive = true;
  const StudyReport rep = error_study(spec);
  bool pairwise = !rep.pairwise_h1_slopes.empty();
  for (double s : rep.pairwise_h1_slopes) pairwise = pairwise && s > 0.0;
  const bool pass = rep.slopes_fitted && rep.slope_h1 > 0.2 && pairwise;
  std::string pw;
  for (double s : rep.pairwise_h1_slopes) pw += fmt(" %.3f", s);
  report(6, "L-shape rate (empirical gamma)", pass,
         fmt("gamma=%.3f pairwise:%s", rep.slope_h1, pw.c_str()));
}

void criterion_7_ratio_stability() {
  const int s = 8;    // fine cells per eps-cell for these studies
  const int my = 4;   // y-resolution of the two-scale defect evaluation
  std::vector<double> r_mean, r_dual, r_unfold, r_split, r_defect;
  for (int N : {4, 8, 16}) {
    auto g = build_domain_grid(2, N, s, make_mask("unit_square", 2, N));
    const ScalarField phi = sine_product(g);
    const double eps = g->eps();
    const double grad = h1_seminorm(phi);
    const double l2 = l2_norm(phi);

    const MacroCellField mean = cell_mean(phi);
    std::vector<int> macro_of(g->element_count());
    for (int e = 0; e < g->element_count(); ++e) macro_of[e] = g->macro_index(g->macro_of_element(e));

    const double diff_mean = std::sqrt(integrate(*g, [&](int e, const Point&, const Point& u) {
      const double d = value_in_element(phi, e, u) - mean.per_cell[macro_of[e]];
      return d * d;
    }));
    r_mean.push_back(diff_mean / (eps * grad));

    const HminusOneSolver riesz(g);
    const double hm = riesz.norm([&](int e, const Point&, const Point& u) {
      return value_in_element(phi, e, u) - mean.per_cell[macro_of[e]];
    });
    r_dual.push_back(hm / (eps * l2));

    // |phi - T_eps(phi)|_{L2(Omega x Y)} via the per-cell split
    const UnfoldedField U = unfold(phi, s);
    double sq = 0.0;
    for (int cell = 0; cell < g->macro_cell_count(); ++cell) {
      const Lattice xi = g->macro_cells()[cell];
      double a = 0.0, c = 0.0;
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          const int e = g->element_at({xi[0] * s + i, xi[1] * s + j});
          const QuadratureRule q = quadrature(2);
          const double jac = std::pow(g->spacing(), 2) * q.weight;
          for (int gp = 0; gp < q.points; ++gp) {
            const double v = value_in_element(phi, e, q.local[gp]);
            a += jac * v * v;
            c += jac * v;
          }
        }
      ScalarField col(U.ycell);
      for (int yn = 0; yn < U.ynode_count(); ++yn) col.v[yn] = U.at(cell, yn);
      const double b = l2_norm(col);
      const double d = integrate_field(col);
      sq += a + eps * eps * b * b - 2.0 * c * d;
    }
    r_unfold.push_back(std::sqrt(std::max(0.0, sq)) / (eps * grad));

    const ScalarField q = q_interp_from_means(mean);
    const double diff_q = std::sqrt(integrate(*g, [&](int e, const Point&, const Point& u) {
      const double d = value_in_element(q, e, u) - mean.per_cell[macro_of[e]];
      return d * d;
    }));
    r_split.push_back(diff_q / (eps * grad));

    const TwoScaleDecomposition ts = two_scale_decompose(phi, my);
    r_defect.push_back(ts.defect / (eps * grad));
  }

  const double s_mean = spread(r_mean), s_dual = spread(r_dual), s_unfold = spread(r_unfold), s_split = spread(r_split),
               s_defect = spread(r_defect);
  const bool pass = s_mean < 3.0 && s_dual < 3.0 && s_unfold < 3.0 && s_split < 3.0 && s_defect < 3.0;
  report(7, "operator estimate ratio stability", pass,
         fmt("spreads: mean=%.2f Hm1=%.2f unfold=%.2f Q=%.2f defect=%.2f", s_mean, s_dual, s_unfold, s_split,
             s_defect));
}

void criterion_8_exact_identities() {
  double worst_int = 0.0, worst_grad = 0.0;
  for (const char* shape : {"unit_square", "l_shape"}) {
    auto g = build_domain_grid(2, 4, 4, make_mask(shape, 2, 4));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ScalarField phi = random_field(g, 900 + seed);
      const UnfoldedField U = unfold(phi, 4);
      const double lhs = integrate_field(phi);
      const double rhs = integral_omega_y(U);
      worst_int = std::max(worst_int, std::abs(lhs - rhs) / (std::abs(lhs) + 1.0));

      const UnfoldedField dy = y_gradient(U);
      const UnfoldedField Tg = unfold_gradient(phi, 4);
      double scale = 1.0;
      for (double v : dy.values) scale = std::max(scale, std::abs(v));
      for (size_t k = 0; k < dy.values.size(); ++k)
        worst_grad =
            std::max(worst_grad, std::abs(dy.values[k] - g->eps() * Tg.values[k]) / scale);
    }
  }
  const bool pass = worst_int <= 1e-12 && worst_grad <= 1e-12;
  report(8, "exact unfolding identities", pass,
         fmt("integration=%.2e gradient=%.2e", worst_int, worst_grad));
}

void criterion_9_periodization_suite() {
  SolverConfig cfg;
  cfg.tol = 1e-11;
  auto g = build_cell_grid(2, 16);
  const PeriodicProjector proj(g, cfg);

  double worst_fixed = 0.0, worst_idem = 0.0, worst_mean = 0.0, worst_contract = 0.0,
         worst_lift = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScalarField f = random_field(g, 4000 + seed);
    const ScalarField hat = proj.project(f);

    // fixed point: a natively periodic field projects to itself
    std::mt19937_64 rng(6000 + seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> dofs(g->periodic_dof_count());
    for (double& v : dofs) v = dist(rng);
    ScalarField per(g);
    for (int n = 0; n < g->node_count(); ++n) per.v[n] = dofs[g->periodic_dof(n)];
    const ScalarField per_hat = proj.project(per);
    for (int n = 0; n < g->node_count(); ++n)
      worst_fixed = std::max(worst_fixed, std::abs(per_hat.v[n] - per.v[n]));

    // idempotence: projecting the projected output reproduces it
    const ScalarField hat2 = proj.project(hat);
    double scale = 1.0;
    for (double v : hat.v) scale = std::max(scale, std::abs(v));
    for (int n = 0; n < g->node_count(); ++n)
      worst_idem = std::max(worst_idem, std::abs(hat2.v[n] - hat.v[n]) / scale);

    worst_mean = std::max(worst_mean, std::abs(integrate_field(hat) - integrate_field(f)));
    const double nf = std::sqrt(proj.inner(f.v, f.v));
    const double nh = std::sqrt(proj.inner(hat.v, hat.v));
    worst_contract = std::max(worst_contract, (nh - nf) / nf);

    const ScalarField lifted = periodize_lift(f);
    for (int axis = 0; axis < 2; ++axis)
      for (double v : face_defect(lifted, axis)) worst_lift = std::max(worst_lift, std::abs(v));
  }

  auto g1 = build_cell_grid(1, 32);
  const ScalarField y1 = sample_nodal(g1, [](const Point& y) { return y[0]; });
  const ScalarField y1hat = periodize_project(y1, cfg);
  double worst_half = 0.0;
  for (double v : y1hat.v) worst_half = std::max(worst_half, std::abs(v - 0.5));

  const double tol = 100.0 * cfg.tol;
  const bool pass = worst_fixed <= tol && worst_idem <= tol && worst_mean <= 1e-12 &&
                    worst_contract <= 1e-10 && worst_lift <= 1e-12 && worst_half <= 1e-10;
  report(9, "periodization suite (100 fields)", pass,
         fmt("fixed=%.1e idem=%.1e mean=%.1e contract=%.1e lift=%.1e half=%.1e", worst_fixed,
             worst_idem, worst_mean, worst_contract, worst_lift, worst_half));
}

void criterion_10_scale_splitting_constant() {
  auto cell = build_cell_grid(2, 8);
  const ScalarField chi1 = solve_corrector(MatrixField::laminate(2, 1.0, 4.0), 0, cell, {});
  const double nchi = l2_norm(chi1);

  double worst = 0.0;
  for (int N : {4, 8}) {
    auto g = build_domain_grid(2, N, 8, make_mask("unit_square", 2, N));
    const int s = g->fine_per_cell();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const ScalarField phi = random_field(g, 7000 + seed);
      const ScalarField q = q_interp(phi);
      const double num = std::sqrt(integrate(*g, [&](int e, const Point&, const Point& u) {
        const auto& el = g->elements()[e];
        const Point y{(el.cell[0] % s + u[0]) / s, (el.cell[1] % s + u[1]) / s};
        const double qv = value_in_element(q, e, u);
        const double cv = eval(chi1, y);
        return qv * qv * cv * cv;
      }));
      worst = std::max(worst, num / (l2_norm(phi) * nchi));
    }
  }
  const bool pass = worst <= 4.0;  // 4^{n/2} with n = 2
  report(10, "scale-splitting explicit constant", pass, fmt("max ratio=%.3f bound=4", worst));
}

}  // namespace

int main() {
  const double t0 = now();
  criterion_1_identity();
  criterion_2_laminate();
  criterion_3_checkerboard();
  criterion_4_dirichlet_rate();
  criterion_5_neumann_rate();
  criterion_6_lshape_rate();
  criterion_7_ratio_stability();
  criterion_8_exact_identities();
  criterion_9_periodization_suite();
  criterion_10_scale_splitting_constant();
  std::printf("acceptance: %d/10 criteria passed (%.0fs)\n", 10 - failures, now() - t0);
  return failures == 0 ? 0 : 1;
}
