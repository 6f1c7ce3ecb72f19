#include "homog/study.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "homog/norms.hpp"
#include "homog/runtime.hpp"
#include "homog/unfold.hpp"

namespace homog {

namespace {

constexpr double kDegenerateFloor = 1e-14;

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// remove the integral mean (pure-Neumann normalization int phi = 0)
void remove_integral_mean(ScalarField& f, const DomainGrid& grid) {
  const double mean = integrate_field(f) / grid.domain_measure();
  for (double& v : f.v) v -= mean;
}

}  // namespace

int ProblemSpec::macro_cells_for(double eps) const {
  const long long N = std::llround(1.0 / eps);
  if (N < 2 || std::abs(N * eps - 1.0) > 1e-12)
    throw std::invalid_argument("eps must equal 1/N for an integer N >= 2");
  make_mask(mask_shape, dim, static_cast<int>(N));  // validates shape constraints
  return static_cast<int>(N);
}

ScalarField solve_oscillatory(const ProblemSpec& spec, double eps, int* iterations) {
  const int N = spec.macro_cells_for(eps);
  auto grid = build_domain_grid(spec.dim, N, spec.fine_per_cell, make_mask(spec.mask_shape, spec.dim, N));

  const double inv_eps = 1.0 / eps;
  const CoefficientAt at = [&](const Point& x) {
    return spec.A.sample({x[0] * inv_eps, x[1] * inv_eps});
  };
  const BC bc = spec.dirichlet ? BC::Dirichlet : BC::Neumann;
  const AssembledOperator K = assemble_stiffness(*grid, at, bc);
  std::vector<double> b = assemble_load(*grid, K.dofs, spec.f);

  SolverConfig cfg = spec.solver;
  if (!spec.dirichlet) {
    // enforce int f = 0 by mean subtraction against the lumped basis integrals
    const std::vector<double> mass =
        assemble_load(*grid, K.dofs, PointFn([](const Point&) { return 1.0; }));
    double bs = 0.0, ms = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
      bs += b[i];
      ms += mass[i];
    }
    const double c = bs / ms;
    for (size_t i = 0; i < b.size(); ++i) b[i] -= c * mass[i];
    cfg.deflate = true;
  }

  const CgResult res = cg_solve(K.op, b, cfg);
  if (iterations) *iterations = res.iterations;
  ScalarField phi(grid);
  K.dofs.expand(res.x, phi.v);
  if (!spec.dirichlet) remove_integral_mean(phi, *grid);
  return phi;
}

ScalarField solve_homogenized(const ProblemSpec& spec, const HomogenizedTensor& tensor, int N,
                              int* iterations) {
  auto grid = build_domain_grid(spec.dim, N, spec.fine_per_cell, make_mask(spec.mask_shape, spec.dim, N));
  const CoefficientAt at = [&tensor](const Point&) { return tensor.a; };
  const BC bc = spec.dirichlet ? BC::Dirichlet : BC::Neumann;
  const AssembledOperator K = assemble_stiffness(*grid, at, bc);
  std::vector<double> b = assemble_load(*grid, K.dofs, spec.f);

  SolverConfig cfg = spec.solver;
  if (!spec.dirichlet) {
    const std::vector<double> mass =
        assemble_load(*grid, K.dofs, PointFn([](const Point&) { return 1.0; }));
    double bs = 0.0, ms = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
      bs += b[i];
      ms += mass[i];
    }
    for (size_t i = 0; i < b.size(); ++i) b[i] -= (bs / ms) * mass[i];
    cfg.deflate = true;
  }

  const CgResult res = cg_solve(K.op, b, cfg);
  if (iterations) *iterations = res.iterations;
  ScalarField Phi(grid);
  K.dofs.expand(res.x, Phi.v);
  if (!spec.dirichlet) remove_integral_mean(Phi, *grid);
  return Phi;
}

ScalarField cutoff_rho_eps(std::shared_ptr<const DomainGrid> grid, double eps, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("cutoff exponent must be in (0,1]");
  const double scale = std::pow(eps, alpha);
  ScalarField rho(grid);
  for (int n = 0; n < grid->node_count(); ++n) {
    if (grid->node_on_boundary(n)) {
      rho.v[n] = 0.0;
      continue;
    }
    const double d = distance_to_boundary(*grid, grid->node_coord(n));
    rho.v[n] = std::min(d / scale, 1.0);
  }
  return rho;
}

FirstOrderApprox first_order_approx(const ScalarField& Phi, const CorrectorSet& correctors,
                                    double eps, double alpha) {
  auto domain = std::dynamic_pointer_cast<const DomainGrid>(Phi.grid);
  if (!domain) throw std::invalid_argument("first_order_approx needs Phi on a DomainGrid");
  const int dim = domain->dim();
  const int s = domain->fine_per_cell();
  const CellGrid& ygrid = *correctors.grid;
  const int mc = ygrid.divisions();
  if (s % mc != 0) throw std::invalid_argument("corrector resolution must divide the fine resolution");

  // Q_eps of each partial derivative of Phi, exactly represented on the fine grid
  std::vector<ScalarField> q(dim);
  for (int i = 0; i < dim; ++i) {
    q[i] = q_interp_from_means(cell_mean_of(domain, [&](int e, const Point&, const Point& u) {
      return grad_in_element(Phi, e, u)[i];
    }));
  }

  const ScalarField rho = cutoff_rho_eps(domain, eps, alpha);

  FirstOrderApprox out;
  out.field = Phi;
  for (int n = 0; n < domain->node_count(); ++n) {
    const Lattice& l = domain->node_lattice(n);
    // {x/eps} on the corrector grid: fine node offsets are exact multiples
    Point y;
    for (int a = 0; a < dim; ++a) y[a] = static_cast<double>(l[a] % s) / s;
    if (dim == 1) y[1] = 0.0;
    double add = 0.0;
    for (int i = 0; i < dim; ++i) add += q[i].v[n] * eval(correctors.chi[i], y);
    out.field.v[n] += eps * rho.v[n] * add;
  }

  out.corrected_gradient = make_gauss_vector(domain, dim);
  const QuadratureRule qr = quadrature(dim);
  for (int e = 0; e < domain->element_count(); ++e) {
    const auto& el = domain->elements()[e];
    for (int g = 0; g < qr.points; ++g) {
      const Point grad_phi = grad_in_element(Phi, e, qr.local[g]);
      // corrector element containing this Gauss point and its local coords
      Lattice ychel;
      Point ylocal;
      for (int a = 0; a < dim; ++a) {
        const int off = el.cell[a] % s;                    // fine element within the eps-cell
        ychel[a] = off * mc / s;                           // exact, mc | s
        ylocal[a] = (off + qr.local[g][a]) * mc / static_cast<double>(s) - ychel[a];
      }
      if (dim == 1) {
        ychel[1] = 0;
        ylocal[1] = 0.0;
      }
      const int ye = ygrid.element_at(ychel);
      for (int c = 0; c < dim; ++c) out.corrected_gradient.at(e, g, c) = grad_phi[c];
      for (int i = 0; i < dim; ++i) {
        const double qi = value_in_element(q[i], e, qr.local[g]);
        const Point gchi = grad_in_element(correctors.chi[i], ye, ylocal);
        for (int c = 0; c < dim; ++c) out.corrected_gradient.at(e, g, c) += qi * gchi[c];
      }
    }
  }
  return out;
}

ScalarField restrict_to(const ScalarField& fine, std::shared_ptr<const DomainGrid> coarse) {
  auto fg = std::dynamic_pointer_cast<const DomainGrid>(fine.grid);
  if (!fg) throw std::invalid_argument("restrict_to needs a DomainGrid field");
  const int ff = fg->cells()[0];
  const int cc = coarse->cells()[0];
  if (ff % cc != 0) throw std::invalid_argument("grids are not dyadically nested");
  const int k = ff / cc;
  ScalarField out(coarse);
  for (int n = 0; n < coarse->node_count(); ++n) {
    const Lattice& l = coarse->node_lattice(n);
    const int id = fg->node_id({l[0] * k, coarse->dim() == 2 ? l[1] * k : 0});
    if (id < 0) throw std::logic_error("restriction outside the fine grid");
    out.v[n] = fine.v[id];
  }
  return out;
}

std::optional<double> fit_slope(const std::vector<double>& eps, const std::vector<double>& err) {
  std::vector<double> x, y;
  for (size_t i = 0; i < eps.size(); ++i) {
    if (err[i] > kDegenerateFloor) {
      x.push_back(std::log(eps[i]));
      y.push_back(std::log(err[i]));
    }
  }
  if (x.size() < 3) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

StudyReport error_study(const ProblemSpec& spec, int workers) {
  if (spec.eps_ladder.size() < 3) throw std::invalid_argument("study needs at least 3 eps values");

  StudyReport report;
  report.alpha = spec.alpha;
  report.meyers_q = spec.meyers_q;
  report.coefficient = spec.A.name();
  report.mask_shape = spec.mask_shape;
  report.source = spec.source_name;
  report.dirichlet = spec.dirichlet;
  report.fine_per_cell = spec.fine_per_cell;
  report.cell_divisions = spec.cell_divisions;

  // correctors and the effective tensor, shared by all rows
  auto cell_grid = build_cell_grid(spec.dim, spec.cell_divisions);
  const CorrectorSet correctors = solve_correctors(spec.A, cell_grid, spec.solver, workers);
  report.tensor = homogenized_tensor(spec.A, correctors);
  report.corrector_residuals = correctors.residuals;

  // the homogenized solution is computed once, on the finest row grid
  double eps_min = spec.eps_ladder.front();
  for (double e : spec.eps_ladder) eps_min = std::min(eps_min, e);
  const int N_finest = spec.macro_cells_for(eps_min);
  const ScalarField Phi_finest = solve_homogenized(spec, report.tensor, N_finest);

  report.rows.resize(spec.eps_ladder.size());
  parallel_for(static_cast<int>(spec.eps_ladder.size()), workers, [&](int row) {
    const double eps = spec.eps_ladder[row];
    const double t0 = wall_seconds();
    StudyRow r;
    r.eps = eps;
    r.h = eps / spec.fine_per_cell;
    r.under_resolved = spec.fine_per_cell < 8;

    const ScalarField phi_eps = solve_oscillatory(spec, eps, &r.cg_iters);
    auto row_grid = std::dynamic_pointer_cast<const DomainGrid>(phi_eps.grid);
    ScalarField Phi = restrict_to(Phi_finest, row_grid);
    if (!spec.dirichlet) remove_integral_mean(Phi, *row_grid);

    const FirstOrderApprox approx = first_order_approx(Phi, correctors, eps, spec.alpha);

    ScalarField diff(row_grid);
    for (int n = 0; n < row_grid->node_count(); ++n) diff.v[n] = phi_eps.v[n] - Phi.v[n];
    r.l2_err = l2_norm(diff);
    r.h1_corr_err = l2_gradient_error(phi_eps, approx.corrected_gradient);
    {
      GaussVectorField plain = make_gauss_vector(row_grid, spec.dim);
      const QuadratureRule qr = quadrature(spec.dim);
      for (int e = 0; e < row_grid->element_count(); ++e)
        for (int g = 0; g < qr.points; ++g) {
          const Point gp = grad_in_element(Phi, e, qr.local[g]);
          for (int c = 0; c < spec.dim; ++c) plain.at(e, g, c) = gp[c];
        }
      r.h1_plain_err = l2_gradient_error(phi_eps, plain);
    }
    r.hminus1_err = HminusOneSolver(row_grid, spec.solver).norm(diff);
    r.seconds = wall_seconds() - t0;
    report.rows[row] = r;
  });

  std::vector<double> eps_list, l2_list, h1_list, h1_plain_list;
  for (const StudyRow& r : report.rows) {
    eps_list.push_back(r.eps);
    l2_list.push_back(r.l2_err);
    h1_list.push_back(r.h1_corr_err);
    h1_plain_list.push_back(r.h1_plain_err);
  }
  const auto s_l2 = fit_slope(eps_list, l2_list);
  const auto s_h1 = fit_slope(eps_list, h1_list);
  const auto s_h1p = fit_slope(eps_list, h1_plain_list);
  report.slopes_fitted = s_l2.has_value() && s_h1.has_value();
  report.slope_l2 = s_l2.value_or(0.0);
  report.slope_h1 = s_h1.value_or(0.0);
  report.slope_h1_plain = s_h1p.value_or(0.0);

  // consecutive-pair slopes of the corrected gradient error (rows are kept in
  // ladder order; the ladder itself need not be sorted, so sort by eps)
  std::vector<std::pair<double, double>> pairs;
  for (const StudyRow& r : report.rows) pairs.emplace_back(r.eps, r.h1_corr_err);
  std::sort(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (size_t i = 0; i + 1 < pairs.size(); ++i) {
    if (pairs[i].second <= kDegenerateFloor || pairs[i + 1].second <= kDegenerateFloor) continue;
    report.pairwise_h1_slopes.push_back(std::log(pairs[i].second / pairs[i + 1].second) /
                                        std::log(pairs[i].first / pairs[i + 1].first));
  }

  report.flag_h1_slope = report.slopes_fitted && report.slope_h1 >= spec.h1_slope_min &&
                         report.slope_h1 <= spec.h1_slope_max;
  report.flag_l2_slope = report.slopes_fitted && report.slope_l2 >= spec.l2_slope_min;
  report.flag_pairwise = true;
  if (spec.require_pairwise_positive) {
    report.flag_pairwise = !report.pairwise_h1_slopes.empty();
    for (double sl : report.pairwise_h1_slopes)
      if (sl <= 0.0) report.flag_pairwise = false;
  }
  report.pass = report.flag_h1_slope && report.flag_l2_slope && report.flag_pairwise;
  return report;
}

PointFn parse_source(const std::string& spec) {
  std::string name = spec;
  std::vector<double> args;
  const auto open = spec.find('(');
  if (open != std::string::npos) {
    name = spec.substr(0, open);
    const auto close = spec.rfind(')');
    if (close == std::string::npos || close < open)
      throw std::invalid_argument("malformed source spec: " + spec);
    std::stringstream ss(spec.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
  }
  const double pi = std::numbers::pi;
  if (name == "constant" && args.size() == 1) {
    const double c = args[0];
    return [c](const Point&) { return c; };
  }
  if (name == "sine_x" && args.size() == 1) {
    const double k = args[0];
    return [k, pi](const Point& x) { return std::sin(k * pi * x[0]); };
  }
  if (name == "sine_xy" && args.size() == 2) {
    const double k1 = args[0], k2 = args[1];
    return [k1, k2, pi](const Point& x) { return std::sin(k1 * pi * x[0]) * std::sin(k2 * pi * x[1]); };
  }
  if (name == "manufactured" && args.empty()) {
    return [pi](const Point& x) {
      return 2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]);
    };
  }
  throw std::invalid_argument("unknown source spec: " + spec);
}

}  // namespace homog
