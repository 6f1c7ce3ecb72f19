#include <doctest.h>

#include <cmath>
#include <random>

#include "homog/norms.hpp"
#include "homog/periodize.hpp"
#include "support.hpp"

using namespace homog;

namespace {

ScalarField random_periodic_field(std::shared_ptr<const CellGrid> grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> dofs(grid->periodic_dof_count());
  for (double& v : dofs) v = d(rng);
  ScalarField f(grid);
  for (int n = 0; n < grid->node_count(); ++n) f.v[n] = dofs[grid->periodic_dof(n)];
  return f;
}

double max_face_defect(const ScalarField& f, int dim) {
  double worst = 0.0;
  for (int axis = 0; axis < dim; ++axis)
    for (double v : face_defect(f, axis)) worst = std::max(worst, std::abs(v));
  return worst;
}

double h1_full(const ScalarField& f) {
  const double a = l2_norm(f), b = h1_seminorm(f);
  return std::sqrt(a * a + b * b);
}

}  // namespace

TEST_CASE("cutoff profile: plateaus, range, monotonicity") {
  const CutoffProfile theta;
  CHECK(theta(0.0) == 1.0);
  CHECK(theta(0.125) == 1.0);
  CHECK(theta(-0.1) == 1.0);
  CHECK(theta(0.375) == 0.0);
  CHECK(theta(0.5) == 0.0);
  CHECK(theta(-0.4) == 0.0);
  double prev = 1.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.125 + 0.25 * k / 100.0;
    const double v = theta(t);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("face defect: periodic, linear, bilinear examples") {
  auto g = build_cell_grid(2, 8);
  const ScalarField per = random_periodic_field(g, 3);
  for (double v : face_defect(per, 0)) CHECK(v == 0.0);
  for (double v : face_defect(per, 1)) CHECK(v == 0.0);

  const ScalarField y1 = sample_nodal(g, [](const Point& y) { return y[0]; });
  for (double v : face_defect(y1, 0)) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  for (double v : face_defect(y1, 1)) CHECK(v == 0.0);

  const ScalarField y1y2 = sample_nodal(g, [](const Point& y) { return y[0] * y[1]; });
  const std::vector<double> d2 = face_defect(y1y2, 1);
  for (int i = 0; i <= 8; ++i) CHECK(d2[i] == doctest::Approx(i / 8.0).epsilon(1e-15));
}

TEST_CASE("lift: periodic input is unchanged") {
  auto g = build_cell_grid(2, 16);
  const ScalarField per = random_periodic_field(g, 5);
  const ScalarField lifted = periodize_lift(per);
  for (int n = 0; n < g->node_count(); ++n) CHECK(lifted.v[n] == per.v[n]);
}

TEST_CASE("lift of y1 in 1-D: closed form from the update formula") {
  auto g = build_cell_grid(1, 16);
  const ScalarField y1 = sample_nodal(g, [](const Point& y) { return y[0]; });
  const ScalarField lifted = periodize_lift(y1);
  const CutoffProfile theta;
  CHECK(lifted.v[g->node_id({0, 0})] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lifted.v[g->node_id({16, 0})] == doctest::Approx(0.5).epsilon(1e-15));
  for (int i = 0; i <= 16; ++i) {
    const double y = i / 16.0;
    CHECK(lifted.v[g->node_id({i, 0})] == doctest::Approx(y + theta.bracket(y)).epsilon(1e-15));
  }
}

TEST_CASE("lift of y1 + y2: periodic in both axes, H1 distance controlled") {
  auto g = build_cell_grid(2, 16);
  const ScalarField f = sample_nodal(g, [](const Point& y) { return y[0] + y[1]; });
  const ScalarField lifted = periodize_lift(f);
  CHECK(max_face_defect(lifted, 2) <= 1e-12);

  // both induction steps act on a unit defect: output is f + B(y1) + B(y2)
  const CutoffProfile theta;
  for (int n = 0; n < g->node_count(); ++n) {
    const Point y = g->node_coord(n);
    const double want = y[0] + y[1] + theta.bracket(y[0]) + theta.bracket(y[1]);
    CHECK(lifted.v[n] == doctest::Approx(want).epsilon(1e-14));
  }

  ScalarField diff(g);
  for (int n = 0; n < g->node_count(); ++n) diff.v[n] = f.v[n] - lifted.v[n];
  const double dist = h1_full(diff);
  const double defect_sum = face_h_half_norm(face_defect(f, 0)) + face_h_half_norm(face_defect(f, 1));
  CHECK(dist <= 10.0 * defect_sum);
}

TEST_CASE("lift: axes already periodic stay periodic after later steps") {
  auto g = build_cell_grid(2, 16);
  ScalarField f = random_periodic_field(g, 9);
  // break periodicity in axis 2 only
  for (int n = 0; n < g->node_count(); ++n) {
    const Point y = g->node_coord(n);
    f.v[n] += y[1] * y[1];
  }
  const ScalarField lifted = periodize_lift(f);
  for (double v : face_defect(lifted, 0)) CHECK(std::abs(v) <= 1e-13);
  for (double v : face_defect(lifted, 1)) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("projection: fixed point, idempotence, mean, contraction, orthogonality") {
  auto g = build_cell_grid(2, 8);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const PeriodicProjector proj(g, cfg);

  const ScalarField per = random_periodic_field(g, 13);
  const ScalarField pp = proj.project(per);
  for (int n = 0; n < g->node_count(); ++n)
    CHECK(pp.v[n] == doctest::Approx(per.v[n]).epsilon(1e-9));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScalarField f = testsupport::random_nodal_field(g, 1000 + seed);
    const ScalarField hat = proj.project(f);

    CHECK(max_face_defect(hat, 2) <= 1e-12);

    // projecting again changes nothing
    if (seed < 5) {
      const ScalarField hat2 = proj.project(hat);
      for (int n = 0; n < g->node_count(); ++n)
        CHECK(hat2.v[n] == doctest::Approx(hat.v[n]).epsilon(1e-8));
    }

    CHECK(integrate_field(hat) == doctest::Approx(integrate_field(f)).epsilon(1e-12));

    // contraction in the projection inner product
    const double nf = std::sqrt(proj.inner(f.v, f.v));
    const double nh = std::sqrt(proj.inner(hat.v, hat.v));
    CHECK(nh <= nf * (1.0 + 1e-10));

    // gradient orthogonality against every periodic hat
    if (seed < 10) {
      std::vector<double> diff(g->node_count());
      for (int n = 0; n < g->node_count(); ++n) diff[n] = f.v[n] - hat.v[n];
      const CoefficientAt id = [](const Point&) { return Matrix2{{{1.0, 0.0}, {0.0, 1.0}}}; };
      const AssembledOperator full = assemble_stiffness(*g, id, BC::Neumann);
      std::vector<double> w(g->node_count(), 0.0);
      full.op.apply(diff, w);
      std::vector<double> folded(g->periodic_dof_count(), 0.0);
      for (int n = 0; n < g->node_count(); ++n) folded[g->periodic_dof(n)] += w[n];
      double scale = 0.0;
      std::vector<double> wf(g->node_count(), 0.0);
      full.op.apply(f.v, wf);
      for (double v : wf) scale += v * v;
      double rnorm = 0.0;
      for (double v : folded) rnorm += v * v;
      CHECK(std::sqrt(rnorm) <= 10.0 * cfg.tol * std::sqrt(scale) + 1e-11);
    }
  }
}

TEST_CASE("projection of y1 in 1-D is the constant 1/2") {
  auto g = build_cell_grid(1, 32);
  const ScalarField y1 = sample_nodal(g, [](const Point& y) { return y[0]; });
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const ScalarField hat = periodize_project(y1, cfg);
  for (int n = 0; n < g->node_count(); ++n)
    CHECK(hat.v[n] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("projection minimizes the projector metric: never worse than the lift") {
  auto g = build_cell_grid(2, 16);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const PeriodicProjector proj(g, cfg);
  for (std::uint64_t seed : {21, 22, 23, 24}) {
    const testsupport::TrigField tf = testsupport::TrigField::make(seed);
    const ScalarField f = sample_nodal(g, [&](const Point& y) { return tf(y); });
    const ScalarField hat_p = proj.project(f);
    const ScalarField hat_l = periodize_lift(f);
    std::vector<double> dp(g->node_count()), dl(g->node_count());
    for (int n = 0; n < g->node_count(); ++n) {
      dp[n] = f.v[n] - hat_p.v[n];
      dl[n] = f.v[n] - hat_l.v[n];
    }
    const double np = std::sqrt(proj.inner(dp, dp));
    const double nl = std::sqrt(proj.inner(dl, dl));
    CHECK(np <= nl * (1.0 + 1e-8));
  }
}

TEST_CASE("lift defect bound: constant stable across grid resolutions") {
  // same continuous random family sampled at m = 16, 32, 64
  std::vector<double> worst_ratio;
  for (int m : {16, 32, 64}) {
    auto g = build_cell_grid(2, m);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const testsupport::TrigField tf = testsupport::TrigField::make(300 + seed);
      const ScalarField f = sample_nodal(g, [&](const Point& y) { return tf(y); });
      const ScalarField lifted = periodize_lift(f);
      ScalarField diff(g);
      for (int n = 0; n < g->node_count(); ++n) diff.v[n] = f.v[n] - lifted.v[n];
      const double defect_sum =
          face_h_half_norm(face_defect(f, 0)) + face_h_half_norm(face_defect(f, 1));
      if (defect_sum > 1e-13) worst = std::max(worst, h1_full(diff) / defect_sum);
    }
    worst_ratio.push_back(worst);
  }
  double lo = worst_ratio[0], hi = worst_ratio[0];
  for (double r : worst_ratio) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  MESSAGE("lift defect-bound constant across m in {16,32,64}: ", lo, " .. ", hi);
  CHECK(hi <= 2.0 * lo);
}

TEST_CASE("column projection: block-diagonal action and mean preservation") {
  auto domain = build_domain_grid(2, 2, 4, make_mask("unit_square", 2, 2));
  SolverConfig cfg;
  cfg.tol = 1e-12;

  // all columns periodic: unchanged
  auto ycell = build_cell_grid(2, 4);
  UnfoldedField U = make_unfolded(domain, 4, 1);
  const ScalarField per = random_periodic_field(ycell, 77);
  for (int cell = 0; cell < domain->macro_cell_count(); ++cell)
    for (int yn = 0; yn < U.ynode_count(); ++yn) U.at(cell, yn) = per.v[yn] * (cell + 1);
  const UnfoldedField P = periodize_project_columns(U, cfg);
  for (size_t i = 0; i < U.values.size(); ++i)
    CHECK(P.values[i] == doctest::Approx(U.values[i]).epsilon(1e-9));

  // a single nonzero column equals the scalar projection of that column
  UnfoldedField single = make_unfolded(domain, 4, 1);
  const ScalarField raw = testsupport::random_nodal_field(ycell, 78);
  for (int yn = 0; yn < single.ynode_count(); ++yn) single.at(2, yn) = raw.v[yn];
  const UnfoldedField Psingle = periodize_project_columns(single, cfg);
  const ScalarField scalar_hat = periodize_project(raw, cfg);
  for (int yn = 0; yn < single.ynode_count(); ++yn) {
    CHECK(Psingle.at(2, yn) == doctest::Approx(scalar_hat.v[yn]).epsilon(1e-9));
    CHECK(Psingle.at(0, yn) == 0.0);
    CHECK(Psingle.at(1, yn) == 0.0);
    CHECK(Psingle.at(3, yn) == 0.0);
  }

  // mean preservation per column on random input
  UnfoldedField R = make_unfolded(domain, 4, 1);
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (double& v : R.values) v = d(rng);
  const UnfoldedField PR = periodize_project_columns(R, cfg);
  for (int cell = 0; cell < domain->macro_cell_count(); ++cell) {
    ScalarField col(ycell), pcol(ycell);
    for (int yn = 0; yn < R.ynode_count(); ++yn) {
      col.v[yn] = R.at(cell, yn);
      pcol.v[yn] = PR.at(cell, yn);
    }
    CHECK(integrate_field(pcol) == doctest::Approx(integrate_field(col)).epsilon(1e-12));
  }
}
