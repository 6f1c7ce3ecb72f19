// Command-line front end: corrector/tensor computation, convergence studies,
// periodicity-defect reports, and two-scale decompositions of a field.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "homog/cell.hpp"
#include "homog/config.hpp"
#include "homog/norms.hpp"
#include "homog/periodize.hpp"
#include "homog/study.hpp"
#include "homog/unfold.hpp"
#include "homog/vtk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace homog;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 2;
constexpr int kExitConfig = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json tensor_json(const HomogenizedTensor& t) {
  json rows = json::array();
  for (int i = 0; i < t.dim; ++i) {
    json row = json::array();
    for (int j = 0; j < t.dim; ++j) row.push_back(t.a[i][j]);
    rows.push_back(row);
  }
  return rows;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int run_correctors(const Config& cfg, const fs::path& outdir, int workers) {
  const MatrixField A = MatrixField::parse(cfg.coefficient, cfg.dim);
  auto grid = build_cell_grid(cfg.dim, cfg.cell_divisions);
  const CorrectorSet set = solve_correctors(A, grid, cfg.solver, workers);
  const HomogenizedTensor tensor = homogenized_tensor(A, set);

  for (int i = 0; i < cfg.dim; ++i) {
    const std::string name = "chi_" + std::to_string(i + 1);
    write_vtk((outdir / (name + ".vtk")).string(), *grid, set.chi[i].v, name);
  }
  json j;
  j["divisions"] = cfg.cell_divisions;
  j["coefficient"] = cfg.coefficient;
  j["tensor"] = tensor_json(tensor);
  j["residuals"] = set.residuals;
  j["iterations"] = set.iterations;
  j["config"] = json::parse(config_echo_json(cfg));
  write_text(outdir / "tensor.json", j.dump(2) + "\n");
  std::cout << "tensor:";
  for (int i = 0; i < cfg.dim; ++i)
    for (int k = 0; k < cfg.dim; ++k) std::cout << " " << fmt(tensor.a[i][k]);
  std::cout << "\n";
  return kExitOk;
}

int run_study(const Config& cfg, const fs::path& outdir, int workers) {
  const ProblemSpec spec = make_problem(cfg);
  const StudyReport rep = error_study(spec, workers);

  std::string csv = "eps,h,l2_err,h1_corr_err,h1_plain_err,slope_l2,slope_h1,cg_iters,seconds\n";
  for (const StudyRow& r : rep.rows) {
    char sec[32];
    std::snprintf(sec, sizeof sec, "%.3f", r.seconds);
    csv += fmt(r.eps) + "," + fmt(r.h) + "," + fmt(r.l2_err) + "," + fmt(r.h1_corr_err) + "," +
           fmt(r.h1_plain_err) + "," + fmt(rep.slope_l2) + "," + fmt(rep.slope_h1) + "," +
           std::to_string(r.cg_iters) + "," + sec + "\n";
  }
  write_text(outdir / "errors.csv", csv);

  json j;
  j["config"] = json::parse(config_echo_json(cfg));
  j["tensor"] = tensor_json(rep.tensor);
  j["corrector_residuals"] = rep.corrector_residuals;
  j["slope_l2"] = rep.slope_l2;
  j["slope_h1"] = rep.slope_h1;
  j["slope_h1_plain"] = rep.slope_h1_plain;
  j["slopes_fitted"] = rep.slopes_fitted;
  j["pairwise_h1_slopes"] = rep.pairwise_h1_slopes;
  j["empirical_gamma"] = rep.slope_h1;
  j["alpha"] = rep.alpha;
  j["meyers_q"] = rep.meyers_q;
  json rows = json::array();
  for (const StudyRow& r : rep.rows) {
    rows.push_back({{"eps", r.eps},
                    {"h", r.h},
                    {"l2_err", r.l2_err},
                    {"h1_corr_err", r.h1_corr_err},
                    {"h1_plain_err", r.h1_plain_err},
                    {"hminus1_err", r.hminus1_err},
                    {"cg_iters", r.cg_iters},
                    {"seconds", r.seconds},
                    {"under_resolved", r.under_resolved}});
  }
  j["rows"] = rows;
  j["flags"] = {{"h1_slope_in_range", rep.flag_h1_slope},
                {"l2_slope_min", rep.flag_l2_slope},
                {"pairwise_positive", rep.flag_pairwise},
                {"pass", rep.pass}};
  write_text(outdir / "summary.json", j.dump(2) + "\n");

  std::cout << "study: slope_l2=" << fmt(rep.slope_l2) << " slope_h1=" << fmt(rep.slope_h1)
            << " pass=" << (rep.pass ? "true" : "false") << "\n";
  if (!rep.pass) {
    std::cerr << "study: acceptance flags failed\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int run_defect(const Config& cfg, const fs::path& outdir, const std::string& field_path) {
  if (field_path.empty()) throw ConfigError("defect needs --field pointing at a VTK dump");
  const ScalarField phi = read_vtk_cell_field(field_path);
  auto grid = std::dynamic_pointer_cast<const CellGrid>(phi.grid);

  std::string header = "m";
  std::string row = std::to_string(grid->divisions());
  for (int axis = 0; axis < grid->dim(); ++axis) {
    header += ",hhalf_defect_axis" + std::to_string(axis + 1);
    row += "," + fmt(face_h_half_norm(face_defect(phi, axis)));
  }
  const ScalarField lifted = periodize_lift(phi);
  const ScalarField projected = periodize_project(phi, cfg.solver);
  auto h1_dist = [&](const ScalarField& hat) {
    ScalarField diff(phi.grid);
    for (int n = 0; n < phi.grid->node_count(); ++n) diff.v[n] = phi.v[n] - hat.v[n];
    const double a = l2_norm(diff), b = h1_seminorm(diff);
    return std::sqrt(a * a + b * b);
  };
  header += ",lift_h1_dist,project_h1_dist";
  row += "," + fmt(h1_dist(lifted)) + "," + fmt(h1_dist(projected));

  std::cout << header << "\n" << row << "\n";
  write_text(outdir / "defect.csv", header + "\n" + row + "\n");
  return kExitOk;
}

int run_twoscale(const Config& cfg, const fs::path& outdir, int workers) {
  const int N = cfg.ts_macro_cells;
  const int s = cfg.ts_fine_per_cell;
  auto grid = build_domain_grid(cfg.dim, N, s, make_mask(cfg.mask, cfg.dim, N));

  ScalarField phi;
  if (cfg.ts_field == "random") {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    phi = ScalarField(grid);
    for (double& v : phi.v) v = d(rng);
  } else {
    PointFn f;
    try {
      f = parse_source(cfg.ts_field);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config field 'twoscale.field': ") + e.what());
    }
    phi = sample_nodal(grid, f);
  }

  const TwoScaleDecomposition ts = two_scale_decompose(phi, cfg.ts_y_divisions, cfg.solver, workers);

  json cells = json::array();
  for (const auto& c : cfg.ts_dump_cells) {
    const int idx = grid->macro_index({c[0], c[1]});
    if (idx < 0) throw ConfigError("twoscale.dump_cells entry is not an active macro cell");
    const std::string name = "cell_" + std::to_string(c[0]) + "_" + std::to_string(c[1]) + ".vtk";
    std::vector<double> column(ts.micro.ynode_count());
    for (int yn = 0; yn < ts.micro.ynode_count(); ++yn) column[yn] = ts.micro.at(idx, yn);
    write_vtk((outdir / name).string(), *ts.micro.ycell, column, "micro");
    cells.push_back({{"cell", {c[0], c[1]}}, {"file", name}});
  }

  const double grad_norm = h1_seminorm(phi);
  json j;
  j["config"] = json::parse(config_echo_json(cfg));
  j["defect"] = ts.defect;
  j["eps"] = grid->eps();
  j["grad_phi_l2"] = grad_norm;
  j["micro_h1y_l2x"] = h1y_l2x_norm(ts.micro);
  j["coarse_h1_seminorm"] = h1_seminorm(ts.coarse);
  j["cells"] = cells;
  write_text(outdir / "index.json", j.dump(2) + "\n");

  std::cout << "twoscale: defect=" << fmt(ts.defect) << " defect/(eps*|grad phi|)="
            << fmt(grad_norm > 0 ? ts.defect / (grid->eps() * grad_norm) : 0.0) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic homogenization toolkit: correctors, unfolding operators, error studies"};
  app.require_subcommand(1);

  std::string config_path, out_dir, field_path;
  int workers = 0;
  std::uint64_t seed = 0;
  bool serial = false;
  bool have_workers = false, have_seed = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (env HOMOG_OUT overrides the default)");
  app.add_option("--workers", workers, "worker pool size")->each([&](const std::string&) {
    have_workers = true;
  });
  app.add_option("--seed", seed, "seed for randomized fields")->each([&](const std::string&) {
    have_seed = true;
  });
  app.add_flag("--serial", serial, "force single-threaded execution");

  CLI::App* cmd_correctors = app.add_subcommand("correctors", "solve the cell problems, dump chi_i and the tensor");
  CLI::App* cmd_study = app.add_subcommand("study", "run the eps-ladder error study");
  CLI::App* cmd_defect = app.add_subcommand("defect", "periodicity defect report for a field dump");
  cmd_defect->add_option("--field", field_path, "VTK field dump to analyze");
  CLI::App* cmd_twoscale = app.add_subcommand("twoscale", "two-scale decomposition of a configured field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (have_workers) cfg.workers = workers;
    if (have_seed) cfg.seed = seed;
    if (serial) cfg.workers = 1;
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");

    // HOMOG_OUT takes precedence over --out
    if (const char* env = std::getenv("HOMOG_OUT"); env && *env) out_dir = env;
    if (out_dir.empty()) out_dir = "out";
    const fs::path outdir(out_dir);
    fs::create_directories(outdir);

    if (*cmd_correctors) return run_correctors(cfg, outdir, cfg.workers);
    if (*cmd_study) return run_study(cfg, outdir, cfg.workers);
    if (*cmd_defect) return run_defect(cfg, outdir, field_path);
    if (*cmd_twoscale) return run_twoscale(cfg, outdir, cfg.workers);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolveFailure& e) {
    std::cerr << "numeric failure (solver): " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
