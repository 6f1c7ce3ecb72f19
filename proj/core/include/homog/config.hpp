#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "homog/sparse.hpp"
#include "homog/study.hpp"

namespace homog {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed run configuration (JSON with a versioned "schema" field). Unknown
/// keys are rejected so typos surface as errors.
struct Config {
  int schema = 1;
  int dim = 2;
  std::string mask = "unit_square";
  std::string coefficient = "laminate(1,4)";
  int cell_divisions = 16;
  std::string source = "constant(1)";
  std::string boundary = "dirichlet";  // or "neumann"
  std::vector<double> eps{0.25, 0.125, 0.0625, 0.03125};
  int fine_per_cell = 16;
  double alpha = 1.0;
  double meyers_q = 4.0;
  SolverConfig solver;

  double h1_slope_min = 0.4;
  double h1_slope_max = 1.2;
  double l2_slope_min = 0.4;
  bool pairwise_positive = false;

  // twoscale subcommand
  int ts_macro_cells = 8;
  int ts_fine_per_cell = 8;
  int ts_y_divisions = 4;
  std::string ts_field = "sine_xy(1,1)";
  std::vector<std::array<int, 2>> ts_dump_cells;

  std::uint64_t seed = 1;
  int workers = 1;
};

Config parse_config_text(const std::string& json_text);
Config load_config(const std::string& path);

/// Full JSON echo; parsing it again reproduces the configuration.
std::string config_echo_json(const Config& cfg);

ProblemSpec make_problem(const Config& cfg);

}  // namespace homog
