#include "homog/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace homog {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config field '" + where + it.key() + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + where + key + "' has the wrong type");
  }
}

}  // namespace

Config parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  Config cfg;
  reject_unknown(j, {"schema", "dim", "mask", "coefficient", "cell_divisions", "source", "boundary",
                     "eps", "fine_per_cell", "alpha", "meyers_q", "solver", "acceptance", "twoscale",
                     "seed", "workers"},
                 "");
  read(j, "schema", cfg.schema, "");
  if (cfg.schema != 1) throw ConfigError("config field 'schema' must be 1");
  read(j, "dim", cfg.dim, "");
  if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("config field 'dim' must be 1 or 2");
  read(j, "mask", cfg.mask, "");
  read(j, "coefficient", cfg.coefficient, "");
  read(j, "cell_divisions", cfg.cell_divisions, "");
  if (cfg.cell_divisions < 2) throw ConfigError("config field 'cell_divisions' must be >= 2");
  read(j, "source", cfg.source, "");
  read(j, "boundary", cfg.boundary, "");
  if (cfg.boundary != "dirichlet" && cfg.boundary != "neumann")
    throw ConfigError("config field 'boundary' must be \"dirichlet\" or \"neumann\"");
  read(j, "eps", cfg.eps, "");
  for (double e : cfg.eps)
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("config field 'eps' entries must lie in (0,1)");
  read(j, "fine_per_cell", cfg.fine_per_cell, "");
  if (cfg.fine_per_cell < 2) throw ConfigError("config field 'fine_per_cell' must be >= 2");
  read(j, "alpha", cfg.alpha, "");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ConfigError("config field 'alpha' must be in (0,1]");
  read(j, "meyers_q", cfg.meyers_q, "");
  if (!(cfg.meyers_q > 2.0)) throw ConfigError("config field 'meyers_q' must exceed 2");
  read(j, "seed", cfg.seed, "");
  read(j, "workers", cfg.workers, "");
  if (cfg.workers < 1) throw ConfigError("config field 'workers' must be >= 1");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, {"tol", "max_iterations"}, "solver.");
    read(s, "tol", cfg.solver.tol, "solver.");
    if (!(cfg.solver.tol > 0.0 && cfg.solver.tol < 1.0))
      throw ConfigError("config field 'solver.tol' must be in (0,1)");
    read(s, "max_iterations", cfg.solver.max_iterations, "solver.");
    if (cfg.solver.max_iterations < 1)
      throw ConfigError("config field 'solver.max_iterations' must be >= 1");
  }
  if (j.contains("acceptance")) {
    const json& a = j.at("acceptance");
    reject_unknown(a, {"h1_slope_min", "h1_slope_max", "l2_slope_min", "pairwise_positive"},
                   "acceptance.");
    read(a, "h1_slope_min", cfg.h1_slope_min, "acceptance.");
    read(a, "h1_slope_max", cfg.h1_slope_max, "acceptance.");
    read(a, "l2_slope_min", cfg.l2_slope_min, "acceptance.");
    read(a, "pairwise_positive", cfg.pairwise_positive, "acceptance.");
  }
  if (j.contains("twoscale")) {
    const json& t = j.at("twoscale");
    reject_unknown(t, {"macro_cells", "fine_per_cell", "y_divisions", "field", "dump_cells"},
                   "twoscale.");
    read(t, "macro_cells", cfg.ts_macro_cells, "twoscale.");
    read(t, "fine_per_cell", cfg.ts_fine_per_cell, "twoscale.");
    read(t, "y_divisions", cfg.ts_y_divisions, "twoscale.");
    read(t, "field", cfg.ts_field, "twoscale.");
    if (t.contains("dump_cells")) {
      try {
        for (const auto& c : t.at("dump_cells")) {
          std::array<int, 2> cc{0, 0};
          for (size_t k = 0; k < c.size() && k < 2; ++k) cc[k] = c.at(k).get<int>();
          cfg.ts_dump_cells.push_back(cc);
        }
      } catch (const json::exception&) {
        throw ConfigError("config field 'twoscale.dump_cells' must be a list of [i,j] pairs");
      }
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_echo_json(const Config& cfg) {
  json j;
  j["schema"] = cfg.schema;
  j["dim"] = cfg.dim;
  j["mask"] = cfg.mask;
  j["coefficient"] = cfg.coefficient;
  j["cell_divisions"] = cfg.cell_divisions;
  j["source"] = cfg.source;
  j["boundary"] = cfg.boundary;
  j["eps"] = cfg.eps;
  j["fine_per_cell"] = cfg.fine_per_cell;
  j["alpha"] = cfg.alpha;
  j["meyers_q"] = cfg.meyers_q;
  j["solver"] = {{"tol", cfg.solver.tol}, {"max_iterations", cfg.solver.max_iterations}};
  j["acceptance"] = {{"h1_slope_min", cfg.h1_slope_min},
                     {"h1_slope_max", cfg.h1_slope_max},
                     {"l2_slope_min", cfg.l2_slope_min},
                     {"pairwise_positive", cfg.pairwise_positive}};
  json dump = json::array();
  for (const auto& c : cfg.ts_dump_cells) dump.push_back({c[0], c[1]});
  j["twoscale"] = {{"macro_cells", cfg.ts_macro_cells},
                   {"fine_per_cell", cfg.ts_fine_per_cell},
                   {"y_divisions", cfg.ts_y_divisions},
                   {"field", cfg.ts_field},
                   {"dump_cells", dump}};
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  return j.dump(2);
}

ProblemSpec make_problem(const Config& cfg) {
  ProblemSpec spec;
  spec.dim = cfg.dim;
  spec.mask_shape = cfg.mask;
  try {
    spec.A = MatrixField::parse(cfg.coefficient, cfg.dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config field 'coefficient': ") + e.what());
  }
  spec.cell_divisions = cfg.cell_divisions;
  try {
    spec.f = parse_source(cfg.source);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config field 'source': ") + e.what());
  }
  spec.source_name = cfg.source;
  spec.dirichlet = cfg.boundary == "dirichlet";
  spec.eps_ladder = cfg.eps;
  spec.fine_per_cell = cfg.fine_per_cell;
  spec.alpha = cfg.alpha;
  spec.meyers_q = cfg.meyers_q;
  spec.solver = cfg.solver;
  spec.h1_slope_min = cfg.h1_slope_min;
  spec.h1_slope_max = cfg.h1_slope_max;
  spec.l2_slope_min = cfg.l2_slope_min;
  spec.require_pairwise_positive = cfg.pairwise_positive;
  try {
    for (double e : spec.eps_ladder) spec.macro_cells_for(e);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config field 'eps': ") + e.what());
  }
  return spec;
}

}  // namespace homog
