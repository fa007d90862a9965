#include "run_config.hpp"

#include <fstream>
#include <set>

#include "fnohom/field_io.hpp"

namespace fnohom::cli {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" + where + key + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError("config: " + where + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    throw ConfigError("config: " + where + " must be an integer");
  return j.get<int>();
}

}  // namespace

MandelVec<3> LoadSpec::direction() const {
  MandelVec<3> dir = MandelVec<3>::Zero();
  if (!mandel.empty()) {
    if (mandel.size() != 6)
      throw ConfigError("config: load mandel vector must have 6 entries");
    for (int c = 0; c < 6; ++c) dir[c] = mandel[c];
    const double n = dir.norm();
    if (!(n > 0.0)) throw ConfigError("config: load direction must be nonzero");
    dir /= n;
  } else {
    if (component < 0 || component > 5)
      throw ConfigError("config: load component must lie in [0, 5]");
    dir[component] = 1.0;
  }
  return magnitude * dir;
}

PhaseMap RunConfig::load_phases() const {
  if (sphere && phase_file)
    throw ConfigError("config: specify either sphere or file, not both");
  if (sphere)
    return gen_sphere(sphere->cell_edge_um, sphere->radius_um,
                      sphere->resolution);
  if (phase_file) return load_phase_map(*phase_file);
  throw ConfigError("config: missing microstructure source");
}

StiffnessField<3> RunConfig::build_stiffness() const {
  return assign_materials(load_phases(), materials);
}

RunConfig parse_config(const json& j) {
  require_keys(j, "", {"microstructure", "materials", "loads", "solver",
                       "output"});
  RunConfig cfg;

  if (!j.contains("microstructure"))
    throw ConfigError("config: missing 'microstructure'");
  {
    const json& m = j.at("microstructure");
    require_keys(m, "microstructure.", {"sphere", "file"});
    if (m.contains("sphere")) {
      const json& s = m.at("sphere");
      require_keys(s, "microstructure.sphere.",
                   {"cell_edge_um", "radius_um", "resolution"});
      SphereSpec sp;
      if (s.contains("cell_edge_um"))
        sp.cell_edge_um = number(s.at("cell_edge_um"), "cell_edge_um");
      if (s.contains("radius_um"))
        sp.radius_um = number(s.at("radius_um"), "radius_um");
      if (s.contains("resolution"))
        sp.resolution = integer(s.at("resolution"), "resolution");
      cfg.sphere = sp;
    }
    if (m.contains("file")) cfg.phase_file = m.at("file").get<std::string>();
    if (!cfg.sphere && !cfg.phase_file)
      throw ConfigError("config: microstructure needs 'sphere' or 'file'");
  }

  if (!j.contains("materials") || !j.at("materials").is_array() ||
      j.at("materials").empty())
    throw ConfigError("config: 'materials' must be a non-empty array");
  for (const json& m : j.at("materials")) {
    require_keys(m, "materials[].", {"label", "E", "nu", "mandel"});
    MaterialEntry<3> entry;
    entry.label = static_cast<std::uint8_t>(integer(m.at("label"), "label"));
    if (m.contains("mandel")) {
      const auto rows = m.at("mandel").get<std::vector<std::vector<double>>>();
      if (rows.size() != 6)
        throw ConfigError("config: raw mandel matrix must be 6x6");
      MandelMat<3> mat;
      for (int r = 0; r < 6; ++r) {
        if (rows[r].size() != 6)
          throw ConfigError("config: raw mandel matrix must be 6x6");
        for (int c = 0; c < 6; ++c) mat(r, c) = rows[r][c];
      }
      entry.material = mat;
    } else {
      if (!m.contains("E") || !m.contains("nu"))
        throw ConfigError("config: material needs E and nu (or mandel)");
      entry.material =
          IsotropicMaterial{number(m.at("E"), "E"), number(m.at("nu"), "nu")};
    }
    cfg.materials.entries.push_back(entry);
  }
  cfg.materials.validate_unique();

  if (j.contains("loads")) {
    if (!j.at("loads").is_array())
      throw ConfigError("config: 'loads' must be an array");
    for (const json& l : j.at("loads")) {
      require_keys(l, "loads[].", {"component", "mandel", "magnitude"});
      LoadSpec load;
      if (l.contains("component"))
        load.component = integer(l.at("component"), "component");
      if (l.contains("mandel"))
        load.mandel = l.at("mandel").get<std::vector<double>>();
      if (l.contains("magnitude"))
        load.magnitude = number(l.at("magnitude"), "magnitude");
      cfg.loads.push_back(load);
    }
  }
  if (cfg.loads.empty()) cfg.loads.push_back(LoadSpec{});

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    require_keys(s, "solver.",
                 {"mode", "tolerance", "max_iterations", "depth", "cutoff",
                  "layer_count", "frequency", "alpha_minus", "alpha_plus",
                  "alpha0", "threads"});
    if (s.contains("mode"))
      cfg.solver.mode = solve_mode_from_string(s.at("mode").get<std::string>());
    if (s.contains("tolerance"))
      cfg.solver.tolerance = number(s.at("tolerance"), "tolerance");
    if (s.contains("max_iterations"))
      cfg.solver.max_iterations = integer(s.at("max_iterations"), "max_iterations");
    if (s.contains("depth")) cfg.solver.depth = integer(s.at("depth"), "depth");
    if (s.contains("cutoff")) cfg.solver.cutoff = number(s.at("cutoff"), "cutoff");
    if (s.contains("layer_count"))
      cfg.solver.layer_count = integer(s.at("layer_count"), "layer_count");
    if (s.contains("frequency")) {
      try {
        cfg.solver.frequency =
            frequency_kind_from_string(s.at("frequency").get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    }
    if (s.contains("alpha_minus"))
      cfg.solver.alpha_minus = number(s.at("alpha_minus"), "alpha_minus");
    if (s.contains("alpha_plus"))
      cfg.solver.alpha_plus = number(s.at("alpha_plus"), "alpha_plus");
    if (s.contains("alpha0")) cfg.solver.alpha0 = number(s.at("alpha0"), "alpha0");
    if (s.contains("threads")) cfg.solver.threads = integer(s.at("threads"), "threads");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    require_keys(o, "output.", {"directory", "write_fields"});
    if (o.contains("directory"))
      cfg.output_directory = o.at("directory").get<std::string>();
    if (o.contains("write_fields"))
      cfg.write_fields = o.at("write_fields").get<bool>();
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return parse_config(j);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.out) cfg.output_directory = *o.out;
  if (o.mode) cfg.solver.mode = solve_mode_from_string(*o.mode);
  if (o.depth) cfg.solver.depth = *o.depth;
  if (o.tol) cfg.solver.tolerance = *o.tol;
  if (o.max_iter) cfg.solver.max_iterations = *o.max_iter;
  if (o.threads) cfg.solver.threads = *o.threads;
  if (o.write_fields) cfg.write_fields = *o.write_fields;
  if (o.frequency) {
    try {
      cfg.solver.frequency = frequency_kind_from_string(*o.frequency);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (o.resolution) {
    if (!cfg.sphere)
      throw ConfigError("--resolution requires a sphere microstructure");
    cfg.sphere->resolution = *o.resolution;
  }
  if (o.contrast) {
    // Rescale the second material's Young's modulus against the first.
    if (cfg.materials.entries.size() < 2)
      throw ConfigError("--contrast requires a two-material table");
    auto& base = cfg.materials.entries[0];
    auto& incl = cfg.materials.entries[1];
    if (!std::holds_alternative<IsotropicMaterial>(base.material) ||
        !std::holds_alternative<IsotropicMaterial>(incl.material))
      throw ConfigError("--contrast requires isotropic materials");
    std::get<IsotropicMaterial>(incl.material).young_modulus =
        std::get<IsotropicMaterial>(base.material).young_modulus * *o.contrast;
  }
}

nlohmann::json solver_to_json(const SolverConfig& s) {
  json j;
  j["mode"] = to_string(s.mode);
  j["tolerance"] = s.tolerance;
  j["max_iterations"] = s.max_iterations;
  j["frequency"] = to_string(s.frequency);
  if (s.mode == SolveMode::Neural) {
    j["depth"] = s.depth;
    j["cutoff"] = s.cutoff;
  }
  if (s.layer_count) j["layer_count"] = *s.layer_count;
  return j;
}

}  // namespace fnohom::cli
