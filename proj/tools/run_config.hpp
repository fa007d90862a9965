/**
 * @brief Run configuration: JSON schema, strict validation, object building.
 *
 * The config mirrors the solver options plus the material table, the load
 * list and the microstructure source. Unknown keys anywhere are rejected.
 * See docs/config.schema.json for the documented schema.
 */

#ifndef FNOHOM_RUN_CONFIG_HPP
#define FNOHOM_RUN_CONFIG_HPP

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnohom/material.hpp"
#include "fnohom/microstructure.hpp"
#include "fnohom/solver.hpp"

namespace fnohom::cli {

/// Invalid configuration: maps to process exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SphereSpec {
  double cell_edge_um = 32.0;
  double radius_um = 10.0;
  int resolution = 32;
};

struct LoadSpec {
  int component = 0;          // Mandel slot, ignored when mandel is set
  std::vector<double> mandel; // optional full Mandel direction
  double magnitude = 1e-3;

  MandelVec<3> direction() const;  // unit direction scaled by magnitude
};

struct RunConfig {
  std::optional<SphereSpec> sphere;
  std::optional<std::string> phase_file;
  MaterialTable<3> materials;
  std::vector<LoadSpec> loads;
  SolverConfig solver;
  std::string output_directory = "out";
  bool write_fields = false;

  PhaseMap load_phases() const;
  StiffnessField<3> build_stiffness() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Command-line overrides applied on top of a parsed config.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<int> depth;
  std::optional<double> contrast;   // rescales material 1 against material 0
  std::optional<int> resolution;    // sphere resolution
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> threads;
  std::optional<std::string> frequency;
  std::optional<bool> write_fields;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

nlohmann::json solver_to_json(const SolverConfig& s);

}  // namespace fnohom::cli

#endif  // FNOHOM_RUN_CONFIG_HPP
