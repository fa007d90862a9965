// Command-line driver: solve, effective, bench-sphere, compare, calibrate.
// Exit codes: 0 success, 1 non-convergence, 2 configuration error.

#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

using namespace fnohom::cli;

struct CommonFlags {
  std::string config;
  Overrides overrides;
  bool write_fields = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required();
  auto& o = f.overrides;
  cmd->add_option("--out", [&o](const std::vector<std::string>& v) {
    o.out = v.front();
    return true;
  }, "Output directory (overrides config)");
  cmd->add_option("--mode", [&o](const std::vector<std::string>& v) {
    o.mode = v.front();
    return true;
  }, "Solver mode: exact_fft | neural");
  cmd->add_option("--depth", [&o](const std::vector<std::string>& v) {
    o.depth = std::stoi(v.front());
    return true;
  }, "Neural ReLU depth");
  cmd->add_option("--contrast", [&o](const std::vector<std::string>& v) {
    o.contrast = std::stod(v.front());
    return true;
  }, "Rescale material 1 Young's modulus to contrast x material 0");
  cmd->add_option("--resolution", [&o](const std::vector<std::string>& v) {
    o.resolution = std::stoi(v.front());
    return true;
  }, "Sphere voxel resolution");
  cmd->add_option("--tol", [&o](const std::vector<std::string>& v) {
    o.tol = std::stod(v.front());
    return true;
  }, "Convergence tolerance");
  cmd->add_option("--max-iter", [&o](const std::vector<std::string>& v) {
    o.max_iter = std::stoi(v.front());
    return true;
  }, "Iteration cap");
  cmd->add_option("--threads", [&o](const std::vector<std::string>& v) {
    o.threads = std::stoi(v.front());
    return true;
  }, "Worker threads (0 = hardware)");
  cmd->add_option("--frequency", [&o](const std::vector<std::string>& v) {
    o.frequency = v.front();
    return true;
  }, "Frequency map: rotated_staggered | spectral");
  cmd->add_flag("--write-fields", f.write_fields,
                "Export strain/stress/displacement/equivalent-stress fields");
}

RunConfig resolve(const CommonFlags& f) {
  RunConfig cfg = load_config(f.config);
  Overrides o = f.overrides;
  if (f.write_fields) o.write_fields = true;
  apply_overrides(cfg, o);
  return cfg;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma - pos);
    out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<std::string> parse_names(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    out.push_back(csv.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voxel-grid homogenization for periodic linear elasticity: "
               "FFT basic scheme and its explicit neural surrogate"};
  app.require_subcommand(1);

  CommonFlags solve_flags, eff_flags;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve one cell problem from a config");
  add_common(solve_cmd, solve_flags);
  CLI::App* eff_cmd = app.add_subcommand(
      "effective", "Effective stiffness from six unit loads");
  add_common(eff_cmd, eff_flags);

  BenchOptions bench;
  std::string bench_contrasts = "12,24,48,96";
  std::string bench_depths = "7,9,11";
  std::string bench_resolutions = "32";
  std::string bench_magnitudes = "0.001,0.01,0.5,1.0";
  std::string bench_studies = "contrast";
  CLI::App* bench_cmd = app.add_subcommand(
      "bench-sphere", "Single-sphere benchmark sweeps (CSV tables)");
  bench_cmd->add_option("--contrasts", bench_contrasts, "Contrast sweep");
  bench_cmd->add_option("--depths", bench_depths, "Neural depth sweep");
  bench_cmd->add_option("--resolutions", bench_resolutions, "Resolution sweep");
  bench_cmd->add_option("--magnitudes", bench_magnitudes,
                        "Strain magnitude sweep (absolute values)");
  bench_cmd->add_option("--studies", bench_studies,
                        "Comma list of: contrast,resolution,magnitude");
  bench_cmd->add_option("--resolution-contrast", bench.resolution_contrast,
                        "Contrast used by the resolution study");
  bench_cmd->add_option("--magnitude-contrast", bench.magnitude_contrast,
                        "Contrast used by the magnitude study");
  bench_cmd->add_option("--tol", bench.tolerance, "Convergence tolerance");
  bench_cmd->add_option("--max-iter", bench.max_iterations, "Iteration cap");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_option("--frequency", bench.frequency, "Frequency map");
  bench_cmd->add_option("--out", bench.out, "Output directory");
  bench_cmd->add_flag("--write-fields", bench.write_fields,
                      "Export equivalent-stress error maps");
  bench_cmd->add_flag("--allow-large", bench.allow_large,
                      "Permit resolutions above 128");

  std::string cmp_a, cmp_b, cmp_out = "compare";
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "Compare two result directories");
  cmp_cmd->add_option("--a", cmp_a, "First result directory")->required();
  cmp_cmd->add_option("--b", cmp_b, "Reference result directory")->required();
  cmp_cmd->add_option("--out", cmp_out, "Output directory");

  CalibrateOptions cal;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "ReLU fidelity table, depth calibration, parameter selection");
  cal_cmd->add_option("--max-depth", cal.max_depth, "Table depth range");
  cal_cmd->add_option("--delta0", cal.delta0, "Target contraction fidelity");
  cal_cmd->add_option("--cutoff", cal.cutoff, "Strain bound M");
  cal_cmd->add_option("--dim", cal.dimension, "Spatial dimension");
  cal_cmd->add_option("--kappa", cal.kappa, "Material contrast");
  cal_cmd->add_option("--eps0", cal.eps0, "Strain bound for the selection");
  cal_cmd->add_option("--delta-target", cal.delta_target, "Operator error target");
  cal_cmd->add_option("--p", cal.p, "Integrability exponent (> 2)");
  cal_cmd->add_option("--Cp", cal.c_p, "L^p a-priori constant (0: kappa+1)");
  cal_cmd->add_option("--C", cal.c, "Large-input constant");
  cal_cmd->add_option("--C2", cal.c2, "L^2 a-priori constant");
  cal_cmd->add_option("--export-weights", cal.export_weights_depth,
                      "Write the square-net weights for this depth as JSON");
  cal_cmd->add_option("--out", cal.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) return cmd_solve(resolve(solve_flags));
    if (*eff_cmd) return cmd_effective(resolve(eff_flags));
    if (*bench_cmd) {
      bench.contrasts = parse_doubles(bench_contrasts);
      bench.depths = parse_ints(bench_depths);
      bench.resolutions = parse_ints(bench_resolutions);
      bench.magnitudes = parse_doubles(bench_magnitudes);
      bench.studies = parse_names(bench_studies);
      return cmd_bench_sphere(bench);
    }
    if (*cmp_cmd) return cmd_compare(cmp_a, cmp_b, cmp_out);
    if (*cal_cmd) return cmd_calibrate(cal);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
