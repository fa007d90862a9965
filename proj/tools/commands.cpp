#include "commands.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fnohom/field_io.hpp"
#include "fnohom/green.hpp"
#include "fnohom/relu_net.hpp"

namespace fnohom::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_residuals(const std::string& path,
                     const std::vector<double>& residuals,
                     const std::vector<double>& increments) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < residuals.size(); ++k)
    rows.push_back({std::to_string(k + 1), format_double(residuals[k]),
                    format_double(increments[k])});
  write_csv(path, {"iteration", "equilibrium_residual", "normalized_increment"},
            rows);
}

void write_matrix_csv(const std::string& path, const MandelMat<3>& m) {
  std::vector<std::string> header;
  for (int c = 0; c < 6; ++c) header.push_back("c" + std::to_string(c + 1));
  std::vector<std::vector<std::string>> rows;
  for (int r = 0; r < 6; ++r) {
    std::vector<std::string> row;
    for (int c = 0; c < 6; ++c) row.push_back(format_double(m(r, c)));
    rows.push_back(row);
  }
  write_csv(path, header, rows);
}

json summary_base(const RunConfig& cfg, const StiffnessField<3>& field,
                  const std::string& command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["solver"] = solver_to_json(cfg.solver);
  j["dims"] = field.cell.resolution;
  j["lengths_um"] = field.cell.lengths;
  return j;
}

void export_solution_fields(const std::string& dir,
                            const StiffnessField<3>& field,
                            const SolveResult<3>& res,
                            const SolverConfig& solver_cfg) {
  save_field(dir + "/strain.raw", res.strain, mandel_component_names("eps"));
  const Field<3> sigma = stress_field(field, res.strain, solver_cfg);
  save_field(dir + "/stress.raw", sigma, mandel_component_names("sigma"));
  save_field(dir + "/displacement.raw", res.displacement, {"u_1", "u_2", "u_3"});
  const Field<3> vm = von_mises_field(sigma);
  save_field(dir + "/von_mises.raw", vm, {"sigma_ev"});
  save_vtk_scalar(dir + "/von_mises.vtk", vm, "sigma_ev");
}

struct Load0Result {
  double c11 = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
};

Load0Result run_uniaxial(const StiffnessField<3>& field, double magnitude,
                         const SolverConfig& cfg) {
  MandelVec<3> bar = MandelVec<3>::Zero();
  bar[0] = magnitude;
  const SolveResult<3> res = solve(field, bar, cfg);
  const Field<3> sigma = stress_field(field, res.strain, cfg);
  Load0Result out;
  out.c11 = sigma.mean()[0] / magnitude;
  out.iterations = res.iterations;
  out.converged = res.converged;
  out.wall_seconds = res.wall_seconds;
  return out;
}

StiffnessField<3> bench_sphere_field(double contrast, int resolution) {
  MaterialTable<3> table;
  table.entries.push_back({0, IsotropicMaterial{3.0, 0.3}});
  table.entries.push_back({1, IsotropicMaterial{3.0 * contrast, 0.22}});
  return assign_materials(gen_sphere(32.0, 10.0, resolution), table);
}

std::string pct(double x) { return format_double(100.0 * x); }

double rel_err(double value, double reference) {
  return reference != 0.0 ? std::abs(value - reference) / std::abs(reference)
                          : std::abs(value);
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  const StiffnessField<3> field = cfg.build_stiffness();
  const MandelVec<3> bar = cfg.loads.front().direction();
  const SolveResult<3> res = solve(field, bar, cfg.solver);

  ensure_dir(cfg.output_directory);
  write_residuals(cfg.output_directory + "/residual_history.csv",
                  res.residual_history, res.increment_history);

  const Field<3> sigma = stress_field(field, res.strain, cfg.solver);
  const Field<3> vm = von_mises_field(sigma);
  const auto mean_sigma = sigma.mean();

  json j = summary_base(cfg, field, "solve");
  j["load"] = {{"mandel", std::vector<double>(bar.data(), bar.data() + 6)},
               {"magnitude", cfg.loads.front().magnitude}};
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["wall_seconds"] = res.wall_seconds;
  j["alpha_minus"] = res.alpha_minus;
  j["alpha_plus"] = res.alpha_plus;
  j["alpha0"] = res.alpha0;
  j["gamma"] = res.gamma;
  j["mean_stress"] =
      std::vector<double>(mean_sigma.data(), mean_sigma.data() + 6);
  j["von_mises_max"] = vm.data.col(0).maxCoeff();
  write_json(cfg.output_directory + "/summary.json", j);

  if (cfg.write_fields)
    export_solution_fields(cfg.output_directory, field, res, cfg.solver);

  if (!res.converged) {
    std::cerr << "solve: not converged after " << res.iterations
              << " iterations\n";
    return 1;
  }
  std::cout << "solve: " << res.iterations << " iterations, "
            << format_double(res.wall_seconds) << " s\n";
  return 0;
}

int cmd_effective(const RunConfig& cfg) {
  const StiffnessField<3> field = cfg.build_stiffness();
  const double magnitude = cfg.loads.front().magnitude;
  const EffectiveResult<3> eff =
      effective_stiffness(field, magnitude, cfg.solver);

  ensure_dir(cfg.output_directory);
  write_matrix_csv(cfg.output_directory + "/c_eff_mandel.csv", eff.mandel);
  write_matrix_csv(cfg.output_directory + "/c_eff_voigt.csv", eff.voigt);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t l = 0; l < eff.loads.size(); ++l)
    rows.push_back({std::to_string(l), std::to_string(eff.loads[l].iterations),
                    eff.loads[l].converged ? "1" : "0",
                    format_double(eff.loads[l].wall_seconds)});
  write_csv(cfg.output_directory + "/load_iterations.csv",
            {"load", "iterations", "converged", "wall_seconds"}, rows);

  const auto [e_eff, nu_eff] = isotropic_projection<3>(eff.mandel);
  json eng;
  eng["E_eff"] = e_eff;
  eng["nu_eff"] = nu_eff;
  // C44 in the Mandel convention (the shear diagonal, 2G); the engineering
  // matrix is in c_eff_voigt.csv.
  eng["C11"] = eff.mandel(0, 0);
  eng["C12"] = eff.mandel(0, 1);
  eng["C44"] = eff.mandel(3, 3);
  write_json(cfg.output_directory + "/engineering.json", eng);

  json j = summary_base(cfg, field, "effective");
  j["magnitude"] = magnitude;
  j["all_converged"] = eff.all_converged;
  int total_iters = 0;
  double total_wall = 0.0;
  for (const auto& l : eff.loads) {
    total_iters += l.iterations;
    total_wall += l.wall_seconds;
  }
  j["total_iterations"] = total_iters;
  j["wall_seconds"] = total_wall;
  j["engineering"] = eng;
  write_json(cfg.output_directory + "/summary.json", j);

  if (cfg.write_fields && !eff.loads.empty())
    export_solution_fields(cfg.output_directory, field, eff.loads.front(),
                           cfg.solver);

  std::cout << "effective: C11 " << format_double(eff.mandel(0, 0)) << "  C12 "
            << format_double(eff.mandel(0, 1)) << "  C44 "
            << format_double(eff.mandel(3, 3)) << "\n";
  return eff.all_converged ? 0 : 1;
}

int cmd_bench_sphere(const BenchOptions& opts) {
  for (int r : opts.resolutions)
    if (r > 128 && !opts.allow_large)
      throw ConfigError(
          "bench: resolutions above 128 need --allow-large (memory and "
          "runtime grow fast)");

  ensure_dir(opts.out);
  SolverConfig base;
  base.tolerance = opts.tolerance;
  base.max_iterations = opts.max_iterations;
  base.threads = opts.threads;
  base.frequency = frequency_kind_from_string(opts.frequency);
  bool all_ok = true;

  const auto has_study = [&](const char* name) {
    for (const auto& s : opts.studies)
      if (s == name) return true;
    return false;
  };

  if (has_study("contrast")) {
    const int res = opts.resolutions.front();
    std::vector<std::vector<std::string>> eff_rows, iter_rows;
    for (double contrast : opts.contrasts) {
      const StiffnessField<3> field = bench_sphere_field(contrast, res);
      SolverConfig cfg = base;
      const EffectiveResult<3> exact = effective_stiffness(field, 1e-3, cfg);
      all_ok = all_ok && exact.all_converged;
      eff_rows.push_back({format_double(contrast), "exact_fft",
                          format_double(exact.mandel(0, 0)),
                          format_double(exact.mandel(0, 1)),
                          format_double(exact.mandel(3, 3)), "0", "0", "0"});
      iter_rows.push_back({format_double(contrast), "exact_fft",
                           std::to_string(exact.loads[0].iterations),
                           format_double(exact.loads[0].wall_seconds)});
      for (int depth : opts.depths) {
        SolverConfig ncfg = base;
        ncfg.mode = SolveMode::Neural;
        ncfg.depth = depth;
        const EffectiveResult<3> neural =
            effective_stiffness(field, 1e-3, ncfg);
        all_ok = all_ok && neural.all_converged;
        const std::string solver = "neural_m" + std::to_string(depth);
        eff_rows.push_back(
            {format_double(contrast), solver, format_double(neural.mandel(0, 0)),
             format_double(neural.mandel(0, 1)), format_double(neural.mandel(3, 3)),
             pct(rel_err(neural.mandel(0, 0), exact.mandel(0, 0))),
             pct(rel_err(neural.mandel(0, 1), exact.mandel(0, 1))),
             pct(rel_err(neural.mandel(3, 3), exact.mandel(3, 3)))});
        iter_rows.push_back({format_double(contrast), solver,
                             std::to_string(neural.loads[0].iterations),
                             format_double(neural.loads[0].wall_seconds)});
      }
    }
    write_csv(opts.out + "/contrast_effective.csv",
              {"contrast", "solver", "C11", "C12", "C44", "err_C11_pct",
               "err_C12_pct", "err_C44_pct"},
              eff_rows);
    write_csv(opts.out + "/contrast_iterations.csv",
              {"contrast", "solver", "iterations", "wall_seconds"}, iter_rows);
  }

  if (has_study("resolution")) {
    std::vector<std::vector<std::string>> rows;
    for (int res : opts.resolutions) {
      const StiffnessField<3> field =
          bench_sphere_field(opts.resolution_contrast, res);
      const Load0Result exact = run_uniaxial(field, 1e-3, base);
      all_ok = all_ok && exact.converged;
      rows.push_back({std::to_string(res), "exact_fft",
                      format_double(exact.c11), "0",
                      std::to_string(exact.iterations),
                      format_double(exact.wall_seconds)});
      for (int depth : opts.depths) {
        SolverConfig ncfg = base;
        ncfg.mode = SolveMode::Neural;
        ncfg.depth = depth;
        const Load0Result neural = run_uniaxial(field, 1e-3, ncfg);
        all_ok = all_ok && neural.converged;
        rows.push_back({std::to_string(res), "neural_m" + std::to_string(depth),
                        format_double(neural.c11),
                        pct(rel_err(neural.c11, exact.c11)),
                        std::to_string(neural.iterations),
                        format_double(neural.wall_seconds)});
      }
    }
    write_csv(opts.out + "/resolution_c11.csv",
              {"resolution", "solver", "C11", "err_C11_pct", "iterations",
               "wall_seconds"},
              rows);
  }

  if (has_study("magnitude")) {
    const int res = opts.resolutions.front();
    const StiffnessField<3> field =
        bench_sphere_field(opts.magnitude_contrast, res);
    std::vector<std::vector<std::string>> rows;
    for (double mag : opts.magnitudes) {
      const Load0Result exact = run_uniaxial(field, mag, base);
      all_ok = all_ok && exact.converged;
      rows.push_back({pct(mag), "exact_fft", format_double(exact.c11), "0"});
      for (int depth : opts.depths) {
        SolverConfig ncfg = base;
        ncfg.mode = SolveMode::Neural;
        ncfg.depth = depth;
        const Load0Result neural = run_uniaxial(field, mag, ncfg);
        all_ok = all_ok && neural.converged;
        rows.push_back({pct(mag), "neural_m" + std::to_string(depth),
                        format_double(neural.c11),
                        pct(rel_err(neural.c11, exact.c11))});
      }
    }
    write_csv(opts.out + "/magnitude_c11.csv",
              {"magnitude_pct", "solver", "C11", "err_C11_pct"}, rows);
  }

  if (opts.write_fields) {
    // Equivalent-stress maps for the first study point, exact vs neural.
    const int res = opts.resolutions.front();
    const StiffnessField<3> field =
        bench_sphere_field(opts.contrasts.front(), res);
    MandelVec<3> bar = MandelVec<3>::Zero();
    bar[0] = 1e-3;
    const SolveResult<3> exact = solve(field, bar, base);
    const Field<3> vm_exact =
        von_mises_field(stress_field(field, exact.strain, base));
    save_field(opts.out + "/von_mises_exact.raw", vm_exact, {"sigma_ev"});
    save_vtk_scalar(opts.out + "/von_mises_exact.vtk", vm_exact, "sigma_ev");
    for (int depth : opts.depths) {
      SolverConfig ncfg = base;
      ncfg.mode = SolveMode::Neural;
      ncfg.depth = depth;
      const SolveResult<3> neural = solve(field, bar, ncfg);
      const Field<3> vm =
          von_mises_field(stress_field(field, neural.strain, ncfg));
      Field<3> diff = vm;
      diff.data = (vm.data - vm_exact.data).abs();
      const std::string tag = "_m" + std::to_string(depth);
      save_field(opts.out + "/von_mises" + tag + ".raw", vm, {"sigma_ev"});
      save_field(opts.out + "/von_mises_abs_error" + tag + ".raw", diff,
                 {"sigma_ev_abs_error"});
      save_vtk_scalar(opts.out + "/von_mises_abs_error" + tag + ".vtk", diff,
                      "sigma_ev_abs_error");
    }
  }

  std::cout << "bench: tables written to " << opts.out << "\n";
  return all_ok ? 0 : 1;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& out) {
  json result;
  result["schema_version"] = kSchemaVersion;
  result["a"] = dir_a;
  result["b"] = dir_b;

  const json sa = load_json(dir_a + "/summary.json");
  const json sb = load_json(dir_b + "/summary.json");
  if (sa.at("dims") != sb.at("dims"))
    throw ConfigError("compare: grids do not match");

  if (sa.contains("engineering") && sb.contains("engineering")) {
    json errs;
    for (const char* key : {"C11", "C12", "C44", "E_eff", "nu_eff"}) {
      const double a = sa.at("engineering").at(key).get<double>();
      const double b = sb.at("engineering").at(key).get<double>();
      errs[std::string(key) + "_rel_err_pct"] = 100.0 * rel_err(a, b);
    }
    result["effective_errors"] = errs;
  }
  if (sa.contains("mean_stress") && sb.contains("mean_stress")) {
    const auto a = sa.at("mean_stress").get<std::vector<double>>();
    const auto b = sb.at("mean_stress").get<std::vector<double>>();
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 6; ++c) {
      num += (a[c] - b[c]) * (a[c] - b[c]);
      den += b[c] * b[c];
    }
    result["mean_stress_rel_err"] =
        den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }

  ensure_dir(out);
  const bool have_fields = fs::exists(dir_a + "/strain.raw") &&
                           fs::exists(dir_b + "/strain.raw");
  if (have_fields) {
    const Field<3> ea = load_field(dir_a + "/strain.raw");
    const Field<3> eb = load_field(dir_b + "/strain.raw");
    if (!(ea.cell == eb.cell)) throw ConfigError("compare: grids do not match");
    result["strain_l2_rel_err"] = l2_distance(ea, eb) / l2_norm(eb);
    const Field<3> va = load_field(dir_a + "/von_mises.raw");
    const Field<3> vb = load_field(dir_b + "/von_mises.raw");
    Field<3> diff = va;
    diff.data = (va.data - vb.data).abs();
    result["von_mises_max_abs_err"] = diff.data.col(0).maxCoeff();
    save_field(out + "/von_mises_abs_error.raw", diff, {"sigma_ev_abs_error"});
  }

  write_json(out + "/compare.json", result);
  std::cout << "compare: report written to " << out << "/compare.json\n";
  return 0;
}

int cmd_calibrate(const CalibrateOptions& opts) {
  ensure_dir(opts.out);
  std::vector<std::vector<std::string>> rows;
  for (int m = 1; m <= opts.max_depth; ++m) {
    const FidelityReport rep = measure_fidelity(SquareNet(m));
    rows.push_back({std::to_string(m), format_double(rep.sup_error),
                    format_double(rep.deriv_error)});
  }
  write_csv(opts.out + "/fidelity_table.csv",
            {"depth", "sup_error", "deriv_error"}, rows);

  json j;
  j["schema_version"] = kSchemaVersion;
  if (opts.delta0 > 0.0) {
    const int depth =
        calibrate_depth(opts.delta0, opts.cutoff, opts.dimension);
    j["calibrated_depth"] = depth;
    std::cout << "calibrate: depth " << depth << " reaches delta0 "
              << format_double(opts.delta0) << "\n";
  }
  if (opts.kappa > 0.0) {
    ParameterSelection sel;
    sel.kappa = opts.kappa;
    sel.eps0 = opts.eps0;
    sel.delta_target = opts.delta_target;
    sel.p = opts.p;
    sel.c_p = opts.c_p;
    sel.c = opts.c;
    sel.c2 = opts.c2;
    const SelectedParameters out = select_parameters(sel);
    j["selection"] = {{"layer_count", out.layer_count},
                      {"delta", out.delta},
                      {"cutoff", out.cutoff},
                      {"gamma_theta", out.gamma_theta},
                      {"note", out.note}};
  }
  if (opts.export_weights_depth > 0) {
    const std::string path = opts.out + "/square_net_weights_m" +
                             std::to_string(opts.export_weights_depth) +
                             ".json";
    std::ofstream f(path);
    f << weights_to_json(square_net_weights(opts.export_weights_depth));
    j["weights_file"] = path;
  }
  write_json(opts.out + "/calibrate.json", j);
  return 0;
}

}  // namespace fnohom::cli
