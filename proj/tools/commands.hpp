#ifndef FNOHOM_COMMANDS_HPP
#define FNOHOM_COMMANDS_HPP

#include <string>
#include <vector>

#include "run_config.hpp"

namespace fnohom::cli {

int cmd_solve(const RunConfig& cfg);
int cmd_effective(const RunConfig& cfg);

struct BenchOptions {
  std::vector<double> contrasts = {12.0, 24.0, 48.0, 96.0};
  std::vector<int> depths = {7, 9, 11};
  std::vector<int> resolutions = {32};
  std::vector<double> magnitudes = {0.001, 0.01, 0.5, 1.0};
  std::vector<std::string> studies = {"contrast"};
  double resolution_contrast = 24.0;
  double magnitude_contrast = 12.0;
  double tolerance = 1e-5;
  int max_iterations = 100000;
  int threads = 0;
  std::string frequency = "rotated_staggered";
  std::string out = "bench";
  bool write_fields = false;
  bool allow_large = false;  // opt-in for resolutions above 128
};

int cmd_bench_sphere(const BenchOptions& opts);

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& out);

struct CalibrateOptions {
  int max_depth = 12;
  double delta0 = 0.0;  // > 0: report the calibrated depth
  double cutoff = 1.0;
  int dimension = 3;
  double kappa = 0.0;  // > 0: run the layer-count/fidelity/cutoff selection
  double eps0 = 1.0;
  double delta_target = 0.01;
  double p = 2.1;
  double c_p = 0.0;
  double c = 2.0;
  double c2 = 1.0;
  int export_weights_depth = 0;  // > 0: write the square net weights as JSON
  std::string out = "calibrate";
};

int cmd_calibrate(const CalibrateOptions& opts);

}  // namespace fnohom::cli

#endif  // FNOHOM_COMMANDS_HPP
