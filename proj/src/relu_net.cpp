#include "fnohom/relu_net.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>

namespace fnohom {

FidelityReport measure_fidelity(const SquareNet& net) {
  // Grid step 2^-g with g >= depth+1, so all breakpoints k/2^m and their
  // midpoints (2k+1)/2^(m+1) are grid points.
  const int g = std::min(std::max(20, net.depth + 1), 24);
  const std::int64_t half = std::int64_t{1} << g;
  const double step = 1.0 / static_cast<double>(half);

  double sup = 0.0;
  double dsup = 0.0;
  double prev_q = net(-1.0);
  double prev_x = -1.0;
  sup = std::abs(prev_q - 1.0);
  for (std::int64_t t = -half + 1; t <= half; ++t) {
    const double x = static_cast<double>(t) * step;
    const double q = net(x);
    sup = std::max(sup, std::abs(q - x * x));
    const double slope = (q - prev_q) / step;
    const double xmid = 0.5 * (x + prev_x);
    dsup = std::max(dsup, std::abs(slope - 2.0 * xmid));
    prev_q = q;
    prev_x = x;
  }
  return {sup, dsup};
}

int calibrate_depth(double delta0, double cutoff, int dimension,
                    int max_depth) {
  if (!(delta0 > 0.0))
    throw std::invalid_argument("calibrate_depth: delta0 must be positive");
  if (!(cutoff >= 1.0))
    throw std::invalid_argument("calibrate_depth: cutoff must be >= 1");
  const double threshold =
      delta0 / (cutoff * dimension * (dimension + 1));
  for (int m = 1; m <= max_depth; ++m) {
    if (measure_fidelity(SquareNet(m)).w1_inf() <= threshold) return m;
  }
  throw std::runtime_error(
      "calibrate_depth: threshold unreachable within max_depth");
}

DenseReluNet square_net_weights(int depth) {
  if (depth < 1)
    throw std::invalid_argument("square_net_weights: depth must be >= 1");
  DenseReluNet net;

  // Input layer: (σ(x), σ(−x)) so that |x| = h1 + h2.
  {
    DenseLayer l;
    l.weight.resize(2, 1);
    l.weight << 1.0, -1.0;
    l.bias = Eigen::VectorXd::Zero(2);
    net.layers.push_back(l);
  }

  // Hidden layer k exposes (σ(t), σ(t−½), σ(t−1), σ(s)) where t is the
  // current tent iterate and s the running partial sum (s stays >= 0, so it
  // passes through the ReLU unchanged). Both t and s are affine in the
  // previous layer's outputs:
  //   from layer 0:   t = s = h1 + h2
  //   from layer k:   t = 2h1 − 4h2 + 2h3,  s = h4 − t/4^k
  double pow4 = 1.0;
  for (int k = 1; k <= depth; ++k) {
    DenseLayer l;
    const int prev = (k == 1) ? 2 : 4;
    l.weight = Eigen::MatrixXd::Zero(4, prev);
    l.bias.resize(4);
    l.bias << 0.0, -0.5, -1.0, 0.0;
    Eigen::RowVectorXd t_row(prev), s_row(prev);
    if (k == 1) {
      t_row << 1.0, 1.0;
      s_row << 1.0, 1.0;
    } else {
      t_row << 2.0, -4.0, 2.0, 0.0;
      s_row << -2.0 * pow4, 4.0 * pow4, -2.0 * pow4, 1.0;
    }
    l.weight.row(0) = t_row;
    l.weight.row(1) = t_row;
    l.weight.row(2) = t_row;
    l.weight.row(3) = s_row;
    net.layers.push_back(l);
    pow4 *= 0.25;
  }

  // Affine output: q = s_depth = h4 − (2h1 − 4h2 + 2h3)/4^depth.
  {
    DenseLayer l;
    l.weight.resize(1, 4);
    l.weight << -2.0 * pow4, 4.0 * pow4, -2.0 * pow4, 1.0;
    l.bias = Eigen::VectorXd::Zero(1);
    net.layers.push_back(l);
  }
  return net;
}

double dense_eval(const DenseReluNet& net, double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const DenseLayer& l = net.layers[li];
    Eigen::VectorXd z(l.weight.rows());
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      double acc = l.bias[r];
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
        acc += l.weight(r, c) * v[c];
      z[r] = acc;
    }
    if (li + 1 < net.layers.size())
      for (Eigen::Index r = 0; r < z.size(); ++r) z[r] = relu(z[r]);
    v = z;
  }
  return v[0];
}

std::string weights_to_json(const DenseReluNet& net) {
  nlohmann::json j;
  j["activation"] = "relu";
  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(net.layers.front().weight.cols()));
  for (const auto& l : net.layers)
    sizes.push_back(static_cast<int>(l.weight.rows()));
  j["layer_sizes"] = sizes;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : net.layers) {
    nlohmann::json jl;
    std::vector<std::vector<double>> w(l.weight.rows());
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
        w[r].push_back(l.weight(r, c));
    jl["weights"] = w;
    jl["bias"] = std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size());
    j["layers"].push_back(jl);
  }
  return j.dump(2);
}

}  // namespace fnohom
