/**
 * @brief Explicit ReLU networks for the learned double contraction.
 *
 * The building blocks, bottom up:
 *  - tent g: the hat function 2σ(x) − 4σ(x−½) + 2σ(x−1), whose k-fold
 *    composition g_k produces 2^(k−1) sawteeth on [0,1];
 *  - SquareNet q_𝔪(x) = |x| − Σ_{k≤𝔪} g_k(|x|)/4^k, the piecewise-linear
 *    interpolant of x² on the dyadic grid k/2^𝔪 over [−1,1]; q_𝔪(0) = 0,
 *    sup error 2^(−2𝔪−2), derivative sup error 2^(−𝔪);
 *  - ridge r: the clamp of a real to [−M, M] (a depth-two ReLU network);
 *  - mul_eval m(a,b) = 2M²[q((a+b)/2M) − q(a/2M) − q(b/2M)], the learned
 *    product of two reals in [−M, M] via the polarization identity;
 *  - tau_eval: the learned Mandel matrix-vector product
 *        ξ_i = Σ_j m(T_ij, r(ε_j)),
 *    i.e. the double contraction T : ε with strains clamped first.
 *
 * Networks are evaluated functionally (iterated tent composition); a
 * weight-matrix form of q_𝔪 is available for export and verification and
 * evaluates bit-identically.
 */

#ifndef FNOHOM_RELU_NET_HPP
#define FNOHOM_RELU_NET_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnohom/mandel.hpp"

namespace fnohom {

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// Hat function: 2x on [0,½], 2(1−x) on [½,1], 0 outside.
inline double tent(double x) {
  return 2.0 * relu(x) - 4.0 * relu(x - 0.5) + 2.0 * relu(x - 1.0);
}

namespace detail {
// Tent restricted to [0,1]; bit-identical to the ReLU combination there.
inline double tent01(double x) { return x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x; }
}  // namespace detail

/// The square approximant q_𝔪 on [−1, 1].
struct SquareNet {
  int depth;  // 𝔪 ≥ 1, number of tent compositions

  explicit SquareNet(int m) : depth(m) {
    if (m < 1) throw std::invalid_argument("SquareNet: depth must be >= 1");
  }

  double operator()(double x) const {
    if (std::abs(x) > 1.0 + 1e-12)
      throw std::invalid_argument("SquareNet: |x| must be <= 1");
    const double a = relu(x) + relu(-x);  // |x|
    double t = a;
    double q = a;
    double pow4 = 1.0;
    for (int k = 1; k <= depth; ++k) {
      t = detail::tent01(t);
      pow4 *= 0.25;
      q -= t * pow4;
    }
    return q;
  }
};

/// Clamp to [−cutoff, cutoff]; equals σ(x+M) − σ(x−M) − M as a ReLU net.
inline double ridge(double x, double cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("ridge: cutoff must be > 0");
  return std::clamp(x, -cutoff, cutoff);
}

/**
 * The square net's natural piecewise-linear extension to all of ℝ: the
 * first tent vanishes once |x| exceeds 1, so the net evaluates to exactly
 * |x| there, and coincides bit for bit with q_𝔪 on [−1, 1]. Solvers feed
 * overshooting strains through this extension rather than clamping them,
 * which degrades gracefully (error per product stays O(|a|·|b|)).
 */
inline double square_extended(const SquareNet& net, double x) {
  const double a = relu(x) + relu(-x);  // |x|
  double t = a;
  double q = a;
  double pow4 = 1.0;
  for (int k = 1; k <= net.depth; ++k) {
    t = tent(t);
    pow4 *= 0.25;
    q -= t * pow4;
  }
  return q;
}

/// Learned product of a, b ∈ [−M, M] via the polarization identity.
/// The two single-argument terms are summed first, keeping the evaluation
/// exactly symmetric in (a, b).
inline double mul_eval(const SquareNet& net, double a, double b,
                       double cutoff) {
  const double m = cutoff;
  if (std::abs(a) > m * (1.0 + 1e-12) || std::abs(b) > m * (1.0 + 1e-12))
    throw std::invalid_argument("mul_eval: arguments must lie in [-M, M]");
  const double inv = 1.0 / (2.0 * m);
  return 2.0 * m * m * (net((a + b) * inv) - (net(a * inv) + net(b * inv)));
}

/// The learned double contraction T : ε.
struct ContractionNet {
  SquareNet square;
  double cutoff;  // M ≥ 1, strain bound
  int dimension;  // d

  ContractionNet(int depth, double m, int d)
      : square(depth), cutoff(m), dimension(d) {
    if (!(m >= 1.0))
      throw std::invalid_argument("ContractionNet: cutoff must be >= 1");
    if (d != 2 && d != 3)
      throw std::invalid_argument("ContractionNet: dimension must be 2 or 3");
  }
};

template <int D>
MandelVec<D> tau_eval(const ContractionNet& net, const MandelMat<D>& t,
                      const MandelVec<D>& e) {
  constexpr int K = mandel_size(D);
  if (net.dimension != D)
    throw std::invalid_argument("tau_eval: dimension mismatch");
  const double m = net.cutoff;
  if (t.cwiseAbs().maxCoeff() > m * (1.0 + 1e-12))
    throw std::invalid_argument("tau_eval: |T_ij| must not exceed M");
  MandelVec<D> clamped;
  for (int j = 0; j < K; ++j) clamped[j] = ridge(e[j], m);
  MandelVec<D> out;
  for (int i = 0; i < K; ++i) {
    double acc = 0.0;
    for (int j = 0; j < K; ++j)
      acc += mul_eval(net.square, t(i, j), clamped[j], m);
    out[i] = acc;
  }
  return out;
}

/// Measured W^{1,∞} fidelity of q_𝔪 against x² on [−1, 1].
struct FidelityReport {
  double sup_error;    // sup |q_𝔪(x) − x²|
  double deriv_error;  // ess-sup |q_𝔪'(x) − 2x|, midpoint-sampled
  double w1_inf() const { return std::max(sup_error, deriv_error); }
};

/**
 * Dense-grid measurement on a dyadic grid fine enough to contain every
 * breakpoint and breakpoint midpoint of q_𝔪 (so the sup is attained
 * exactly). The derivative is the forward difference between neighboring
 * grid points, compared against 2x at the interval midpoint.
 */
FidelityReport measure_fidelity(const SquareNet& net);

/**
 * Smallest depth 𝔪 whose measured W^{1,∞} fidelity satisfies
 * δ(𝔪) ≤ delta0 / (M d (d+1)).
 */
int calibrate_depth(double delta0, double cutoff, int dimension,
                    int max_depth = 22);

/// Plain dense ReLU network (ReLU after every layer except the last).
struct DenseLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};
struct DenseReluNet {
  std::vector<DenseLayer> layers;
};

/// Weight-matrix form of q_𝔪; evaluates bit-identically to SquareNet.
DenseReluNet square_net_weights(int depth);

double dense_eval(const DenseReluNet& net, double x);

/// JSON export (layer sizes, weights, biases) for external verification.
std::string weights_to_json(const DenseReluNet& net);

}  // namespace fnohom

#endif  // FNOHOM_RELU_NET_HPP
