/**
 * @brief Fixed-point solvers for the periodic cell problem.
 *
 * The update is
 *
 *     ε ← ε̄ − Γ : τ(ε),
 *
 * where the polarization is τ = (ℂ − ℂ⁰):ε / α₀ with reference medium
 * ℂ⁰ = α₀·I. In exact mode the double contraction is evaluated as the
 * Mandel matrix-vector product; in neural mode it is replaced by the ReLU
 * network τ_θ((ℂ − ℂ⁰)/α₀, ε), turning every sweep into one layer of a
 * recurrent Fourier neural operator. Γ zeroes the mean mode, so every
 * iterate has mean exactly ε̄.
 *
 * With α₀ = (α₋ + α₊)/2 the exact update contracts with rate
 * γ = (α₊ − α₋)/(α₊ + α₋); the fixed point itself does not depend on α₀.
 *
 * Termination measures the distance to discrete equilibrium: the projected
 * stress norm relative to the mean stress,
 *
 *     ‖Γ : σ(εᵏ)‖_{L²} / ‖⟨σ(εᵏ)⟩‖ ≤ tol,
 *
 * which for compatible iterates equals α₀‖εᵏ⁺¹ − εᵏ‖_{L²}/‖⟨σ(εᵏ)⟩‖ and so
 * costs nothing beyond the sweep itself. The plain normalized strain
 * increment is recorded alongside for diagnostics.
 */

#ifndef FNOHOM_SOLVER_HPP
#define FNOHOM_SOLVER_HPP

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fnohom/fft.hpp"
#include "fnohom/green.hpp"
#include "fnohom/material.hpp"
#include "fnohom/relu_net.hpp"

namespace fnohom {

enum class SolveMode { ExactFft, Neural };

inline std::string to_string(SolveMode m) {
  return m == SolveMode::ExactFft ? "exact_fft" : "neural";
}

inline SolveMode solve_mode_from_string(const std::string& s) {
  if (s == "exact_fft") return SolveMode::ExactFft;
  if (s == "neural") return SolveMode::Neural;
  throw std::invalid_argument("unknown solver mode: " + s);
}

struct SolverConfig {
  double alpha_minus = 0.0;  // <= 0: derive from the stiffness field
  double alpha_plus = 0.0;
  double alpha0 = 0.0;       // <= 0: (alpha_minus + alpha_plus) / 2
  double tolerance = 1e-5;
  int max_iterations = 100000;
  SolveMode mode = SolveMode::ExactFft;
  int depth = 11;      // neural: ReLU depth 𝔪
  double cutoff = 1.0;  // neural: strain bound M
  std::optional<int> layer_count;  // fixed K: run exactly K+1 sweeps
  FrequencyKind frequency = FrequencyKind::RotatedStaggered;
  int threads = 0;
};

template <int D>
struct SolveResult {
  Field<D> strain;        // mean equals the prescribed macroscopic strain
  Field<D> displacement;  // mean-free, strain = ε̄ + ∇ˢ(displacement)
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;   // equilibrium residual per sweep
  std::vector<double> increment_history;  // ‖Δε‖_{L²}/‖ε̄‖ per sweep
  double wall_seconds = 0.0;
  double alpha_minus = 0.0, alpha_plus = 0.0, alpha0 = 0.0;
  double gamma = 0.0;  // contraction constant γ₀ for the resolved α₀
};

/// α₀ = (α₋ + α₊)/2 and γ = (α₊ − α₋)/(α₊ + α₋) ≡ 1 − 2/(κ+1).
inline std::pair<double, double> reference_constants(double alpha_minus,
                                                     double alpha_plus) {
  if (!(alpha_minus > 0.0) || !(alpha_minus <= alpha_plus))
    throw std::invalid_argument(
        "reference_constants: need 0 < alpha_minus <= alpha_plus");
  const double a0 = 0.5 * (alpha_minus + alpha_plus);
  const double gamma = (alpha_plus - alpha_minus) / (alpha_plus + alpha_minus);
  return {a0, gamma};
}

template <int D>
double normalized_increment(const Field<D>& next, const Field<D>& prev,
                            const MandelVec<D>& eps_bar) {
  const double inc = l2_distance(next, prev);
  const double bar = eps_bar.norm();
  return bar > 0.0 ? inc / bar : inc;
}

/// True iff ‖ε_next − ε_prev‖_{L²} / ‖ε̄‖ ≤ tol (absolute when ε̄ = 0).
template <int D>
bool convergence_check(const Field<D>& next, const Field<D>& prev,
                       const MandelVec<D>& eps_bar, double tol) {
  return normalized_increment(next, prev, eps_bar) <= tol;
}

/// Neural constitutive law σ_θ(ε; ℂ) = α₀ τ_θ((ℂ−ℂ⁰)/α₀, ε) + ℂ⁰:ε.
template <int D>
MandelVec<D> neural_stress(const ContractionNet& net, const MandelVec<D>& e,
                           const MandelMat<D>& c_voxel, double alpha0) {
  const MandelMat<D> t0 =
      (c_voxel - alpha0 * MandelMat<D>::Identity()) / alpha0;
  return alpha0 * tau_eval<D>(net, t0, e) + alpha0 * e;
}

/**
 * One configured scheme: resolved reference constants, per-material
 * polarization kernels, and the Γ multiplier, with reusable spectral
 * buffers. The stiffness field must outlive the scheme.
 */
template <int D>
class BasicScheme {
 public:
  static constexpr int K = mandel_size(D);

  BasicScheme(const StiffnessField<D>& stiffness, const SolverConfig& cfg)
      : stiffness_(stiffness),
        cfg_(cfg),
        gamma_op_(FrequencyMap<D>(cfg.frequency, stiffness.cell)),
        spec_(stiffness.cell, K) {
    const auto [lo, hi] = stiffness.field_bounds();
    alpha_minus_ = cfg.alpha_minus > 0.0 ? cfg.alpha_minus : lo;
    alpha_plus_ = cfg.alpha_plus > 0.0 ? cfg.alpha_plus : hi;
    if (!(alpha_minus_ > 0.0) || alpha_minus_ > alpha_plus_)
      throw std::invalid_argument("solver: invalid stiffness bounds");
    check_membership(lo, hi);
    alpha0_ = cfg.alpha0 > 0.0
                  ? cfg.alpha0
                  : reference_constants(alpha_minus_, alpha_plus_).first;
    gamma0_ = std::max(std::abs(alpha_plus_ - alpha0_),
                       std::abs(alpha_minus_ - alpha0_)) /
              alpha0_;

    for (const auto& c : stiffness.materials)
      t0_.push_back((c - alpha0_ * MandelMat<D>::Identity()) / alpha0_);

    if (cfg.mode == SolveMode::Neural) {
      if (!(gamma0_ < 1.0))
        throw std::invalid_argument(
            "solver: neural mode requires gamma0 < 1 (got " +
            std::to_string(gamma0_) + ")");
      net_.emplace(cfg.depth, cfg.cutoff, D);
      inv2m_ = 1.0 / (2.0 * cfg.cutoff);
      two_m_sq_ = 2.0 * cfg.cutoff * cfg.cutoff;
      for (const auto& t : t0_) {
        if (t.cwiseAbs().maxCoeff() > cfg.cutoff * (1.0 + 1e-12))
          throw std::invalid_argument(
              "solver: |T0_ij| exceeds the neural cutoff M");
        MandelMat<D> qt;
        for (int i = 0; i < K; ++i)
          for (int j = 0; j < K; ++j)
            qt(i, j) = square_extended(net_->square, t(i, j) * inv2m_);
        qt0_.push_back(qt);
      }
    }
  }

  double alpha_minus() const { return alpha_minus_; }
  double alpha_plus() const { return alpha_plus_; }
  double alpha0() const { return alpha0_; }
  double gamma0() const { return gamma0_; }
  const GammaMultiplier<D>& gamma_op() const { return gamma_op_; }

  /// ⟨σ(εᵏ)⟩ = α₀(⟨τ(εᵏ)⟩ + ε̄) of the strain the last step consumed.
  MandelVec<D> last_mean_stress(const MandelVec<D>& eps_bar) const {
    return alpha0_ * (mean_polarization_ + eps_bar);
  }

  /// τ(ε): exact (ℂ−ℂ⁰):ε/α₀ or neural τ_θ((ℂ−ℂ⁰)/α₀, ε), per voxel.
  void polarization(const Field<D>& eps, Field<D>& tau) const {
    parallel_for(
        eps.voxels(),
        [&](std::int64_t lo, std::int64_t hi) {
          for (std::int64_t v = lo; v < hi; ++v)
            write_polarization(eps, v, [&](int c, double val) {
              tau.data(v, c) = val;
            });
        },
        cfg_.threads);
  }

  /// out = ε̄ − Γ : τ(eps). Mean of out equals ε̄ exactly.
  void step(const Field<D>& eps, const MandelVec<D>& eps_bar, Field<D>& out) {
    polarization_to_spectrum(eps);
    for (int c = 0; c < K; ++c)
      mean_polarization_[c] = spec_.data(0, c).real();
    gamma_op_.apply_spectrum(spec_, nullptr, cfg_.threads);
    inverse_spectrum();
    parallel_for(
        eps.voxels(),
        [&](std::int64_t lo, std::int64_t hi) {
          for (std::int64_t v = lo; v < hi; ++v)
            for (int c = 0; c < K; ++c)
              out.data(v, c) = eps_bar[c] - spec_.data(v, c).real();
        },
        cfg_.threads);
  }

  /// Mean-free displacement u with ∇ˢu = −Γ:τ(eps).
  Field<D> displacement_from(const Field<D>& eps) {
    polarization_to_spectrum(eps);
    SpectrumField<D> disp(stiffness_.cell, D);
    gamma_op_.apply_spectrum(spec_, &disp, cfg_.threads);
    return fft_inverse(disp, cfg_.threads);
  }

  /// Constitutive stress along the scheme's own path (exact or neural).
  void stress(const Field<D>& eps, Field<D>& sigma) const {
    parallel_for(
        eps.voxels(),
        [&](std::int64_t lo, std::int64_t hi) {
          for (std::int64_t v = lo; v < hi; ++v) {
            const auto e = eps.template at<K>(v);
            if (cfg_.mode == SolveMode::ExactFft) {
              const MandelVec<D> s = stiffness_.at(v) * e;
              for (int c = 0; c < K; ++c) sigma.data(v, c) = s[c];
            } else {
              write_polarization(eps, v, [&](int c, double val) {
                sigma.data(v, c) = alpha0_ * val + alpha0_ * e[c];
              });
            }
          }
        },
        cfg_.threads);
  }

 private:
  void check_membership(double field_lo, double field_hi) const {
    const double slack = 1e-9 * (1.0 + alpha_plus_);
    if (field_lo >= alpha_minus_ - slack && field_hi <= alpha_plus_ + slack)
      return;
    // Identify the offending materials and where they sit.
    std::ostringstream msg;
    msg << "solver: stiffness field leaves M(alpha-, alpha+):";
    for (std::size_t m = 0; m < stiffness_.materials.size(); ++m) {
      const auto [lo, hi] = spectral_bounds<D>(stiffness_.materials[m]);
      if (lo >= alpha_minus_ - slack && hi <= alpha_plus_ + slack) continue;
      std::int64_t count = 0;
      std::int64_t first = -1;
      for (std::int64_t v = 0;
           v < static_cast<std::int64_t>(stiffness_.slots.size()); ++v) {
        if (stiffness_.slots[v] == m) {
          if (first < 0) first = v;
          ++count;
        }
      }
      if (count == 0) continue;
      msg << " material slot " << m << " (eigs [" << lo << ", " << hi
          << "], " << count << " voxels, first voxel " << first << ");";
    }
    throw std::invalid_argument(msg.str());
  }

  // Polarization of voxel v, emitted component-wise through `sink`.
  template <typename Sink>
  void write_polarization(const Field<D>& eps, std::int64_t v,
                          Sink&& sink) const {
    const auto e = eps.template at<K>(v);
    const int slot = stiffness_.slots[v];
    if (cfg_.mode == SolveMode::ExactFft) {
      const MandelVec<D> tau = t0_[slot] * e;
      for (int c = 0; c < K; ++c) sink(c, tau[c]);
    } else {
      // Learned contraction via the polarization identity. Strains feed the
      // square net's natural extension, which coincides with the certified
      // construction whenever |ε_j| ≤ M and degrades gracefully beyond.
      const SquareNet& q = net_->square;
      double qr[K];
      for (int j = 0; j < K; ++j) qr[j] = square_extended(q, e[j] * inv2m_);
      const MandelMat<D>& t = t0_[slot];
      const MandelMat<D>& qt = qt0_[slot];
      for (int i = 0; i < K; ++i) {
        double acc = 0.0;
        for (int j = 0; j < K; ++j) {
          const double qs = square_extended(q, (t(i, j) + e[j]) * inv2m_);
          acc += two_m_sq_ * (qs - (qt(i, j) + qr[j]));
        }
        sink(i, acc);
      }
    }
  }

  void polarization_to_spectrum(const Field<D>& eps) {
    parallel_for(
        eps.voxels(),
        [&](std::int64_t lo, std::int64_t hi) {
          for (std::int64_t v = lo; v < hi; ++v)
            write_polarization(eps, v, [&](int c, double val) {
              spec_.data(v, c) = std::complex<double>(val, 0.0);
            });
        },
        cfg_.threads);
    const double scale = 1.0 / static_cast<double>(eps.voxels());
    parallel_for(
        K,
        [&](std::int64_t c0, std::int64_t c1) {
          for (std::int64_t c = c0; c < c1; ++c) {
            detail::fft_c2c(D, stiffness_.cell.resolution.data(),
                            spec_.data.col(c).data(), true);
            spec_.data.col(c) *= scale;
          }
        },
        cfg_.threads);
  }

  void inverse_spectrum() {
    parallel_for(
        K,
        [&](std::int64_t c0, std::int64_t c1) {
          for (std::int64_t c = c0; c < c1; ++c)
            detail::fft_c2c(D, stiffness_.cell.resolution.data(),
                            spec_.data.col(c).data(), false);
        },
        cfg_.threads);
  }

  const StiffnessField<D>& stiffness_;
  SolverConfig cfg_;
  GammaMultiplier<D> gamma_op_;
  SpectrumField<D> spec_;
  double alpha_minus_ = 0.0, alpha_plus_ = 0.0, alpha0_ = 0.0, gamma0_ = 0.0;
  MandelVec<D> mean_polarization_ = MandelVec<D>::Zero();
  std::vector<MandelMat<D>> t0_;
  std::optional<ContractionNet> net_;
  std::vector<MandelMat<D>> qt0_;
  double inv2m_ = 0.0, two_m_sq_ = 0.0;
};

/// Single sweep of the scheme, from scratch (test and inspection entry).
template <int D>
Field<D> basic_scheme_step(const Field<D>& eps, const MandelVec<D>& eps_bar,
                           const StiffnessField<D>& stiffness,
                           const SolverConfig& cfg) {
  BasicScheme<D> scheme(stiffness, cfg);
  Field<D> out = make_tensor_field(stiffness.cell);
  scheme.step(eps, eps_bar, out);
  return out;
}

/**
 * Iterate from ε⁰ = ε̄ until the equilibrium residual drops to the
 * tolerance, or for exactly layer_count+1 sweeps when a fixed layer count
 * is set. The displacement is recovered from the final polarization, so
 * strain = ε̄ + ∇ˢu under the scheme's frequency map.
 */
template <int D>
SolveResult<D> solve(const StiffnessField<D>& stiffness,
                     const MandelVec<D>& eps_bar, const SolverConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  BasicScheme<D> scheme(stiffness, cfg);

  SolveResult<D> res;
  res.alpha_minus = scheme.alpha_minus();
  res.alpha_plus = scheme.alpha_plus();
  res.alpha0 = scheme.alpha0();
  res.gamma = scheme.gamma0();

  Field<D> prev = make_tensor_field(stiffness.cell);
  Eigen::VectorXd bar(mandel_size(D));
  for (int c = 0; c < mandel_size(D); ++c) bar[c] = eps_bar[c];
  prev.fill_constant(bar);
  Field<D> next = make_tensor_field(stiffness.cell);

  const int fixed_steps = cfg.layer_count ? *cfg.layer_count + 1 : 0;
  int k = 0;
  while (true) {
    scheme.step(prev, eps_bar, next);
    ++k;
    const double increment = l2_distance(next, prev);
    const double bar_norm = eps_bar.norm();
    res.increment_history.push_back(
        bar_norm > 0.0 ? increment / bar_norm : increment);
    const double sigma_norm = scheme.last_mean_stress(eps_bar).norm();
    const double r = sigma_norm > 0.0
                         ? scheme.alpha0() * increment / sigma_norm
                         : increment;
    res.residual_history.push_back(r);
    std::swap(prev, next);
    if (fixed_steps > 0) {
      if (k >= fixed_steps) {
        res.converged = true;
        break;
      }
    } else if (r <= cfg.tolerance) {
      res.converged = true;
      break;
    } else if (k >= cfg.max_iterations) {
      res.converged = false;
      break;
    }
  }
  res.iterations = k;
  // prev holds the last iterate, next its pre-image.
  res.displacement = scheme.displacement_from(next);
  res.strain = std::move(prev);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

/// Stress field along the configured constitutive path.
template <int D>
Field<D> stress_field(const StiffnessField<D>& stiffness,
                      const Field<D>& strain, const SolverConfig& cfg) {
  BasicScheme<D> scheme(stiffness, cfg);
  Field<D> sigma = make_tensor_field(stiffness.cell);
  scheme.stress(strain, sigma);
  return sigma;
}

template <int D>
struct EffectiveResult {
  MandelMat<D> mandel;  // column j: ⟨σ(ε*_j)⟩ / magnitude
  MandelMat<D> voigt;   // engineering convention for reporting
  std::vector<SolveResult<D>> loads;
  bool all_converged = true;
};

/**
 * Effective stiffness: prescribe each Mandel unit load scaled by
 * `magnitude`, solve, and average the stress along the solver's own
 * constitutive path.
 */
template <int D>
EffectiveResult<D> effective_stiffness(const StiffnessField<D>& stiffness,
                                       double magnitude,
                                       const SolverConfig& cfg) {
  if (!(magnitude > 0.0))
    throw std::invalid_argument("effective_stiffness: magnitude must be > 0");
  constexpr int K = mandel_size(D);
  EffectiveResult<D> out;
  BasicScheme<D> scheme(stiffness, cfg);
  Field<D> sigma = make_tensor_field(stiffness.cell);
  for (int j = 0; j < K; ++j) {
    MandelVec<D> bar = MandelVec<D>::Zero();
    bar[j] = magnitude;
    SolveResult<D> r = solve(stiffness, bar, cfg);
    out.all_converged = out.all_converged && r.converged;
    scheme.stress(r.strain, sigma);
    const auto mean = sigma.mean();
    for (int i = 0; i < K; ++i) out.mandel(i, j) = mean[i] / magnitude;
    out.loads.push_back(std::move(r));
  }
  out.voigt = voigt_from_mandel<D>(out.mandel);
  return out;
}

/// A-priori fixed-point distance bound ‖ε* − ε̄‖ ≤ r₀‖ε̄‖/(1−γ), as
/// numbers derived from a finished solve (left: actual, right: bound).
template <int D>
std::pair<double, double> fixed_point_distance_bound(
    const SolveResult<D>& res, const MandelVec<D>& eps_bar) {
  Field<D> bar_field = make_tensor_field(res.strain.cell);
  Eigen::VectorXd bar(mandel_size(D));
  for (int c = 0; c < mandel_size(D); ++c) bar[c] = eps_bar[c];
  bar_field.fill_constant(bar);
  const double actual = l2_distance(res.strain, bar_field);
  const double r0 = res.increment_history.empty()
                        ? 0.0
                        : res.increment_history.front() * eps_bar.norm();
  const double bound = r0 / (1.0 - res.gamma);
  return {actual, bound};
}

struct ParameterSelection {
  double kappa;          // material contrast
  double eps0;           // strain bound ‖ε̄‖ ≤ ε₀
  double delta_target;   // target fidelity of the assembled operator
  double p = 2.1;        // integrability exponent (> 2), uncertified guess
  double c_p = 0.0;      // 0: defaults to kappa + 1
  double c = 2.0;        // large-input constant
  double c2 = 1.0;       // L² a-priori constant
};

struct SelectedParameters {
  int layer_count;     // K
  double delta;        // per-contraction fidelity
  double cutoff;       // M
  double gamma_theta;  // 1 − 1/(κ+1)
  std::string note;
};

/// Layer count, fidelity and cutoff meeting a target operator error.
inline SelectedParameters select_parameters(const ParameterSelection& sel) {
  if (!(sel.p > 2.0))
    throw std::invalid_argument("select_parameters: p must exceed 2");
  if (!(sel.kappa >= 1.0))
    throw std::invalid_argument("select_parameters: kappa must be >= 1");
  if (!(sel.eps0 > 0.0) || !(sel.delta_target > 0.0))
    throw std::invalid_argument(
        "select_parameters: eps0 and delta_target must be positive");
  const double cp = sel.c_p > 0.0 ? sel.c_p : sel.kappa + 1.0;
  const double gt = 1.0 - 1.0 / (sel.kappa + 1.0);
  const double third = sel.delta_target / 3.0;

  SelectedParameters out;
  out.gamma_theta = gt;
  const double k_raw = std::log(third * (1.0 - gt) / sel.eps0) / std::log(gt);
  out.layer_count = std::max(1, static_cast<int>(std::ceil(k_raw)));
  out.delta =
      std::min(third * (1.0 - gt) / (sel.c2 * sel.eps0), 1.0 / (sel.kappa + 1.0));
  const double m_raw = std::pow(
      3.0 * sel.c * std::pow(cp, 0.5 * sel.p) * std::pow(sel.eps0, 0.5 * sel.p) /
          ((1.0 - gt) * sel.delta_target),
      2.0 / (sel.p - 2.0));
  out.cutoff = std::max(m_raw, sel.eps0);
  out.note =
      "exponent p and constant C_p are existence-only inputs; the defaults "
      "are uncertified placeholders";
  return out;
}

}  // namespace fnohom

#endif  // FNOHOM_SOLVER_HPP
