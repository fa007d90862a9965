/**
 * @brief The Eshelby-Green operator Γ as a Fourier multiplier, and the
 * displacement Green operator behind it.
 *
 * Per non-zero wave vector k, the multiplier acting on a (complex) symmetric
 * tensor τ is
 *
 *     Γ̂(k) : τ = sym(k ⊗ w),   w = A(k)⁻¹ (τ k̄),
 *     A(k) = ½ (‖k‖² I + k ⊗ k̄),   ‖k‖² = k · k̄,
 *
 * which for real k reduces to
 *
 *     k⊗(τk)/‖k‖² + (τk)⊗k/‖k‖² − (k·τk) k⊗k/‖k‖⁴ .
 *
 * A(k) is Hermitian positive definite for k ≠ 0, so each Γ̂(k) is a
 * self-adjoint idempotent on the space of complex symmetric tensors: the
 * full operator is the orthogonal projector onto compatible, mean-free
 * strain fields. Γ̂(0) = 0 by definition.
 *
 * The inverse A(k)⁻¹ is applied in closed form (rank-one update):
 *     A⁻¹ y = (2/s) (y − k (k̄·y) / (2s)),  s = ‖k‖².
 *
 * The displacement Green operator enters through the same pass: for a
 * polarization τ the displacement u with ∇ˢu = −Γ:τ has coefficients
 * û = i A(k)⁻¹ (τ̂ k̄) = i w, zero at k = 0, so u is mean-free.
 */

#ifndef FNOHOM_GREEN_HPP
#define FNOHOM_GREEN_HPP

#include <complex>
#include <stdexcept>

#include "fnohom/fft.hpp"
#include "fnohom/frequency.hpp"
#include "fnohom/grid.hpp"
#include "fnohom/mandel.hpp"
#include "fnohom/parallel.hpp"

namespace fnohom {

namespace detail {

// Absolute floor for the standalone per-frequency entry point; the field
// operators use the lattice-scaled FrequencyMap::zero_threshold), which
// also catches the rotated-grid null modes at doubly-Nyquist frequencies.
inline constexpr double k_zero_threshold = 1e-30;

/// Mandel pack/unpack for per-frequency complex tensors (no symmetry check).
template <int D>
inline SmallMat<D, std::complex<double>> unpack_fast(
    const MandelVec<D, std::complex<double>>& v) {
  SmallMat<D, std::complex<double>> t;
  for (int i = 0; i < D; ++i) t(i, i) = v[i];
  for (int k = 0; k < mandel_size(D) - D; ++k) {
    const auto [i, j] = shear_pair<D>(k);
    t(i, j) = v[D + k] / sqrt2;
    t(j, i) = t(i, j);
  }
  return t;
}

template <int D>
inline MandelVec<D, std::complex<double>> pack_fast(
    const SmallMat<D, std::complex<double>>& t) {
  MandelVec<D, std::complex<double>> v;
  for (int i = 0; i < D; ++i) v[i] = t(i, i);
  for (int k = 0; k < mandel_size(D) - D; ++k) {
    const auto [i, j] = shear_pair<D>(k);
    v[D + k] = sqrt2 * t(i, j);
  }
  return v;
}

}  // namespace detail

/**
 * Apply Γ̂(k) to a Mandel-packed complex symmetric tensor. Requires k ≠ 0;
 * the caller short-circuits the zero frequency to zero.
 */
template <int D>
MandelVec<D, std::complex<double>> gamma_hat_apply(
    const Eigen::Matrix<std::complex<double>, D, 1>& k,
    const MandelVec<D, std::complex<double>>& tau) {
  using C = std::complex<double>;
  const double s = k.squaredNorm();
  if (s < detail::k_zero_threshold)
    throw std::invalid_argument("gamma_hat_apply: zero wave vector");
  const SmallMat<D, C> t = detail::unpack_fast<D>(tau);
  const Eigen::Matrix<C, D, 1> kc = k.conjugate();
  const Eigen::Matrix<C, D, 1> y = t * kc;
  C kcy(0.0, 0.0);  // Σ k̄_m y_m (plain bilinear sum, no extra conjugation)
  for (int m = 0; m < D; ++m) kcy += kc[m] * y[m];
  const Eigen::Matrix<C, D, 1> w = (2.0 / s) * (y - k * (kcy / (2.0 * s)));
  SmallMat<D, C> out;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) out(i, j) = 0.5 * (k[i] * w[j] + w[i] * k[j]);
  return detail::pack_fast<D>(out);
}

/// Γ̂-projected spectrum and, on request, the displacement spectrum i·w.
template <int D>
class GammaMultiplier {
 public:
  explicit GammaMultiplier(FrequencyMap<D> map) : map_(std::move(map)) {}

  const FrequencyMap<D>& frequency_map() const { return map_; }
  const Cell<D>& cell() const { return map_.cell(); }

  /**
   * Apply Γ̂ per frequency, in place, to a Mandel-component spectrum.
   * If @p displacement is non-null it receives the coefficients of the
   * displacement field u with ∇ˢu = −Γ:τ (same pass, same w).
   */
  void apply_spectrum(SpectrumField<D>& spec,
                      SpectrumField<D>* displacement = nullptr,
                      int threads = 0) const {
    using C = std::complex<double>;
    constexpr int K = mandel_size(D);
    if (spec.components() != K)
      throw std::invalid_argument("gamma: spectrum must have K components");
    if (!(spec.cell == map_.cell()))
      throw std::invalid_argument("gamma: cell mismatch");
    if (displacement && (displacement->components() != D ||
                         !(displacement->cell == spec.cell)))
      throw std::invalid_argument("gamma: bad displacement layout");

    const double zero_floor = map_.zero_threshold();
    parallel_for(
        spec.voxels(),
        [&](std::int64_t lo, std::int64_t hi) {
          std::array<int, D> idx = spec.cell.multi_index(lo);
          for (std::int64_t v = lo; v < hi; ++v) {
            const auto k = map_.k_hat(idx);
            const double s = k.squaredNorm();
            if (s < zero_floor) {
              for (int c = 0; c < K; ++c) spec.data(v, c) = C(0.0, 0.0);
              if (displacement)
                for (int c = 0; c < D; ++c)
                  displacement->data(v, c) = C(0.0, 0.0);
            } else {
              MandelVec<D, C> tau;
              for (int c = 0; c < K; ++c) tau[c] = spec.data(v, c);
              const SmallMat<D, C> t = detail::unpack_fast<D>(tau);
              const Eigen::Matrix<C, D, 1> kc = k.conjugate();
              const Eigen::Matrix<C, D, 1> y = t * kc;
              C kcy(0.0, 0.0);
              for (int m = 0; m < D; ++m) kcy += kc[m] * y[m];
              const Eigen::Matrix<C, D, 1> w =
                  (2.0 / s) * (y - k * (kcy / (2.0 * s)));
              SmallMat<D, C> out;
              for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j)
                  out(i, j) = 0.5 * (k[i] * w[j] + w[i] * k[j]);
              const MandelVec<D, C> packed = detail::pack_fast<D>(out);
              for (int c = 0; c < K; ++c) spec.data(v, c) = packed[c];
              if (displacement)
                for (int c = 0; c < D; ++c)
                  displacement->data(v, c) = C(0.0, 1.0) * w[c];
            }
            increment(idx);
          }
        },
        threads);
  }

  /// Γ : τ on real fields. Output is real, mean-free.
  Field<D> apply(const Field<D>& tau, int threads = 0) const {
    SpectrumField<D> spec = fft_forward(tau, threads);
    apply_spectrum(spec, nullptr, threads);
    return fft_inverse(spec, threads);
  }

 private:
  void increment(std::array<int, D>& idx) const {
    for (int a = D - 1; a >= 0; --a) {
      if (++idx[a] < map_.cell().resolution[a]) return;
      idx[a] = 0;
    }
  }

  FrequencyMap<D> map_;
};

/**
 * Displacement u with ∇ˢu = −(Γ : pol); mean-free. For pol = ∇ˢu₀ with
 * mean-free u₀ this returns −u₀.
 */
template <int D>
Field<D> green_displacement(const Field<D>& pol, const GammaMultiplier<D>& g,
                            int threads = 0) {
  SpectrumField<D> spec = fft_forward(pol, threads);
  SpectrumField<D> disp(pol.cell, D);
  g.apply_spectrum(spec, &disp, threads);
  return fft_inverse(disp, threads);
}

/// Discrete symmetric gradient of a displacement field: ε̂ = i sym(k̂ ⊗ û).
template <int D>
Field<D> sym_gradient(const Field<D>& u, const FrequencyMap<D>& map,
                      int threads = 0) {
  using C = std::complex<double>;
  constexpr int K = mandel_size(D);
  if (u.components() != D)
    throw std::invalid_argument("sym_gradient: field must have D components");
  SpectrumField<D> uhat = fft_forward(u, threads);
  SpectrumField<D> eps(u.cell, K);
  const C im(0.0, 1.0);
  for (std::int64_t v = 0; v < uhat.voxels(); ++v) {
    const auto idx = u.cell.multi_index(v);
    const auto k = map.k_hat(idx);
    SmallMat<D, C> g;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        g(i, j) = im * 0.5 * (k[i] * uhat.data(v, j) + k[j] * uhat.data(v, i));
    const auto packed = detail::pack_fast<D>(g);
    for (int c = 0; c < K; ++c) eps.data(v, c) = packed[c];
  }
  return fft_inverse(eps, threads);
}

/// Per-voxel deviatoric equivalent stress of a Mandel stress field.
template <int D>
Field<D> von_mises_field(const Field<D>& sigma) {
  constexpr int K = mandel_size(D);
  if (sigma.components() != K)
    throw std::invalid_argument("von_mises: field must have K components");
  Field<D> out(sigma.cell, 1);
  for (std::int64_t v = 0; v < sigma.voxels(); ++v)
    out.data(v, 0) = von_mises<D>(sigma.template at<K>(v));
  return out;
}

}  // namespace fnohom

#endif  // FNOHOM_GREEN_HPP
