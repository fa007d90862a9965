/**
 * @brief Frequency maps: the per-frequency wave vector k̂(ξ) fed to Fourier
 * multipliers.
 *
 * Two discretizations are exposed:
 *  - spectral: k̂_j(ξ) = ξ̃_j = 2π ξ_j / L_j (the continuous symbol);
 *  - rotated_staggered: the finite-difference gradient symbol of the rotated
 *    staggered grid, anchored at voxel centers,
 *        k̂_j = (2/h_j) sin(θ_j/2) ∏_{l≠j} cos(θ_l/2),  θ_l = 2π ξ_l / N_l,
 *    which tends to ξ̃ at fixed frequency with an O(h²) defect.
 *
 * A third kind, rotated_staggered_phased, is the corner-anchored variant
 *        k̂_j = (e^{iθ_j} − 1)/(i h_j) · ∏_{l≠j} (1 + e^{iθ_l})/2,
 * equal to the center-anchored symbol times the unimodular phase e^{iΘ/2},
 * Θ = Σ_l θ_l. The phase cancels in the Green multiplier, so both rotated
 * variants induce the same operator; the phased one exercises genuinely
 * complex wave vectors.
 *
 * All kinds make the multiplier products k̂_i(−ξ) conj(k̂_j(−ξ)) the complex
 * conjugates of k̂_i(ξ) conj(k̂_j(ξ)), which is what maps real fields to real
 * fields. For the spectral kind on even grids this requires the classical
 * convention of zeroing the Nyquist component of the derivative symbol (the
 * index N/2 is its own negative, so a nonzero odd symbol there cannot be
 * paired); the rotated symbols need no special case, their cosine factors
 * vanish on the off-axis Nyquist planes by themselves.
 */

#ifndef FNOHOM_FREQUENCY_HPP
#define FNOHOM_FREQUENCY_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnohom/grid.hpp"

namespace fnohom {

enum class FrequencyKind { Spectral, RotatedStaggered, RotatedStaggeredPhased };

inline std::string to_string(FrequencyKind k) {
  switch (k) {
    case FrequencyKind::Spectral: return "spectral";
    case FrequencyKind::RotatedStaggered: return "rotated_staggered";
    default: return "rotated_staggered_phased";
  }
}

inline FrequencyKind frequency_kind_from_string(const std::string& s) {
  if (s == "spectral") return FrequencyKind::Spectral;
  if (s == "rotated_staggered") return FrequencyKind::RotatedStaggered;
  if (s == "rotated_staggered_phased")
    return FrequencyKind::RotatedStaggeredPhased;
  throw std::invalid_argument("unknown frequency map kind: " + s);
}

template <int D>
class FrequencyMap {
 public:
  using Complex = std::complex<double>;
  using WaveVector = Eigen::Matrix<Complex, D, 1>;

  FrequencyMap(FrequencyKind kind, const Cell<D>& cell)
      : kind_(kind), cell_(cell) {
    for (int a = 0; a < D; ++a) {
      const int n = cell.resolution[a];
      const double h = cell.spacing(a);
      axis_[a].resize(n);
      for (int i = 0; i < n; ++i) {
        const int xi = cell.signed_frequency(a, i);
        const double theta = 2.0 * std::numbers::pi * xi / n;
        const bool nyquist = (n % 2 == 0) && (i == n / 2);
        AxisEntry& e = axis_[a][i];
        e.xi_tilde = 2.0 * std::numbers::pi * xi / cell.lengths[a];
        e.spectral = nyquist ? 0.0 : e.xi_tilde;
        if (nyquist) {
          // theta = pi exactly: keep the vanishing cosine factors exact so
          // the doubly-Nyquist null modes of the rotated symbol are exact
          // zeros rather than 1e-16 noise.
          e.sin_fac = 2.0 / h;
          e.cos_fac = 0.0;
          e.sin_fac_c = Complex(0.0, 2.0 / h);
          e.cos_fac_c = Complex(0.0, 0.0);
        } else {
          e.sin_fac = (2.0 / h) * std::sin(0.5 * theta);
          e.cos_fac = std::cos(0.5 * theta);
          e.sin_fac_c = (std::polar(1.0, theta) - 1.0) / Complex(0.0, h);
          e.cos_fac_c = 0.5 * (1.0 + std::polar(1.0, theta));
        }
      }
    }
  }

  FrequencyKind kind() const { return kind_; }
  const Cell<D>& cell() const { return cell_; }

  /// Wave vector for the (unsigned) per-axis grid index.
  WaveVector k_hat(const std::array<int, D>& idx) const {
    WaveVector k;
    switch (kind_) {
      case FrequencyKind::Spectral:
        for (int j = 0; j < D; ++j)
          k[j] = Complex(axis_[j][idx[j]].spectral, 0.0);
        break;
      case FrequencyKind::RotatedStaggered:
        for (int j = 0; j < D; ++j) {
          double v = axis_[j][idx[j]].sin_fac;
          for (int l = 0; l < D; ++l)
            if (l != j) v *= axis_[l][idx[l]].cos_fac;
          k[j] = Complex(v, 0.0);
        }
        break;
      case FrequencyKind::RotatedStaggeredPhased:
        for (int j = 0; j < D; ++j) {
          Complex v = axis_[j][idx[j]].sin_fac_c;
          for (int l = 0; l < D; ++l)
            if (l != j) v *= axis_[l][idx[l]].cos_fac_c;
          k[j] = v;
        }
        break;
    }
    return k;
  }

  /// Continuous wave vector ξ̃ for the same index (consistency reference).
  Eigen::Matrix<double, D, 1> xi_tilde(const std::array<int, D>& idx) const {
    Eigen::Matrix<double, D, 1> x;
    for (int j = 0; j < D; ++j) x[j] = axis_[j][idx[j]].xi_tilde;
    return x;
  }

  /// Squared-norm floor below which a wave vector counts as the zero mode,
  /// scaled to the lattice (the smallest genuine mode is ~(2π/L)² ≫ floor).
  double zero_threshold() const {
    double scale = 0.0;
    for (int a = 0; a < D; ++a) {
      const double inv_h = 1.0 / cell_.spacing(a);
      scale += 4.0 * inv_h * inv_h;
    }
    return 1e-20 * scale;
  }

 private:
  struct AxisEntry {
    double xi_tilde;   // continuous reference 2π ξ / L
    double spectral;   // spectral symbol (Nyquist component zeroed)
    double sin_fac, cos_fac;
    Complex sin_fac_c, cos_fac_c;
  };

  FrequencyKind kind_;
  Cell<D> cell_;
  std::array<std::vector<AxisEntry>, D> axis_;
};

}  // namespace fnohom

#endif  // FNOHOM_FREQUENCY_HPP
