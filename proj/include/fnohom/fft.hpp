/**
 * @brief Forward/inverse discrete Fourier transforms of component fields.
 *
 * The forward transform divides by the voxel count, so the zero-frequency
 * coefficient equals the volume average of the field. The inverse transform
 * is the plain unnormalized DFT, making the pair an exact round trip.
 * Components transform independently and may run concurrently.
 */

#ifndef FNOHOM_FFT_HPP
#define FNOHOM_FFT_HPP

#include <complex>
#include <vector>

#include "fnohom/grid.hpp"
#include "fnohom/parallel.hpp"

namespace fnohom {

namespace detail {
/// In-place complex-to-complex transform, unnormalized (FFTW backend).
void fft_c2c(int rank, const int* dims, std::complex<double>* data,
             bool forward);
}  // namespace detail

template <int D>
SpectrumField<D> fft_forward(const Field<D>& f, int threads = 0) {
  SpectrumField<D> spec(f.cell, f.components());
  const double scale = 1.0 / static_cast<double>(f.voxels());
  parallel_for(
      f.components(),
      [&](std::int64_t c0, std::int64_t c1) {
        for (std::int64_t c = c0; c < c1; ++c) {
          for (std::int64_t v = 0; v < f.voxels(); ++v)
            spec.data(v, c) = f.data(v, c);
          detail::fft_c2c(D, f.cell.resolution.data(), spec.data.col(c).data(),
                          true);
          spec.data.col(c) *= scale;
        }
      },
      threads);
  return spec;
}

/// Inverse transform returning the full complex field (for diagnostics).
template <int D>
SpectrumField<D> fft_inverse_complex(const SpectrumField<D>& spec,
                                     int threads = 0) {
  SpectrumField<D> out = spec;
  parallel_for(
      spec.components(),
      [&](std::int64_t c0, std::int64_t c1) {
        for (std::int64_t c = c0; c < c1; ++c)
          detail::fft_c2c(D, spec.cell.resolution.data(),
                          out.data.col(c).data(), false);
      },
      threads);
  return out;
}

/// Inverse transform of a conjugate-symmetric spectrum; returns real parts.
template <int D>
Field<D> fft_inverse(const SpectrumField<D>& spec, int threads = 0) {
  SpectrumField<D> tmp = fft_inverse_complex(spec, threads);
  Field<D> out(spec.cell, spec.components());
  for (int c = 0; c < out.components(); ++c)
    out.data.col(c) = tmp.data.col(c).real();
  return out;
}

}  // namespace fnohom

#endif  // FNOHOM_FFT_HPP
