#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fnohom/fft.hpp"
#include "fnohom/frequency.hpp"
#include "fnohom/grid.hpp"
#include "test_util.hpp"

using namespace fnohom;
using testutil::random_field;

TEST_CASE("cell: spacing, indexing, signed frequencies") {
  const Cell<3> cell({32.0, 16.0, 8.0}, {32, 8, 4});
  CHECK(cell.voxel_count() == 32 * 8 * 4);
  CHECK(cell.spacing(0) == doctest::Approx(1.0));
  CHECK(cell.spacing(1) == doctest::Approx(2.0));
  const std::array<int, 3> idx{3, 5, 2};
  CHECK(cell.multi_index(cell.linear_index(idx)) == idx);
  CHECK(cell.signed_frequency(1, 3) == 3);
  CHECK(cell.signed_frequency(1, 4) == 4);   // Nyquist maps to +N/2
  CHECK(cell.signed_frequency(1, 5) == -3);
  CHECK_THROWS_AS(Cell<3>({1.0, -1.0, 1.0}, {4, 4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(Cell<3>({1.0, 1.0, 1.0}, {4, 0, 4}), std::invalid_argument);
}

TEST_CASE("fft: constant field transforms to a single mean coefficient") {
  const Cell<3> cell = Cell<3>::cubic(1.0, 8);
  Field<3> f(cell, 2);
  f.data.col(0) = 3.25;
  f.data.col(1) = -1.5;
  const SpectrumField<3> spec = fft_forward(f);
  CHECK(std::abs(spec.data(0, 0) - std::complex<double>(3.25, 0.0)) < 1e-14);
  CHECK(std::abs(spec.data(0, 1) - std::complex<double>(-1.5, 0.0)) < 1e-14);
  double off = 0.0;
  for (std::int64_t v = 1; v < spec.voxels(); ++v)
    off = std::max(off, std::abs(spec.data(v, 0)));
  CHECK(off < 1e-14);
}

TEST_CASE("fft: cosine mode yields two conjugate half coefficients") {
  const Cell<3> cell = Cell<3>::cubic(4.0, 16);
  Field<3> f(cell, 1);
  for (std::int64_t v = 0; v < f.voxels(); ++v) {
    const auto idx = cell.multi_index(v);
    f.data(v, 0) = std::cos(2.0 * std::numbers::pi * idx[0] / 16.0);
  }
  const SpectrumField<3> spec = fft_forward(f);
  const auto plus = spec.data(cell.linear_index({1, 0, 0}), 0);
  const auto minus = spec.data(cell.linear_index({15, 0, 0}), 0);
  CHECK(std::abs(plus - std::complex<double>(0.5, 0.0)) < 1e-13);
  CHECK(std::abs(minus - std::complex<double>(0.5, 0.0)) < 1e-13);
  CHECK(std::abs(minus - std::conj(plus)) < 1e-13);
}

TEST_CASE("fft: random 8^3 round trip below 1e-12") {
  std::mt19937 rng(23);
  const Cell<3> cell = Cell<3>::cubic(2.0, 8);
  const Field<3> f = random_field(cell, 6, rng);
  const Field<3> back = fft_inverse(fft_forward(f));
  double err = 0.0;
  for (int c = 0; c < 6; ++c)
    err = std::max(err, (back.data.col(c) - f.data.col(c)).abs().maxCoeff());
  CHECK(err < 1e-12);
}

TEST_CASE("fft: Parseval for the volume-averaged norm") {
  std::mt19937 rng(29);
  const Cell<3> cell({3.0, 2.0, 1.0}, {8, 4, 8});
  const Field<3> f = random_field(cell, 3, rng);
  const SpectrumField<3> spec = fft_forward(f);
  double spectral = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::int64_t v = 0; v < spec.voxels(); ++v)
      spectral += std::norm(spec.data(v, c));
  const double direct = l2_norm(f);
  CHECK(std::sqrt(spectral) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("fft: tiling doubles the spectrum indices") {
  std::mt19937 rng(31);
  const Cell<3> cell = Cell<3>::cubic(1.0, 8);
  const Field<3> f = random_field(cell, 1, rng);
  const Field<3> tiled = testutil::tile_field(f, 2);
  const SpectrumField<3> spec = fft_forward(f);
  const SpectrumField<3> spec2 = fft_forward(tiled);
  double err = 0.0;
  for (std::int64_t v = 0; v < spec.voxels(); ++v) {
    const auto idx = cell.multi_index(v);
    const std::array<int, 3> doubled{2 * idx[0], 2 * idx[1], 2 * idx[2]};
    err = std::max(err, std::abs(spec2.data(tiled.cell.linear_index(doubled), 0) -
                                 spec.data(v, 0)));
  }
  CHECK(err < 1e-13);
  // Everything else in the tiled spectrum vanishes.
  double rest = 0.0;
  for (std::int64_t v = 0; v < spec2.voxels(); ++v) {
    const auto idx = tiled.cell.multi_index(v);
    if (idx[0] % 2 == 0 && idx[1] % 2 == 0 && idx[2] % 2 == 0) continue;
    rest = std::max(rest, std::abs(spec2.data(v, 0)));
  }
  CHECK(rest < 1e-13);
}

TEST_CASE("frequency: zero index maps to the zero vector for all kinds") {
  const Cell<3> cell = Cell<3>::cubic(32.0, 8);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered,
                    FrequencyKind::RotatedStaggeredPhased}) {
    const FrequencyMap<3> map(kind, cell);
    CHECK(map.k_hat({0, 0, 0}).norm() == 0.0);
  }
}

TEST_CASE("frequency: spectral value matches the scaled frequency") {
  const Cell<3> cell = Cell<3>::cubic(32.0, 32);
  const FrequencyMap<3> map(FrequencyKind::Spectral, cell);
  const auto k = map.k_hat({1, 0, 0});
  CHECK(k[0].real() == doctest::Approx(2.0 * std::numbers::pi / 32.0).epsilon(1e-15));
  CHECK(k[0].imag() == 0.0);
  CHECK(std::abs(k[1]) == 0.0);
  CHECK(std::abs(k[2]) == 0.0);
}

TEST_CASE("frequency: rotated symbol converges to the spectral one at order h^2") {
  const std::array<int, 3> xi{1, 2, 3};
  double prev_err = 0.0;
  std::vector<double> errs;
  for (int n : {8, 16, 32}) {
    const Cell<3> cell = Cell<3>::cubic(1.0, n);
    const FrequencyMap<3> map(FrequencyKind::RotatedStaggered, cell);
    const std::array<int, 3> idx{xi[0], xi[1], xi[2]};
    const auto k = map.k_hat(idx);
    const auto ref = map.xi_tilde(idx);
    double err = 0.0;
    for (int a = 0; a < 3; ++a) err += std::norm(k[a] - ref[a]);
    errs.push_back(std::sqrt(err) / ref.norm());
    (void)prev_err;
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("frequency: multiplier products pair conjugately across +-xi") {
  // The realness of every multiplier built on a map needs
  //   k_i(-xi) conj(k_j(-xi)) = conj( k_i(xi) conj(k_j(xi)) )
  // for all index pairs; away from Nyquist-touching indices the stronger
  // vector identity k(-xi) = -conj(k(xi)) holds as well.
  const Cell<3> cell({5.0, 3.0, 2.0}, {8, 6, 4});
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered,
                    FrequencyKind::RotatedStaggeredPhased}) {
    const FrequencyMap<3> map(kind, cell);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 4; ++k) {
          const std::array<int, 3> idx{i, j, k};
          const std::array<int, 3> neg{(8 - i) % 8, (6 - j) % 6, (4 - k) % 4};
          const auto a = map.k_hat(idx);
          const auto b = map.k_hat(neg);
          double product_err = 0.0;
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
              product_err = std::max(
                  product_err, std::abs(b[r] * std::conj(b[c]) -
                                        std::conj(a[r] * std::conj(a[c]))));
          CHECK(product_err < 1e-12);
          if (i != 4 && j != 3 && k != 2)
            CHECK((b + a.conjugate()).norm() < 1e-13);
        }
  }
}

TEST_CASE("frequency: rotated kinds differ only by a unimodular phase") {
  const Cell<3> cell = Cell<3>::cubic(2.0, 8);
  const FrequencyMap<3> plain(FrequencyKind::RotatedStaggered, cell);
  const FrequencyMap<3> phased(FrequencyKind::RotatedStaggeredPhased, cell);
  for (std::int64_t v = 0; v < cell.voxel_count(); ++v) {
    const auto idx = cell.multi_index(v);
    const auto a = plain.k_hat(idx);
    const auto b = phased.k_hat(idx);
    CHECK(a.norm() == doctest::Approx(b.norm()).epsilon(1e-12));
    // Outer products k_i conj(k_j) agree, so the Green multiplier does too.
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(a[i] * std::conj(a[j]) - b[i] * std::conj(b[j])) <
              1e-12 * (1.0 + a.squaredNorm()));
  }
}
