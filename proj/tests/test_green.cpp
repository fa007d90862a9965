#include <doctest.h>

#include <cmath>
#include <random>

#include "fnohom/green.hpp"
#include "test_util.hpp"

using namespace fnohom;
using testutil::band_limited_field;
using testutil::random_field;

namespace {

using C = std::complex<double>;

MandelVec<3, C> random_complex_mandel(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MandelVec<3, C> v;
  for (int i = 0; i < 6; ++i) v[i] = C(u(rng), u(rng));
  return v;
}

double l2_inner(const Field<3>& a, const Field<3>& b) {
  double acc = 0.0;
  for (int c = 0; c < a.components(); ++c)
    acc += (a.data.col(c) * b.data.col(c)).sum();
  return acc / static_cast<double>(a.voxels());
}

}  // namespace

TEST_CASE("gamma_hat: rank-one polarization along the wave vector is fixed") {
  Eigen::Matrix<C, 3, 1> k;
  k << C(1, 0), C(0, 0), C(0, 0);
  MandelVec<3, C> tau = MandelVec<3, C>::Zero();
  tau[0] = C(1, 0);  // e1 ⊗ e1
  const auto out = gamma_hat_apply<3>(k, tau);
  CHECK((out - tau).norm() < 1e-14);
}

TEST_CASE("gamma_hat: polarization annihilating the wave vector maps to zero") {
  Eigen::Matrix<C, 3, 1> k;
  k << C(1, 0), C(0, 0), C(0, 0);
  MandelVec<3, C> tau = MandelVec<3, C>::Zero();
  tau[1] = C(1, 0);  // e2 ⊗ e2, tau k = 0
  CHECK(gamma_hat_apply<3>(k, tau).norm() < 1e-14);
}

TEST_CASE("gamma_hat: idempotent and self-adjoint per frequency") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    Eigen::Matrix<C, 3, 1> k;
    const bool complex_case = it % 2 == 1;
    for (int a = 0; a < 3; ++a)
      k[a] = complex_case ? C(u(rng), u(rng)) : C(u(rng), 0.0);
    if (k.norm() < 1e-3) continue;
    const auto tau = random_complex_mandel(rng);
    const auto once = gamma_hat_apply<3>(k, tau);
    const auto twice = gamma_hat_apply<3>(k, once);
    CHECK((twice - once).norm() < 1e-12 * (1.0 + once.norm()));

    // Self-adjointness w.r.t. the Hermitian Frobenius inner product.
    const auto sigma = random_complex_mandel(rng);
    const auto g_sigma = gamma_hat_apply<3>(k, sigma);
    C left(0, 0), right(0, 0);
    for (int i = 0; i < 6; ++i) {
      left += once[i] * std::conj(sigma[i]);
      right += tau[i] * std::conj(g_sigma[i]);
    }
    CHECK(std::abs(left - right) < 1e-12 * (1.0 + std::abs(left)));

    // Non-expansive per frequency.
    CHECK(once.norm() <= tau.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("gamma_hat rejects the zero wave vector") {
  Eigen::Matrix<C, 3, 1> k = Eigen::Matrix<C, 3, 1>::Zero();
  CHECK_THROWS_AS(gamma_hat_apply<3>(k, MandelVec<3, C>::Ones()),
                  std::invalid_argument);
}

TEST_CASE("gamma_apply: constant fields map to zero") {
  const Cell<3> cell = Cell<3>::cubic(1.0, 8);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered}) {
    const GammaMultiplier<3> g{FrequencyMap<3>(kind, cell)};
    Field<3> tau = make_tensor_field(cell);
    Eigen::VectorXd c(6);
    c << 1.0, -2.0, 0.5, 3.0, 0.0, 1.5;
    tau.fill_constant(c);
    CHECK(l2_norm(g.apply(tau)) < 1e-13);
  }
}

TEST_CASE("gamma_apply: fixes compatible strain fields") {
  std::mt19937 rng(41);
  const Cell<3> cell = Cell<3>::cubic(2.0, 16);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered,
                    FrequencyKind::RotatedStaggeredPhased}) {
    const FrequencyMap<3> map(kind, cell);
    const GammaMultiplier<3> g{map};
    const Field<3> u = band_limited_field(cell, 3, rng, 3);
    const Field<3> eps = sym_gradient(u, map);
    const Field<3> projected = g.apply(eps);
    CHECK(l2_distance(projected, eps) < 1e-10 * std::max(1.0, l2_norm(eps)));
  }
}

TEST_CASE("gamma_apply: projector, self-adjoint, non-expansive at 16^3") {
  std::mt19937 rng(43);
  const Cell<3> cell = Cell<3>::cubic(1.0, 16);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered,
                    FrequencyKind::RotatedStaggeredPhased}) {
    const GammaMultiplier<3> g{FrequencyMap<3>(kind, cell)};
    const Field<3> a = random_field(cell, 6, rng);
    const Field<3> b = random_field(cell, 6, rng);
    const Field<3> ga = g.apply(a);
    const Field<3> gga = g.apply(ga);
    CHECK(l2_distance(gga, ga) < 1e-10 * std::max(1.0, l2_norm(ga)));
    CHECK(std::abs(l2_inner(ga, b) - l2_inner(a, g.apply(b))) < 1e-10);
    CHECK(l2_norm(ga) <= l2_norm(a) * (1.0 + 1e-12));
    // Output is mean-free.
    CHECK(ga.mean().norm() < 1e-13);
  }
}

TEST_CASE("gamma_apply: real input produces real output (imag residue)") {
  std::mt19937 rng(47);
  const Cell<3> cell = Cell<3>::cubic(1.0, 8);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered,
                    FrequencyKind::RotatedStaggeredPhased}) {
    const GammaMultiplier<3> g{FrequencyMap<3>(kind, cell)};
    const Field<3> tau = random_field(cell, 6, rng);
    SpectrumField<3> spec = fft_forward(tau);
    g.apply_spectrum(spec);
    const SpectrumField<3> full = fft_inverse_complex(spec);
    double imag = 0.0, norm = 0.0;
    for (int c = 0; c < 6; ++c)
      for (std::int64_t v = 0; v < full.voxels(); ++v) {
        imag += full.data(v, c).imag() * full.data(v, c).imag();
        norm += std::norm(full.data(v, c));
      }
    CHECK(std::sqrt(imag) < 1e-12 * std::max(1.0, std::sqrt(norm)));
  }
}

TEST_CASE("green_displacement: constant polarization gives zero displacement") {
  const Cell<3> cell = Cell<3>::cubic(1.0, 8);
  const GammaMultiplier<3> g{
      FrequencyMap<3>(FrequencyKind::RotatedStaggered, cell)};
  Field<3> tau = make_tensor_field(cell);
  Eigen::VectorXd c(6);
  c << 2.0, 1.0, -1.0, 0.0, 0.5, 0.0;
  tau.fill_constant(c);
  CHECK(l2_norm(green_displacement(tau, g)) < 1e-13);
}

TEST_CASE("green_displacement: recovers -u0 from its symmetric gradient") {
  std::mt19937 rng(53);
  const Cell<3> cell = Cell<3>::cubic(2.0, 16);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered,
                    FrequencyKind::RotatedStaggeredPhased}) {
    const FrequencyMap<3> map(kind, cell);
    const GammaMultiplier<3> g{map};
    const Field<3> u0 = testutil::mean_free(band_limited_field(cell, 3, rng, 3));
    const Field<3> eps = sym_gradient(u0, map);
    const Field<3> u = green_displacement(eps, g);
    double scale = std::max(1.0, l2_norm(u0));
    Field<3> minus_u0 = u0;
    minus_u0.data = -minus_u0.data;
    CHECK(l2_distance(u, minus_u0) < 1e-10 * scale);
  }
}

TEST_CASE("green_displacement: composition identity on random polarizations") {
  std::mt19937 rng(59);
  // Odd resolution: no self-conjugate modes, identity holds for white noise.
  const Cell<3> cell = Cell<3>::cubic(1.0, 9);
  for (auto kind : {FrequencyKind::Spectral, FrequencyKind::RotatedStaggered}) {
    const FrequencyMap<3> map(kind, cell);
    const GammaMultiplier<3> g{map};
    const Field<3> tau = random_field(cell, 6, rng);
    const Field<3> u = green_displacement(tau, g);
    const Field<3> grad = sym_gradient(u, map);
    const Field<3> gtau = g.apply(tau);
    Field<3> sum = grad;
    sum.data += gtau.data;
    CHECK(l2_norm(sum) < 1e-10 * std::max(1.0, l2_norm(gtau)));
  }
  // The corner-anchored rotated symbol keeps the identity on even grids too.
  const Cell<3> even = Cell<3>::cubic(1.0, 8);
  const FrequencyMap<3> map(FrequencyKind::RotatedStaggeredPhased, even);
  const GammaMultiplier<3> g{map};
  const Field<3> tau = random_field(even, 6, rng);
  const Field<3> u = green_displacement(tau, g);
  const Field<3> grad = sym_gradient(u, map);
  const Field<3> gtau = g.apply(tau);
  Field<3> sum = grad;
  sum.data += gtau.data;
  CHECK(l2_norm(sum) < 1e-10 * std::max(1.0, l2_norm(gtau)));
}

TEST_CASE("von_mises_field examples") {
  const Cell<3> cell = Cell<3>::cubic(1.0, 2);
  Field<3> sigma = make_tensor_field(cell);
  Eigen::VectorXd uni(6);
  uni << 3.0, 0, 0, 0, 0, 0;
  sigma.fill_constant(uni);
  CHECK(von_mises_field(sigma).data(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
}
