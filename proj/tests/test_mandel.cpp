#include <doctest.h>

#include <cmath>
#include <random>

#include "fnohom/mandel.hpp"
#include "fnohom/material.hpp"

using namespace fnohom;

namespace {

Eigen::Matrix3d random_symmetric3(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
  return 0.5 * (a + a.transpose());
}

double ulp_distance(double a, double b) {
  return std::abs(a - b) /
         std::max(std::numeric_limits<double>::denorm_min(),
                  std::abs(std::nexttoward(a, b) - a));
}

}  // namespace

TEST_CASE("mandel_pack: identity and pure shear") {
  MandelVec<3> id = mandel_pack<3, double>(Eigen::Matrix3d::Identity());
  CHECK(id[0] == 1.0);
  CHECK(id[1] == 1.0);
  CHECK(id[2] == 1.0);
  CHECK(id[3] == 0.0);
  CHECK(id[4] == 0.0);
  CHECK(id[5] == 0.0);

  Eigen::Matrix3d shear = Eigen::Matrix3d::Zero();
  shear(0, 1) = shear(1, 0) = 1.0;
  MandelVec<3> v = mandel_pack<3, double>(shear);
  CHECK(v[5] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (int c = 0; c < 5; ++c) CHECK(v[c] == 0.0);
}

TEST_CASE("mandel_pack: norm preservation over 1e4 random tensors") {
  std::mt19937 rng(7);
  double worst = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const Eigen::Matrix3d t = random_symmetric3(rng, 5.0);
    const double frob = t.norm();
    const double packed = mandel_pack<3, double>(t).norm();
    worst = std::max(worst, std::abs(frob - packed));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("mandel round trip is exact to one ulp per component") {
  std::mt19937 rng(11);
  for (int it = 0; it < 1000; ++it) {
    const Eigen::Matrix3d t = random_symmetric3(rng, 3.0);
    const Eigen::Matrix3d back = mandel_unpack<3, double>(mandel_pack<3, double>(t));
    for (int i = 0; i < 3; ++i) {
      CHECK(back(i, i) == t(i, i));  // diagonals untouched
      for (int j = 0; j < 3; ++j) CHECK(ulp_distance(back(i, j), t(i, j)) <= 1.0);
    }
  }
}

TEST_CASE("mandel_pack rejects non-symmetric input") {
  Eigen::Matrix3d bad = Eigen::Matrix3d::Zero();
  bad(0, 1) = 1.0;
  bad(1, 0) = 0.5;
  CHECK_THROWS_AS((mandel_pack<3, double>(bad)), std::invalid_argument);
}

TEST_CASE("mandel 2D ordering") {
  Eigen::Matrix2d t;
  t << 1.0, 0.25, 0.25, 2.0;
  MandelVec<2> v = mandel_pack<2, double>(t);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 2.0);
  CHECK(v[2] == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(v.norm() == doctest::Approx(t.norm()).epsilon(1e-15));
}

TEST_CASE("isotropic_stiffness: Lamé values for E=3, nu=0.3") {
  const IsotropicMaterial mat{3.0, 0.3};
  const auto [lambda, mu] = lame_parameters(mat);
  // Independent evaluation of the textbook formulas.
  const double mu_ref = 3.0 / (2.0 * 1.3);
  const double lambda_ref = 3.0 * 0.3 / (1.3 * 0.4);
  CHECK(mu == doctest::Approx(mu_ref).epsilon(1e-15));
  CHECK(lambda == doctest::Approx(lambda_ref).epsilon(1e-15));
  CHECK(mu == doctest::Approx(1.15385).epsilon(1e-5));
  CHECK(lambda == doctest::Approx(1.73077).epsilon(1e-5));

  const MandelMat<3> c = isotropic_stiffness<3>(mat);
  CHECK(c(0, 0) == doctest::Approx(lambda_ref + 2.0 * mu_ref).epsilon(1e-15));
  CHECK(c(0, 0) == doctest::Approx(4.03846).epsilon(1e-5));
  CHECK(c(0, 1) == doctest::Approx(lambda_ref).epsilon(1e-15));
  CHECK(c(3, 3) == doctest::Approx(2.0 * mu_ref).epsilon(1e-15));
  CHECK((c - c.transpose()).norm() == 0.0);
}

TEST_CASE("isotropic_stiffness: nu = 0 decouples") {
  const MandelMat<3> c = isotropic_stiffness<3>({7.0, 0.0});
  CHECK(c(0, 0) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(c(0, 1) == 0.0);
  CHECK(c(1, 2) == 0.0);
}

TEST_CASE("isotropic_stiffness: eigenvalues are {3λ+2μ, 2μ x5}") {
  const IsotropicMaterial mat{3.0, 0.3};
  const auto [lambda, mu] = lame_parameters(mat);
  const MandelMat<3> c = isotropic_stiffness<3>(mat);
  Eigen::SelfAdjointEigenSolver<MandelMat<3>> es(c);
  const auto ev = es.eigenvalues();
  for (int i = 0; i < 5; ++i)
    CHECK(ev[i] == doctest::Approx(2.0 * mu).epsilon(1e-12));
  CHECK(ev[5] == doctest::Approx(3.0 * lambda + 2.0 * mu).epsilon(1e-12));
}

TEST_CASE("isotropic_stiffness: invalid materials throw") {
  CHECK_THROWS_AS(isotropic_stiffness<3>({3.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_stiffness<3>({-1.0, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_stiffness<3>({3.0, -1.0}), std::invalid_argument);
}

TEST_CASE("double_contract examples") {
  const MandelMat<3> id = MandelMat<3>::Identity();
  std::mt19937 rng(3);
  const MandelVec<3> e = mandel_pack<3, double>(random_symmetric3(rng));
  CHECK((double_contract<3, double>(id, e) - e).norm() == 0.0);

  const MandelMat<3> c = isotropic_stiffness<3>({3.0, 0.3});
  MandelVec<3> uni = MandelVec<3>::Zero();
  uni[0] = 0.001;
  const MandelVec<3> sigma = double_contract<3, double>(c, uni);
  CHECK(sigma[0] == doctest::Approx(4.03846e-3).epsilon(1e-5));
  CHECK(sigma[1] == doctest::Approx(1.73077e-3).epsilon(1e-5));

  CHECK(double_contract<3, double>(c, MandelVec<3>::Zero()).norm() == 0.0);
}

TEST_CASE("spectral_bounds examples") {
  const auto [lo, hi] = spectral_bounds<3>(isotropic_stiffness<3>({3.0, 0.3}));
  CHECK(lo == doctest::Approx(2.30769).epsilon(1e-5));
  CHECK(hi == doctest::Approx(7.5).epsilon(1e-12));

  const auto [ilo, ihi] = spectral_bounds<3>(MandelMat<3>::Identity());
  CHECK(ilo == doctest::Approx(1.0));
  CHECK(ihi == doctest::Approx(1.0));

  // Two-phase bounds: the kappa = 12 inclusion against the matrix.
  const auto [mlo, mhi] = spectral_bounds<3>(isotropic_stiffness<3>({3.0, 0.3}));
  const auto [clo, chi] =
      spectral_bounds<3>(isotropic_stiffness<3>({36.0, 0.22}));
  CHECK(clo == doctest::Approx(2.0 * 36.0 / (2.0 * 1.22)).epsilon(1e-12));
  CHECK(chi == doctest::Approx(36.0 / 0.56).epsilon(1e-12));
  CHECK(std::min(mlo, clo) == doctest::Approx(2.30769).epsilon(1e-5));
  CHECK(std::max(mhi, chi) == doctest::Approx(64.2857).epsilon(1e-5));
}

TEST_CASE("operator norm dominates contraction output") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 2000; ++it) {
    MandelMat<3> t;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) t(i, j) = u(rng);
    t = 0.5 * (t + t.transpose()).eval();
    const auto [lo, hi] = spectral_bounds<3>(t);
    const double norm = std::max(std::abs(lo), std::abs(hi));
    MandelVec<3> e;
    for (int i = 0; i < 6; ++i) e[i] = u(rng);
    CHECK((t * e).norm() <= norm * e.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("stiffness field bounds enclose every voxel's eigenvalues") {
  const Cell<3> cell = Cell<3>::cubic(1.0, 4);
  std::vector<std::uint8_t> slots(cell.voxel_count());
  for (std::size_t v = 0; v < slots.size(); ++v) slots[v] = v % 3;
  std::vector<MandelMat<3>> mats = {isotropic_stiffness<3>({3.0, 0.3}),
                                    isotropic_stiffness<3>({36.0, 0.22}),
                                    isotropic_stiffness<3>({10.0, 0.1})};
  const StiffnessField<3> field(cell, slots, mats);
  const auto [am, ap] = field.field_bounds();
  for (const auto& m : mats) {
    const auto [lo, hi] = spectral_bounds<3>(m);
    CHECK(lo >= am - 1e-12);
    CHECK(hi <= ap + 1e-12);
  }
}

TEST_CASE("voigt conversion: isotropic 44-entry is the shear modulus") {
  const IsotropicMaterial mat{3.0, 0.3};
  const auto [lambda, mu] = lame_parameters(mat);
  const MandelMat<3> voigt = voigt_from_mandel<3>(isotropic_stiffness<3>(mat));
  CHECK(voigt(3, 3) == doctest::Approx(mu).epsilon(1e-14));
  CHECK(voigt(0, 0) == doctest::Approx(lambda + 2.0 * mu).epsilon(1e-14));
  CHECK(voigt(0, 1) == doctest::Approx(lambda).epsilon(1e-14));
}

TEST_CASE("isotropic_projection round trip") {
  const MandelMat<3> c = isotropic_stiffness<3>({3.0, 0.3});
  const auto [e, nu] = isotropic_projection<3>(c);
  CHECK(e == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(nu == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("von_mises examples") {
  MandelVec<3> uni = MandelVec<3>::Zero();
  uni[0] = 2.5;
  CHECK(von_mises<3>(uni) == doctest::Approx(2.5).epsilon(1e-14));

  MandelVec<3> hydro = MandelVec<3>::Zero();
  hydro[0] = hydro[1] = hydro[2] = 4.0;
  CHECK(von_mises<3>(hydro) == doctest::Approx(0.0).epsilon(1e-14));

  MandelVec<3> shear = MandelVec<3>::Zero();
  shear[5] = std::sqrt(2.0) * 1.5;  // tensor sigma_12 = 1.5
  CHECK(von_mises<3>(shear) == doctest::Approx(std::sqrt(3.0) * 1.5).epsilon(1e-14));
}
