/**
 * @brief Symmetric-tensor algebra in Mandel notation.
 *
 * Symmetric d×d tensors (strains, stresses, polarizations) are stored as
 * K-vectors with K = d(d+1)/2, and self-adjoint operators on them (stiffness
 * tensors) as symmetric K×K matrices. The Mandel convention scales the shear
 * slots by √2 so that the Euclidean norm of the vector equals the Frobenius
 * norm of the tensor, and the action of a stiffness tensor is a plain
 * matrix-vector product whose spectral norm equals the operator norm.
 *
 * Component ordering is fixed as
 *   d = 3:  (11, 22, 33, √2·23, √2·13, √2·12)
 *   d = 2:  (11, 22, √2·12)
 */

#ifndef FNOHOM_MANDEL_HPP
#define FNOHOM_MANDEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace fnohom {

/// Number of Mandel components for dimension D.
constexpr int mandel_size(int d) { return d * (d + 1) / 2; }

template <int D, typename Scalar = double>
using MandelVec = Eigen::Matrix<Scalar, mandel_size(D), 1>;

template <int D, typename Scalar = double>
using MandelMat = Eigen::Matrix<Scalar, mandel_size(D), mandel_size(D)>;

template <int D, typename Scalar = double>
using SmallMat = Eigen::Matrix<Scalar, D, D>;

namespace detail {

/// (row, col) of the off-diagonal entry represented by Mandel slot D + k.
template <int D>
constexpr std::pair<int, int> shear_pair(int k) {
  static_assert(D == 2 || D == 3);
  if constexpr (D == 2) {
    return {0, 1};  // slot 2
  } else {
    switch (k) {
      case 0: return {1, 2};  // slot 3: 23
      case 1: return {0, 2};  // slot 4: 13
      default: return {0, 1};  // slot 5: 12
    }
  }
}

inline constexpr double sqrt2 = 1.4142135623730951;

}  // namespace detail

/**
 * Pack a symmetric d×d tensor into its Mandel vector.
 *
 * The input must be symmetric within @p tol (relative to its norm);
 * otherwise a std::invalid_argument is thrown.
 */
template <int D, typename Scalar>
MandelVec<D, Scalar> mandel_pack(const SmallMat<D, Scalar>& t,
                                 double tol = 1e-10) {
  const double asym = (t - t.transpose()).norm();
  if (asym > tol * (1.0 + t.norm())) {
    throw std::invalid_argument("mandel_pack: input tensor is not symmetric");
  }
  MandelVec<D, Scalar> v;
  for (int i = 0; i < D; ++i) v[i] = t(i, i);
  for (int k = 0; k < mandel_size(D) - D; ++k) {
    const auto [i, j] = detail::shear_pair<D>(k);
    v[D + k] = detail::sqrt2 * Scalar(0.5) * (t(i, j) + t(j, i));
  }
  return v;
}

/// Inverse of mandel_pack; exact round trip.
template <int D, typename Scalar>
SmallMat<D, Scalar> mandel_unpack(const MandelVec<D, Scalar>& v) {
  SmallMat<D, Scalar> t;
  for (int i = 0; i < D; ++i) t(i, i) = v[i];
  for (int k = 0; k < mandel_size(D) - D; ++k) {
    const auto [i, j] = detail::shear_pair<D>(k);
    t(i, j) = v[D + k] / detail::sqrt2;
    t(j, i) = t(i, j);
  }
  return t;
}

/// Double contraction T : e as a Mandel matrix-vector product.
template <int D, typename Scalar>
MandelVec<D, Scalar> double_contract(const MandelMat<D, Scalar>& t,
                                     const MandelVec<D, Scalar>& e) {
  return t * e;
}

/// Extreme eigenvalues (alpha_minus, alpha_plus) of a symmetric Mandel matrix.
template <int D>
std::pair<double, double> spectral_bounds(const MandelMat<D>& t) {
  Eigen::SelfAdjointEigenSolver<MandelMat<D>> es(t,
                                                 Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

/// Isotropic linear elastic material given by engineering constants.
struct IsotropicMaterial {
  double young_modulus;  // GPa
  double poisson_ratio;  // dimensionless, in (-1, 0.5)
};

/// Lamé parameters (lambda, mu) of an isotropic material.
inline std::pair<double, double> lame_parameters(const IsotropicMaterial& m) {
  const double e = m.young_modulus;
  const double nu = m.poisson_ratio;
  if (!(e > 0.0)) throw std::invalid_argument("material: E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) {
    throw std::invalid_argument(
        "material: nu must lie in (-1, 0.5); nu = " + std::to_string(nu));
  }
  const double lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = e / (2.0 * (1.0 + nu));
  return {lambda, mu};
}

/**
 * Mandel matrix of the isotropic stiffness  e ↦ λ tr(e) I + 2μ e.
 *
 * Eigenvalues are {d·λ + 2μ} (once, volumetric) and {2μ} (K−1 times,
 * deviatoric).
 */
template <int D>
MandelMat<D> isotropic_stiffness(const IsotropicMaterial& m) {
  const auto [lambda, mu] = lame_parameters(m);
  MandelMat<D> c = MandelMat<D>::Zero();
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) c(i, j) = lambda;
  for (int i = 0; i < D; ++i) c(i, i) += 2.0 * mu;
  for (int k = D; k < mandel_size(D); ++k) c(k, k) = 2.0 * mu;
  return c;
}

/**
 * Convert a Mandel stiffness matrix to the Voigt engineering convention
 * (shear rows/columns divided by √2 each, so the 44-entry of an isotropic
 * matrix is the shear modulus μ rather than 2μ).
 */
template <int D>
MandelMat<D> voigt_from_mandel(const MandelMat<D>& c) {
  MandelMat<D> out = c;
  for (int k = D; k < mandel_size(D); ++k) {
    out.row(k) /= detail::sqrt2;
    out.col(k) /= detail::sqrt2;
  }
  return out;
}

/**
 * Closest isotropic engineering constants (E, nu) of a near-isotropic Mandel
 * stiffness matrix, via the volumetric/deviatoric invariant averages.
 */
template <int D>
std::pair<double, double> isotropic_projection(const MandelMat<D>& c) {
  MandelVec<D> trace_dir = MandelVec<D>::Zero();
  for (int i = 0; i < D; ++i) trace_dir[i] = 1.0;
  // a = d·λ + 2μ (volumetric eigenvalue), b = 2μ (deviatoric average).
  const double a = trace_dir.dot(c * trace_dir) / D;
  const double b = (c.trace() - a) / (mandel_size(D) - 1);
  const double mu = 0.5 * b;
  const double lambda = (a - b) / D;
  const double e = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
  const double nu = lambda / (2.0 * (lambda + mu));
  return {e, nu};
}

/// Deviatoric equivalent (von Mises) stress of a Mandel stress vector.
template <int D>
double von_mises(const MandelVec<D>& sigma) {
  double tr = 0.0;
  for (int i = 0; i < D; ++i) tr += sigma[i];
  MandelVec<D> dev = sigma;
  for (int i = 0; i < D; ++i) dev[i] -= tr / D;
  return std::sqrt(1.5) * dev.norm();
}

}  // namespace fnohom

#endif  // FNOHOM_MANDEL_HPP
