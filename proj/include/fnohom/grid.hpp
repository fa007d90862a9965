/**
 * @brief Periodic cells and voxel fields.
 *
 * A Cell is a rectangular periodic box [0,L_1]×…×[0,L_d] discretized into
 * N_1×…×N_d voxels. Fields store one value tuple per voxel, voxels ordered
 * row-major with the last axis fastest, components stored planar (each
 * component is a contiguous column) so per-component transforms run on
 * contiguous memory.
 */

#ifndef FNOHOM_GRID_HPP
#define FNOHOM_GRID_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "fnohom/mandel.hpp"

namespace fnohom {

template <int D>
struct Cell {
  std::array<double, D> lengths;   // µm
  std::array<int, D> resolution;   // voxels per axis

  Cell() = default;
  Cell(const std::array<double, D>& l, const std::array<int, D>& n)
      : lengths(l), resolution(n) {
    for (int a = 0; a < D; ++a) {
      if (!(lengths[a] > 0.0))
        throw std::invalid_argument("Cell: lengths must be positive");
      if (resolution[a] < 1)
        throw std::invalid_argument("Cell: resolution must be >= 1");
    }
  }

  /// Cubic cell of edge length `edge` at resolution n per axis.
  static Cell cubic(double edge, int n) {
    std::array<double, D> l;
    std::array<int, D> r;
    l.fill(edge);
    r.fill(n);
    return Cell(l, r);
  }

  std::int64_t voxel_count() const {
    std::int64_t n = 1;
    for (int a = 0; a < D; ++a) n *= resolution[a];
    return n;
  }

  double spacing(int axis) const { return lengths[axis] / resolution[axis]; }

  /// Linear index of a voxel multi-index (row-major, last axis fastest).
  std::int64_t linear_index(const std::array<int, D>& idx) const {
    std::int64_t v = 0;
    for (int a = 0; a < D; ++a) v = v * resolution[a] + idx[a];
    return v;
  }

  std::array<int, D> multi_index(std::int64_t v) const {
    std::array<int, D> idx;
    for (int a = D - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(v % resolution[a]);
      v /= resolution[a];
    }
    return idx;
  }

  /// Signed DFT frequency index for axis `a` (Nyquist mapped to +N/2).
  int signed_frequency(int axis, int i) const {
    const int n = resolution[axis];
    return i <= n / 2 ? i : i - n;
  }

  bool operator==(const Cell& o) const {
    return lengths == o.lengths && resolution == o.resolution;
  }
};

/**
 * Voxel field with a fixed number of scalar components per voxel.
 * data(v, c) is component c at voxel v; each component column is contiguous.
 */
template <int D, typename Scalar = double>
struct FieldT {
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Cell<D> cell;
  Storage data;  // voxel_count × components

  FieldT() = default;
  FieldT(const Cell<D>& c, int components)
      : cell(c), data(Storage::Zero(c.voxel_count(), components)) {}

  int components() const { return static_cast<int>(data.cols()); }
  std::int64_t voxels() const { return data.rows(); }

  /// Value tuple at one voxel as a fixed-size vector.
  template <int NC>
  Eigen::Matrix<Scalar, NC, 1> at(std::int64_t v) const {
    Eigen::Matrix<Scalar, NC, 1> out;
    for (int c = 0; c < NC; ++c) out[c] = data(v, c);
    return out;
  }

  template <int NC>
  void set(std::int64_t v, const Eigen::Matrix<Scalar, NC, 1>& val) {
    for (int c = 0; c < NC; ++c) data(v, c) = val[c];
  }

  void fill_constant(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& val) {
    for (int c = 0; c < components(); ++c) data.col(c) = val[c];
  }

  /// Volume average per component.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> m(components());
    for (int c = 0; c < components(); ++c) m[c] = data.col(c).mean();
    return m;
  }
};

template <int D>
using Field = FieldT<D, double>;
template <int D>
using SpectrumField = FieldT<D, std::complex<double>>;

/// Strain/stress field: one Mandel vector per voxel.
template <int D>
Field<D> make_tensor_field(const Cell<D>& cell) {
  return Field<D>(cell, mandel_size(D));
}

/// Displacement field: one d-vector per voxel.
template <int D>
Field<D> make_vector_field(const Cell<D>& cell) {
  return Field<D>(cell, D);
}

/// Volume-averaged L² norm: sqrt of the mean squared Euclidean voxel norm.
template <int D>
double l2_norm(const Field<D>& f) {
  double acc = 0.0;
  for (int c = 0; c < f.components(); ++c)
    acc += f.data.col(c).square().sum();
  return std::sqrt(acc / static_cast<double>(f.voxels()));
}

template <int D>
double l2_distance(const Field<D>& a, const Field<D>& b) {
  if (!(a.cell == b.cell) || a.components() != b.components())
    throw std::invalid_argument("l2_distance: field layout mismatch");
  double acc = 0.0;
  for (int c = 0; c < a.components(); ++c)
    acc += (a.data.col(c) - b.data.col(c)).square().sum();
  return std::sqrt(acc / static_cast<double>(a.voxels()));
}

}  // namespace fnohom

#endif  // FNOHOM_GRID_HPP
