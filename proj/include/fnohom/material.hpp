/**
 * @brief Material tables and per-voxel stiffness fields.
 *
 * A stiffness field stores one 8-bit material slot per voxel plus the table
 * of Mandel stiffness matrices the slots refer to. Table entries come either
 * from isotropic engineering constants or from a raw K×K Mandel matrix.
 */

#ifndef FNOHOM_MATERIAL_HPP
#define FNOHOM_MATERIAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fnohom/grid.hpp"
#include "fnohom/mandel.hpp"

namespace fnohom {

template <int D>
struct MaterialEntry {
  std::uint8_t label;
  std::variant<IsotropicMaterial, MandelMat<D>> material;

  MandelMat<D> stiffness() const {
    if (std::holds_alternative<IsotropicMaterial>(material))
      return isotropic_stiffness<D>(std::get<IsotropicMaterial>(material));
    const MandelMat<D>& m = std::get<MandelMat<D>>(material);
    if ((m - m.transpose()).norm() > 1e-10 * (1.0 + m.norm()))
      throw std::invalid_argument("material: raw Mandel matrix not symmetric");
    return m;
  }
};

template <int D>
struct MaterialTable {
  std::vector<MaterialEntry<D>> entries;

  const MaterialEntry<D>* find(std::uint8_t label) const {
    for (const auto& e : entries)
      if (e.label == label) return &e;
    return nullptr;
  }

  void validate_unique() const {
    for (std::size_t i = 0; i < entries.size(); ++i)
      for (std::size_t j = i + 1; j < entries.size(); ++j)
        if (entries[i].label == entries[j].label)
          throw std::invalid_argument(
              "material table: duplicate label " +
              std::to_string(int(entries[i].label)));
  }
};

/// Per-voxel stiffness: slot indices into a table of Mandel matrices.
template <int D>
struct StiffnessField {
  Cell<D> cell;
  std::vector<std::uint8_t> slots;      // one per voxel
  std::vector<MandelMat<D>> materials;  // indexed by slot

  StiffnessField() = default;
  StiffnessField(const Cell<D>& c, std::vector<std::uint8_t> s,
                 std::vector<MandelMat<D>> m)
      : cell(c), slots(std::move(s)), materials(std::move(m)) {
    if (static_cast<std::int64_t>(slots.size()) != cell.voxel_count())
      throw std::invalid_argument("stiffness field: slot count mismatch");
    for (std::uint8_t s_ : slots)
      if (s_ >= materials.size())
        throw std::invalid_argument("stiffness field: slot out of range");
  }

  /// Homogeneous field of a single material.
  static StiffnessField homogeneous(const Cell<D>& c, const MandelMat<D>& m) {
    return StiffnessField(
        c, std::vector<std::uint8_t>(c.voxel_count(), 0), {m});
  }

  const MandelMat<D>& at(std::int64_t v) const { return materials[slots[v]]; }

  /// Global eigenvalue bounds (alpha_minus, alpha_plus) over all materials
  /// actually referenced by some voxel.
  std::pair<double, double> field_bounds() const {
    std::vector<bool> used(materials.size(), false);
    for (std::uint8_t s : slots) used[s] = true;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t m = 0; m < materials.size(); ++m) {
      if (!used[m]) continue;
      const auto [a, b] = spectral_bounds<D>(materials[m]);
      lo = first ? a : std::min(lo, a);
      hi = first ? b : std::max(hi, b);
      first = false;
    }
    if (first) throw std::logic_error("stiffness field: no materials");
    return {lo, hi};
  }
};

}  // namespace fnohom

#endif  // FNOHOM_MATERIAL_HPP
