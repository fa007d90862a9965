/**
 * @brief Microstructure generation and material assignment (3D voxel maps).
 */

#ifndef FNOHOM_MICROSTRUCTURE_HPP
#define FNOHOM_MICROSTRUCTURE_HPP

#include <cstdint>
#include <vector>

#include "fnohom/grid.hpp"
#include "fnohom/material.hpp"

namespace fnohom {

/// One 8-bit phase label per voxel.
struct PhaseMap {
  Cell<3> cell;
  std::vector<std::uint8_t> labels;

  PhaseMap() = default;
  PhaseMap(const Cell<3>& c, std::vector<std::uint8_t> l);

  std::vector<std::uint8_t> labels_present() const;
  double volume_fraction(std::uint8_t label) const;
};

/**
 * Single sphere (label 1) centered in a cubic cell of matrix (label 0).
 * A voxel belongs to the sphere iff its center lies within the radius of the
 * cell center. Requires radius < cell_edge/2 (non-touching).
 */
PhaseMap gen_sphere(double cell_edge_um, double radius_um, int resolution);

/// Periodic tiling: `factor` copies per axis at the same voxel size.
PhaseMap tile(const PhaseMap& phases, int factor);

/**
 * Per-voxel stiffness from a phase map and a material table. Every label in
 * the map must have a table entry; a missing label raises an error naming it.
 */
StiffnessField<3> assign_materials(const PhaseMap& phases,
                                   const MaterialTable<3>& table);

}  // namespace fnohom

#endif  // FNOHOM_MICROSTRUCTURE_HPP
