#include "fnohom/microstructure.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace fnohom {

PhaseMap::PhaseMap(const Cell<3>& c, std::vector<std::uint8_t> l)
    : cell(c), labels(std::move(l)) {
  if (static_cast<std::int64_t>(labels.size()) != cell.voxel_count())
    throw std::invalid_argument("phase map: label count mismatch");
}

std::vector<std::uint8_t> PhaseMap::labels_present() const {
  std::array<bool, 256> seen{};
  for (std::uint8_t l : labels) seen[l] = true;
  std::vector<std::uint8_t> out;
  for (int l = 0; l < 256; ++l)
    if (seen[l]) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

double PhaseMap::volume_fraction(std::uint8_t label) const {
  std::int64_t n = 0;
  for (std::uint8_t l : labels) n += (l == label);
  return static_cast<double>(n) / static_cast<double>(labels.size());
}

PhaseMap gen_sphere(double cell_edge_um, double radius_um, int resolution) {
  if (resolution < 1)
    throw std::invalid_argument("gen_sphere: resolution must be >= 1");
  if (radius_um < 0.0)
    throw std::invalid_argument("gen_sphere: radius must be non-negative");
  if (!(radius_um < 0.5 * cell_edge_um))
    throw std::invalid_argument("gen_sphere: radius must be < cell_edge/2");
  const Cell<3> cell = Cell<3>::cubic(cell_edge_um, resolution);
  const double h = cell.spacing(0);
  const double center = 0.5 * cell_edge_um;
  const double r2 = radius_um * radius_um;
  std::vector<std::uint8_t> labels(cell.voxel_count(), 0);
  std::int64_t v = 0;
  for (int i = 0; i < resolution; ++i) {
    const double x = (i + 0.5) * h - center;
    for (int j = 0; j < resolution; ++j) {
      const double y = (j + 0.5) * h - center;
      for (int k = 0; k < resolution; ++k, ++v) {
        const double z = (k + 0.5) * h - center;
        if (x * x + y * y + z * z <= r2) labels[v] = 1;
      }
    }
  }
  return PhaseMap(cell, std::move(labels));
}

PhaseMap tile(const PhaseMap& phases, int factor) {
  if (factor < 1) throw std::invalid_argument("tile: factor must be >= 1");
  const auto& n = phases.cell.resolution;
  std::array<double, 3> lengths;
  std::array<int, 3> res;
  for (int a = 0; a < 3; ++a) {
    lengths[a] = phases.cell.lengths[a] * factor;
    res[a] = n[a] * factor;
  }
  const Cell<3> big(lengths, res);
  std::vector<std::uint8_t> labels(big.voxel_count());
  std::int64_t v = 0;
  for (int i = 0; i < res[0]; ++i)
    for (int j = 0; j < res[1]; ++j)
      for (int k = 0; k < res[2]; ++k, ++v)
        labels[v] = phases.labels[phases.cell.linear_index(
            {i % n[0], j % n[1], k % n[2]})];
  return PhaseMap(big, std::move(labels));
}

StiffnessField<3> assign_materials(const PhaseMap& phases,
                                   const MaterialTable<3>& table) {
  table.validate_unique();
  std::array<int, 256> slot_of;
  slot_of.fill(-1);
  std::vector<MandelMat<3>> materials;
  for (std::uint8_t label : phases.labels_present()) {
    const MaterialEntry<3>* e = table.find(label);
    if (!e)
      throw std::invalid_argument("assign_materials: no table entry for label " +
                                  std::to_string(int(label)));
    slot_of[label] = static_cast<int>(materials.size());
    materials.push_back(e->stiffness());
  }
  std::vector<std::uint8_t> slots(phases.labels.size());
  for (std::size_t v = 0; v < phases.labels.size(); ++v)
    slots[v] = static_cast<std::uint8_t>(slot_of[phases.labels[v]]);
  return StiffnessField<3>(phases.cell, std::move(slots), std::move(materials));
}

}  // namespace fnohom
