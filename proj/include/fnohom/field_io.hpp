/**
 * @brief File formats: phase maps, component fields, CSV tables.
 *
 * Phase map: raw unsigned 8-bit payload, voxels row-major with the last axis
 * fastest, plus a JSON sidecar `<path>.json` holding {dims, lengths_um,
 * labels}. Field: raw little-endian 64-bit floats, component-major (all
 * voxels of component 0, then component 1, ...), same sidecar plus component
 * names. Round trips are bit-exact; payload size is validated against the
 * sidecar on load.
 */

#ifndef FNOHOM_FIELD_IO_HPP
#define FNOHOM_FIELD_IO_HPP

#include <string>
#include <vector>

#include "fnohom/grid.hpp"
#include "fnohom/microstructure.hpp"

namespace fnohom {

void save_phase_map(const std::string& path, const PhaseMap& phases);
PhaseMap load_phase_map(const std::string& path);

void save_field(const std::string& path, const Field<3>& field,
                const std::vector<std::string>& component_names);
Field<3> load_field(const std::string& path);

/// Mandel component names in the fixed ordering, for strain/stress sidecars.
std::vector<std::string> mandel_component_names(const std::string& symbol);

/// Minimal CSV writer; every run with the same rows produces identical bytes.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

/// Legacy-ASCII VTK export of a one-component field, for visualization.
void save_vtk_scalar(const std::string& path, const Field<3>& field,
                     const std::string& name);

}  // namespace fnohom

#endif  // FNOHOM_FIELD_IO_HPP
