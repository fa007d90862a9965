#include "fnohom/field_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fnohom {

namespace {

using nlohmann::json;

json read_sidecar(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw std::runtime_error("io: missing sidecar " + path + ".json");
  json j;
  in >> j;
  return j;
}

void write_sidecar(const std::string& path, const json& j) {
  std::ofstream out(path + ".json");
  if (!out) throw std::runtime_error("io: cannot write " + path + ".json");
  out << j.dump(2) << "\n";
}

std::vector<char> read_payload(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open " + path);
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

Cell<3> cell_from_sidecar(const json& j) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  const auto lengths = j.at("lengths_um").get<std::vector<double>>();
  if (dims.size() != 3 || lengths.size() != 3)
    throw std::runtime_error("io: sidecar dims/lengths_um must have size 3");
  return Cell<3>({lengths[0], lengths[1], lengths[2]},
                 {dims[0], dims[1], dims[2]});
}

}  // namespace

void save_phase_map(const std::string& path, const PhaseMap& phases) {
  json j;
  j["dims"] = phases.cell.resolution;
  j["lengths_um"] = phases.cell.lengths;
  j["labels"] = phases.labels_present();
  write_sidecar(path, j);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write " + path);
  out.write(reinterpret_cast<const char*>(phases.labels.data()),
            static_cast<std::streamsize>(phases.labels.size()));
}

PhaseMap load_phase_map(const std::string& path) {
  const json j = read_sidecar(path);
  const Cell<3> cell = cell_from_sidecar(j);
  const std::vector<char> payload = read_payload(path);
  if (static_cast<std::int64_t>(payload.size()) != cell.voxel_count())
    throw std::runtime_error(
        "io: phase map payload size " + std::to_string(payload.size()) +
        " does not match dims (" + std::to_string(cell.voxel_count()) +
        " voxels)");
  std::vector<std::uint8_t> labels(payload.begin(), payload.end());
  return PhaseMap(cell, std::move(labels));
}

void save_field(const std::string& path, const Field<3>& field,
                const std::vector<std::string>& component_names) {
  if (static_cast<int>(component_names.size()) != field.components())
    throw std::invalid_argument("io: component name count mismatch");
  json j;
  j["dims"] = field.cell.resolution;
  j["lengths_um"] = field.cell.lengths;
  j["components"] = component_names;
  write_sidecar(path, j);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write " + path);
  for (int c = 0; c < field.components(); ++c)
    out.write(reinterpret_cast<const char*>(field.data.col(c).data()),
              static_cast<std::streamsize>(sizeof(double) * field.voxels()));
}

Field<3> load_field(const std::string& path) {
  const json j = read_sidecar(path);
  const Cell<3> cell = cell_from_sidecar(j);
  const auto names = j.at("components").get<std::vector<std::string>>();
  const std::vector<char> payload = read_payload(path);
  const std::int64_t expect =
      cell.voxel_count() * static_cast<std::int64_t>(names.size()) * 8;
  if (static_cast<std::int64_t>(payload.size()) != expect)
    throw std::runtime_error("io: field payload size mismatch for " + path);
  Field<3> f(cell, static_cast<int>(names.size()));
  const double* src = reinterpret_cast<const double*>(payload.data());
  for (int c = 0; c < f.components(); ++c)
    for (std::int64_t v = 0; v < f.voxels(); ++v) f.data(v, c) = *src++;
  return f;
}

std::vector<std::string> mandel_component_names(const std::string& symbol) {
  return {symbol + "_11",          symbol + "_22",
          symbol + "_33",          "sqrt2_" + symbol + "_23",
          "sqrt2_" + symbol + "_13", "sqrt2_" + symbol + "_12"};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

void save_vtk_scalar(const std::string& path, const Field<3>& field,
                     const std::string& name) {
  if (field.components() != 1)
    throw std::invalid_argument("vtk: expected a one-component field");
  const auto& n = field.cell.resolution;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write " + path);
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << n[2] << " " << n[1] << " " << n[0] << "\n";
  out << "ORIGIN 0 0 0\n";
  out << "SPACING " << field.cell.spacing(2) << " " << field.cell.spacing(1)
      << " " << field.cell.spacing(0) << "\n";
  out << "POINT_DATA " << field.voxels() << "\n";
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::int64_t v = 0; v < field.voxels(); ++v)
    out << format_double(field.data(v, 0)) << "\n";
}

}  // namespace fnohom
