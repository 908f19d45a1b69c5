#include "boussinesq/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace boussinesq {

namespace {

static_assert(std::endian::native == std::endian::little, "field IO assumes a little-endian host");

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  std::filesystem::path p = stem;
  p += suffix;
  return p;
}

}  // namespace

void write_field(const SpectralField& field, const std::filesystem::path& stem) {
  const GridSpec& g = field.grid();
  const auto bin = with_suffix(stem, ".bin");
  nlohmann::ordered_json manifest;
  manifest["format"] = "boussinesq-spectral-field";
  manifest["version"] = kFieldFormatVersion;
  manifest["dimension"] = g.dimension();
  manifest["points"] = g.points();
  manifest["period"] = g.period();
  manifest["real"] = field.real();
  manifest["layout"] = "row-major storage index, complex128 little-endian (re, im)";
  manifest["data"] = bin.filename().string();

  std::ofstream out(bin, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + bin.string());
  out.write(reinterpret_cast<const char*>(field.coeffs().data()),
            static_cast<std::streamsize>(g.size() * sizeof(Complex)));
  std::ofstream meta(with_suffix(stem, ".json"));
  meta << manifest.dump(2) << '\n';
  if (!out || !meta) throw std::runtime_error("write_field: write failed for " + stem.string());
}

SpectralField read_field(const std::filesystem::path& stem) {
  const auto json_path = with_suffix(stem, ".json");
  std::ifstream meta(json_path);
  if (!meta) throw std::runtime_error("read_field: cannot open " + json_path.string());
  const auto manifest = nlohmann::json::parse(meta);
  if (manifest.value("format", "") != "boussinesq-spectral-field")
    throw std::runtime_error("read_field: unrecognised format in " + json_path.string());
  if (manifest.value("version", 0) != kFieldFormatVersion)
    throw std::runtime_error("read_field: unsupported version in " + json_path.string());
  const GridSpec grid(manifest.at("dimension").get<int>(), manifest.at("period").get<Real>(),
                      manifest.at("points").get<int>());
  const auto bin = json_path.parent_path() / manifest.at("data").get<std::string>();
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + bin.string());
  ArrayXc coeffs(static_cast<Eigen::Index>(grid.size()));
  in.read(reinterpret_cast<char*>(coeffs.data()), static_cast<std::streamsize>(grid.size() * sizeof(Complex)));
  if (in.gcount() != static_cast<std::streamsize>(grid.size() * sizeof(Complex)))
    throw std::runtime_error("read_field: truncated data in " + bin.string());
  return SpectralField(grid, std::move(coeffs), manifest.at("real").get<bool>());
}

}  // namespace boussinesq
