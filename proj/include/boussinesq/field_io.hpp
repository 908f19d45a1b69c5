// Versioned on-disk format for SpectralField.
//
// <stem>.json  manifest: format, version, dimension, points, period, real,
//              layout, data file name.
// <stem>.bin   N^n complex coefficients, row-major over storage indices,
//              each as two little-endian IEEE-754 binary64 (re, im).
#pragma once

#include <filesystem>

#include "boussinesq/grid.hpp"

namespace boussinesq {

inline constexpr int kFieldFormatVersion = 1;

void write_field(const SpectralField& field, const std::filesystem::path& stem);

/// Throws std::runtime_error on a missing file, foreign format, unsupported
/// version or truncated data.
SpectralField read_field(const std::filesystem::path& stem);

}  // namespace boussinesq
