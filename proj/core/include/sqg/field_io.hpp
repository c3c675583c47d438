#pragma once

#include <filesystem>
#include <iosfwd>

#include "sqg/grid.hpp"

namespace sqg {

inline constexpr int kFieldFormatVersion = 1;

// Binary layout (little-endian):
//   8 bytes  magic "SQGFIELD"
//   uint32   format version (1)
//   uint32   n
//   float64  period
//   n*n float64 samples, row-major (iy outer, ix inner)
//
// CSV layout:
//   line 1:  "# sqg-field,version=1,n=<n>,period=<period>"
//   n lines of n comma-separated samples (row iy, columns ix), printed with 17 significant digits.

void write_field_binary(std::ostream& os, const RealField& f);
RealField read_field_binary(std::istream& is);

void write_field_csv(std::ostream& os, const RealField& f);
RealField read_field_csv(std::istream& is);

/// Dispatches on extension: ".csv" is CSV, anything else binary.
void save_field(const std::filesystem::path& path, const RealField& f);
RealField load_field(const std::filesystem::path& path);

}  // namespace sqg
