#include "sqg/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sqg {

namespace {

constexpr char kMagic[8] = {'S', 'Q', 'G', 'F', 'I', 'E', 'L', 'D'};

static_assert(std::endian::native == std::endian::little, "field I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("field file: truncated header or data");
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_field_binary(std::ostream& os, const RealField& f) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kFieldFormatVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n));
  put<double>(os, f.grid().period);
  const auto s = f.samples();
  os.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size_bytes()));
}

RealField read_field_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw std::runtime_error("field file: bad magic (not an SQGFIELD file)");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kFieldFormatVersion) {
    throw std::runtime_error("field file: unsupported version " + std::to_string(version));
  }
  GridSpec grid;
  grid.n = static_cast<int>(get<std::uint32_t>(is));
  grid.period = get<double>(is);
  grid.validate();
  std::vector<double> samples(grid.size());
  is.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size() * sizeof(double)));
  if (!is) throw std::runtime_error("field file: truncated sample data");
  RealField f(grid, std::move(samples));
  if (!f.all_finite()) throw std::runtime_error("field file: non-finite samples");
  return f;
}

void write_field_csv(std::ostream& os, const RealField& f) {
  const int n = f.grid().n;
  os << "# sqg-field,version=" << kFieldFormatVersion << ",n=" << n
     << ",period=" << format_double(f.grid().period) << '\n';
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (ix) os << ',';
      os << format_double(f.at(ix, iy));
    }
    os << '\n';
  }
}

RealField read_field_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# sqg-field", 0) != 0) {
    throw std::runtime_error("field csv: missing '# sqg-field' header");
  }
  GridSpec grid;
  int version = -1;
  std::istringstream hs(header.substr(std::string("# sqg-field").size()));
  std::string item;
  while (std::getline(hs, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("field csv: malformed header item '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "version") version = std::stoi(value);
    else if (key == "n") grid.n = std::stoi(value);
    else if (key == "period") grid.period = std::stod(value);
  }
  if (version != kFieldFormatVersion) throw std::runtime_error("field csv: unsupported version");
  grid.validate();
  RealField f(grid);
  std::string line;
  for (int iy = 0; iy < grid.n; ++iy) {
    if (!std::getline(is, line)) throw std::runtime_error("field csv: expected " + std::to_string(grid.n) + " rows");
    std::istringstream ls(line);
    std::string cell;
    int ix = 0;
    while (std::getline(ls, cell, ',')) {
      if (ix >= grid.n) throw std::runtime_error("field csv: too many columns in row " + std::to_string(iy));
      f.at(ix++, iy) = std::stod(cell);
    }
    if (ix != grid.n) throw std::runtime_error("field csv: too few columns in row " + std::to_string(iy));
  }
  if (!f.all_finite()) throw std::runtime_error("field csv: non-finite samples");
  return f;
}

void save_field(const std::filesystem::path& path, const RealField& f) {
  const bool csv = path.extension() == ".csv";
  std::ofstream os(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (csv) write_field_csv(os, f);
  else write_field_binary(os, f);
}

RealField load_field(const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  std::ifstream is(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!is) throw std::runtime_error("cannot open field file " + path.string());
  return csv ? read_field_csv(is) : read_field_binary(is);
}

}  // namespace sqg
