#include "sqg_cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sqg::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  }
  return true;
}

double parse_double(const std::string& text, const std::string& key, const std::string& origin) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) {
    throw ConfigError(origin + ": key '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void Config::parse(std::istream& is, const std::string& source) {
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = source + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(origin + ": invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(origin + ": key '" + key + "' has an empty value");
    entries_[key] = {value, origin};
  }
}

void Config::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  parse(is, path.string());
}

void Config::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key)) throw ConfigError("override has invalid key '" + key + "'");
  entries_[key] = {trim(assignment.substr(eq + 1)), "command line"};
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'");
  entries_[key] = {value, "command line"};
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry* Config::find(const std::string& key) {
  used_.insert(key);
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  const Entry* e = find(key);
  const std::string v = e ? e->value : fallback;
  resolved_[key] = v;
  return v;
}

double Config::get_double(const std::string& key, double fallback) {
  const Entry* e = find(key);
  const double v = e ? parse_double(e->value, key, e->origin) : fallback;
  resolved_[key] = format_double(v);
  return v;
}

long Config::get_int(const std::string& key, long fallback) {
  const Entry* e = find(key);
  long v = fallback;
  if (e) {
    const std::string t = trim(e->value);
    std::size_t used = 0;
    try {
      v = std::stol(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) {
      throw ConfigError(e->origin + ": key '" + key + "' expects an integer, got '" + e->value + "'");
    }
  }
  resolved_[key] = std::to_string(v);
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  const Entry* e = find(key);
  bool v = fallback;
  if (e) {
    const std::string t = trim(e->value);
    if (t == "true" || t == "1" || t == "yes" || t == "on") v = true;
    else if (t == "false" || t == "0" || t == "no" || t == "off") v = false;
    else throw ConfigError(e->origin + ": key '" + key + "' expects true/false, got '" + e->value + "'");
  }
  resolved_[key] = v ? "true" : "false";
  return v;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) {
  const Entry* e = find(key);
  std::vector<double> v = fallback;
  if (e) {
    v.clear();
    std::istringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_double(item, key, e->origin));
    if (v.empty()) throw ConfigError(e->origin + ": key '" + key + "' expects a comma-separated list");
  }
  resolved_[key] = format_doubles(v);
  return v;
}

std::optional<double> Config::get_auto_double(const std::string& key) {
  const Entry* e = find(key);
  if (!e || trim(e->value) == "auto") {
    resolved_[key] = "auto";
    return std::nullopt;
  }
  const double v = parse_double(e->value, key, e->origin);
  resolved_[key] = format_double(v);
  return v;
}

void Config::resolve(const std::string& key, const std::string& value) { resolved_[key] = value; }

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) {
    if (!used_.count(key)) out.push_back(key + " (" + entry.origin + ")");
  }
  return out;
}

void Config::require_all_used() const {
  const auto unused = unused_keys();
  if (unused.empty()) return;
  std::string msg = "unknown config key";
  msg += unused.size() > 1 ? "s: " : ": ";
  for (std::size_t i = 0; i < unused.size(); ++i) {
    if (i) msg += ", ";
    msg += unused[i];
  }
  throw ConfigError(msg);
}

void Config::write_resolved(std::ostream& os, const std::string& command) const {
  os << "# sqg resolved config, format_version=" << kConfigFormatVersion << '\n';
  os << "# command: " << command << '\n';
  for (const auto& [key, value] : resolved_) os << key << " = " << value << '\n';
}

}  // namespace sqg::cli
