#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqg::cli {

inline constexpr int kConfigFormatVersion = 1;

/// Malformed config input; carries the source and line when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key = value settings with dotted keys ("solver.alpha = 0.5").
///
/// Lines are "key = value"; '#' starts a comment; blank lines are skipped.
/// Later assignments (including command-line overrides) replace earlier ones.
/// Every typed getter records the value it used, so `write_resolved` echoes
/// exactly the settings a command consumed, defaults included.
class Config {
 public:
  void parse(std::istream& is, const std::string& source);
  void load(const std::filesystem::path& path);
  /// "key=value" override; throws ConfigError if there is no '='.
  void set_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  long get_int(const std::string& key, long fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback);
  /// Returns nullopt when the key is absent or set to "auto".
  std::optional<double> get_auto_double(const std::string& key);

  /// Records a value computed by the command in place of "auto".
  void resolve(const std::string& key, const std::string& value);

  /// Keys that were supplied but never read.
  std::vector<std::string> unused_keys() const;
  /// Throws ConfigError listing unused keys.
  void require_all_used() const;

  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  /// Sorted "key = value" lines after a header comment naming the command.
  void write_resolved(std::ostream& os, const std::string& command) const;

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  const Entry* find(const std::string& key);

  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
  std::map<std::string, std::string> resolved_;
};

std::string format_double(double v);
std::string format_doubles(const std::vector<double>& values);

}  // namespace sqg::cli
