#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circfilt/experiments.hpp"

namespace circfilt {

/// Resolved key/value settings, addressed as "section.key".
///
/// Values are layered: built-in defaults, then INI files, then explicit
/// overrides (command-line flags). Later layers win. Unknown keys are
/// rejected with the list of valid ones.
class Settings {
 public:
  /// All documented keys with their defaults.
  static Settings defaults();
  static const std::vector<std::string>& valid_keys();

  /// Parse a flat INI file ([section] headers, key = value, '#' or ';' comments).
  void merge_file(const std::filesystem::path& path);
  void merge_ini(std::istream& in, const std::string& source);
  /// Merge "section.key = value" lines such as those written into output headers.
  /// Lines that do not name a known key are skipped.
  void merge_header(const std::vector<std::string>& lines);
  void set(std::string_view key, std::string value);

  [[nodiscard]] const std::string& get(std::string_view key) const;
  [[nodiscard]] double get_double(std::string_view key) const;
  [[nodiscard]] std::optional<double> get_optional_double(std::string_view key) const;  ///< "none" → nullopt
  [[nodiscard]] long long get_int(std::string_view key) const;
  [[nodiscard]] bool get_bool(std::string_view key) const;
  [[nodiscard]] std::vector<std::string> get_list(std::string_view key) const;  ///< comma separated

  /// "section.key = value" for every key, in key order.
  [[nodiscard]] std::vector<std::string> header_lines() const;

  /// Build and validate the experiment described by these settings. With
  /// `with_filters` false the filter list is left empty and not checked.
  [[nodiscard]] ExperimentConfig experiment(bool with_filters = true) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace circfilt
