#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semharq::bench {

/// Flat `key = value` text. `[section]` lines prefix the keys that follow
/// with "section."; `#` starts a comment; values may be double-quoted;
/// lists are written `[a, b, c]` or `lo..hi` / `lo..hi:step`.
class ConfigFile {
 public:
  ConfigFile() = default;

  /// Throws FormatError naming the offending line.
  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Throws InvalidArgument listing any key not in `known`.
  void check_known(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

double parse_number(const std::string& text);
std::size_t parse_count(const std::string& text);
bool parse_bool(const std::string& text);
/// "[1, 2, 3]", "1,2,3", "1..5" (step 1) or "-9..9:3".
std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> parse_word_list(const std::string& text);

}  // namespace semharq::bench
