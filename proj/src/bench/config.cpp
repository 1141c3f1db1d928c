#include "semharq/bench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "semharq/error.hpp"
#include "semharq/number_format.hpp"

namespace semharq::bench {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> split_items(const std::string& text) {
  std::string body = trim(text);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw FormatError("unterminated list '" + text + "'");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  std::size_t line_no = 0;
  std::stringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') {
        throw FormatError("config line " + std::to_string(line_no) + ": bad section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw FormatError("config line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ConfigFile::check_known(const std::vector<std::string>& known) const {
  std::string bad;
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      bad += bad.empty() ? key : ", " + key;
    }
  }
  if (!bad.empty()) throw InvalidArgument("unknown config key(s): " + bad);
}

double parse_number(const std::string& text) { return parse_double(trim(text)); }

std::size_t parse_count(const std::string& text) {
  const double v = parse_number(text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw FormatError("expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "off" || t == "no") return false;
  throw FormatError("expected true/false, got '" + text + "'");
}

std::vector<double> parse_number_list(const std::string& text) {
  const std::string t = trim(text);
  const auto dots = t.find("..");
  if (dots != std::string::npos && t.front() != '[') {
    const double lo = parse_number(t.substr(0, dots));
    std::string rest = t.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = parse_number(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const double hi = parse_number(rest);
    if (!(step > 0.0)) throw FormatError("range step must be > 0 in '" + text + "'");
    if (hi < lo) throw FormatError("empty range '" + text + "'");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      // Snap to 12 decimals so 0.1..0.9:0.1 yields 0.3, not 0.30000000000000004.
      out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split_items(t)) out.push_back(parse_number(item));
  if (out.empty()) throw FormatError("empty list '" + text + "'");
  return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
  auto out = split_items(text);
  if (out.empty()) throw FormatError("empty list '" + text + "'");
  return out;
}

}  // namespace semharq::bench
