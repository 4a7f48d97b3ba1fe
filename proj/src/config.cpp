#include "ddmm/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace ddmm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw ParseError("cannot parse '" + s + "' as a number for " + what);
  }
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError("cannot parse '" + s + "' as an integer for " + what);
  return v;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.sections_.push_back({"", {}});
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      cfg.sections_.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (e.key.empty())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.sections_.back().entries.push_back(std::move(e));
  }
  if (cfg.sections_.front().entries.empty() && cfg.sections_.size() > 1)
    cfg.sections_.erase(cfg.sections_.begin());
  return cfg;
}

std::string ConfigFile::serialize() const {
  std::string out;
  for (const auto& s : sections_) {
    if (!s.name.empty()) out += "[" + s.name + "]\n";
    for (const auto& e : s.entries) out += e.key + " = " + e.value + "\n";
    out += "\n";
  }
  return out;
}

void ConfigFile::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file '" + path + "'");
  out << serialize();
}

const ConfigFile::Section* ConfigFile::section(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

ConfigFile::Section& ConfigFile::section_or_create(const std::string& name) {
  for (auto& s : sections_)
    if (s.name == name) return s;
  sections_.push_back({name, {}});
  return sections_.back();
}

bool ConfigFile::has(const std::string& sec, const std::string& key) const {
  return find(sec, key).has_value();
}

std::optional<std::string> ConfigFile::find(const std::string& sec, const std::string& key) const {
  const Section* s = section(sec);
  if (!s) return std::nullopt;
  for (const auto& e : s->entries)
    if (e.key == key) return e.value;
  return std::nullopt;
}

std::vector<std::string> ConfigFile::find_all(const std::string& sec, const std::string& key) const {
  std::vector<std::string> out;
  const Section* s = section(sec);
  if (!s) return out;
  for (const auto& e : s->entries)
    if (e.key == key) out.push_back(e.value);
  return out;
}

std::string ConfigFile::get_string(const std::string& sec, const std::string& key) const {
  auto v = find(sec, key);
  if (!v) throw ConfigError("missing config key [" + sec + "] " + key);
  return *v;
}

std::string ConfigFile::get_string(const std::string& sec, const std::string& key,
                                   const std::string& fallback) const {
  auto v = find(sec, key);
  return v ? *v : fallback;
}

double ConfigFile::get_double(const std::string& sec, const std::string& key) const {
  return parse_double(get_string(sec, key), "[" + sec + "] " + key);
}

double ConfigFile::get_double(const std::string& sec, const std::string& key, double fallback) const {
  auto v = find(sec, key);
  return v ? parse_double(*v, "[" + sec + "] " + key) : fallback;
}

long ConfigFile::get_int(const std::string& sec, const std::string& key) const {
  return parse_long(get_string(sec, key), "[" + sec + "] " + key);
}

long ConfigFile::get_int(const std::string& sec, const std::string& key, long fallback) const {
  auto v = find(sec, key);
  return v ? parse_long(*v, "[" + sec + "] " + key) : fallback;
}

bool ConfigFile::get_bool(const std::string& sec, const std::string& key, bool fallback) const {
  auto v = find(sec, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("boolean expected for [" + sec + "] " + key);
}

void ConfigFile::set(const std::string& sec, const std::string& key, const std::string& value) {
  auto& s = section_or_create(sec);
  for (auto& e : s.entries)
    if (e.key == key) {
      e.value = value;
      return;
    }
  s.entries.push_back({key, value});
}

void ConfigFile::append(const std::string& sec, const std::string& key, const std::string& value) {
  section_or_create(sec).entries.push_back({key, value});
}

}  // namespace ddmm
