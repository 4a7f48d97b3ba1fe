#ifndef DDMM_CONFIG_HPP
#define DDMM_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "ddmm/errors.hpp"

namespace ddmm {

/// Structured key-value text file: `[section]` headers, `key = value` lines,
/// `#` comments. Keys may repeat within a section (used for boundary
/// condition lists). Parsing then serializing then parsing again yields the
/// same representation.
class ConfigFile {
 public:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;  // "" for the preamble
    std::vector<Entry> entries;
  };

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

  std::string serialize() const;
  void write_file(const std::string& path) const;

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> find(const std::string& section, const std::string& key) const;
  std::vector<std::string> find_all(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void append(const std::string& section, const std::string& key, const std::string& value);

  const std::vector<Section>& sections() const { return sections_; }
  bool operator==(const ConfigFile&) const = default;

 private:
  const Section* section(const std::string& name) const;
  Section& section_or_create(const std::string& name);
  std::vector<Section> sections_;
};

double parse_double(const std::string& s, const std::string& what);
long parse_long(const std::string& s, const std::string& what);

}  // namespace ddmm

#endif
