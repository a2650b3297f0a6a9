#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hysim/errors.hpp"

namespace hysim {

// Line-oriented sectioned key-value configuration:
//
//   # comment
//   [section]
//   key = value
//
// The schema is strict: every key must be consumed by the command that reads
// the document, and unknown keys or sections are fatal, with the offending
// key path in the error.
class ConfigDoc {
 public:
  static ConfigDoc parse(const std::string& text);

  bool has_section(const std::string& name) const;
  std::vector<std::string> section_names() const;

  // Marks the key consumed.  Returns nullopt when absent.
  std::optional<std::string> take(const std::string& section, const std::string& key);
  // After all readers ran: throws on any key or section never consumed.
  void assert_fully_consumed(const std::set<std::string>& allowed_sections) const;

  int line_of(const std::string& section, const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;
};

// Typed access to one section with defaults.
class SectionReader {
 public:
  SectionReader(ConfigDoc& doc, std::string section) : doc_(doc), section_(std::move(section)) {}

  std::optional<std::string> raw(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback);
  std::optional<std::uint64_t> get_optional_u64(const std::string& key);

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& msg);
  ConfigDoc& doc_;
  std::string section_;
};

}  // namespace hysim
