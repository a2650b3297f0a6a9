#include "hysim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace hysim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ConfigDoc ConfigDoc::parse(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ConfigError("unterminated section header", lineno, 1);
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", lineno, 1);
      doc.sections_[section];
      doc.section_lines_.emplace(section, lineno);
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value'", lineno,
                        static_cast<int>(line.find(stripped[0]) + 1));
    }
    if (section.empty()) {
      throw ConfigError("key outside of any [section]", lineno, 1);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno, 1);
    auto [it, inserted] = doc.sections_[section].emplace(key, Entry{value, lineno, false});
    if (!inserted) {
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]", lineno, 1);
    }
  }
  return doc;
}

bool ConfigDoc::has_section(const std::string& name) const { return sections_.count(name) > 0; }

std::vector<std::string> ConfigDoc::section_names() const {
  std::vector<std::string> names;
  for (const auto& [name, keys] : sections_) names.push_back(name);
  return names;
}

std::optional<std::string> ConfigDoc::take(const std::string& section, const std::string& key) {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return std::nullopt;
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return std::nullopt;
  kit->second.consumed = true;
  return kit->second.value;
}

int ConfigDoc::line_of(const std::string& section, const std::string& key) const {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return 0;
  auto kit = sit->second.find(key);
  return kit == sit->second.end() ? 0 : kit->second.line;
}

void ConfigDoc::assert_fully_consumed(const std::set<std::string>& allowed_sections) const {
  for (const auto& [name, keys] : sections_) {
    if (allowed_sections.count(name) == 0) {
      throw ConfigError("unknown section [" + name + "]", section_lines_.at(name), 1);
    }
    for (const auto& [key, entry] : keys) {
      if (!entry.consumed) {
        throw ConfigError("unknown key '" + key + "' in [" + name + "]", entry.line, 1);
      }
    }
  }
}

void SectionReader::fail(const std::string& key, const std::string& msg) {
  throw ConfigError("key '" + key + "' in [" + section_ + "]: " + msg,
                    doc_.line_of(section_, key), 1);
}

std::optional<std::string> SectionReader::raw(const std::string& key) {
  return doc_.take(section_, key);
}

std::string SectionReader::get_string(const std::string& key, const std::string& fallback) {
  return raw(key).value_or(fallback);
}

double SectionReader::get_double(const std::string& key, double fallback) {
  const auto v = raw(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (trim(v->substr(used)).size() != 0) fail(key, "trailing characters after number");
    return d;
  } catch (const std::invalid_argument&) {
    fail(key, "expected a number, got '" + *v + "'");
  } catch (const std::out_of_range&) {
    fail(key, "number out of range");
  }
}

int SectionReader::get_int(const std::string& key, int fallback) {
  const auto v = raw(key);
  if (!v) return fallback;
  int out = 0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
    fail(key, "expected an integer, got '" + *v + "'");
  }
  return out;
}

std::uint64_t SectionReader::get_u64(const std::string& key, std::uint64_t fallback) {
  const auto v = raw(key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
    fail(key, "expected an unsigned integer, got '" + *v + "'");
  }
  return out;
}

std::optional<std::uint64_t> SectionReader::get_optional_u64(const std::string& key) {
  const auto v = raw(key);
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
    fail(key, "expected an unsigned integer, got '" + *v + "'");
  }
  return out;
}

bool SectionReader::get_bool(const std::string& key, bool fallback) {
  const auto v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  fail(key, "expected true/false, got '" + *v + "'");
}

std::vector<double> SectionReader::get_double_list(const std::string& key,
                                                   std::vector<double> fallback) {
  const auto v = raw(key);
  if (!v) return fallback;
  std::vector<double> out;
  std::istringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) fail(key, "empty element in list");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(t, &used));
      if (trim(t.substr(used)).size() != 0) fail(key, "bad list element '" + t + "'");
    } catch (const std::exception&) {
      fail(key, "bad list element '" + t + "'");
    }
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

}  // namespace hysim
