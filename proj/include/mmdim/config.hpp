#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mmdim {

/// Flat `key = value` configuration. `[section]` headers prefix the keys that
/// follow with "section."; dotted keys may also be written out in full.
/// '#' starts a comment. Every accessor reports the offending line and field
/// through a Config error.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  std::size_t get_size(const std::string& key, std::size_t def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def) const;
  std::vector<std::size_t> get_sizes(const std::string& key, const std::vector<std::size_t>& def) const;

  /// Throws naming the first key (and its line) that is not in `known`.
  void check_known(const std::set<std::string>& known) const;

  /// Every key read so far with the value used (defaults included).
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  const std::string& source() const { return source_; }

 private:
  [[noreturn]] void bad(const std::string& key, const std::string& what) const;
  const std::string* raw(const std::string& key) const;

  std::string source_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::size_t> lines_;
  mutable std::map<std::string, std::string> resolved_;
};

}  // namespace mmdim
