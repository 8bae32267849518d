#include "mmdim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mmdim/error.hpp"

namespace mmdim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  return true;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream o;
  o.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << v[i];
  return o.str();
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  auto error = [&](const std::string& what) {
    fail(ErrorKind::Config, source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!section.empty() && !valid_key(section)) error("bad section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) error("expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) error("bad key '" + key + "'");
    if (!section.empty()) key = section + "." + key;
    if (cfg.values_.count(key)) error("duplicate key '" + key + "'");
    cfg.values_[key] = value;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  lines_.erase(key);
}

void Config::bad(const std::string& key, const std::string& what) const {
  std::string where = source_;
  if (auto it = lines_.find(key); it != lines_.end()) where += ":" + std::to_string(it->second);
  fail(ErrorKind::Config, where + ": field '" + key + "': " + what);
}

const std::string* Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  const auto* v = raw(key);
  const std::string out = v ? *v : def;
  resolved_[key] = out;
  return out;
}

double Config::get_double(const std::string& key, double def) const {
  const auto* v = raw(key);
  double out = def;
  if (v) {
    const auto* end = v->data() + v->size();
    auto [p, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || p != end) bad(key, "expected a number, got '" + *v + "'");
  }
  std::ostringstream o;
  o.precision(17);
  o << out;
  resolved_[key] = o.str();
  return out;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) const {
  const auto* v = raw(key);
  std::uint64_t out = def;
  if (v) {
    const auto* end = v->data() + v->size();
    auto [p, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || p != end) bad(key, "expected a non-negative integer, got '" + *v + "'");
  }
  resolved_[key] = std::to_string(out);
  return out;
}

std::size_t Config::get_size(const std::string& key, std::size_t def) const {
  return static_cast<std::size_t>(get_u64(key, def));
}

bool Config::get_bool(const std::string& key, bool def) const {
  const auto* v = raw(key);
  bool out = def;
  if (v) {
    if (*v == "true" || *v == "1" || *v == "yes") out = true;
    else if (*v == "false" || *v == "0" || *v == "no") out = false;
    else bad(key, "expected true or false, got '" + *v + "'");
  }
  resolved_[key] = out ? "true" : "false";
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& def) const {
  const auto* v = raw(key);
  std::vector<double> out = def;
  if (v) {
    out.clear();
    for (const auto& item : split_list(*v)) {
      double d = 0.0;
      const auto* end = item.data() + item.size();
      auto [p, ec] = std::from_chars(item.data(), end, d);
      if (item.empty() || ec != std::errc() || p != end) bad(key, "expected a list of numbers, got '" + *v + "'");
      out.push_back(d);
    }
  }
  resolved_[key] = join(out);
  return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key, const std::vector<std::size_t>& def) const {
  const auto* v = raw(key);
  std::vector<std::size_t> out = def;
  if (v) {
    out.clear();
    for (const auto& item : split_list(*v)) {
      std::size_t d = 0;
      const auto* end = item.data() + item.size();
      auto [p, ec] = std::from_chars(item.data(), end, d);
      if (item.empty() || ec != std::errc() || p != end)
        bad(key, "expected a list of non-negative integers, got '" + *v + "'");
      out.push_back(d);
    }
  }
  resolved_[key] = join(out);
  return out;
}

void Config::check_known(const std::set<std::string>& known) const {
  for (const auto& [k, v] : values_)
    if (!known.count(k)) bad(k, "unknown key");
}

}  // namespace mmdim
