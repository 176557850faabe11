#include "vpfp/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vpfp/error.hpp"

namespace vpfp {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

namespace {

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end && *end == '\0' && std::isfinite(out);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  c.text_ = text;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        raise(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": unterminated section header", "config");
      }
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) {
        raise(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": empty section name", "config");
      }
      c.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      raise(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": expected 'key = value', got '" + s + "'",
            "config");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) raise(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": empty key", "config");
    auto& sec = c.sections_[section];
    if (sec.count(key)) {
      raise(ErrorCode::ParseError,
            source + ":" + std::to_string(line) + ": duplicate key '" + key + "' (first on line " +
                std::to_string(sec[key].line) + ")",
            "config");
    }
    sec[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::MissingInput, "cannot open config file '" + path + "'", "config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::directory() const {
  const auto p = std::filesystem::path(source_).parent_path();
  return p.empty() ? std::string(".") : p.string();
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key);
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end() || !it->second.count(key)) {
    raise(ErrorCode::ParseError, source_ + ": missing key '" + key + "' in [" + section + "]", "config");
  }
  used_[section][key] = true;
  return it->second.at(key);
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fb) const {
  return has(section, key) ? entry(section, key).value : fb;
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

double Config::get_double(const std::string& section, const std::string& key, double fb) const {
  if (!has(section, key)) return fb;
  const auto& e = entry(section, key);
  double v = 0.0;
  if (!parse_number(e.value, v)) {
    raise(ErrorCode::ParseError,
          source_ + ":" + std::to_string(e.line) + ": key '" + key + "' expects a number, got '" + e.value + "'",
          "config");
  }
  return v;
}

long Config::get_int(const std::string& section, const std::string& key, long fb) const {
  if (!has(section, key)) return fb;
  const auto& e = entry(section, key);
  double v = 0.0;
  if (!parse_number(e.value, v) || v != std::floor(v) || std::abs(v) > 9e15) {
    raise(ErrorCode::ParseError,
          source_ + ":" + std::to_string(e.line) + ": key '" + key + "' expects an integer, got '" + e.value + "'",
          "config");
  }
  return static_cast<long>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fb) const {
  if (!has(section, key)) return fb;
  const auto& e = entry(section, key);
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  raise(ErrorCode::ParseError,
        source_ + ":" + std::to_string(e.line) + ": key '" + key + "' expects a boolean, got '" + e.value + "'",
        "config");
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  auto& e = sections_[section][key];
  e.value = value;
  used_[section][key] = false;
}

void Config::reject_unused() const {
  for (const auto& [sec, entries] : sections_) {
    for (const auto& [key, e] : entries) {
      auto it = used_.find(sec);
      if (it == used_.end() || !it->second.count(key) || !it->second.at(key)) {
        raise(ErrorCode::ParseError,
              source_ + ":" + std::to_string(e.line) + ": unknown key '" + key + "' in [" + sec + "]", "config");
      }
    }
  }
}

// ---------------------------------------------------------------- profiles

TimeProfile TimeProfile::parse(const std::string& spec_in, const std::string& base_dir) {
  auto w = words(spec_in);
  auto bad = [&](const std::string& why) -> TimeProfile {
    raise(ErrorCode::ParseError, "profile '" + spec_in + "': " + why, "config");
  };
  if (w.empty()) return bad("empty");
  double x = 0.0;
  if (w.size() == 1 && parse_number(w[0], x)) return TimeProfile(x);
  TimeProfile p;
  const std::string kind = w[0];
  if (kind == "constant") {
    if (w.size() != 2 || !parse_number(w[1], x)) return bad("constant takes one number");
    return TimeProfile(x);
  }
  if (kind == "piecewise") p.kind_ = Kind::Piecewise;
  else if (kind == "tabulated") p.kind_ = Kind::Tabulated;
  else return bad("unknown kind '" + kind + "'");

  std::vector<std::string> pairs(w.begin() + 1, w.end());
  if (p.kind_ == Kind::Tabulated && pairs.size() == 1 && pairs[0].find(':') == std::string::npos) {
    std::filesystem::path path(pairs[0]);
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) raise(ErrorCode::MissingInput, "profile table '" + path.string() + "' not found", "config");
    pairs.clear();
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      auto cols = split(line, ',');
      if (cols.size() != 2) return bad("table rows need two columns: " + line);
      if (!parse_number(cols[0], x)) continue;  // header row
      pairs.push_back(cols[0] + ":" + cols[1]);
    }
  }
  p.t_.clear();
  p.v_.clear();
  for (const auto& pr : pairs) {
    const auto c = pr.find(':');
    double t = 0.0, v = 0.0;
    if (c == std::string::npos || !parse_number(pr.substr(0, c), t) || !parse_number(pr.substr(c + 1), v)) {
      return bad("expected t:value, got '" + pr + "'");
    }
    if (!p.t_.empty() && t <= p.t_.back()) return bad("times must increase");
    p.t_.push_back(t);
    p.v_.push_back(v);
  }
  if (p.t_.empty()) return bad("no breakpoints");
  return p;
}

double TimeProfile::operator()(double t) const {
  if (kind_ == Kind::Constant || t_.size() == 1) return v_[0];
  if (t <= t_.front()) return v_.front();
  if (t >= t_.back()) return v_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
  if (kind_ == Kind::Piecewise) return v_[k];
  const double w = (t - t_[k]) / (t_[k + 1] - t_[k]);
  return (1.0 - w) * v_[k] + w * v_[k + 1];
}

double TimeProfile::sup() const { return *std::max_element(v_.begin(), v_.end()); }
double TimeProfile::inf() const { return *std::min_element(v_.begin(), v_.end()); }

}  // namespace vpfp
