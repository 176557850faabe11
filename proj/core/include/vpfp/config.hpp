#pragma once

#include <map>
#include <string>
#include <vector>

namespace vpfp {

// Sectioned key = value text:
//   # comment
//   [section]
//   key = value   ; trailing comments start with # or ;
// Keys before the first section header belong to section "".
class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  const std::string& source() const noexcept { return source_; }
  const std::string& text() const noexcept { return text_; }
  std::string directory() const;  // of the source file, for relative paths

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  const Entry& entry(const std::string& section, const std::string& key) const;  // ParseError if missing

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string require_string(const std::string& section, const std::string& key) const;

  // Overrides or adds a value (used by sweeps); marks it as consumed.
  void set(const std::string& section, const std::string& key, const std::string& value);

  // ParseError naming line and key for every entry no getter looked at.
  void reject_unused() const;

 private:
  std::string source_;
  std::string text_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  mutable std::map<std::string, std::map<std::string, bool>> used_;
};

// Scalar function of time: "constant 0.5" (or just "0.5"), "piecewise t0:v0
// t1:v1 ..." (value v_k on [t_k, t_{k+1})), "tabulated t0:v0 t1:v1 ..." or
// "tabulated file.csv" (linear interpolation, clamped at the ends).
class TimeProfile {
 public:
  enum class Kind { Constant, Piecewise, Tabulated };

  TimeProfile() = default;
  explicit TimeProfile(double value) : kind_(Kind::Constant), t_{0.0}, v_{value} {}
  static TimeProfile parse(const std::string& spec, const std::string& base_dir = {});

  Kind kind() const noexcept { return kind_; }
  double operator()(double t) const;
  double sup() const;
  double inf() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> t_{0.0};
  std::vector<double> v_{0.0};
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

}  // namespace vpfp
