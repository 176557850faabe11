#include "vpfp/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "vpfp/config.hpp"
#include "vpfp/error.hpp"

namespace vpfp {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

const std::vector<double>& SnapshotFile::field(const std::string& name) const {
  for (const auto& [n, v] : fields)
    if (n == name) return v;
  raise(ErrorCode::MissingInput, "snapshot has no field '" + name + "'", "io");
}

double SnapshotFile::number(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) raise(ErrorCode::MissingInput, "snapshot header has no key '" + key + "'", "io");
  return std::stod(it->second);
}

void write_snapshot_file(const std::string& path, const SnapshotFile& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'", "io");
  out << "vpfp-snapshot 1\n";
  for (const auto& [k, v] : snap.meta) out << k << ' ' << v << '\n';
  for (const auto& [n, v] : snap.fields) out << "field " << n << ' ' << v.size() << '\n';
  out << "end_header\n";
  for (const auto& [n, v] : snap.fields) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) raise(ErrorCode::IoError, "write failed for '" + path + "'", "io");
}

SnapshotFile read_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::MissingInput, "cannot open snapshot '" + path + "'", "io");
  std::string line;
  std::getline(in, line);
  if (line != "vpfp-snapshot 1") raise(ErrorCode::ParseError, "'" + path + "' is not a snapshot file", "io");
  SnapshotFile snap;
  std::vector<std::pair<std::string, std::size_t>> layout;
  while (std::getline(in, line)) {
    if (line == "end_header") break;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "field") {
      std::string name;
      std::size_t count = 0;
      if (!(is >> name >> count)) raise(ErrorCode::ParseError, "bad field line in '" + path + "': " + line, "io");
      layout.emplace_back(name, count);
    } else {
      std::string rest;
      std::getline(is, rest);
      snap.meta[key] = trim(rest);
    }
  }
  if (line != "end_header") raise(ErrorCode::ParseError, "'" + path + "' has no end_header", "io");
  for (const auto& [name, count] : layout) {
    std::vector<double> v(count);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) raise(ErrorCode::ParseError, "'" + path + "' is truncated in field " + name, "io");
    snap.fields.emplace_back(name, std::move(v));
  }
  return snap;
}

namespace {
std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}
}  // namespace

SnapshotFile snapshot_of(const CoupledState& s) {
  SnapshotFile snap;
  snap.meta["t"] = num(s.t);
  snap.meta["dim"] = std::to_string(s.f.x.dim());
  snap.meta["length"] = num(s.f.x.extent(0));
  snap.meta["nx"] = std::to_string(s.f.x.cells(0));
  snap.meta["vmax"] = num(s.f.v.vmax());
  snap.meta["nv"] = std::to_string(s.f.v.cells_per_axis());
  snap.fields.emplace_back("f", s.f.values);
  snap.fields.emplace_back("rho", s.fluid.rho);
  snap.fields.emplace_back("u", s.fluid.u);
  snap.fields.emplace_back("phi", s.phi.phi);
  snap.fields.emplace_back("grad_phi", s.phi.grad);
  return snap;
}

PhaseField phase_field_from(const SnapshotFile& snap) {
  const auto xg = SpatialGrid::line(snap.number("length"), static_cast<int>(snap.number("nx")));
  const VelocityGrid vg(1, snap.number("vmax"), static_cast<int>(snap.number("nv")));
  PhaseField f(xg, vg, snap.meta.count("t") ? snap.number("t") : 0.0);
  const auto& v = snap.field("f");
  if (v.size() != f.values.size()) raise(ErrorCode::GridMismatch, "snapshot f does not match its header grid", "io");
  f.values = v;
  return f;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  raise(ErrorCode::MissingInput, "CSV has no column '" + name + "'", "io");
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'", "io");
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n' << std::setprecision(17);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::MissingInput, "cannot open '" + path + "'", "io");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::ParseError, "'" + path + "' is empty", "io");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& c : split(line, ',')) row.push_back(std::stod(c));
    if (row.size() != t.header.size()) raise(ErrorCode::ParseError, "ragged row in '" + path + "'", "io");
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {
template <class T>
void put(std::ostream& o, const T& v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& i, const std::string& path) {
  T v{};
  i.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!i) raise(ErrorCode::ParseError, "'" + path + "' is truncated", "io");
  return v;
}
}  // namespace

void write_ensemble(const std::string& path, const ParticleEnsemble& ens) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'", "io");
  out.write("VPFPENS1", 8);
  put<std::uint64_t>(out, ens.count);
  put<std::int32_t>(out, ens.dim);
  put<std::uint64_t>(out, ens.seed);
  put<std::uint64_t>(out, ens.step);
  put<double>(out, ens.length);
  put<double>(out, ens.mass);
  put<std::uint8_t>(out, ens.walls == ParticleWalls::Periodic ? 1 : 0);
  out.write(reinterpret_cast<const char*>(ens.X.data()), static_cast<std::streamsize>(ens.X.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(ens.V.data()), static_cast<std::streamsize>(ens.V.size() * sizeof(double)));
  if (!out) raise(ErrorCode::IoError, "write failed for '" + path + "'", "io");
}

ParticleEnsemble read_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::MissingInput, "cannot open '" + path + "'", "io");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "VPFPENS1", 8) != 0) raise(ErrorCode::ParseError, "'" + path + "' is not an ensemble", "io");
  ParticleEnsemble e;
  e.count = get<std::uint64_t>(in, path);
  e.dim = get<std::int32_t>(in, path);
  e.seed = get<std::uint64_t>(in, path);
  e.step = get<std::uint64_t>(in, path);
  e.length = get<double>(in, path);
  e.mass = get<double>(in, path);
  e.walls = get<std::uint8_t>(in, path) ? ParticleWalls::Periodic : ParticleWalls::Reflecting;
  const std::size_t n = e.count * static_cast<std::size_t>(e.dim);
  e.X.resize(n);
  e.V.resize(n);
  in.read(reinterpret_cast<char*>(e.X.data()), static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(e.V.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) raise(ErrorCode::ParseError, "'" + path + "' is truncated", "io");
  return e;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'", "io");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::MissingInput, "cannot open '" + path + "'", "io");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}
}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return hex(h);
}

std::string fnv1a_hex(const std::vector<double>& data, std::uint64_t h) {
  for (double d : data) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= kFnvPrime;
    }
  }
  return hex(h);
}

std::string config_hash(const std::string& config_text, std::uint64_t seed) {
  return fnv1a_hex(config_text + "\nseed=" + std::to_string(seed));
}

std::string state_fingerprint(const CoupledState& s) {
  std::vector<double> all = s.f.values;
  all.insert(all.end(), s.fluid.rho.begin(), s.fluid.rho.end());
  all.insert(all.end(), s.fluid.u.begin(), s.fluid.u.end());
  all.insert(all.end(), s.phi.phi.begin(), s.phi.phi.end());
  all.push_back(s.t);
  return fnv1a_hex(all);
}

}  // namespace vpfp
