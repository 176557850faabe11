#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vpfp/coupling.hpp"
#include "vpfp/particles.hpp"

namespace vpfp {

// Field dump: a plain-text header terminated by "end_header", followed by the
// listed fields as little-endian float64 in header order.
//   vpfp-snapshot 1
//   key value          (scalars)
//   field name count   (one per binary block)
//   end_header
struct SnapshotFile {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, std::vector<double>>> fields;

  const std::vector<double>& field(const std::string& name) const;  // MissingInput
  double number(const std::string& key) const;
};

void write_snapshot_file(const std::string& path, const SnapshotFile& snap);
SnapshotFile read_snapshot_file(const std::string& path);

SnapshotFile snapshot_of(const CoupledState& state);
// Rebuilds a phase field from a dump (grids from the header).
PhaseField phase_field_from(const SnapshotFile& snap);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // MissingInput
};
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Binary ensemble record: "VPFPENS1", uint64 M, int32 d, uint64 seed,
// uint64 step, float64 length, float64 mass, uint8 walls, X[M d], V[M d].
void write_ensemble(const std::string& path, const ParticleEnsemble& ens);
ParticleEnsemble read_ensemble(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);
std::string fnv1a_hex(const std::vector<double>& data, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string config_hash(const std::string& config_text, std::uint64_t seed);
std::string state_fingerprint(const CoupledState& state);

}  // namespace vpfp
