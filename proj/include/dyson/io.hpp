#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dyson/exact_measure.hpp"

namespace dyson {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr std::uint32_t kDumpVersion = 1;
inline constexpr int kSchemaVersion = 1;

// Binary table dump: magic "DYEX", version u32, n u32, beta f64, mask id u32,
// then 2^n little-endian doubles.  Used for measures, densities and
// eigenvectors alike; the mask id records what the 2^n slots index.
struct DensityDump {
  std::uint32_t version = kDumpVersion;
  int n = 0;
  double beta = 0.0;
  std::uint32_t mask_id = 0;
  std::vector<double> values;
};

void write_dump(const std::string& path, int n, double beta, std::uint32_t mask_id,
                const std::vector<double>& values);
DensityDump read_dump(const std::string& path);

// Probability table as CSV, refused above 12 sites (4096 rows).
void write_measure_csv(const std::string& path, const ExactMeasure& m);

// Generic numeric table with a header row, %.17g cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Config file errors always carry the file name and one-based line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        line_number(line) {}
  int line_number;
};

// Sectioned key-value file ([model], [exact], [transfer], [sampler],
// [concentration], [output]); '#' and ';' start comments.  Unknown sections
// or keys are hard errors, so typos cannot silently fall back to defaults.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile load(const std::string& path);
  static ConfigFile parse(const std::string& text, const std::string& name);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_flag(const std::string& section, const std::string& key,
                bool fallback) const;
  std::size_t entry_count() const { return entries_.size(); }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string name_ = "<none>";
  std::map<std::pair<std::string, std::string>, Entry> entries_;
};

std::string hex64(std::uint64_t value);
std::uint64_t file_content_digest(const std::string& path);
std::string iso_timestamp_utc();

// One manifest per artifact-producing run; the run digest keys the output
// directory, so identical parameters land in the same place.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::uint64_t>> input_digests;
  std::vector<std::string> outputs;

  std::uint64_t run_digest() const;
  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

// Digest of everything that determines a Boltzmann table, computed without
// building the table.
std::uint64_t measure_parameter_digest(const SiteInterval& volume, double beta,
                                       const InteractionMask& mask,
                                       const BoundaryCondition& bc,
                                       const CouplingFamily& J);

// Disk-backed memoization of exact measures under cache_dir; a hit restores
// the table bit for bit from its dump and sidecar record.
ExactMeasure cached_boltzmann(const std::string& cache_dir, const SiteInterval& volume,
                              double beta, const InteractionMask& mask,
                              const BoundaryCondition& bc, const CouplingFamily& J,
                              int enumeration_limit = kDefaultEnumerationLimit);

}  // namespace dyson
