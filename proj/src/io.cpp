#include "dyson/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dyson/digest.hpp"

namespace dyson {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t take_u32(const std::string& in, std::size_t& at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at++])) << (8 * i);
  return v;
}

double take_f64(const std::string& in, std::size_t& at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at++])) << (8 * i);
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void spit(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

void write_dump(const std::string& path, int n, double beta, std::uint32_t mask_id,
                const std::vector<double>& values) {
  if (n < 0 || n > 30) throw std::invalid_argument("write_dump: n out of range");
  if (values.size() != (std::size_t{1} << n))
    throw std::invalid_argument("write_dump: value count is not 2^n");
  std::string out;
  out.reserve(20 + values.size() * 8);
  out += "DYEX";
  put_u32(out, kDumpVersion);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_f64(out, beta);
  put_u32(out, mask_id);
  for (double v : values) put_f64(out, v);
  spit(path, out);
}

DensityDump read_dump(const std::string& path) {
  std::string in = slurp(path);
  if (in.size() < 24 || in.compare(0, 4, "DYEX") != 0)
    throw std::runtime_error(path + ": not a DYEX dump");
  std::size_t at = 4;
  DensityDump d;
  d.version = take_u32(in, at);
  if (d.version != kDumpVersion)
    throw std::runtime_error(path + ": unsupported dump version " +
                             std::to_string(d.version));
  std::uint32_t n = take_u32(in, at);
  if (n > 30) throw std::runtime_error(path + ": corrupt site count");
  d.n = static_cast<int>(n);
  d.beta = take_f64(in, at);
  d.mask_id = take_u32(in, at);
  std::size_t count = std::size_t{1} << n;
  if (in.size() != at + count * 8)
    throw std::runtime_error(path + ": truncated dump");
  d.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) d.values[i] = take_f64(in, at);
  return d;
}

void write_measure_csv(const std::string& path, const ExactMeasure& m) {
  if (m.sites() > 12)
    throw std::invalid_argument("write_measure_csv: refusing " +
                                std::to_string(m.sites()) +
                                " sites (limit 12), use the binary dump");
  std::string out = "config,bits,probability\n";
  char line[128];
  int n = m.sites();
  for (std::size_t c = 0; c < m.p.size(); ++c) {
    std::string bits(static_cast<std::size_t>(n), '0');
    for (int b = 0; b < n; ++b)
      if (c >> b & 1) bits[static_cast<std::size_t>(n - 1 - b)] = '1';
    std::snprintf(line, sizeof line, "%zu,%s,%.17g\n", c, bits.c_str(), m.p[c]);
    out += line;
  }
  spit(path, out);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  char cell[40];
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::snprintf(cell, sizeof cell, "%.17g", row[i]);
      out += cell;
    }
    out += '\n';
  }
  spit(path, out);
}

namespace {

const std::map<std::string, std::set<std::string>>& known_config_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model", {"alpha", "coupling-table", "beta", "mask"}},
      {"exact", {"volume-lo", "volume-hi"}},
      {"transfer", {"depth", "depth-lo", "depth-hi", "tolerance", "max-iterations"}},
      {"sampler", {"sites", "sweeps", "burnin", "seed", "cutoff"}},
      {"concentration", {"trials", "seed", "chi", "d-constant", "n-lo", "n-hi"}},
      {"output", {"directory", "write-dumps", "write-csv"}},
  };
  return keys;
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
  return parse(slurp(path), path);
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& name) {
  ConfigFile cfg;
  cfg.name_ = name;
  const auto& known = known_config_keys();
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::size_t comment = raw.find_first_of("#;");
    std::string line = strip(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name, line_no, "unterminated section header");
      section = strip(line.substr(1, line.size() - 2));
      if (known.find(section) == known.end())
        throw ConfigError(name, line_no, "unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name, line_no, "expected key = value");
    if (section.empty())
      throw ConfigError(name, line_no, "key before any [section]");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(name, line_no, "empty key");
    const auto& allowed = known.at(section);
    if (allowed.find(key) == allowed.end())
      throw ConfigError(name, line_no,
                        "unknown key '" + key + "' in section [" + section + "]");
    cfg.entries_[{section, key}] = Entry{value, line_no};
  }
  return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return entries_.count({section, key}) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  auto it = entries_.find({section, key});
  return it == entries_.end() ? fallback : it->second.value;
}

double ConfigFile::get_number(const std::string& section, const std::string& key,
                              double fallback) const {
  auto it = entries_.find({section, key});
  if (it == entries_.end()) return fallback;
  const std::string& text = it->second.value;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError(name_, it->second.line,
                      "malformed number '" + text + "' for " + section + "." + key);
  return v;
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
  auto it = entries_.find({section, key});
  if (it == entries_.end()) return fallback;
  double v = get_number(section, key, 0.0);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(name_, it->second.line,
                      "expected an integer for " + section + "." + key);
  return i;
}

bool ConfigFile::get_flag(const std::string& section, const std::string& key,
                          bool fallback) const {
  auto it = entries_.find({section, key});
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second.value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(name_, it->second.line,
                    "expected true/false for " + section + "." + key);
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t file_content_digest(const std::string& path) {
  std::string data = slurp(path);
  return fnv1a64(std::string_view(data));
}

std::string iso_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::uint64_t RunManifest::run_digest() const {
  std::uint64_t h = fnv1a64(std::string_view(command));
  h = fnv1a64(std::string_view(parameters.dump()), h);
  h = fnv1a64_bytes(&seed, sizeof seed, h);
  return h;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json digests = nlohmann::json::object();
  for (const auto& [path, digest] : input_digests) digests[path] = hex64(digest);
  return nlohmann::json{{"schema", kSchemaVersion},
                        {"tool_version", tool_version},
                        {"command", command},
                        {"parameters", parameters},
                        {"seed", seed},
                        {"run_id", hex64(run_digest())},
                        {"started_at", started_at},
                        {"finished_at", finished_at},
                        {"input_digests", digests},
                        {"outputs", outputs}};
}

void RunManifest::write(const std::string& path) const {
  spit(path, to_json().dump(2) + "\n");
}

std::uint64_t measure_parameter_digest(const SiteInterval& volume, double beta,
                                       const InteractionMask& mask,
                                       const BoundaryCondition& bc,
                                       const CouplingFamily& J) {
  std::uint64_t h = fnv1a64(std::string_view("boltzmann-v1"));
  std::int64_t lo = volume.lo, hi = volume.hi;
  h = fnv1a64_bytes(&lo, sizeof lo, h);
  h = fnv1a64_bytes(&hi, sizeof hi, h);
  h = fnv1a64_bytes(&beta, sizeof beta, h);
  std::uint64_t part = mask.digest();
  h = fnv1a64_bytes(&part, sizeof part, h);
  part = bc.digest();
  h = fnv1a64_bytes(&part, sizeof part, h);
  part = J.digest();
  h = fnv1a64_bytes(&part, sizeof part, h);
  return h;
}

ExactMeasure cached_boltzmann(const std::string& cache_dir, const SiteInterval& volume,
                              double beta, const InteractionMask& mask,
                              const BoundaryCondition& bc, const CouplingFamily& J,
                              int enumeration_limit) {
  namespace fs = std::filesystem;
  std::uint64_t key = measure_parameter_digest(volume, beta, mask, bc, J);
  fs::create_directories(cache_dir);
  std::string stem = cache_dir + "/measure-" + hex64(key);
  std::string dump_path = stem + ".dyex";
  std::string meta_path = stem + ".json";

  if (fs::exists(dump_path) && fs::exists(meta_path)) {
    auto meta = nlohmann::json::parse(slurp(meta_path));
    if (meta.value("parameter_digest", std::string()) == hex64(key)) {
      auto dump = read_dump(dump_path);
      ExactMeasure m;
      m.volume = volume;
      m.beta = beta;
      m.mask = mask;
      m.bc = bc;
      m.couplings = J;
      m.p = std::move(dump.values);
      m.log_partition = meta.at("log_partition").get<double>();
      m.truncation_bound = meta.at("truncation_bound").get<double>();
      return m;
    }
  }

  ExactMeasure m = boltzmann(volume, beta, mask, bc, J, enumeration_limit);
  write_dump(dump_path, m.sites(), beta, mask.dump_id(), m.p);
  nlohmann::json meta{{"schema", kSchemaVersion},
                      {"parameter_digest", hex64(key)},
                      {"volume", {volume.lo, volume.hi}},
                      {"beta", beta},
                      {"log_partition", m.log_partition},
                      {"truncation_bound", m.truncation_bound}};
  spit(meta_path, meta.dump(2) + "\n");
  return m;
}

}  // namespace dyson
