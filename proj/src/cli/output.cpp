#include "wavedof/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wavedof/modes.hpp"

namespace wavedof::cli {

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round_significant(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string current_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde != nullptr && *sde != '\0') {
    long long v = 0;
    const auto* end = sde + std::char_traits<char>::length(sde);
    if (auto [ptr, ec] = std::from_chars(sde, end, v); ec == std::errc() && ptr == end) now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunMetadata RunMetadata::make(std::string command, const PhysicalConfig& cfg, std::uint64_t seed) {
  RunMetadata md;
  md.command = std::move(command);
  md.config = cfg;
  md.seed = seed;
  md.timestamp = current_timestamp();
  md.prng = std::string(modes::kPrngAlgorithm);
  return md;
}

ordered_json config_json(const PhysicalConfig& cfg) {
  ordered_json j;
  j["R"] = round_significant(cfg.radius);
  j["W"] = round_significant(cfg.half_bandwidth);
  j["T"] = round_significant(cfg.duration);
  j["F0"] = round_significant(cfg.center_freq);
  j["c"] = round_significant(cfg.wave_speed);
  return j;
}

ordered_json RunMetadata::to_json() const {
  ordered_json j;
  j["tool"] = std::string(kToolName);
  j["version"] = std::string(kToolVersion);
  j["command"] = command;
  j["config"] = config_json(config);
  j["seed"] = seed;
  j["timestamp"] = timestamp;
  j["prng"] = prng;
  for (const auto& [k, v] : extra) j[k] = v;
  return j;
}

std::vector<std::pair<std::string, std::string>> RunMetadata::lines() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("tool", std::string(kToolName) + " " + std::string(kToolVersion));
  out.emplace_back("command", command);
  out.emplace_back("config", "R=" + format_number(config.radius) + " W=" + format_number(config.half_bandwidth) +
                                 " T=" + format_number(config.duration) + " F0=" + format_number(config.center_freq) +
                                 " c=" + format_number(config.wave_speed));
  out.emplace_back("seed", std::to_string(seed));
  out.emplace_back("timestamp", timestamp);
  out.emplace_back("prng", prng);
  for (const auto& kv : extra) out.push_back(kv);
  return out;
}

ordered_json report_json(const bounds::BoundReport& r) {
  ordered_json j;
  j["config"] = config_json(r.config);
  j["d_2wt"] = round_significant(r.d_2wt);
  j["d_space2d"] = round_significant(r.d_space2d);
  j["d_space3d"] = round_significant(r.d_space3d);
  j["thm1"] = round_significant(r.thm1);
  j["thm2"] = round_significant(r.thm2);
  j["exact2d"] = r.exact2d;
  j["exact3d"] = r.exact3d;
  j["asym3d"] = round_significant(r.asym3d);
  j["avg_density"] = round_significant(r.avg_density);
  j["n0"] = round_significant(r.n0);
  return j;
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return format_number(std::get<double>(cell));
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  throw std::out_of_range("no CSV column named " + std::string(name));
}

double CsvTable::value(std::size_t row, std::size_t col) const {
  const Cell& cell = rows.at(row).at(col);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  return std::get<double>(cell);
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (const auto& [k, v] : table.metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

Cell parse_cell(std::string_view tok) {
  if (tok.empty()) throw std::invalid_argument("empty CSV cell");
  const bool integral = tok.find_first_not_of("-0123456789") == std::string_view::npos;
  if (integral) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc() && ptr == tok.data() + tok.size()) return v;
  }
  const std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("malformed CSV cell: " + s);
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw std::invalid_argument("CSV must end with a newline");
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') throw std::invalid_argument("CSV must use LF line endings");
    if (!have_header && line.starts_with("# ")) {
      const std::size_t colon = line.find(": ");
      if (colon == std::string_view::npos) throw std::invalid_argument("malformed metadata line");
      table.metadata.emplace_back(std::string(line.substr(2, colon - 2)), std::string(line.substr(colon + 2)));
      continue;
    }
    if (!have_header) {
      for (auto tok : split(line)) table.header.emplace_back(tok);
      have_header = true;
      continue;
    }
    const auto toks = split(line);
    if (toks.size() != table.header.size()) throw std::invalid_argument("CSV row width does not match the header");
    std::vector<Cell> row;
    row.reserve(toks.size());
    for (auto tok : toks) row.push_back(parse_cell(tok));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::invalid_argument("CSV has no header row");
  return table;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wavedof::cli
