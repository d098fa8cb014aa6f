#pragma once

// Serialization shared by every subcommand: number formatting, run metadata,
// JSON renderings of configs and reports, and the CSV table format.
//
// CSV layout (UTF-8, LF line endings)
//   # key: value        metadata lines, one per RunMetadata field
//   a,b,c               header row
//   1,2.5,3e+20         data rows; integers plain, reals with 12 significant digits

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wavedof/bounds.hpp"
#include "wavedof/config.hpp"

namespace wavedof::cli {

inline constexpr std::string_view kToolName = "wavedof";
inline constexpr std::string_view kToolVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

/// printf("%.12g").
std::string format_number(double x);

/// x rounded to 12 significant digits (what format_number prints).
double round_significant(double x);

/// UTC ISO-8601 time; SOURCE_DATE_EPOCH overrides the clock when set.
std::string current_timestamp();

struct RunMetadata {
  std::string command;
  PhysicalConfig config;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string prng;
  std::vector<std::pair<std::string, std::string>> extra;

  static RunMetadata make(std::string command, const PhysicalConfig& cfg, std::uint64_t seed = 0);

  ordered_json to_json() const;
  std::vector<std::pair<std::string, std::string>> lines() const;
};

ordered_json config_json(const PhysicalConfig& cfg);
ordered_json report_json(const bounds::BoundReport& report);

using Cell = std::variant<std::int64_t, double>;

std::string format_cell(const Cell& cell);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
  double value(std::size_t row, std::size_t col) const;
};

std::string render_csv(const CsvTable& table);

/// Inverse of render_csv. Throws std::invalid_argument on malformed input.
CsvTable parse_csv(std::string_view text);

/// Writes content verbatim (binary mode). Throws std::runtime_error on failure.
void write_text_file(const std::string& path, std::string_view content);

std::string read_text_file(const std::string& path);

}  // namespace wavedof::cli
