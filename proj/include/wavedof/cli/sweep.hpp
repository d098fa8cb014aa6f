#pragma once

// Two-axis parameter sweeps over BoundReport quantities, the three figure
// presets, and the SVG heatmap renderer.
//
// Axis syntax: PARAM:MIN:MAX:COUNT[:lin|log] with PARAM one of R, W, T, F0.
//
// Heatmap color map: linear in the cell value between the sweep's minimum
// (#440154, dark purple) and maximum (#fde725, yellow), interpolated per RGB
// channel. A constant grid is drawn entirely in the minimum color.

#include <string>
#include <string_view>
#include <vector>

#include "wavedof/bounds.hpp"
#include "wavedof/cli/output.hpp"
#include "wavedof/config.hpp"

namespace wavedof::cli {

enum class SweepParam { R, W, T, F0 };
enum class Scale { Linear, Log };

std::string_view to_string(SweepParam p);
std::string_view to_string(Scale s);

struct AxisSpec {
  SweepParam param = SweepParam::R;
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  Scale scale = Scale::Linear;

  /// Grid values; the first and last are exactly min and max.
  std::vector<double> values() const;
  std::string describe() const;
};

/// Parses PARAM:MIN:MAX:COUNT[:lin|log]; throws ConfigError.
AxisSpec parse_axis(std::string_view text);

/// Every BoundReport field name usable as a sweep quantity, in report order.
const std::vector<std::string>& report_quantities();

/// Named BoundReport field; throws ConfigError for an unknown name.
Cell report_value(const bounds::BoundReport& report, std::string_view name);

struct SweepSpec {
  AxisSpec axis1;
  AxisSpec axis2;
  PhysicalConfig fixed;  // values of the non-swept parameters
  std::vector<std::string> quantities;

  /// Throws ConfigError: min < max, count >= 2, distinct parameters, log axes
  /// strictly positive, known quantities.
  void validate() const;
};

PhysicalConfig apply(PhysicalConfig cfg, SweepParam p, double value);

/// Reports for every cell, row-major over axis1 (axis1 index * count2 + axis2
/// index). Cells are evaluated in parallel; the order never changes. Throws
/// ConfigError naming the first invalid cell.
std::vector<bounds::BoundReport> sweep_reports(const SweepSpec& spec);

/// The CSV table: header axis1,axis2,<quantities>, metadata from md plus the
/// axis descriptions.
CsvTable run_sweep(const SweepSpec& spec, RunMetadata md);

/// Figure presets "fig3", "fig4", "fig5" with count points per axis.
SweepSpec figure_preset(std::string_view name, int count);

/// Heatmap of one quantity column of a sweep table (axis1 down, axis2 across).
std::string render_heatmap_svg(const CsvTable& table, std::string_view quantity);

}  // namespace wavedof::cli
