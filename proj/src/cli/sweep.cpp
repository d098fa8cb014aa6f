#include "wavedof/cli/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>

#include "wavedof/parallel.hpp"

namespace wavedof::cli {

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::R: return "R";
    case SweepParam::W: return "W";
    case SweepParam::T: return "T";
    case SweepParam::F0: return "F0";
  }
  return "?";
}

std::string_view to_string(Scale s) { return s == Scale::Log ? "log" : "lin"; }

std::vector<double> AxisSpec::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double u = static_cast<double>(j) / (count - 1);
    out[j] = scale == Scale::Log ? std::exp(std::log(min) + u * (std::log(max) - std::log(min)))
                                 : min + u * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

std::string AxisSpec::describe() const {
  return std::string(to_string(param)) + ":" + format_number(min) + ":" + format_number(max) + ":" +
         std::to_string(count) + ":" + std::string(to_string(scale));
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    out.emplace_back(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

double parse_real(const std::string& s, std::string_view what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ConfigError("invalid " + std::string(what) + ": '" + s + "'");
  return v;
}

}  // namespace

AxisSpec parse_axis(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 && parts.size() != 5)
    throw ConfigError("axis spec must be PARAM:MIN:MAX:COUNT[:lin|log], got '" + std::string(text) + "'");
  AxisSpec axis;
  const std::string& p = parts[0];
  if (p == "R") axis.param = SweepParam::R;
  else if (p == "W") axis.param = SweepParam::W;
  else if (p == "T") axis.param = SweepParam::T;
  else if (p == "F0" || p == "F_o") axis.param = SweepParam::F0;
  else throw ConfigError("unknown sweep parameter '" + p + "' (expected R, W, T or F0)");
  axis.min = parse_real(parts[1], "axis minimum");
  axis.max = parse_real(parts[2], "axis maximum");
  const double count = parse_real(parts[3], "axis count");
  if (count != std::floor(count) || count < 2 || count > 100000) throw ConfigError("axis count must be an integer >= 2");
  axis.count = static_cast<int>(count);
  if (parts.size() == 5) {
    if (parts[4] == "lin" || parts[4] == "linear") axis.scale = Scale::Linear;
    else if (parts[4] == "log") axis.scale = Scale::Log;
    else throw ConfigError("axis scale must be lin or log, got '" + parts[4] + "'");
  }
  return axis;
}

const std::vector<std::string>& report_quantities() {
  static const std::vector<std::string> names = {"d_2wt", "d_space2d", "d_space3d", "thm1",        "thm2",
                                                 "exact2d", "exact3d", "asym3d",    "avg_density", "n0"};
  return names;
}

Cell report_value(const bounds::BoundReport& r, std::string_view name) {
  if (name == "d_2wt") return r.d_2wt;
  if (name == "d_space2d") return r.d_space2d;
  if (name == "d_space3d") return r.d_space3d;
  if (name == "thm1") return r.thm1;
  if (name == "thm2") return r.thm2;
  if (name == "exact2d") return r.exact2d;
  if (name == "exact3d") return r.exact3d;
  if (name == "asym3d") return r.asym3d;
  if (name == "avg_density") return r.avg_density;
  if (name == "n0") return r.n0;
  throw ConfigError("unknown quantity '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  for (const AxisSpec* a : {&axis1, &axis2}) {
    if (!(a->min < a->max)) throw ConfigError("axis " + a->describe() + ": min must be < max");
    if (a->count < 2) throw ConfigError("axis " + a->describe() + ": count must be >= 2");
    if (a->scale == Scale::Log && !(a->min > 0.0))
      throw ConfigError("axis " + a->describe() + ": log scale needs min > 0");
    if (a->min < 0.0) throw ConfigError("axis " + a->describe() + ": values must be >= 0");
  }
  if (axis1.param == axis2.param) throw ConfigError("sweep axes must use different parameters");
  if (quantities.empty()) throw ConfigError("sweep needs at least one quantity");
  for (const auto& q : quantities) {
    if (std::find(report_quantities().begin(), report_quantities().end(), q) == report_quantities().end())
      throw ConfigError("unknown quantity '" + q + "'");
  }
}

PhysicalConfig apply(PhysicalConfig cfg, SweepParam p, double value) {
  switch (p) {
    case SweepParam::R: cfg.radius = value; break;
    case SweepParam::W: cfg.half_bandwidth = value; break;
    case SweepParam::T: cfg.duration = value; break;
    case SweepParam::F0: cfg.center_freq = value; break;
  }
  return cfg;
}

std::vector<bounds::BoundReport> sweep_reports(const SweepSpec& spec) {
  spec.validate();
  const auto v1 = spec.axis1.values();
  const auto v2 = spec.axis2.values();
  const std::size_t n2 = v2.size();
  std::vector<bounds::BoundReport> out(v1.size() * n2);
  std::vector<std::optional<std::string>> errors(v1.size());

  parallel_blocks(v1.size(), [&](std::size_t row) {
    for (std::size_t col = 0; col < n2; ++col) {
      const PhysicalConfig cfg = apply(apply(spec.fixed, spec.axis1.param, v1[row]), spec.axis2.param, v2[col]);
      try {
        out[row * n2 + col] = bounds::bound_report(cfg);
      } catch (const std::exception& e) {
        errors[row] = "sweep cell (" + std::string(to_string(spec.axis1.param)) + "=" + format_number(v1[row]) + ", " +
                      std::string(to_string(spec.axis2.param)) + "=" + format_number(v2[col]) + "): " + e.what();
        return;
      }
    }
  });
  for (const auto& e : errors)
    if (e) throw ConfigError(*e);
  return out;
}

CsvTable run_sweep(const SweepSpec& spec, RunMetadata md) {
  const auto reports = sweep_reports(spec);
  md.extra.emplace_back("axis1", spec.axis1.describe());
  md.extra.emplace_back("axis2", spec.axis2.describe());

  CsvTable table;
  table.metadata = md.lines();
  table.header = {"axis1", "axis2"};
  table.header.insert(table.header.end(), spec.quantities.begin(), spec.quantities.end());
  const auto v1 = spec.axis1.values();
  const auto v2 = spec.axis2.values();
  for (std::size_t row = 0; row < v1.size(); ++row) {
    for (std::size_t col = 0; col < v2.size(); ++col) {
      std::vector<Cell> cells = {v1[row], v2[col]};
      for (const auto& q : spec.quantities) cells.push_back(report_value(reports[row * v2.size() + col], q));
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

SweepSpec figure_preset(std::string_view name, int count) {
  SweepSpec spec;
  spec.quantities = report_quantities();
  spec.fixed.wave_speed = kDefaultWaveSpeed;
  if (name == "fig3") {
    spec.fixed.duration = 5e-4;
    spec.fixed.center_freq = 2.4e9;
    spec.axis1 = {SweepParam::R, 0.01, 10.0, count, Scale::Log};
    spec.axis2 = {SweepParam::W, 1e3, 1e8, count, Scale::Log};
  } else if (name == "fig4") {
    spec.fixed.duration = 1e-6;
    spec.fixed.center_freq = 2.4e6;
    // W is capped at F_o so the lower band edge stays nonnegative.
    spec.axis1 = {SweepParam::R, 1e-3, 1.0, count, Scale::Log};
    spec.axis2 = {SweepParam::W, 1e3, 2.4e6, count, Scale::Log};
  } else if (name == "fig5") {
    spec.fixed.half_bandwidth = 1e3;
    spec.fixed.center_freq = 2.4e9;
    spec.axis1 = {SweepParam::T, 0.0, 1e-3, count, Scale::Linear};
    spec.axis2 = {SweepParam::R, 0.0, 1.0, count, Scale::Linear};
  } else {
    throw ConfigError("unknown figure preset '" + std::string(name) + "' (expected fig3, fig4 or fig5)");
  }
  return spec;
}

std::string render_heatmap_svg(const CsvTable& table, std::string_view quantity) {
  const std::size_t qcol = table.column(quantity);
  const std::size_t c1 = table.column("axis1");
  const std::size_t c2 = table.column("axis2");

  std::vector<double> rows_v, cols_v;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double a = table.value(r, c1), b = table.value(r, c2);
    if (rows_v.empty() || rows_v.back() != a) rows_v.push_back(a);
    if (std::find(cols_v.begin(), cols_v.end(), b) == cols_v.end()) cols_v.push_back(b);
  }
  const std::size_t nr = rows_v.size(), nc = cols_v.size();
  if (nr * nc != table.rows.size()) throw std::invalid_argument("sweep table is not a full grid");

  double lo = table.value(0, qcol), hi = lo;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    lo = std::min(lo, table.value(r, qcol));
    hi = std::max(hi, table.value(r, qcol));
  }

  constexpr int cell = 16, margin = 60;
  const int width = 2 * margin + static_cast<int>(nc) * cell;
  const int height = 2 * margin + static_cast<int>(nr) * cell;
  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n", width,
                height, width, height);
  svg += buf;
  svg += "<title>" + std::string(quantity) + " (min " + format_number(lo) + ", max " + format_number(hi) + ")</title>\n";
  svg += "<desc>\n";
  for (const auto& [k, v] : table.metadata) svg += k + ": " + v + "\n";
  svg += "</desc>\n";
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double v = table.value(r * nc + c, qcol);
      const double u = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      const auto mix = [u](int a, int b) { return static_cast<int>(std::lround(a + u * (b - a))); };
      std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"#%02x%02x%02x\"/>\n",
                    margin + static_cast<int>(c) * cell, margin + static_cast<int>(r) * cell, cell, cell,
                    mix(0x44, 0xfd), mix(0x01, 0xe7), mix(0x54, 0x25));
      svg += buf;
    }
  }
  std::string label1, label2;
  for (const auto& [k, v] : table.metadata) {
    if (k == "axis1") label1 = v;
    if (k == "axis2") label2 = v;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\">axis2 %s</text>\n", margin, margin - 10,
                label2.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"10\" y=\"%d\" font-size=\"12\">axis1 %s</text>\n", height - margin / 3,
                label1.c_str());
  svg += buf;
  svg += "</svg>\n";
  return svg;
}

}  // namespace wavedof::cli
