#include "wavedof/cli/app.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "wavedof/bounds.hpp"
#include "wavedof/cli/output.hpp"
#include "wavedof/cli/sweep.hpp"
#include "wavedof/cli/verify.hpp"
#include "wavedof/modes.hpp"

namespace wavedof::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw ConfigError("invalid value for " + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  return out;
}

// Physical flags shared by every subcommand. Precedence: flag, then config
// file, then default.
struct PhysFlags {
  std::optional<double> R, W, T, F0, c;
  std::string config_path;

  void attach(CLI::App* app) {
    app->add_option("--R", R, "observation radius R (m)");
    app->add_option("--W", W, "half-bandwidth W (Hz)");
    app->add_option("--T", T, "observation time T (s)");
    app->add_option("--F0", F0, "center frequency F_o (Hz)");
    app->add_option("--c", c, "wave speed (m/s), default 3e8");
    app->add_option("--config", config_path, "key = value file with R, W, T, F0, c");
  }

  PhysicalConfig resolve() const {
    PhysicalConfig cfg;
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_config_text(read_text_file(config_path))) {
        const double v = to_real(value, key);
        if (key == "R") cfg.radius = v;
        else if (key == "W") cfg.half_bandwidth = v;
        else if (key == "T") cfg.duration = v;
        else if (key == "F0" || key == "F_o") cfg.center_freq = v;
        else if (key == "c") cfg.wave_speed = v;
        else throw ConfigError("unknown config key '" + key + "'");
      }
    }
    if (R) cfg.radius = *R;
    if (W) cfg.half_bandwidth = *W;
    if (T) cfg.duration = *T;
    if (F0) cfg.center_freq = *F0;
    if (c) cfg.wave_speed = *c;
    cfg.validate();
    return cfg;
  }
};

void print_table(std::ostream& out, const RunMetadata& md, const bounds::BoundReport& r) {
  for (const auto& [k, v] : md.lines()) out << "# " << k << ": " << v << '\n';
  char buf[128];
  const auto row = [&](const char* name, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-12s %s\n", name, value.c_str());
    out << buf;
  };
  row("R", format_number(r.config.radius));
  row("W", format_number(r.config.half_bandwidth));
  row("T", format_number(r.config.duration));
  row("F0", format_number(r.config.center_freq));
  row("c", format_number(r.config.wave_speed));
  row("d_2wt", format_number(r.d_2wt));
  row("d_space2d", format_number(r.d_space2d));
  row("d_space3d", format_number(r.d_space3d));
  row("thm1", format_number(r.thm1));
  row("thm2", format_number(r.thm2));
  row("exact2d", std::to_string(r.exact2d));
  row("exact3d", std::to_string(r.exact3d));
  row("asym3d", format_number(r.asym3d));
  row("avg_density", format_number(r.avg_density));
  row("n0", format_number(r.n0));
}

rankcheck::GridResolution parse_resolution(const std::string& text) {
  const auto parts = split_commas(text);
  if (parts.size() != 3) throw ConfigError("--resolution must be n_radial,n_angular,n_time");
  int v[3];
  for (int k = 0; k < 3; ++k) {
    const double x = to_real(parts[k], "--resolution");
    if (x != static_cast<int>(x) || x < 1) throw ConfigError("--resolution counts must be positive integers");
    v[k] = static_cast<int>(x);
  }
  return {v[0], v[1], v[2]};
}

rankcheck::RankPolicy parse_policy(const std::string& text) {
  const auto parts = split_commas(text);
  if (parts.size() != 2) throw ConfigError("--policy must be epsilon,eta");
  rankcheck::RankPolicy p{to_real(parts[0], "epsilon"), to_real(parts[1], "eta")};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::vector<std::string> parse_quantities(const std::string& text) {
  if (text.empty()) return report_quantities();
  return split_commas(text);
}

void write_sweep(std::ostream& out, const SweepSpec& spec, RunMetadata md, const std::string& path,
                 const std::string& svg_path, const std::string& svg_quantity) {
  const CsvTable table = run_sweep(spec, std::move(md));
  write_text_file(path, render_csv(table));
  out << table.rows.size() << " rows written to " << path << '\n';
  if (!svg_path.empty()) {
    const std::string q = svg_quantity.empty() ? spec.quantities.front() : svg_quantity;
    write_text_file(svg_path, render_heatmap_svg(table, q));
    out << "heatmap of " << q << " written to " << svg_path << '\n';
  }
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    out[key] = value;
  }
  return out;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degrees of freedom of band-limited wave fields in a ball or disk", "wavedof"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // bounds
  PhysFlags bounds_phys;
  bool bounds_json = false;
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form and exact degree-of-freedom counts");
  bounds_phys.attach(bounds_cmd);
  bounds_cmd->add_flag("--json", bounds_json, "print JSON instead of a table");

  // sweep
  PhysFlags sweep_phys;
  std::string axis1, axis2, sweep_quantities, sweep_out, sweep_svg, sweep_svg_q;
  auto* sweep_cmd = app.add_subcommand("sweep", "two-axis parameter sweep to CSV");
  sweep_phys.attach(sweep_cmd);
  sweep_cmd->add_option("--axis1", axis1, "PARAM:MIN:MAX:COUNT[:lin|log]")->required();
  sweep_cmd->add_option("--axis2", axis2, "PARAM:MIN:MAX:COUNT[:lin|log]")->required();
  sweep_cmd->add_option("--quantities", sweep_quantities, "comma-separated report fields (default: all)");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path")->required();
  sweep_cmd->add_option("--svg", sweep_svg, "optional heatmap output path");
  sweep_cmd->add_option("--svg-quantity", sweep_svg_q, "quantity shown in the heatmap");

  // figure
  std::string figure_name, figure_quantities, figure_out, figure_svg, figure_svg_q;
  int figure_count = 25;
  auto* figure_cmd = app.add_subcommand("figure", "preset sweeps fig3, fig4, fig5");
  figure_cmd->add_option("name", figure_name, "fig3 | fig4 | fig5")->required();
  figure_cmd->add_option("--count", figure_count, "points per axis")->check(CLI::Range(2, 10000));
  figure_cmd->add_option("--quantities", figure_quantities, "comma-separated report fields (default: all)");
  figure_cmd->add_option("--out", figure_out, "CSV output path")->required();
  figure_cmd->add_option("--svg", figure_svg, "optional heatmap output path");
  figure_cmd->add_option("--svg-quantity", figure_svg_q, "quantity shown in the heatmap");

  // modes
  PhysFlags modes_phys;
  std::string modes_dim = "3d", modes_out;
  std::int64_t modes_cap = 10'000'000;
  bool modes_full = false;
  auto* modes_cmd = app.add_subcommand("modes", "mode table i,n,m,f_hz,k_rad_per_m to CSV");
  modes_phys.attach(modes_cmd);
  modes_cmd->add_option("--dim", modes_dim, "2d | 3d");
  modes_cmd->add_option("--out", modes_out, "CSV output path")->required();
  modes_cmd->add_option("--cap", modes_cap, "maximum number of modes");
  modes_cmd->add_flag("--full-orders", modes_full, "2D: orders -N..N instead of 0..N");

  // verify
  PhysFlags verify_phys;
  std::string verify_dim = "2d", verify_resolution, verify_policy, verify_out, verify_csv, verify_gram_csv;
  VerifyOptions vopt;
  auto* verify_cmd = app.add_subcommand("verify", "numerical rank check of the counted modes");
  verify_phys.attach(verify_cmd);
  verify_cmd->add_option("--dim", verify_dim, "2d | 3d");
  verify_cmd->add_option("--waves", vopt.waves, "plane waves per ensemble member");
  verify_cmd->add_option("--ensemble", vopt.ensemble, "ensemble size (default max(16, 4 x exact count))");
  verify_cmd->add_option("--seed", vopt.seed, "PRNG seed");
  verify_cmd->add_option("--resolution", verify_resolution, "n_radial,n_angular,n_time (default: minimum)");
  verify_cmd->add_option("--policy", verify_policy, "epsilon,eta (default 1e-3,0.99)");
  verify_cmd->add_option("--cap", vopt.cap, "maximum number of modes");
  verify_cmd->add_flag("--full-orders", vopt.full_orders, "2D: orders -N..N instead of 0..N");
  verify_cmd->add_option("--out", verify_out, "JSON output path (default: stdout)");
  verify_cmd->add_option("--spectrum-csv", verify_csv, "ensemble spectrum CSV path");
  verify_cmd->add_option("--gram-spectrum-csv", verify_gram_csv, "Gram spectrum CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bounds_cmd->parsed()) {
      const PhysicalConfig cfg = bounds_phys.resolve();
      const RunMetadata md = RunMetadata::make("bounds", cfg);
      const bounds::BoundReport report = bounds::bound_report(cfg);
      if (bounds_json) {
        ordered_json j;
        j["metadata"] = md.to_json();
        j["report"] = report_json(report);
        out << j.dump(2) << '\n';
      } else {
        print_table(out, md, report);
      }
    } else if (sweep_cmd->parsed()) {
      SweepSpec spec;
      spec.fixed = sweep_phys.resolve();
      spec.axis1 = parse_axis(axis1);
      spec.axis2 = parse_axis(axis2);
      spec.quantities = parse_quantities(sweep_quantities);
      write_sweep(out, spec, RunMetadata::make("sweep", spec.fixed), sweep_out, sweep_svg, sweep_svg_q);
    } else if (figure_cmd->parsed()) {
      SweepSpec spec = figure_preset(figure_name, figure_count);
      if (!figure_quantities.empty()) spec.quantities = parse_quantities(figure_quantities);
      write_sweep(out, spec, RunMetadata::make("figure " + figure_name, spec.fixed), figure_out, figure_svg,
                  figure_svg_q);
    } else if (modes_cmd->parsed()) {
      const PhysicalConfig cfg = modes_phys.resolve();
      const Dimension dim = parse_dimension(modes_dim);
      if (!(cfg.duration > 0.0)) throw ConfigError("modes needs T > 0");
      const auto list = modes::enumerate_modes(dim, cfg, {modes_full, modes_cap});
      RunMetadata md = RunMetadata::make("modes", cfg);
      md.extra.emplace_back("dim", std::string(to_string(dim)));
      CsvTable table;
      table.metadata = md.lines();
      table.header = {"i", "n", "m", "f_hz", "k_rad_per_m"};
      table.rows.reserve(list.size());
      for (const auto& mi : list) {
        const auto fk = modes::mode_wavenumber(mi.i, cfg);
        table.rows.push_back({mi.i, static_cast<std::int64_t>(mi.n), static_cast<std::int64_t>(mi.m), fk.freq,
                              fk.wavenumber});
      }
      write_text_file(modes_out, render_csv(table));
      out << list.size() << '\n';
    } else if (verify_cmd->parsed()) {
      vopt.cfg = verify_phys.resolve();
      vopt.dim = parse_dimension(verify_dim);
      if (!verify_resolution.empty()) vopt.resolution = parse_resolution(verify_resolution);
      if (!verify_policy.empty()) vopt.policy = parse_policy(verify_policy);
      RunMetadata md = RunMetadata::make("verify", vopt.cfg, vopt.seed);
      const VerifyResult result = run_verify(vopt, md);
      md.seed = vopt.seed;
      const std::string json = result.report.dump(2) + "\n";
      if (verify_out.empty()) out << json;
      else write_text_file(verify_out, json);
      if (!verify_csv.empty()) write_text_file(verify_csv, render_csv(spectrum_table(result.ensemble, md)));
      if (!verify_gram_csv.empty()) write_text_file(verify_gram_csv, render_csv(spectrum_table(result.gram, md)));
      if (!verify_out.empty()) {
        out << "exact " << result.exact << ", gram rank " << result.gram.rank_threshold << "/"
            << result.gram.rank_energy << ", ensemble rank " << result.ensemble.rank_threshold << "/"
            << result.ensemble.rank_energy << " (threshold/energy)\n";
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResolution;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace wavedof::cli
