#include "wavedof/cli/verify.hpp"

#include <algorithm>

#include "wavedof/bounds.hpp"
#include "wavedof/grid.hpp"
#include "wavedof/modes.hpp"

namespace wavedof::cli {

namespace {

ordered_json spectrum_json(const rankcheck::SpectrumReport& s) {
  ordered_json j;
  ordered_json ev = ordered_json::array();
  for (double v : s.eigenvalues) ev.push_back(round_significant(v));
  j["dimension"] = s.dimension;
  j["trace"] = round_significant(s.trace);
  j["rank_threshold"] = s.rank_threshold;
  j["rank_energy"] = s.rank_energy;
  j["policy"] = {{"epsilon", s.policy.epsilon}, {"eta", s.policy.eta}};
  j["eigenvalues"] = std::move(ev);
  return j;
}

double ratio(std::int64_t num, std::int64_t den) {
  return round_significant(static_cast<double>(num) / static_cast<double>(den));
}

}  // namespace

VerifyResult run_verify(const VerifyOptions& opt, RunMetadata md) {
  opt.cfg.validate();
  opt.policy.validate();
  if (opt.waves < 1) throw ConfigError("--waves must be >= 1");
  if (opt.ensemble < 0) throw ConfigError("--ensemble must be >= 0");
  if (!(opt.cfg.radius > 0.0) || !(opt.cfg.duration > 0.0))
    throw ConfigError("verify needs R > 0 and T > 0 (the quadrature region must have nonzero measure)");

  VerifyResult out;
  const bounds::BoundReport report = bounds::bound_report(opt.cfg);
  out.exact = opt.dim == Dimension::ThreeD ? report.exact3d : report.exact2d;

  const auto mode_set = modes::enumerate_modes(opt.dim, opt.cfg, {opt.full_orders, opt.cap});
  const bool automatic = !opt.resolution.has_value();
  const rankcheck::GridResolution res =
      automatic ? rankcheck::minimum_resolution(mode_set, opt.cfg) : *opt.resolution;
  const rankcheck::SpaceTimeGrid grid = rankcheck::build_grid(opt.dim, opt.cfg, res);

  out.gram = rankcheck::eigen_spectrum(rankcheck::gram_of_modes(mode_set, grid, opt.cfg), opt.policy);

  const int members =
      opt.ensemble > 0 ? opt.ensemble : static_cast<int>(std::max<std::int64_t>(16, 4 * out.exact));
  std::vector<modes::PlaneWaveSet> fields;
  fields.reserve(static_cast<std::size_t>(members));
  for (int f = 0; f < members; ++f)
    fields.push_back(modes::synthesize_field(opt.dim, opt.cfg, opt.waves, modes::derive_seed(opt.seed, f)));
  out.ensemble = rankcheck::ensemble_spectrum(fields, grid, opt.policy);

  md.seed = opt.seed;
  ordered_json j;
  j["metadata"] = md.to_json();
  j["dim"] = std::string(to_string(opt.dim));
  j["bounds"] = report_json(report);
  j["modes"] = {{"count", static_cast<std::int64_t>(mode_set.size())},
                {"exact", out.exact},
                {"full_orders", opt.full_orders}};
  j["grid"] = {{"radial", res.radial},
               {"angular", res.angular},
               {"time", res.time},
               {"points", static_cast<std::int64_t>(grid.size())},
               {"automatic", automatic}};
  j["gram_spectrum"] = spectrum_json(out.gram);
  ordered_json ens = spectrum_json(out.ensemble);
  ens["members"] = members;
  ens["waves_per_member"] = opt.waves;
  j["ensemble_spectrum"] = std::move(ens);
  j["ratios"] = {{"gram_rank_threshold_over_exact", ratio(out.gram.rank_threshold, out.exact)},
                 {"gram_rank_energy_over_exact", ratio(out.gram.rank_energy, out.exact)},
                 {"ensemble_rank_threshold_over_exact", ratio(out.ensemble.rank_threshold, out.exact)},
                 {"ensemble_rank_energy_over_exact", ratio(out.ensemble.rank_energy, out.exact)}};
  out.report = std::move(j);
  return out;
}

CsvTable spectrum_table(const rankcheck::SpectrumReport& spectrum, const RunMetadata& md) {
  CsvTable table;
  table.metadata = md.lines();
  table.header = {"index", "eigenvalue", "cumulative_fraction"};
  double cumulative = 0.0;
  for (std::size_t j = 0; j < spectrum.eigenvalues.size(); ++j) {
    cumulative += spectrum.eigenvalues[j];
    const double frac = spectrum.trace != 0.0 ? cumulative / spectrum.trace : 0.0;
    table.rows.push_back({static_cast<std::int64_t>(j + 1), spectrum.eigenvalues[j], frac});
  }
  return table;
}

}  // namespace wavedof::cli
