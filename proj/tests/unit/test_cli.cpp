#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "wavedof/cli/app.hpp"
#include "wavedof/cli/output.hpp"
#include "wavedof/cli/sweep.hpp"
#include "wavedof/cli/verify.hpp"

using namespace wavedof;
using namespace wavedof::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "wavedof");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wavedof_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

// Natural-unit calibration: 33 modes in 2D, 365 in 3D.
const std::vector<std::string> kCalibration = {"--R", "0.117099663048638", "--W", "1", "--T", "1",
                                               "--F0", "10", "--c", "1"};

std::vector<std::string> with_calibration(std::vector<std::string> args) {
  args.insert(args.end(), kCalibration.begin(), kCalibration.end());
  return args;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(3e20) == "3e+20");
  CHECK(format_number(-0.0) == "0");
  CHECK(round_significant(1.0 / 3.0) == 0.333333333333);
  CHECK(format_cell(Cell{std::int64_t{42}}) == "42");
  CHECK(format_cell(Cell{2.5}) == "2.5");
}

TEST_CASE("CSV round trip is byte-identical") {
  CsvTable t;
  t.metadata = {{"tool", "wavedof"}, {"config", "R=1 W=2"}};
  t.header = {"a", "b", "c"};
  t.rows = {{std::int64_t{1}, 2.5, 3e20}, {std::int64_t{-7}, 1.0 / 3.0, 0.0}};
  const std::string text = render_csv(t);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  const CsvTable back = parse_csv(text);
  CHECK(back.metadata == t.metadata);
  CHECK(back.header == t.header);
  CHECK(render_csv(back) == text);
  CHECK(std::holds_alternative<std::int64_t>(back.rows[1][0]));
  CHECK(back.value(1, back.column("b")) == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
  CHECK_THROWS_AS(back.column("zz"), std::out_of_range);
  CHECK_THROWS_AS(parse_csv("a,b\r\n1,2\r\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2"), std::invalid_argument);
}

TEST_CASE("axis parsing") {
  const AxisSpec a = parse_axis("R:0.01:10:4:log");
  CHECK(a.param == SweepParam::R);
  CHECK(a.scale == Scale::Log);
  const auto v = a.values();
  REQUIRE(v.size() == 4);
  CHECK(v.front() == 0.01);
  CHECK(v.back() == 10.0);
  CHECK(v[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(parse_axis("F0:1:2:3").scale == Scale::Linear);
  for (const char* bad : {"Q:0:1:3", "R:0:1:1", "R:0:1:2.5", "R:0:1", "R:x:1:3", "R:0:1:3:cubic"})
    CHECK_THROWS_AS(parse_axis(bad), ConfigError);
  // Well-formed but invalid ranges are rejected by the sweep.
  for (const char* bad : {"R:1:0:3", "R:0:1:3:log", "R:-1:1:3"}) {
    SweepSpec spec{parse_axis(bad), parse_axis("W:1:2:2"), {1.0, 1.0, 1.0, 10.0, 1.0}, {"thm1"}};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
  SweepSpec same{parse_axis("R:0:1:2"), parse_axis("R:1:2:2"), {1.0, 1.0, 1.0, 10.0, 1.0}, {"thm1"}};
  CHECK_THROWS_AS(same.validate(), ConfigError);
}

TEST_CASE("two-by-two sweep") {
  SweepSpec spec;
  spec.axis1 = parse_axis("R:0.1:1:2");
  spec.axis2 = parse_axis("W:1e3:1e4:2");
  spec.fixed = {1.0, 1e3, 1e-3, 1e6, 3e8};
  spec.quantities = report_quantities();
  const CsvTable t = run_sweep(spec, RunMetadata::make("sweep", spec.fixed));
  CHECK(t.header.size() == 2 + report_quantities().size());
  CHECK(t.header[0] == "axis1");
  CHECK(t.header[1] == "axis2");
  REQUIRE(t.rows.size() == 4);
  CHECK(t.value(1, 0) == 0.1);
  CHECK(t.value(1, 1) == 1e4);
  CHECK(t.value(2, 0) == 1.0);
  const auto reports = sweep_reports(spec);
  CHECK(t.value(3, t.column("thm1")) == doctest::Approx(reports[3].thm1).epsilon(1e-11));
  const std::string text = render_csv(t);
  std::size_t lines = 0;
  bool header_seen = false;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# ", 0) == 0) continue;
    header_seen = header_seen || line.rfind("axis1,", 0) == 0;
    ++lines;
  }
  CHECK(header_seen);
  CHECK(lines == 5);

  spec.quantities = {"bogus"};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  const std::string svg = render_heatmap_svg(t, "thm1");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("#fde725") != std::string::npos);
  CHECK(svg.find("#440154") != std::string::npos);
}

TEST_CASE("config precedence: flags over file over defaults") {
  const fs::path cfg = scratch("precedence.cfg");
  write_text_file(cfg.string(), "# test\nR = 2\nW = 5\nT = 1\nF0 = 10\n");
  const auto parsed = parse_config_text("R = 2\n# c\n  W=5  \n");
  CHECK(parsed.at("R") == "2");
  CHECK(parsed.at("W") == "5");
  CHECK_THROWS_AS(parse_config_text("R 2\n"), ConfigError);

  auto r = invoke({"bounds", "--json", "--config", cfg.string(), "--R", "3"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["report"]["config"]["R"] == 3.0);
  CHECK(j["report"]["config"]["W"] == 5.0);
  CHECK(j["report"]["config"]["c"] == 3e8);

  r = invoke({"bounds", "--json", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["report"]["config"]["R"] == 2.0);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"bounds", "--bogus"}).code == 1);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"bounds", "--R", "-1", "--W", "1", "--T", "1", "--F0", "10"}).code == 2);
  CHECK(invoke({"bounds", "--R", "1", "--W", "20", "--T", "1", "--F0", "10"}).code == 2);

  const fs::path out = scratch("modes.csv");
  const auto capped = invoke(with_calibration({"modes", "--dim", "3d", "--cap", "100", "--out", out.string()}));
  CHECK(capped.code == 3);
  CHECK(capped.err.find("error") != std::string::npos);

  const auto coarse = invoke(with_calibration({"verify", "--dim", "2d", "--resolution", "4,5,6"}));
  CHECK(coarse.code == 4);
  CHECK(coarse.err.find("n_angular") != std::string::npos);

  CHECK(invoke({"bounds", "--config", scratch("does-not-exist.cfg").string()}).code == 1);
}

TEST_CASE("mode table") {
  const fs::path out = scratch("modes2d.csv");
  const auto r = invoke(with_calibration({"modes", "--dim", "2d", "--out", out.string()}));
  REQUIRE(r.code == 0);
  CHECK(r.out == "33\n");
  const std::string text = read_text_file(out.string());
  CHECK(text.find('\r') == std::string::npos);
  const CsvTable t = parse_csv(text);
  CHECK(t.rows.size() == 33);
  CHECK(t.header == std::vector<std::string>{"i", "n", "m", "f_hz", "k_rad_per_m"});
  CHECK(std::holds_alternative<std::int64_t>(t.rows[0][0]));
  bool has_tool = false, has_config = false, has_timestamp = false;
  for (const auto& [k, v] : t.metadata) {
    has_tool = has_tool || (k == "tool" && v.find("wavedof") != std::string::npos);
    has_config = has_config || k == "config";
    has_timestamp = has_timestamp || k == "timestamp";
  }
  CHECK(has_tool);
  CHECK(has_config);
  CHECK(has_timestamp);
}

TEST_CASE("SOURCE_DATE_EPOCH fixes the timestamp") {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(current_timestamp() == "1970-01-02T00:00:00Z");
  const auto r = invoke(with_calibration({"bounds", "--json"}));
  ::unsetenv("SOURCE_DATE_EPOCH");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["metadata"]["timestamp"] == "1970-01-02T00:00:00Z");
  CHECK(j["metadata"]["tool"] == "wavedof");
  CHECK(j["metadata"]["version"] == std::string(kToolVersion));
}

TEST_CASE("verify is deterministic") {
  const auto first = invoke(with_calibration({"verify", "--dim", "2d", "--seed", "7", "--ensemble", "40", "--policy", "1e-6,0.99"}));
  const auto second = invoke(with_calibration({"verify", "--dim", "2d", "--seed", "7", "--ensemble", "40", "--policy", "1e-6,0.99"}));
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  auto a = nlohmann::json::parse(first.out);
  auto b = nlohmann::json::parse(second.out);
  CHECK(a["metadata"]["seed"] == 7);
  a["metadata"].erase("timestamp");
  b["metadata"].erase("timestamp");
  CHECK(a == b);
  CHECK(a["modes"]["exact"] == 33);
  CHECK(a["gram_spectrum"]["rank_threshold"] == 33);

  const auto other = invoke(with_calibration({"verify", "--dim", "2d", "--seed", "8", "--ensemble", "40", "--policy", "1e-6,0.99"}));
  auto c = nlohmann::json::parse(other.out);
  CHECK(c["ensemble_spectrum"]["eigenvalues"] != a["ensemble_spectrum"]["eigenvalues"]);
}

TEST_CASE("verify with a single ensemble member") {
  VerifyOptions opt;
  opt.cfg = {0.117099663048638, 1.0, 1.0, 10.0, 1.0};
  opt.ensemble = 1;
  const auto result = run_verify(opt, RunMetadata::make("verify", opt.cfg, opt.seed));
  CHECK(result.exact == 33);
  CHECK(result.ensemble.rank_threshold == 1);
  CHECK(result.ensemble.rank_energy == 1);
  const CsvTable t = spectrum_table(result.gram, RunMetadata::make("verify", opt.cfg, opt.seed));
  CHECK(t.header == std::vector<std::string>{"index", "eigenvalue", "cumulative_fraction"});
  CHECK(t.rows.size() == 33);
  CHECK(std::get<std::int64_t>(t.rows.front()[0]) == 1);
  CHECK(t.value(32, 2) == doctest::Approx(1.0).epsilon(1e-10));

  opt.cfg.duration = 0.0;
  CHECK_THROWS_AS(run_verify(opt, RunMetadata::make("verify", opt.cfg)), ConfigError);
}

TEST_CASE("figure presets") {
  for (const char* name : {"fig3", "fig4", "fig5"}) {
    const SweepSpec s = figure_preset(name, 3);
    CHECK_NOTHROW(s.validate());
    CHECK(s.axis1.count == 3);
  }
  CHECK_THROWS_AS(figure_preset("fig9", 3), ConfigError);
  const fs::path out = scratch("fig3.csv"), svg = scratch("fig3.svg");
  const auto r = invoke({"figure", "fig3", "--count", "3", "--out", out.string(), "--svg", svg.string()});
  REQUIRE(r.code == 0);
  CHECK(parse_csv(read_text_file(out.string())).rows.size() == 9);
  CHECK(read_text_file(svg.string()).find("</svg>") != std::string::npos);
}
