#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trafficrl/bench/report.hpp"
#include "trafficrl/bench/runner.hpp"
#include "trafficrl/config.hpp"
#include "trafficrl/seeds.hpp"

using namespace trafficrl;

namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::vector<std::string> lines;
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("smooth_curve is a trailing moving average") {
  SUBCASE("constant series is unchanged") {
    const std::vector<double> s(25, 3.5);
    CHECK(bench::smooth_curve(s, 40) == s);
  }
  SUBCASE("window one is the identity") {
    const std::vector<double> s{1.0, -2.0, 5.0};
    CHECK(bench::smooth_curve(s, 1) == s);
  }
  SUBCASE("prefix averages the available entries") {
    const std::vector<double> s{0.0, 40.0};
    const auto out = bench::smooth_curve(s, 2);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 20.0);
  }
  SUBCASE("window wider than the series averages the prefix") {
    const std::vector<double> s{10.0, 20.0, 30.0};
    const auto out = bench::smooth_curve(s, 40);
    CHECK(out[2] == doctest::Approx(20.0));
  }
  CHECK_THROWS_AS(bench::smooth_curve(std::vector<double>{}, 40), std::invalid_argument);
  CHECK_THROWS_AS(bench::smooth_curve(std::vector<double>{1.0}, 0), std::invalid_argument);
}

TEST_CASE("representative selection minimizes distance to the grand mean") {
  CHECK(bench::select_representative(std::vector<double>{7500.0, 7550.0, 7600.0}) == 1);
  CHECK(bench::select_representative(std::vector<double>{123.0}) == 0);
  // equidistant candidates resolve to the lower index
  CHECK(bench::select_representative(std::vector<double>{10.0, 20.0}) == 0);
  CHECK_THROWS_AS(bench::select_representative(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("csv writers emit the pinned schema and round-trip values") {
  const fs::path dir = fs::temp_directory_path() / "trafficrl_report_test";
  fs::create_directories(dir);

  SUBCASE("empty summary is header-only after comments") {
    const fs::path p = dir / "empty.csv";
    bench::write_summary_csv(p.string(), {});
    const auto lines = read_lines(p);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("# generated ", 0) == 0);
    CHECK(lines[1] == "strategy,mean_tts,std_tts,runs");
  }
  SUBCASE("values survive re-parsing to full precision") {
    const fs::path p = dir / "vals.csv";
    const double mean = 7656.712345678901234, sd = 42.5000000001;
    bench::write_summary_csv(p.string(),
                             std::vector<bench::StrategySummary>{{"fixed", mean, sd, 20}});
    const auto lines = read_lines(p);
    REQUIRE(lines.size() == 3);
    std::istringstream row(lines[2]);
    std::string strategy, mean_s, sd_s, runs_s;
    std::getline(row, strategy, ',');
    std::getline(row, mean_s, ',');
    std::getline(row, sd_s, ',');
    std::getline(row, runs_s, ',');
    CHECK(strategy == "fixed");
    CHECK(std::stod(mean_s) == mean);  // %.17g round-trips exactly
    CHECK(std::stod(sd_s) == sd);
    CHECK(runs_s == "20");
  }
  SUBCASE("svg starts with the xml declaration") {
    const fs::path p = dir / "curve.svg";
    const std::vector<double> raw{1.0, 2.0, 0.5, 3.0};
    bench::write_curve_svg(p.string(), raw, bench::smooth_curve(raw, 2), "demo");
    const auto lines = read_lines(p);
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    CHECK(lines[1].rfind("<svg ", 0) == 0);
  }
  fs::remove_all(dir);
}

TEST_CASE("mean and stddev") {
  const std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(bench::mean(xs) == doctest::Approx(5.0));
  CHECK(bench::sample_stddev(xs) == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(bench::sample_stddev(std::vector<double>{3.0}) == 0.0);
}

TEST_CASE("seed mixing derives stable independent streams") {
  CHECK(mix_seed(1, "demand", 0) == mix_seed(1, "demand", 0));
  CHECK(mix_seed(1, "demand", 0) != mix_seed(1, "demand", 1));
  CHECK(mix_seed(1, "demand", 0) != mix_seed(1, "explore", 0));
  CHECK(mix_seed(1, "demand", 0) != mix_seed(2, "demand", 0));
  CHECK(bench::run_demand_seed(7, 3) == bench::run_demand_seed(7, 3));
}

TEST_CASE("scenario config parsing") {
  SUBCASE("defaults parse and validate") {
    const auto sc = parse_scenario("", "test");
    CHECK(sc.model.rho_cr[0][0] == 40.0);
    CHECK(sc.timing.steps() == 1980);
  }
  SUBCASE("overrides land in the right fields") {
    const std::string text = R"(
[model]
rho_max = 200       ; jam density
v_min = 5
[timing]
step_s = 5
[fixed]
rho_bar_1 = 30
[demand]
o0_c1 = 0:500, 3600:2500, 7200:500
noise_std_o0 = 10
[ddpg]
hidden = 32,32
)";
    const auto sc = parse_scenario(text, "test");
    CHECK(sc.model.rho_max == 200.0);
    CHECK(sc.model.v_min == 5.0);
    CHECK(sc.model.step_s == 5.0);
    CHECK(sc.timing.steps() == 3960);
    CHECK(sc.fixed.rm1.rho_bar == 30.0);
    CHECK(sc.demand.base[0][0].at(3600.0) == 2500.0);
    CHECK(sc.demand.base[0][0].at(1800.0) == doctest::Approx(1500.0));
    CHECK(sc.demand.noise_std[0] == 10.0);
    CHECK(sc.ddpg.hidden == std::vector<int>{32, 32});
  }
  SUBCASE("unknown keys are rejected with their line") {
    CHECK_THROWS_WITH_AS(parse_scenario("[model]\nbogus = 1\n", "cfg"),
                         doctest::Contains("cfg:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario("[nosuch]\nx = 1\n", "cfg"),
                         doctest::Contains("nosuch"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario("x = 1\n", "cfg"), doctest::Contains("section"),
                         ConfigError);
    CHECK_THROWS_AS(parse_scenario("[model]\nrho_max = banana\n", "cfg"), ConfigError);
  }
  SUBCASE("invalid physical values fail validation") {
    CHECK_THROWS_AS(parse_scenario("[model]\nrho_max = 10\n", "cfg"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[timing]\nrl_period_s = 700\n", "cfg"), ConfigError);
  }
  SUBCASE("config hash is stable and content-sensitive") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
  }
}

TEST_CASE("the shipped default config reproduces the built-in defaults") {
  const auto from_file = load_scenario(std::string(TRAFFICRL_SOURCE_DIR) + "/configs/default.cfg");
  const auto builtin = env::ScenarioConfig::defaults();

  env::EpisodeOptions opt;
  opt.strategy = env::Strategy::Fixed;
  opt.demand_seed = 123;
  const auto a = env::run_episode(from_file, opt);
  const auto b = env::run_episode(builtin, opt);
  CHECK(a.total_tts == b.total_tts);  // bit-identical episode
  CHECK(a.rewards == b.rewards);
}

TEST_CASE("summary means equal the mean of the emitted per-run rows") {
  const fs::path dir = fs::temp_directory_path() / "trafficrl_integrity_test";
  fs::create_directories(dir);
  auto sc = env::ScenarioConfig::defaults();
  bench::EvalOptions opt;
  opt.runs = 4;
  opt.base_seed = 5;
  const auto tts = bench::evaluate_strategy(sc, env::Strategy::Fixed, {}, opt);

  std::vector<bench::RunRecord> runs;
  for (int r = 0; r < opt.runs; ++r)
    runs.push_back({"fixed", r, bench::run_demand_seed(opt.base_seed, r), tts[r]});
  bench::write_runs_csv((dir / "runs.csv").string(), runs);
  bench::write_summary_csv(
      (dir / "report.csv").string(),
      std::vector<bench::StrategySummary>{
          {"fixed", bench::mean(tts), bench::sample_stddev(tts), opt.runs}});

  // re-parse both files and cross-check the aggregate
  double sum = 0.0;
  int n = 0;
  for (const auto& line : read_lines(dir / "runs.csv")) {
    if (line.empty() || line[0] == '#' || line.rfind("strategy", 0) == 0) continue;
    const auto last_comma = line.find_last_of(',');
    sum += std::stod(line.substr(last_comma + 1));
    ++n;
  }
  REQUIRE(n == opt.runs);
  double reported_mean = 0.0;
  for (const auto& line : read_lines(dir / "report.csv")) {
    if (line.empty() || line[0] == '#' || line.rfind("strategy", 0) == 0) continue;
    std::istringstream row(line);
    std::string name, mean_s;
    std::getline(row, name, ',');
    std::getline(row, mean_s, ',');
    reported_mean = std::stod(mean_s);
  }
  CHECK(std::abs(reported_mean - sum / n) <= 1e-12 * std::max(1.0, std::abs(reported_mean)));
  fs::remove_all(dir);
}

TEST_CASE("paired evaluation is deterministic across invocations") {
  auto sc = env::ScenarioConfig::defaults();
  bench::EvalOptions opt;
  opt.runs = 3;
  opt.base_seed = 11;
  const auto a = bench::evaluate_strategy(sc, env::Strategy::NoControl, {}, opt);
  const auto b = bench::evaluate_strategy(sc, env::Strategy::NoControl, {}, opt);
  CHECK(a == b);
  opt.threads = 1;
  const auto serial = bench::evaluate_strategy(sc, env::Strategy::NoControl, {}, opt);
  CHECK(a == serial);
}

TEST_CASE("a zero-demand scenario benchmarks to exactly zero TTS") {
  auto sc = env::ScenarioConfig::defaults();
  for (auto& origin : sc.demand.base)
    for (auto& cls : origin) cls.points = {{0.0, 0.0}};
  sc.demand.noise_std = {0.0, 0.0, 0.0};
  bench::EvalOptions opt;
  opt.runs = 3;
  const auto tts = bench::evaluate_strategy(sc, env::Strategy::NoControl, {}, opt);
  CHECK(bench::mean(tts) == 0.0);
  CHECK(bench::sample_stddev(tts) == 0.0);
}
