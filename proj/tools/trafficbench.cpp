// trafficbench: scenario simulation, adaptive-controller training, and the
// strategy/robustness benchmark harness around the trafficrl core library.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trafficrl/bench/report.hpp"
#include "trafficrl/bench/runner.hpp"
#include "trafficrl/config.hpp"
#include "trafficrl/env/episode.hpp"
#include "trafficrl/env/observation.hpp"
#include "trafficrl/env/training.hpp"
#include "trafficrl/seeds.hpp"

namespace fs = std::filesystem;
using namespace trafficrl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
};

struct LoadedScenario {
  env::ScenarioConfig sc;
  std::string config_text = "defaults";
  std::string config_name = "defaults";
};

LoadedScenario load(const CommonOpts& common) {
  LoadedScenario ls;
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path);
    if (!in) throw ConfigError(common.config_path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    ls.config_text = ss.str();
    ls.config_name = common.config_path;
    ls.sc = parse_scenario(ls.config_text, common.config_path);
  } else {
    ls.sc = env::ScenarioConfig::defaults();
  }
  if (!common.out_dir.empty()) ls.sc.out_dir = common.out_dir;
  return ls;
}

std::vector<std::string> base_metadata(const LoadedScenario& ls) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(ls.config_text)));
  return {"config " + ls.config_name, std::string("config_hash ") + hash};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "needs at least one seed");
  return seeds;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> vals;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    vals.push_back(std::stod(item));
  }
  return vals;
}

std::vector<std::string> agent_dir_names(env::Framework f) {
  if (f == env::Framework::Multi) return {"agent_dta", "agent_rm1", "agent_rm2"};
  return {"agent_all"};
}

fs::path seed_dir(const env::ScenarioConfig& sc, env::Framework f, std::uint64_t seed) {
  return fs::path(sc.out_dir) / env::framework_name(f) / ("seed" + std::to_string(seed));
}

void save_bank(const std::vector<rl::Agent>& agents, env::Framework f, const fs::path& dir) {
  const auto names = agent_dir_names(f);
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].save((dir / names[i]).string());
}

std::vector<rl::Agent> load_bank(env::Framework f, const fs::path& dir) {
  const auto names = agent_dir_names(f);
  std::vector<rl::Agent> agents;
  for (const auto& n : names) {
    const fs::path adir = dir / n;
    if (!fs::exists(adir / "manifest.txt"))
      throw std::runtime_error("missing agent files under " + adir.string());
    agents.push_back(rl::Agent::load(adir.string()));
  }
  const int want_obs = (f == env::Framework::Multi) ? env::kObsDimMulti : env::kObsDimSingle;
  for (const auto& a : agents)
    if (a.config().obs_dim != want_obs)
      throw std::runtime_error(dir.string() + ": agent observation dims do not match framework");
  return agents;
}

/// Trained banks under <out>/<framework>/seed*/, ordered by seed value.
std::vector<std::pair<std::uint64_t, std::vector<rl::Agent>>> load_banks(
    const env::ScenarioConfig& sc, env::Framework f) {
  const fs::path root = fs::path(sc.out_dir) / env::framework_name(f);
  if (!fs::exists(root)) throw std::runtime_error("no trained agents under " + root.string());
  std::vector<std::uint64_t> seeds;
  for (const auto& e : fs::directory_iterator(root)) {
    const std::string name = e.path().filename().string();
    if (e.is_directory() && name.rfind("seed", 0) == 0)
      seeds.push_back(std::stoull(name.substr(4)));
  }
  if (seeds.empty()) throw std::runtime_error("no trained agents under " + root.string());
  std::sort(seeds.begin(), seeds.end());
  std::vector<std::pair<std::uint64_t, std::vector<rl::Agent>>> banks;
  for (auto s : seeds) banks.emplace_back(s, load_bank(f, seed_dir(sc, f, s)));
  return banks;
}

std::vector<rl::Agent*> bank_ptrs(std::vector<rl::Agent>& bank) {
  std::vector<rl::Agent*> p;
  for (auto& a : bank) p.push_back(&a);
  return p;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonOpts& common, const std::string& strategy_name,
                 std::uint64_t seed, double sigma) {
  const LoadedScenario ls = load(common);
  const env::Strategy strategy = env::strategy_from_name(strategy_name);

  std::vector<rl::Agent> bank;
  if (strategy == env::Strategy::Multi || strategy == env::Strategy::Single) {
    const env::Framework f =
        strategy == env::Strategy::Multi ? env::Framework::Multi : env::Framework::Single;
    auto banks = load_banks(ls.sc, f);
    bank = std::move(banks.front().second);
  }
  auto ptrs = bank_ptrs(bank);

  env::EpisodeOptions eopt;
  eopt.strategy = strategy;
  eopt.demand_seed = bench::run_demand_seed(seed, 0);
  eopt.obs_noise_sigma = sigma;
  eopt.obs_noise_seed = mix_seed(seed, "eval-obsnoise", 0);
  const env::EpisodeResult res = env::run_episode(ls.sc, eopt, ptrs);

  fs::create_directories(ls.sc.out_dir);
  const fs::path path = fs::path(ls.sc.out_dir) / ("simulate_" + strategy_name + ".csv");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# strategy " << strategy_name << ", seed " << seed << '\n';
  out << "step,t_seconds,weather,j_tts,u_dta,u_rm1,u_rm2\n";
  for (std::size_t k = 0; k < res.step_tts.size(); ++k) {
    out << k << ',' << bench::format_double(k * ls.sc.timing.step_s) << ','
        << static_cast<int>(env::weather_schedule(ls.sc, static_cast<long>(k))) << ','
        << bench::format_double(res.step_tts[k]) << ','
        << bench::format_double(res.controls[k].u_dta) << ','
        << bench::format_double(res.controls[k].u_rm1) << ','
        << bench::format_double(res.controls[k].u_rm2) << '\n';
  }
  std::cout << "strategy " << strategy_name << ": total TTS "
            << bench::format_double(res.total_tts) << " veh*h over " << res.step_tts.size()
            << " steps -> " << path.string() << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- train

int cmd_train(const CommonOpts& common, const std::string& framework_name, int episodes,
              const std::string& seeds_csv) {
  const LoadedScenario ls = load(common);
  const env::Framework f = env::framework_from_name(framework_name);
  const auto seeds = parse_seed_list(seeds_csv);
  const auto meta = base_metadata(ls);

  for (const auto seed : seeds) {
    env::TrainOptions topt;
    topt.framework = f;
    topt.episodes = episodes;
    topt.seed = seed;
    const env::TrainResult result = env::train(ls.sc, topt);

    const fs::path dir = seed_dir(ls.sc, f, seed);
    fs::create_directories(dir);
    save_bank(result.agents, f, dir);
    auto m = meta;
    m.push_back("framework " + framework_name);
    m.push_back("seed " + std::to_string(seed));
    bench::write_curve_csv((dir / "curve.csv").string(), result.episode_rewards, "reward", m);
    std::cout << "trained " << framework_name << " seed " << seed << " for " << episodes
              << " episodes -> " << dir.string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct BankEvaluation {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> tts_per_bank;
  std::vector<double> means;
  std::size_t representative = 0;
};

BankEvaluation evaluate_banks(const env::ScenarioConfig& sc, env::Framework f,
                              std::vector<std::pair<std::uint64_t, std::vector<rl::Agent>>>& banks,
                              const bench::EvalOptions& opt) {
  BankEvaluation ev;
  const env::Strategy strategy =
      f == env::Framework::Multi ? env::Strategy::Multi : env::Strategy::Single;
  for (auto& [seed, bank] : banks) {
    auto ptrs = bank_ptrs(bank);
    ev.seeds.push_back(seed);
    ev.tts_per_bank.push_back(bench::evaluate_strategy(sc, strategy, ptrs, opt));
    ev.means.push_back(bench::mean(ev.tts_per_bank.back()));
  }
  ev.representative = bench::select_representative(ev.means);
  return ev;
}

int cmd_evaluate(const CommonOpts& common, const std::string& framework_name, int runs,
                 std::uint64_t eval_seed) {
  const LoadedScenario ls = load(common);
  const env::Framework f = env::framework_from_name(framework_name);
  auto banks = load_banks(ls.sc, f);

  bench::EvalOptions opt;
  opt.runs = runs;
  opt.base_seed = eval_seed;
  opt.threads = common.threads;
  const BankEvaluation ev = evaluate_banks(ls.sc, f, banks, opt);

  std::vector<bench::StrategySummary> rows;
  for (std::size_t i = 0; i < ev.seeds.size(); ++i) {
    rows.push_back({framework_name + "/seed" + std::to_string(ev.seeds[i]),
                    ev.means[i], bench::sample_stddev(ev.tts_per_bank[i]), runs});
    std::cout << (i == ev.representative ? "* " : "  ") << rows.back().strategy << ": mean TTS "
              << bench::format_double(rows.back().mean_tts) << " +- "
              << bench::format_double(rows.back().std_tts) << '\n';
  }
  std::cout << "representative: seed" << ev.seeds[ev.representative] << '\n';

  auto meta = base_metadata(ls);
  meta.push_back("eval_seed " + std::to_string(eval_seed));
  meta.push_back("representative seed" + std::to_string(ev.seeds[ev.representative]));
  const fs::path path = fs::path(ls.sc.out_dir) / framework_name / "evaluate.csv";
  fs::create_directories(path.parent_path());
  bench::write_summary_csv(path.string(), rows, meta);
  return kExitOk;
}

// --------------------------------------------------------------- benchmark

int cmd_benchmark(const CommonOpts& common, const std::string& strategies_csv, int runs,
                  std::uint64_t eval_seed) {
  const LoadedScenario ls = load(common);
  std::vector<std::string> strategy_names;
  {
    std::istringstream ss(strategies_csv);
    std::string item;
    while (std::getline(ss, item, ',')) strategy_names.push_back(item);
  }

  bench::EvalOptions opt;
  opt.runs = runs;
  opt.base_seed = eval_seed;
  opt.threads = common.threads;

  std::vector<bench::StrategySummary> summary;
  std::vector<bench::RunRecord> run_rows;
  for (const auto& name : strategy_names) {
    const env::Strategy strategy = env::strategy_from_name(name);
    std::vector<double> tts;
    if (strategy == env::Strategy::Multi || strategy == env::Strategy::Single) {
      const env::Framework f =
          strategy == env::Strategy::Multi ? env::Framework::Multi : env::Framework::Single;
      auto banks = load_banks(ls.sc, f);
      const BankEvaluation ev = evaluate_banks(ls.sc, f, banks, opt);
      tts = ev.tts_per_bank[ev.representative];
    } else {
      tts = bench::evaluate_strategy(ls.sc, strategy, {}, opt);
    }
    summary.push_back({name, bench::mean(tts), bench::sample_stddev(tts), runs});
    for (int r = 0; r < runs; ++r)
      run_rows.push_back({name, r, bench::run_demand_seed(eval_seed, r), tts[r]});
    std::cout << name << ": mean TTS " << bench::format_double(summary.back().mean_tts)
              << " +- " << bench::format_double(summary.back().std_tts) << " over " << runs
              << " runs\n";
  }

  auto meta = base_metadata(ls);
  meta.push_back("eval_seed " + std::to_string(eval_seed));
  const fs::path dir = fs::path(ls.sc.out_dir) / "benchmark";
  fs::create_directories(dir);
  bench::write_summary_csv((dir / "report.csv").string(), summary, meta);
  bench::write_runs_csv((dir / "runs.csv").string(), run_rows, meta);
  std::cout << "wrote " << (dir / "report.csv").string() << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- robustness

int cmd_robustness(const CommonOpts& common, const std::string& sigma_csv, int runs_per_agent,
                   std::uint64_t eval_seed) {
  const LoadedScenario ls = load(common);
  const auto sigmas = parse_double_list(sigma_csv);
  if (sigmas.empty()) throw CLI::ValidationError("--sigma", "needs at least one value");

  std::vector<bench::RobustnessRow> rows;
  for (const env::Framework f : {env::Framework::Multi, env::Framework::Single}) {
    auto banks = load_banks(ls.sc, f);
    const env::Strategy strategy =
        f == env::Framework::Multi ? env::Strategy::Multi : env::Strategy::Single;
    for (const double sigma : sigmas) {
      std::vector<double> all_tts;
      for (std::size_t b = 0; b < banks.size(); ++b) {
        auto ptrs = bank_ptrs(banks[b].second);
        bench::EvalOptions opt;
        opt.runs = runs_per_agent;
        // Pair demand/noise streams per (bank, run) across sigma values.
        opt.base_seed = mix_seed(eval_seed, "robustness-bank", b);
        opt.sigma = sigma;
        opt.threads = common.threads;
        const auto tts = bench::evaluate_strategy(ls.sc, strategy, ptrs, opt);
        all_tts.insert(all_tts.end(), tts.begin(), tts.end());
      }
      rows.push_back({sigma, env::framework_name(f), bench::mean(all_tts),
                      bench::sample_stddev(all_tts), static_cast<int>(all_tts.size())});
      std::cout << env::framework_name(f) << " sigma " << sigma << ": mean TTS "
                << bench::format_double(rows.back().mean_tts) << " +- "
                << bench::format_double(rows.back().std_tts) << '\n';
    }
  }

  auto meta = base_metadata(ls);
  meta.push_back("eval_seed " + std::to_string(eval_seed));
  const fs::path dir = fs::path(ls.sc.out_dir) / "robustness";
  fs::create_directories(dir);
  bench::write_robustness_csv((dir / "robustness.csv").string(), rows, meta);
  std::cout << "wrote " << (dir / "robustness.csv").string() << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ report

int cmd_report(const CommonOpts& common, const std::string& curve_path, int window,
               const std::string& formats_csv) {
  const LoadedScenario ls = load(common);
  std::ifstream in(curve_path);
  if (!in) throw std::runtime_error(curve_path + ": cannot open");
  std::vector<double> values;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_skipped) {
      header_skipped = true;  // episode,<name> header
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(curve_path + ": malformed row: " + line);
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (values.empty()) throw std::runtime_error(curve_path + ": no data rows");

  const auto smoothed = bench::smooth_curve(values, window);
  bool want_csv = false, want_svg = false;
  {
    std::istringstream ss(formats_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "csv") want_csv = true;
      else if (item == "svg") want_svg = true;
      else throw CLI::ValidationError("--format", "unknown format '" + item + "'");
    }
  }

  fs::create_directories(ls.sc.out_dir);
  const std::string stem = fs::path(curve_path).stem().string();
  if (want_csv) {
    const fs::path p = fs::path(ls.sc.out_dir) / (stem + "_smoothed.csv");
    bench::write_curve_csv(p.string(), smoothed, "smoothed_reward",
                           std::vector<std::string>{"window " + std::to_string(window)});
    std::cout << "wrote " << p.string() << '\n';
  }
  if (want_svg) {
    const fs::path p = fs::path(ls.sc.out_dir) / (stem + ".svg");
    bench::write_curve_svg(p.string(), values, smoothed, stem);
    std::cout << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Freeway traffic benchmark: multi-class second-order simulation with "
               "PI route-guidance/ramp-metering controllers tuned online by DDPG agents"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  app.add_option("--config", common.config_path, "Scenario configuration file");
  app.add_option("--out", common.out_dir, "Output directory (default from config, 'out')");
  app.add_option("--threads", common.threads, "Worker threads for evaluation runs (0 = auto)");

  auto* sim = app.add_subcommand("simulate", "Run one episode and write its trace");
  std::string sim_strategy = "fixed";
  std::uint64_t sim_seed = 1;
  double sim_sigma = 0.0;
  sim->add_option("--strategy", sim_strategy, "no_control|fixed|multi|single");
  sim->add_option("--seed", sim_seed, "Episode seed");
  sim->add_option("--sigma", sim_sigma, "Observation failure noise std (percent)");

  auto* train = app.add_subcommand("train", "Train RL agents, one run per seed");
  std::string train_framework = "multi";
  int train_episodes = 10;
  std::string train_seeds = "1,2";
  train->add_option("--framework", train_framework, "multi|single");
  train->add_option("--episodes", train_episodes, "Training episodes per seed");
  train->add_option("--seeds", train_seeds, "Comma-separated training seeds");

  auto* eval = app.add_subcommand("evaluate", "Evaluate trained agents, pick representative");
  std::string eval_framework = "multi";
  int eval_runs = 5;
  std::uint64_t eval_seed = 1;
  eval->add_option("--framework", eval_framework, "multi|single");
  eval->add_option("--runs", eval_runs, "Evaluation runs per trained agent");
  eval->add_option("--eval-seed", eval_seed, "Base seed for evaluation scenarios");

  auto* bench_cmd = app.add_subcommand("benchmark", "Compare strategies on paired scenarios");
  std::string bench_strategies = "no_control,fixed,multi,single";
  int bench_runs = 5;
  std::uint64_t bench_seed = 1;
  bench_cmd->add_option("--strategy", bench_strategies, "Comma-separated strategy list");
  bench_cmd->add_option("--runs", bench_runs, "Runs per strategy");
  bench_cmd->add_option("--eval-seed", bench_seed, "Base seed for evaluation scenarios");

  auto* robust = app.add_subcommand("robustness", "Observation-failure sweep over sigma");
  std::string robust_sigma = "0,25,50,75,100";
  int robust_runs = 3;
  std::uint64_t robust_seed = 1;
  robust->add_option("--sigma", robust_sigma, "Comma-separated sigma list (percent)");
  robust->add_option("--runs", robust_runs, "Runs per trained agent per sigma");
  robust->add_option("--eval-seed", robust_seed, "Base seed for evaluation scenarios");

  auto* report = app.add_subcommand("report", "Smooth a reward curve; emit CSV/SVG");
  std::string report_curve;
  int report_window = 40;
  std::string report_formats = "csv,svg";
  report->add_option("--curve", report_curve, "curve.csv produced by train")->required();
  report->add_option("--window", report_window, "Moving-average window");
  report->add_option("--format", report_formats, "csv,svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, sim_strategy, sim_seed, sim_sigma);
    if (train->parsed()) return cmd_train(common, train_framework, train_episodes, train_seeds);
    if (eval->parsed()) return cmd_evaluate(common, eval_framework, eval_runs, eval_seed);
    if (bench_cmd->parsed()) return cmd_benchmark(common, bench_strategies, bench_runs, bench_seed);
    if (robust->parsed()) return cmd_robustness(common, robust_sigma, robust_runs, robust_seed);
    if (report->parsed()) return cmd_report(common, report_curve, report_window, report_formats);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
