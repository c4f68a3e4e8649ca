#include "trafficrl/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "trafficrl/seeds.hpp"

namespace trafficrl {

namespace {

using env::ScenarioConfig;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters after number");
  return d;
}

int to_int(const std::string& v) {
  std::size_t pos = 0;
  const int i = std::stoi(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters after integer");
  return i;
}

env::PiecewiseLinear to_breakpoints(const std::string& v) {
  // "t0:v0, t1:v1, ..." with seconds and veh/h
  env::PiecewiseLinear p;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("breakpoint needs t:value");
    const double t = to_double(trim(item.substr(0, colon)));
    const double val = to_double(trim(item.substr(colon + 1)));
    if (!p.points.empty() && t <= p.points.back().first)
      throw std::invalid_argument("breakpoint times must be strictly increasing");
    p.points.emplace_back(t, val);
  }
  if (p.points.empty()) throw std::invalid_argument("empty breakpoint list");
  return p;
}

std::vector<int> to_int_list(const std::string& v) {
  std::vector<int> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(trim(item)));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const char* key, auto member) {
      t[key] = [member](ScenarioConfig& sc, const std::string& v) { member(sc) = to_double(v); };
    };

    // [model]
    num("model.rho_cr_good_c1", [](ScenarioConfig& sc) -> double& { return sc.model.rho_cr[0][0]; });
    num("model.rho_cr_good_c2", [](ScenarioConfig& sc) -> double& { return sc.model.rho_cr[0][1]; });
    num("model.rho_cr_bad_c1", [](ScenarioConfig& sc) -> double& { return sc.model.rho_cr[1][0]; });
    num("model.rho_cr_bad_c2", [](ScenarioConfig& sc) -> double& { return sc.model.rho_cr[1][1]; });
    num("model.v_free_good_c1", [](ScenarioConfig& sc) -> double& { return sc.model.v_free[0][0]; });
    num("model.v_free_good_c2", [](ScenarioConfig& sc) -> double& { return sc.model.v_free[0][1]; });
    num("model.v_free_bad_c1", [](ScenarioConfig& sc) -> double& { return sc.model.v_free[1][0]; });
    num("model.v_free_bad_c2", [](ScenarioConfig& sc) -> double& { return sc.model.v_free[1][1]; });
    num("model.tau_good", [](ScenarioConfig& sc) -> double& { return sc.model.tau_s[0]; });
    num("model.tau_bad", [](ScenarioConfig& sc) -> double& { return sc.model.tau_s[1]; });
    num("model.a_c1", [](ScenarioConfig& sc) -> double& { return sc.model.a_m[0]; });
    num("model.a_c2", [](ScenarioConfig& sc) -> double& { return sc.model.a_m[1]; });
    num("model.pce_c1", [](ScenarioConfig& sc) -> double& { return sc.model.pce[0]; });
    num("model.pce_c2", [](ScenarioConfig& sc) -> double& { return sc.model.pce[1]; });
    num("model.nu", [](ScenarioConfig& sc) -> double& { return sc.model.nu; });
    num("model.chi", [](ScenarioConfig& sc) -> double& { return sc.model.chi; });
    num("model.delta", [](ScenarioConfig& sc) -> double& { return sc.model.delta; });
    num("model.rho_max", [](ScenarioConfig& sc) -> double& { return sc.model.rho_max; });
    num("model.c_main", [](ScenarioConfig& sc) -> double& { return sc.model.c_main; });
    num("model.c_onramp", [](ScenarioConfig& sc) -> double& { return sc.model.c_onramp; });
    num("model.segment_length_m", [](ScenarioConfig& sc) -> double& { return sc.model.segment_length_m; });
    num("model.v_min", [](ScenarioConfig& sc) -> double& { return sc.model.v_min; });

    // [topology]
    t["topology.main_segments"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.links[traffic::kMain].segments = to_int(v);
    };
    t["topology.main_lanes"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.links[traffic::kMain].lanes = to_int(v);
    };
    t["topology.route_segments"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.links[traffic::kPrimary].segments = to_int(v);
      sc.topology.links[traffic::kSecondary].segments = to_int(v);
    };
    t["topology.route_lanes"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.links[traffic::kPrimary].lanes = to_int(v);
      sc.topology.links[traffic::kSecondary].lanes = to_int(v);
    };
    t["topology.ramp_lanes"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.ramp_lanes = to_int(v);
    };
    t["topology.ramp_segment"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.links[traffic::kPrimary].ramp_segment = to_int(v);
      sc.topology.links[traffic::kSecondary].ramp_segment = to_int(v);
    };
    t["topology.bottleneck_segment"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.topology.links[traffic::kPrimary].bottleneck_segment = to_int(v);
      sc.topology.links[traffic::kSecondary].bottleneck_segment = to_int(v);
    };

    // [timing]
    t["timing.step_s"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.timing.step_s = to_double(v);
      sc.model.step_s = sc.timing.step_s;
    };
    num("timing.dta_period_s", [](ScenarioConfig& sc) -> double& { return sc.timing.dta_period_s; });
    num("timing.rm_period_s", [](ScenarioConfig& sc) -> double& { return sc.timing.rm_period_s; });
    num("timing.rl_period_s", [](ScenarioConfig& sc) -> double& { return sc.timing.rl_period_s; });
    num("timing.episode_s", [](ScenarioConfig& sc) -> double& { return sc.timing.episode_s; });

    // [reward]
    num("reward.w_tts", [](ScenarioConfig& sc) -> double& { return sc.reward.w_tts; });
    num("reward.w_u", [](ScenarioConfig& sc) -> double& { return sc.reward.w_u; });

    // [demand]
    for (int o = 0; o < 3; ++o) {
      for (int c = 0; c < 2; ++c) {
        const std::string key =
            "demand.o" + std::to_string(o) + "_c" + std::to_string(c + 1);
        t[key] = [o, c](ScenarioConfig& sc, const std::string& v) {
          sc.demand.base[o][c] = to_breakpoints(v);
        };
      }
      const std::string nkey = "demand.noise_std_o" + std::to_string(o);
      t[nkey] = [o](ScenarioConfig& sc, const std::string& v) {
        sc.demand.noise_std[o] = to_double(v);
      };
    }
    num("demand.butter_cutoff", [](ScenarioConfig& sc) -> double& { return sc.demand.butter_cutoff; });

    // [scales]
    num("scales.demand", [](ScenarioConfig& sc) -> double& { return sc.scales.demand; });
    num("scales.queue", [](ScenarioConfig& sc) -> double& { return sc.scales.queue; });
    num("scales.density", [](ScenarioConfig& sc) -> double& { return sc.scales.density; });
    num("scales.dt", [](ScenarioConfig& sc) -> double& { return sc.scales.dt; });
    num("scales.u", [](ScenarioConfig& sc) -> double& { return sc.scales.u; });
    num("scales.w", [](ScenarioConfig& sc) -> double& { return sc.scales.w; });

    // [fixed]
    num("fixed.k_p", [](ScenarioConfig& sc) -> double& { return sc.fixed.dta.k_p; });
    num("fixed.k_i", [](ScenarioConfig& sc) -> double& { return sc.fixed.dta.k_i; });
    num("fixed.rho_bar_1", [](ScenarioConfig& sc) -> double& { return sc.fixed.rm1.rho_bar; });
    num("fixed.k_r_1", [](ScenarioConfig& sc) -> double& { return sc.fixed.rm1.k_r; });
    num("fixed.k_a_1", [](ScenarioConfig& sc) -> double& { return sc.fixed.rm1.k_a; });
    num("fixed.rho_bar_2", [](ScenarioConfig& sc) -> double& { return sc.fixed.rm2.rho_bar; });
    num("fixed.k_r_2", [](ScenarioConfig& sc) -> double& { return sc.fixed.rm2.k_r; });
    num("fixed.k_a_2", [](ScenarioConfig& sc) -> double& { return sc.fixed.rm2.k_a; });

    // [ddpg]
    t["ddpg.hidden"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.ddpg.hidden = to_int_list(v);
    };
    num("ddpg.gamma", [](ScenarioConfig& sc) -> double& { return sc.ddpg.gamma; });
    num("ddpg.lr", [](ScenarioConfig& sc) -> double& { return sc.ddpg.lr; });
    num("ddpg.soft_update", [](ScenarioConfig& sc) -> double& { return sc.ddpg.soft_update; });
    t["ddpg.buffer"] = [](ScenarioConfig& sc, const std::string& v) {
      sc.ddpg.buffer = static_cast<std::size_t>(to_int(v));
    };
    t["ddpg.batch"] = [](ScenarioConfig& sc, const std::string& v) { sc.ddpg.batch = to_int(v); };
    num("ddpg.noise_std", [](ScenarioConfig& sc) -> double& { return sc.ddpg.noise_std; });
    num("ddpg.noise_decay", [](ScenarioConfig& sc) -> double& { return sc.ddpg.noise_decay; });
    num("ddpg.noise_floor", [](ScenarioConfig& sc) -> double& { return sc.ddpg.noise_floor; });

    // [noise], [weather], [output]
    num("noise.start_minute", [](ScenarioConfig& sc) -> double& { return sc.obs_noise.start_minute; });
    num("weather.switch_minute", [](ScenarioConfig& sc) -> double& { return sc.weather_switch_minute; });
    t["output.dir"] = [](ScenarioConfig& sc, const std::string& v) { sc.out_dir = v; };
    return t;
  }();
  return table;
}

}  // namespace

env::ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  ScenarioConfig sc = ScenarioConfig::defaults();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail("empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside any [section]");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail("empty key");
    const auto it = key_table().find(section + "." + key);
    if (it == key_table().end()) fail("unknown key '" + key + "' in section [" + section + "]");
    try {
      it->second(sc, value);
    } catch (const std::exception& e) {
      fail("bad value for '" + key + "': " + e.what());
    }
  }
  try {
    sc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return sc;
}

env::ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::uint64_t config_hash(const std::string& text) { return fnv1a(text); }

}  // namespace trafficrl
