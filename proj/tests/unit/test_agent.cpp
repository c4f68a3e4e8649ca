#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "trafficrl/rl/agent.hpp"
#include "trafficrl/rl/replay.hpp"

using namespace trafficrl::rl;

namespace {

AgentConfig small_config(int obs_dim = 3, int action_dim = 2) {
  AgentConfig cfg;
  cfg.obs_dim = obs_dim;
  cfg.action_dim = action_dim;
  cfg.hidden = {16, 16};
  cfg.bounds.lo.assign(action_dim, 0.0);
  cfg.bounds.hi.assign(action_dim, 0.5);
  return cfg;
}

Transition make_transition(int obs_dim, int action_dim, double reward, bool terminal,
                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Transition t;
  t.obs.resize(obs_dim);
  t.next_obs.resize(obs_dim);
  t.action.resize(action_dim);
  for (auto& v : t.obs) v = d(rng);
  for (auto& v : t.next_obs) v = d(rng);
  for (auto& v : t.action) v = d(rng);
  t.reward = reward;
  t.terminal = terminal;
  return t;
}

}  // namespace

TEST_CASE("replay buffer is a capacity-bounded ring") {
  std::mt19937_64 rng(1);
  ReplayBuffer buf(10000);
  CHECK(buf.size() == 0);
  buf.push(make_transition(2, 1, 0.5, false, rng));
  CHECK(buf.size() == 1);

  Transition probe = make_transition(2, 1, 42.0, true, rng);
  buf.push(probe);
  const auto& got = buf[1];
  CHECK(got.reward == 42.0);
  CHECK(got.obs == probe.obs);
  CHECK(got.action == probe.action);
  CHECK(got.terminal == probe.terminal);

  Transition first = buf[0];
  for (int i = 0; i < 9998; ++i) buf.push(make_transition(2, 1, double(i), false, rng));
  CHECK(buf.size() == 10000);
  buf.push(make_transition(2, 1, -1.0, false, rng));  // the 10^4 + 1st push
  CHECK(buf.size() == 10000);
  CHECK(buf[0].reward == -1.0);  // oldest slot overwritten
  CHECK(buf[0].reward != first.reward);
}

TEST_CASE("replay sampling is uniform-with-replacement and seeded") {
  std::mt19937_64 rng(2);
  ReplayBuffer buf(100);
  for (int i = 0; i < 63; ++i) buf.push(make_transition(1, 1, i, false, rng));
  std::mt19937_64 s1(7), s2(7);
  CHECK_THROWS_AS(buf.sample_indices(64, s1), std::runtime_error);
  buf.push(make_transition(1, 1, 63, false, rng));
  const auto a = buf.sample_indices(64, s1);
  const auto b = buf.sample_indices(64, s2);
  CHECK(a == b);
  for (auto i : a) CHECK(i < buf.size());
}

TEST_CASE("raw actions are tanh-bounded and scaling hits the bounds") {
  const Agent agent(small_config(), 42);
  std::vector<double> obs{0.2, -0.4, 1.0};
  const auto raw = agent.act_raw(obs);
  CHECK(raw.size() == 2);
  for (double v : raw) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  CHECK(agent.scale_action(std::vector<double>{-1.0, -1.0}) == std::vector<double>{0.0, 0.0});
  CHECK(agent.scale_action(std::vector<double>{1.0, 1.0}) == std::vector<double>{0.5, 0.5});
  CHECK(agent.scale_action(std::vector<double>{0.0, 0.0}) == std::vector<double>{0.25, 0.25});
  CHECK_THROWS_AS(agent.act_raw(std::vector<double>{0.0, std::nan(""), 0.0}),
                  std::invalid_argument);
}

TEST_CASE("exploration noise clips, decays, and vanishes at sigma zero") {
  Agent agent(small_config(), 42);
  std::mt19937_64 rng(3);

  SUBCASE("sigma 0 leaves the action unchanged") {
    agent.set_noise_std(0.0);
    const std::vector<double> raw{0.25, -0.75};
    CHECK(agent.apply_exploration(raw, rng) == raw);
  }
  SUBCASE("noise keeps raw actions in [-1,1]; overshoot clips to exactly 1") {
    double hi = -2.0, lo = 2.0;
    for (int i = 0; i < 200; ++i) {
      agent.set_noise_std(5.0);
      const auto out = agent.apply_exploration(std::vector<double>{0.9, -0.9}, rng);
      for (double v : out) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
    }
    CHECK(hi == 1.0);
    CHECK(lo == -1.0);
  }
  SUBCASE("decay follows the closed form down to the floor") {
    Agent a2(small_config(), 43);
    std::mt19937_64 r2(4);
    for (int n = 1; n <= 1000; ++n) {
      a2.apply_exploration(std::vector<double>{0.0, 0.0}, r2);
      const double expect = std::max(0.01, 0.3 * std::pow(1.0 - 5e-5, n));
      CHECK(a2.noise_std() == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma-zero critic that already fits r gets zero gradients") {
  AgentConfig cfg = small_config(2, 1);
  cfg.gamma = 0.0;
  cfg.batch_size = 8;
  Agent agent(cfg, 7);

  // Force the critic to the constant function r = 1.25: zero every weight,
  // set the output bias.
  for (auto& ly : agent.critic().layers()) {
    std::fill(ly.w.begin(), ly.w.end(), 0.0);
    std::fill(ly.b.begin(), ly.b.end(), 0.0);
  }
  agent.critic().layers().back().b[0] = 1.25;
  const Mlp critic_before = agent.critic();
  const Mlp actor_before = agent.actor();

  std::mt19937_64 rng(5);
  for (int i = 0; i < 8; ++i) agent.push_transition(make_transition(2, 1, 1.25, false, rng));
  std::mt19937_64 srng(6);
  const auto stats = agent.train_step(srng);
  CHECK(stats.critic_loss == 0.0);

  // zero error means zero critic gradient; constant critic means zero actor gradient
  for (std::size_t l = 0; l < critic_before.layers().size(); ++l) {
    CHECK(agent.critic().layers()[l].w == critic_before.layers()[l].w);
    CHECK(agent.critic().layers()[l].b == critic_before.layers()[l].b);
  }
  for (std::size_t l = 0; l < actor_before.layers().size(); ++l) {
    CHECK(agent.actor().layers()[l].w == actor_before.layers()[l].w);
    CHECK(agent.actor().layers()[l].b == actor_before.layers()[l].b);
  }
}

TEST_CASE("critic converges to the target on a degenerate dataset") {
  AgentConfig cfg = small_config(1, 1);
  cfg.gamma = 0.0;
  cfg.batch_size = 4;
  Agent agent(cfg, 11);

  Transition t;
  t.obs = {0.5};
  t.action = {0.2};
  t.reward = -0.75;
  t.next_obs = {0.5};
  t.terminal = true;
  for (int i = 0; i < 4; ++i) agent.push_transition(t);

  std::mt19937_64 rng(9);
  std::vector<double> critic_in{0.5, 0.2};
  double q = 0.0;
  int steps = 0;
  for (; steps < 5000; ++steps) {
    agent.train_step(rng);
    q = agent.critic().forward(critic_in)[0];
    if (std::abs(q - t.reward) < 1e-3) break;
  }
  CHECK(std::abs(q - t.reward) < 1e-3);
  CHECK(steps < 5000);
}

TEST_CASE("save/load round-trips the forward pass bit-identically") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "trafficrl_agent_test";
  fs::remove_all(dir);

  AgentConfig cfg = small_config(4, 3);
  cfg.bounds.lo = {0.0, 15.0, -1.0};
  cfg.bounds.hi = {0.1, 50.0, 1.0};
  Agent agent(cfg, 77);
  std::mt19937_64 rng(8);
  agent.apply_exploration(std::vector<double>{0.0, 0.0, 0.0}, rng);  // perturb noise state

  agent.save(dir.string());
  const Agent loaded = Agent::load(dir.string());
  CHECK(loaded.noise_std() == agent.noise_std());
  CHECK(loaded.config().bounds.lo == cfg.bounds.lo);
  CHECK(loaded.config().bounds.hi == cfg.bounds.hi);

  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> obs(4);
    for (auto& v : obs) v = d(rng);
    const auto a = agent.act_raw(obs);
    const auto b = loaded.act_raw(obs);
    CHECK(a == b);  // bit-identical
  }
  fs::remove_all(dir);
}

TEST_CASE("malformed agent files are rejected with the offending location") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "trafficrl_agent_bad";
  fs::remove_all(dir);
  Agent agent(small_config(), 3);
  agent.save(dir.string());

  SUBCASE("truncated network file") {
    const fs::path actor = dir / "actor.net";
    std::ifstream in(actor);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(actor, std::ios::trunc);
    out << all.substr(0, all.size() / 2 - 17);
    out.close();
    CHECK_THROWS_WITH_AS(Agent::load(dir.string()), doctest::Contains("actor.net"),
                         std::runtime_error);
  }
  SUBCASE("declared dims do not match the manifest") {
    const fs::path manifest = dir / "manifest.txt";
    std::ifstream in(manifest);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto pos = all.find("obs_dim 3");
    REQUIRE(pos != std::string::npos);
    all.replace(pos, 9, "obs_dim 5");
    std::ofstream out(manifest, std::ios::trunc);
    out << all;
    out.close();
    CHECK_THROWS_AS(Agent::load(dir.string()), std::runtime_error);
  }
  SUBCASE("unknown manifest key names its line") {
    std::ofstream out(dir / "manifest.txt", std::ios::app);
    out << "mystery 42\n";
    out.close();
    CHECK_THROWS_WITH_AS(Agent::load(dir.string()), doctest::Contains("mystery"),
                         std::runtime_error);
  }
  fs::remove_all(dir);
}

TEST_CASE("bounds validation") {
  ActionBounds b{{0.0, 1.0}, {1.0, 0.5}};
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  AgentConfig cfg = small_config();
  cfg.bounds.lo.pop_back();
  CHECK_THROWS_AS(Agent(cfg, 1), std::invalid_argument);
}
