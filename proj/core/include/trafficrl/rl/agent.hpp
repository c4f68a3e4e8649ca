#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "trafficrl/rl/adam.hpp"
#include "trafficrl/rl/mlp.hpp"
#include "trafficrl/rl/replay.hpp"

namespace trafficrl::rl {

/// Per-dimension action interval in the units of the tuned parameter.
struct ActionBounds {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dims() const { return lo.size(); }
  void validate() const;
};

struct AgentConfig {
  int obs_dim = 0;
  int action_dim = 0;
  std::vector<int> hidden{64, 64};
  double gamma = 0.99;
  double lr = 0.001;  // both actor and critic
  double soft_update_rate = 0.01;
  std::size_t buffer_capacity = 10000;
  int batch_size = 64;
  double noise_std = 0.3;
  double noise_decay = 5e-5;
  double noise_floor = 0.01;
  ActionBounds bounds;

  void validate() const;
};

/// DDPG learner: deterministic actor with tanh-bounded output, critic over
/// (observation, raw action), slow target copies, and a replay ring.
class Agent {
 public:
  Agent(AgentConfig cfg, std::uint64_t init_seed);

  const AgentConfig& config() const { return cfg_; }

  /// Deterministic policy output in [-1,1]^n. Throws on non-finite input.
  std::vector<double> act_raw(std::span<const double> obs) const;

  /// Maps a raw action onto the configured bounds.
  std::vector<double> scale_action(std::span<const double> raw) const;

  /// Adds Gaussian exploration noise, clips to [-1,1], then decays the
  /// noise scale toward its floor.
  std::vector<double> apply_exploration(std::vector<double> raw, std::mt19937_64& rng);

  double noise_std() const { return noise_std_; }
  void set_noise_std(double s) { noise_std_ = s; }

  void push_transition(Transition t) { buffer_.push(std::move(t)); }
  std::size_t buffer_size() const { return buffer_.size(); }
  const ReplayBuffer& buffer() const { return buffer_; }
  bool can_train() const { return buffer_.size() >= static_cast<std::size_t>(cfg_.batch_size); }

  struct TrainStats {
    double critic_loss = 0.0;
    double actor_objective = 0.0;
  };

  /// One DDPG gradient step on a sampled mini-batch followed by soft target
  /// updates. Throws on insufficient experience or non-finite loss.
  TrainStats train_step(std::mt19937_64& rng);

  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& actor_target() const { return actor_target_; }
  const Mlp& critic_target() const { return critic_target_; }
  Mlp& critic() { return critic_; }

  /// Writes one file per network plus a manifest into `dir`.
  void save(const std::string& dir) const;
  static Agent load(const std::string& dir);

 private:
  Agent() = default;  // used by load()

  AgentConfig cfg_;
  Mlp actor_, critic_, actor_target_, critic_target_;
  Adam actor_opt_, critic_opt_;
  ReplayBuffer buffer_{1};
  double noise_std_ = 0.0;
};

}  // namespace trafficrl::rl
