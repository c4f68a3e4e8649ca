#include "trafficrl/rl/agent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace trafficrl::rl {

void ActionBounds::validate() const {
  if (lo.size() != hi.size()) throw std::invalid_argument("bounds: lo/hi size mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("bounds: lo must be < hi");
}

void AgentConfig::validate() const {
  if (obs_dim <= 0 || action_dim <= 0) throw std::invalid_argument("agent: dims must be > 0");
  if (bounds.dims() != static_cast<std::size_t>(action_dim))
    throw std::invalid_argument("agent: bounds dims must match action_dim");
  bounds.validate();
  if (batch_size <= 0 || buffer_capacity == 0)
    throw std::invalid_argument("agent: batch/buffer must be > 0");
  if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("agent: gamma must be in [0,1)");
}

Agent::Agent(AgentConfig cfg, std::uint64_t init_seed)
    : cfg_(std::move(cfg)), buffer_(cfg_.buffer_capacity), noise_std_(cfg_.noise_std) {
  cfg_.validate();
  std::mt19937_64 rng(init_seed);

  std::vector<int> actor_dims{cfg_.obs_dim};
  actor_dims.insert(actor_dims.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  actor_dims.push_back(cfg_.action_dim);
  // Final layer scaled down so initial actions sit near the bound midpoints.
  actor_ = make_mlp(actor_dims, Activation::Relu, Activation::Tanh, rng, 0.1);

  std::vector<int> critic_dims{cfg_.obs_dim + cfg_.action_dim};
  critic_dims.insert(critic_dims.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  critic_dims.push_back(1);
  critic_ = make_mlp(critic_dims, Activation::Relu, Activation::Linear, rng);

  actor_target_ = actor_;
  critic_target_ = critic_;
  actor_opt_ = Adam(AdamConfig{.lr = cfg_.lr}, actor_.param_count());
  critic_opt_ = Adam(AdamConfig{.lr = cfg_.lr}, critic_.param_count());
}

std::vector<double> Agent::act_raw(std::span<const double> obs) const {
  for (double v : obs)
    if (!std::isfinite(v)) throw std::invalid_argument("agent: non-finite observation");
  return actor_.forward(obs);
}

std::vector<double> Agent::scale_action(std::span<const double> raw) const {
  std::vector<double> scaled(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j)
    scaled[j] = cfg_.bounds.lo[j] + (raw[j] + 1.0) / 2.0 * (cfg_.bounds.hi[j] - cfg_.bounds.lo[j]);
  return scaled;
}

std::vector<double> Agent::apply_exploration(std::vector<double> raw, std::mt19937_64& rng) {
  if (noise_std_ > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_std_);
    for (auto& v : raw) v = std::clamp(v + noise(rng), -1.0, 1.0);
  }
  noise_std_ = std::max(cfg_.noise_floor, noise_std_ * (1.0 - cfg_.noise_decay));
  return raw;
}

Agent::TrainStats Agent::train_step(std::mt19937_64& rng) {
  const auto idx = buffer_.sample_indices(static_cast<std::size_t>(cfg_.batch_size), rng);
  const double inv_b = 1.0 / static_cast<double>(idx.size());

  // Bootstrapped regression targets from the target networks.
  std::vector<double> targets(idx.size());
  std::vector<double> critic_in;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Transition& tr = buffer_[idx[j]];
    double y = tr.reward;
    if (!tr.terminal) {
      const auto a_next = actor_target_.forward(tr.next_obs);
      critic_in.assign(tr.next_obs.begin(), tr.next_obs.end());
      critic_in.insert(critic_in.end(), a_next.begin(), a_next.end());
      y += cfg_.gamma * critic_target_.forward(critic_in)[0];
    }
    targets[j] = y;
  }

  // Critic: mean squared error against the targets.
  MlpGrads cg = MlpGrads::zeros_like(critic_);
  double loss = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Transition& tr = buffer_[idx[j]];
    critic_in.assign(tr.obs.begin(), tr.obs.end());
    critic_in.insert(critic_in.end(), tr.action.begin(), tr.action.end());
    const auto trace = critic_.forward_trace(critic_in);
    const double err = critic_.trace_output(trace)[0] - targets[j];
    loss += err * err * inv_b;
    const std::array<double, 1> upstream{2.0 * err * inv_b};
    mlp_backward(critic_, trace, upstream, &cg, 1.0);
  }
  if (!std::isfinite(loss)) throw std::runtime_error("ddpg: critic loss diverged (non-finite)");
  critic_opt_.step(critic_, cg);

  // Actor: ascend the mean critic value of its own actions.
  MlpGrads ag = MlpGrads::zeros_like(actor_);
  double objective = 0.0;
  std::vector<double> neg_da;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Transition& tr = buffer_[idx[j]];
    const auto atrace = actor_.forward_trace(tr.obs);
    const auto& act = actor_.trace_output(atrace);
    critic_in.assign(tr.obs.begin(), tr.obs.end());
    critic_in.insert(critic_in.end(), act.begin(), act.end());
    const auto ctrace = critic_.forward_trace(critic_in);
    objective += critic_.trace_output(ctrace)[0] * inv_b;
    const std::array<double, 1> upstream{inv_b};
    const auto dq_din = mlp_backward(critic_, ctrace, upstream, nullptr, 0.0);
    neg_da.assign(dq_din.begin() + cfg_.obs_dim, dq_din.end());
    for (auto& v : neg_da) v = -v;  // gradient ascent
    mlp_backward(actor_, atrace, neg_da, &ag, 1.0);
  }
  if (!std::isfinite(objective)) throw std::runtime_error("ddpg: actor objective diverged (non-finite)");
  actor_opt_.step(actor_, ag);

  soft_update(actor_target_, actor_, cfg_.soft_update_rate);
  soft_update(critic_target_, critic_, cfg_.soft_update_rate);
  return {loss, objective};
}

}  // namespace trafficrl::rl
