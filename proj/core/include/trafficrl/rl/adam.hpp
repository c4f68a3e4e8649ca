#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "trafficrl/rl/mlp.hpp"

namespace trafficrl::rl {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adaptive-moment descent over the flattened parameters of one network
/// (per layer: weights, then biases).
class Adam {
 public:
  Adam() = default;
  Adam(AdamConfig cfg, std::size_t param_count)
      : cfg_(cfg), m_(param_count, 0.0), v_(param_count, 0.0) {}

  void step(Mlp& net, const MlpGrads& g) {
    if (net.param_count() != m_.size()) throw std::invalid_argument("adam: parameter count mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    std::size_t k = 0;
    auto update = [&](double& p, double grad) {
      m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * grad;
      v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * grad * grad;
      p -= cfg_.lr * (m_[k] / bc1) / (std::sqrt(v_[k] / bc2) + cfg_.eps);
      ++k;
    };
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      for (std::size_t i = 0; i < layers[l].w.size(); ++i) update(layers[l].w[i], g.dw[l][i]);
      for (std::size_t i = 0; i < layers[l].b.size(); ++i) update(layers[l].b[i], g.db[l][i]);
    }
  }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace trafficrl::rl
