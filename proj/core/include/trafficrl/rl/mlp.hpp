#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace trafficrl::rl {

enum class Activation { Linear, Relu, Tanh };

std::string_view activation_name(Activation a);
Activation activation_from_name(std::string_view name);  // throws on unknown name

struct Layer {
  int in = 0;
  int out = 0;
  Activation act = Activation::Linear;
  std::vector<double> w;  // row-major [out][in]
  std::vector<double> b;  // [out]
};

/// Plain fully-connected network evaluated in double precision.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<Layer> layers);  // validates dimension chaining

  int input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  int output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }
  std::size_t param_count() const;

  std::vector<double> forward(std::span<const double> x) const;

  /// Forward pass keeping everything backprop needs: the input of every
  /// layer (inputs[0] is x itself, inputs[l+1] the activation of layer l)
  /// and the preactivations.
  struct Trace {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre;
  };
  Trace forward_trace(std::span<const double> x) const;

  const std::vector<double>& trace_output(const Trace& t) const { return t.inputs.back(); }

 private:
  std::vector<Layer> layers_;
};

/// Parameter gradients shaped like a network, plus the input gradient.
struct MlpGrads {
  std::vector<std::vector<double>> dw;
  std::vector<std::vector<double>> db;
  std::vector<double> dx;

  static MlpGrads zeros_like(const Mlp& net);
};

/// Reverse-mode pass for the scalar dot(output, upstream). Returns the input
/// gradient; when `accum` is given, adds `scale` times the parameter
/// gradients into it.
std::vector<double> mlp_backward(const Mlp& net, const Mlp::Trace& t,
                                 std::span<const double> upstream, MlpGrads* accum,
                                 double scale);

/// One-shot gradient computation (parameters and input).
MlpGrads mlp_gradients(const Mlp& net, std::span<const double> x,
                       std::span<const double> upstream);

/// Builds a network with the given layer widths; hidden layers use `hidden`,
/// the last layer `output`. Weights and biases are uniform in
/// +-1/sqrt(fan_in); the final layer is additionally scaled by `final_scale`.
Mlp make_mlp(const std::vector<int>& dims, Activation hidden, Activation output,
             std::mt19937_64& rng, double final_scale = 1.0);

/// theta_target <- rate * theta_online + (1 - rate) * theta_target.
/// Throws std::invalid_argument on shape mismatch.
void soft_update(Mlp& target, const Mlp& online, double rate);

}  // namespace trafficrl::rl
