#include "trafficrl/rl/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trafficrl::rl {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

Activation activation_from_name(std::string_view name) {
  if (name == "linear") return Activation::Linear;
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation: " + std::string(name));
}

namespace {

double activate(double x, Activation a) {
  switch (a) {
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Tanh: return std::tanh(x);
    default: return x;
  }
}

double activate_grad(double pre, Activation a) {
  switch (a) {
    case Activation::Relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    default: return 1.0;
  }
}

}  // namespace

Mlp::Mlp(std::vector<Layer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& ly = layers_[l];
    if (ly.in <= 0 || ly.out <= 0) throw std::invalid_argument("mlp: non-positive layer dims");
    if (ly.w.size() != static_cast<std::size_t>(ly.in) * ly.out ||
        ly.b.size() != static_cast<std::size_t>(ly.out))
      throw std::invalid_argument("mlp: parameter sizes do not match layer dims");
    if (l > 0 && layers_[l - 1].out != ly.in)
      throw std::invalid_argument("mlp: consecutive layer dims incompatible");
  }
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const auto& ly : layers_) n += ly.w.size() + ly.b.size();
  return n;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim())
    throw std::invalid_argument("mlp: input dimension mismatch");
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (const auto& ly : layers_) {
    next.assign(ly.out, 0.0);
    for (int o = 0; o < ly.out; ++o) {
      double s = ly.b[o];
      const double* row = &ly.w[static_cast<std::size_t>(o) * ly.in];
      for (int i = 0; i < ly.in; ++i) s += row[i] * cur[i];
      next[o] = activate(s, ly.act);
    }
    cur.swap(next);
  }
  return cur;
}

Mlp::Trace Mlp::forward_trace(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim())
    throw std::invalid_argument("mlp: input dimension mismatch");
  Trace t;
  t.inputs.reserve(layers_.size() + 1);
  t.pre.reserve(layers_.size());
  t.inputs.emplace_back(x.begin(), x.end());
  for (const auto& ly : layers_) {
    const auto& cur = t.inputs.back();
    std::vector<double> pre(ly.out);
    std::vector<double> act(ly.out);
    for (int o = 0; o < ly.out; ++o) {
      double s = ly.b[o];
      const double* row = &ly.w[static_cast<std::size_t>(o) * ly.in];
      for (int i = 0; i < ly.in; ++i) s += row[i] * cur[i];
      pre[o] = s;
      act[o] = activate(s, ly.act);
    }
    t.pre.push_back(std::move(pre));
    t.inputs.push_back(std::move(act));
  }
  return t;
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
  MlpGrads g;
  g.dw.reserve(net.layers().size());
  g.db.reserve(net.layers().size());
  for (const auto& ly : net.layers()) {
    g.dw.emplace_back(ly.w.size(), 0.0);
    g.db.emplace_back(ly.b.size(), 0.0);
  }
  g.dx.assign(net.input_dim(), 0.0);
  return g;
}

std::vector<double> mlp_backward(const Mlp& net, const Mlp::Trace& t,
                                 std::span<const double> upstream, MlpGrads* accum,
                                 double scale) {
  const auto& layers = net.layers();
  if (static_cast<int>(upstream.size()) != net.output_dim())
    throw std::invalid_argument("mlp: upstream gradient dimension mismatch");
  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> down;
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const auto& ly = layers[l];
    // delta currently holds dL/d(activation of layer l); fold in act'.
    for (int o = 0; o < ly.out; ++o) delta[o] *= activate_grad(t.pre[l][o], ly.act);
    const auto& in = t.inputs[l];
    if (accum) {
      auto& dw = accum->dw[l];
      auto& db = accum->db[l];
      for (int o = 0; o < ly.out; ++o) {
        const double d = delta[o] * scale;
        double* wrow = &dw[static_cast<std::size_t>(o) * ly.in];
        for (int i = 0; i < ly.in; ++i) wrow[i] += d * in[i];
        db[o] += d;
      }
    }
    down.assign(ly.in, 0.0);
    for (int o = 0; o < ly.out; ++o) {
      const double d = delta[o];
      const double* row = &ly.w[static_cast<std::size_t>(o) * ly.in];
      for (int i = 0; i < ly.in; ++i) down[i] += row[i] * d;
    }
    delta.swap(down);
  }
  return delta;
}

MlpGrads mlp_gradients(const Mlp& net, std::span<const double> x,
                       std::span<const double> upstream) {
  MlpGrads g = MlpGrads::zeros_like(net);
  const auto t = net.forward_trace(x);
  g.dx = mlp_backward(net, t, upstream, &g, 1.0);
  return g;
}

Mlp make_mlp(const std::vector<int>& dims, Activation hidden, Activation output,
             std::mt19937_64& rng, double final_scale) {
  if (dims.size() < 2) throw std::invalid_argument("mlp: need at least input and output dims");
  std::vector<Layer> layers;
  layers.reserve(dims.size() - 1);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer ly;
    ly.in = dims[l];
    ly.out = dims[l + 1];
    const bool last = (l + 2 == dims.size());
    ly.act = last ? output : hidden;
    const double bound = 1.0 / std::sqrt(static_cast<double>(ly.in));
    const double s = last ? final_scale : 1.0;
    std::uniform_real_distribution<double> dist(-bound, bound);
    ly.w.resize(static_cast<std::size_t>(ly.in) * ly.out);
    ly.b.resize(ly.out);
    for (auto& v : ly.w) v = s * dist(rng);
    for (auto& v : ly.b) v = s * dist(rng);
    layers.push_back(std::move(ly));
  }
  return Mlp(std::move(layers));
}

void soft_update(Mlp& target, const Mlp& online, double rate) {
  auto& tl = target.layers();
  const auto& ol = online.layers();
  if (tl.size() != ol.size()) throw std::invalid_argument("soft_update: layer count mismatch");
  for (std::size_t l = 0; l < tl.size(); ++l) {
    if (tl[l].in != ol[l].in || tl[l].out != ol[l].out)
      throw std::invalid_argument("soft_update: layer shape mismatch");
    for (std::size_t i = 0; i < tl[l].w.size(); ++i)
      tl[l].w[i] = rate * ol[l].w[i] + (1.0 - rate) * tl[l].w[i];
    for (std::size_t i = 0; i < tl[l].b.size(); ++i)
      tl[l].b[i] = rate * ol[l].b[i] + (1.0 - rate) * tl[l].b[i];
  }
}

}  // namespace trafficrl::rl
