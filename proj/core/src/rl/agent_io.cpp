#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "trafficrl/rl/agent.hpp"

namespace trafficrl::rl {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_network(const Mlp& net, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& ly : net.layers()) {
    out << "layer " << ly.in << ' ' << ly.out << ' ' << activation_name(ly.act) << '\n';
    for (int o = 0; o < ly.out; ++o) {
      for (int i = 0; i < ly.in; ++i)
        out << (i ? " " : "") << fmt(ly.w[static_cast<std::size_t>(o) * ly.in + i]);
      out << '\n';
    }
    for (int o = 0; o < ly.out; ++o) out << (o ? " " : "") << fmt(ly.b[o]);
    out << '\n';
  }
}

/// Line-oriented reader that remembers its position for error messages.
class LineReader {
 public:
  LineReader(const fs::path& path) : path_(path.string()), in_(path) {
    if (!in_) throw std::runtime_error(path_ + ": cannot open");
  }

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty()) return true;
    }
    return false;
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) fail("unexpected end of file, expected " + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(path_ + ":" + std::to_string(lineno_) + ": " + msg);
  }

 private:
  std::string path_;
  std::ifstream in_;
  int lineno_ = 0;
};

std::vector<double> parse_values(LineReader& r, const std::string& line, std::size_t expected) {
  std::istringstream ss(line);
  std::vector<double> vals;
  double v;
  while (ss >> v) vals.push_back(v);
  if (vals.size() != expected)
    r.fail("expected " + std::to_string(expected) + " values, got " + std::to_string(vals.size()));
  return vals;
}

Mlp read_network(const fs::path& path) {
  LineReader r(path);
  std::vector<Layer> layers;
  std::string line;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string kw, act;
    Layer ly;
    if (!(ss >> kw >> ly.in >> ly.out >> act) || kw != "layer")
      r.fail("expected 'layer <in> <out> <activation>'");
    if (ly.in <= 0 || ly.out <= 0) r.fail("layer dims must be positive");
    ly.act = activation_from_name(act);
    ly.w.reserve(static_cast<std::size_t>(ly.in) * ly.out);
    for (int o = 0; o < ly.out; ++o) {
      const auto row = parse_values(r, r.require("weight row"), ly.in);
      ly.w.insert(ly.w.end(), row.begin(), row.end());
    }
    ly.b = parse_values(r, r.require("bias row"), ly.out);
    layers.push_back(std::move(ly));
  }
  if (layers.empty()) r.fail("no layers found");
  try {
    return Mlp(std::move(layers));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
}

}  // namespace

void Agent::save(const std::string& dir) const {
  const fs::path base(dir);
  fs::create_directories(base);
  write_network(actor_, base / "actor.net");
  write_network(critic_, base / "critic.net");
  write_network(actor_target_, base / "actor_target.net");
  write_network(critic_target_, base / "critic_target.net");

  std::ofstream out(base / "manifest.txt");
  if (!out) throw std::runtime_error("cannot write " + (base / "manifest.txt").string());
  out << "trafficrl-agent 1\n";
  out << "obs_dim " << cfg_.obs_dim << '\n';
  out << "action_dim " << cfg_.action_dim << '\n';
  out << "hidden";
  for (int h : cfg_.hidden) out << ' ' << h;
  out << '\n';
  out << "gamma " << fmt(cfg_.gamma) << '\n';
  out << "lr " << fmt(cfg_.lr) << '\n';
  out << "soft_update " << fmt(cfg_.soft_update_rate) << '\n';
  out << "buffer " << cfg_.buffer_capacity << '\n';
  out << "batch " << cfg_.batch_size << '\n';
  out << "noise_std " << fmt(noise_std_) << '\n';
  out << "noise_decay " << fmt(cfg_.noise_decay) << '\n';
  out << "noise_floor " << fmt(cfg_.noise_floor) << '\n';
  for (std::size_t j = 0; j < cfg_.bounds.dims(); ++j)
    out << "bound " << j << ' ' << fmt(cfg_.bounds.lo[j]) << ' ' << fmt(cfg_.bounds.hi[j]) << '\n';
  out << "network actor actor.net\n";
  out << "network critic critic.net\n";
  out << "network actor_target actor_target.net\n";
  out << "network critic_target critic_target.net\n";
}

Agent Agent::load(const std::string& dir) {
  const fs::path base(dir);
  LineReader r(base / "manifest.txt");
  std::string line = r.require("header");
  if (line != "trafficrl-agent 1") r.fail("not a trafficrl agent manifest");

  Agent a;
  AgentConfig& cfg = a.cfg_;
  cfg.hidden.clear();
  cfg.bounds = ActionBounds{};
  a.noise_std_ = -1.0;
  std::array<bool, 4> seen_net{};

  while (r.next(line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    auto want = [&](auto& v) {
      if (!(ss >> v)) r.fail("malformed value for '" + key + "'");
    };
    if (key == "obs_dim") want(cfg.obs_dim);
    else if (key == "action_dim") want(cfg.action_dim);
    else if (key == "hidden") {
      int h;
      while (ss >> h) cfg.hidden.push_back(h);
    } else if (key == "gamma") want(cfg.gamma);
    else if (key == "lr") want(cfg.lr);
    else if (key == "soft_update") want(cfg.soft_update_rate);
    else if (key == "buffer") want(cfg.buffer_capacity);
    else if (key == "batch") want(cfg.batch_size);
    else if (key == "noise_std") want(a.noise_std_);
    else if (key == "noise_decay") want(cfg.noise_decay);
    else if (key == "noise_floor") want(cfg.noise_floor);
    else if (key == "bound") {
      std::size_t j;
      double lo, hi;
      if (!(ss >> j >> lo >> hi)) r.fail("malformed bound line");
      if (j != cfg.bounds.lo.size()) r.fail("bound indices must be consecutive");
      cfg.bounds.lo.push_back(lo);
      cfg.bounds.hi.push_back(hi);
    } else if (key == "network") {
      std::string name, file;
      if (!(ss >> name >> file)) r.fail("malformed network line");
      Mlp net = read_network(base / file);
      if (name == "actor") a.actor_ = std::move(net), seen_net[0] = true;
      else if (name == "critic") a.critic_ = std::move(net), seen_net[1] = true;
      else if (name == "actor_target") a.actor_target_ = std::move(net), seen_net[2] = true;
      else if (name == "critic_target") a.critic_target_ = std::move(net), seen_net[3] = true;
      else r.fail("unknown network '" + name + "'");
    } else {
      r.fail("unknown key '" + key + "'");
    }
  }
  if (a.noise_std_ < 0.0) r.fail("missing noise_std");
  for (bool s : seen_net)
    if (!s) r.fail("manifest does not list all four networks");
  cfg.noise_std = a.noise_std_;
  cfg.validate();
  if (a.actor_.input_dim() != cfg.obs_dim || a.actor_.output_dim() != cfg.action_dim)
    throw std::runtime_error(dir + ": actor dims do not match declared obs/action dims");
  if (a.critic_.input_dim() != cfg.obs_dim + cfg.action_dim || a.critic_.output_dim() != 1)
    throw std::runtime_error(dir + ": critic dims do not match declared obs/action dims");
  if (a.actor_target_.input_dim() != a.actor_.input_dim() ||
      a.actor_target_.param_count() != a.actor_.param_count() ||
      a.critic_target_.param_count() != a.critic_.param_count())
    throw std::runtime_error(dir + ": target network shapes do not match online networks");

  a.buffer_ = ReplayBuffer(cfg.buffer_capacity);
  a.actor_opt_ = Adam(AdamConfig{.lr = cfg.lr}, a.actor_.param_count());
  a.critic_opt_ = Adam(AdamConfig{.lr = cfg.lr}, a.critic_.param_count());
  return a;
}

}  // namespace trafficrl::rl
