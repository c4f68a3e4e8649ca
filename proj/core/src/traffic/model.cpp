#include "trafficrl/traffic/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace trafficrl::traffic {

namespace {

bool all_finite(const NetworkState& x) {
  for (const auto& link : x.links)
    for (const auto& s : link)
      for (int c = 0; c < kNumClasses; ++c)
        if (!std::isfinite(s.rho[c]) || !std::isfinite(s.v[c])) return false;
  for (const auto& o : x.origins)
    for (int c = 0; c < kNumClasses; ++c)
      if (!std::isfinite(o.queue[c]) || !std::isfinite(o.demand[c])) return false;
  return true;
}

}  // namespace

NetworkState make_initial_state(const Topology& topo, const ModelParams& p, Weather w) {
  NetworkState x;
  for (int m = 0; m < 3; ++m) {
    x.links[m].resize(topo.links[m].segments);
    for (auto& seg : x.links[m])
      for (int c = 0; c < kNumClasses; ++c) seg.v[c] = p.class_params(w, c).v_free;
  }
  return x;
}

double stored_vehicles(const NetworkState& x, const Topology& topo, const ModelParams& p) {
  double veh = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double lanes = topo.links[m].lanes;
    for (const auto& seg : x.links[m])
      for (int c = 0; c < kNumClasses; ++c) veh += seg.rho[c] * lanes * p.segment_km();
  }
  for (const auto& o : x.origins)
    for (int c = 0; c < kNumClasses; ++c) veh += o.queue[c];
  return veh;
}

double effective_density(const SegmentState& seg, const ModelParams& p) {
  double rho_eff = 0.0;
  for (int c = 0; c < kNumClasses; ++c) rho_eff += p.pce[c] * seg.rho[c];
  return rho_eff;
}

double equilibrium_speed(double rho_eff, const VehicleClassParams& cls, double v_min) {
  const double v =
      cls.v_free * std::exp(-(1.0 / cls.a_m) * std::pow(rho_eff / cls.rho_cr, cls.a_m));
  return std::max(v, v_min);
}

std::array<double, kNumClasses> origin_outflow(const OriginState& o, double r,
                                               const SegmentState& downstream,
                                               const ModelParams& p, Weather w,
                                               double capacity_veh_h) {
  const double t_h = p.step_h();
  std::array<double, kNumClasses> avail{};
  double avail_total = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    avail[c] = o.demand[c] + o.queue[c] / t_h;
    avail_total += avail[c];
  }
  if (avail_total <= 0.0) return {0.0, 0.0};

  const double rho_eff_down = effective_density(downstream, p);
  const double rho_cr_ref = p.rho_cr[static_cast<int>(w)][0];
  const double supply_ratio =
      std::clamp((p.rho_max - rho_eff_down) / (p.rho_max - rho_cr_ref), 0.0, 1.0);

  const double total =
      std::min({avail_total, capacity_veh_h * r, capacity_veh_h * supply_ratio});

  std::array<double, kNumClasses> flow{};
  for (int c = 0; c < kNumClasses; ++c) flow[c] = total * (avail[c] / avail_total);
  return flow;
}

std::array<double, kNumClasses> destination_outflow(const NetworkState& x,
                                                    const Topology& topo) {
  std::array<double, kNumClasses> out{};
  for (int m : {kPrimary, kSecondary}) {
    const auto& seg = x.links[m].back();
    for (int c = 0; c < kNumClasses; ++c)
      out[c] += seg.rho[c] * seg.v[c] * topo.links[m].lanes;
  }
  return out;
}

NetworkState step_network(const NetworkState& x, const Controls& u, const Demands& d,
                          Weather w, const Topology& topo, const ModelParams& p) {
  if (!std::isfinite(u.u_dta) || !std::isfinite(u.u_rm1) || !std::isfinite(u.u_rm2))
    throw std::invalid_argument("step_network: non-finite control input");
  if (u.u_dta < 0.0 || u.u_dta > 1.0 || u.u_rm1 < 0.0 || u.u_rm1 > 1.0 || u.u_rm2 < 0.0 ||
      u.u_rm2 > 1.0)
    throw std::invalid_argument("step_network: control input outside [0,1]");
  for (const auto& od : d)
    for (double v : od)
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("step_network: invalid demand");
  if (!all_finite(x)) throw std::invalid_argument("step_network: non-finite state");

  const double t_s = p.step_s;
  const double t_h = p.step_h();
  const double len = p.segment_km();
  const double tau = p.tau(w);

  std::array<VehicleClassParams, kNumClasses> cls;
  for (int c = 0; c < kNumClasses; ++c) cls[c] = p.class_params(w, c);

  // Per-segment class flows q = rho * v * lanes [veh/h] and effective densities.
  std::array<std::vector<std::array<double, kNumClasses>>, 3> q;
  std::array<std::vector<double>, 3> rho_eff;
  for (int m = 0; m < 3; ++m) {
    const int n = topo.links[m].segments;
    const double lanes = topo.links[m].lanes;
    q[m].resize(n);
    rho_eff[m].resize(n);
    for (int i = 0; i < n; ++i) {
      const auto& seg = x.links[m][i];
      for (int c = 0; c < kNumClasses; ++c) q[m][i][c] = seg.rho[c] * seg.v[c] * lanes;
      rho_eff[m][i] = effective_density(seg, p);
    }
  }

  // Origin discharges, driven by this step's demand and the stored queues.
  const int ramp1 = topo.links[kPrimary].ramp_segment;
  const int ramp2 = topo.links[kSecondary].ramp_segment;
  std::array<OriginState, 3> origins_now = x.origins;
  for (int o = 0; o < 3; ++o) origins_now[o].demand = d[o];
  const auto q_o0 = origin_outflow(origins_now[kOriginMain], 1.0, x.links[kMain][0], p, w,
                                   p.c_main * topo.links[kMain].lanes);
  const auto q_o1 = origin_outflow(origins_now[kOriginRamp1], u.u_rm1, x.links[kPrimary][ramp1],
                                   p, w, p.c_onramp * topo.ramp_lanes);
  const auto q_o2 = origin_outflow(origins_now[kOriginRamp2], u.u_rm2, x.links[kSecondary][ramp2],
                                   p, w, p.c_onramp * topo.ramp_lanes);

  // Diverge: the mainstream's final outflow is routed by u_dta.
  const int last_m = topo.links[kMain].segments - 1;
  std::array<double, kNumClasses> route1_in{}, route2_in{};
  for (int c = 0; c < kNumClasses; ++c) {
    route1_in[c] = u.u_dta * q[kMain][last_m][c];
    route2_in[c] = (1.0 - u.u_dta) * q[kMain][last_m][c];
  }

  // Virtual downstream density seen by the mainstream's last segment:
  // split-weighted mix of the first route segments.
  const double b1 = u.u_dta, b2 = 1.0 - u.u_dta;
  const double rho_diverge = (b1 * b1 * rho_eff[kPrimary][0] + b2 * b2 * rho_eff[kSecondary][0]) /
                             (b1 * b1 + b2 * b2);

  NetworkState nx = x;
  nx.step = x.step + 1;

  for (int m = 0; m < 3; ++m) {
    const int n = topo.links[m].segments;
    const double lanes = topo.links[m].lanes;
    const int ramp_seg = topo.links[m].ramp_segment;
    const auto& ramp_flow = (m == kPrimary) ? q_o1 : q_o2;

    for (int i = 0; i < n; ++i) {
      const auto& seg = x.links[m][i];
      double q_ramp_eff = 0.0;
      for (int c = 0; c < kNumClasses; ++c) {
        // --- density ---
        double q_in;
        if (i > 0)
          q_in = q[m][i - 1][c];
        else if (m == kMain)
          q_in = q_o0[c];
        else
          q_in = (m == kPrimary) ? route1_in[c] : route2_in[c];
        double ramp = (m != kMain && i == ramp_seg) ? ramp_flow[c] : 0.0;
        double rho_new = seg.rho[c] + t_h / (len * lanes) * (q_in - q[m][i][c] + ramp);
        nx.links[m][i].rho[c] = std::clamp(rho_new, 0.0, p.rho_max);

        // --- speed ---
        const double v_old = seg.v[c];
        const double v_eq = equilibrium_speed(rho_eff[m][i], cls[c], p.v_min);
        double v_up;
        if (i > 0)
          v_up = x.links[m][i - 1].v[c];
        else if (m == kMain)
          v_up = v_old;
        else
          v_up = (q_in > 0.0) ? x.links[kMain][last_m].v[c] : v_old;
        double rho_down;
        if (i < n - 1)
          rho_down = rho_eff[m][i + 1];
        else if (m == kMain)
          rho_down = rho_diverge;
        else
          rho_down = rho_eff[m][i];  // free outflow at the destination

        double v_new = v_old + (t_s / tau) * (v_eq - v_old) +
                       (t_h / len) * v_old * (v_up - v_old) -
                       (p.nu * t_s / (tau * len)) * (rho_down - rho_eff[m][i]) /
                           (rho_eff[m][i] + p.chi);
        if (m != kMain && i == ramp_seg) {
          if (q_ramp_eff == 0.0)
            for (int cc = 0; cc < kNumClasses; ++cc) q_ramp_eff += p.pce[cc] * ramp_flow[cc];
          v_new -= p.delta * t_h * q_ramp_eff * v_old / (len * lanes * (rho_eff[m][i] + p.chi));
        }
        nx.links[m][i].v[c] = std::clamp(v_new, p.v_min, cls[c].v_free);
      }
    }
  }

  // Queues absorb demand and release the origin discharge.
  const std::array<const std::array<double, kNumClasses>*, 3> q_orig{&q_o0, &q_o1, &q_o2};
  for (int o = 0; o < 3; ++o) {
    for (int c = 0; c < kNumClasses; ++c) {
      const double grown = x.origins[o].queue[c] + t_h * (d[o][c] - (*q_orig[o])[c]);
      nx.origins[o].queue[c] = std::max(0.0, grown);
      nx.origins[o].demand[c] = d[o][c];
    }
  }
  return nx;
}

double compute_step_tts(const NetworkState& x, const Topology& topo, const ModelParams& p) {
  return p.step_h() * stored_vehicles(x, topo, p);
}

namespace {
double route_instant_tts(const NetworkState& x, const Topology& topo, const ModelParams& p,
                         int link, int origin) {
  double veh = 0.0;
  const double lanes = topo.links[link].lanes;
  for (const auto& seg : x.links[link])
    for (int c = 0; c < kNumClasses; ++c) veh += seg.rho[c] * lanes * p.segment_km();
  for (int c = 0; c < kNumClasses; ++c) veh += x.origins[origin].queue[c];
  return p.step_h() * veh;
}
}  // namespace

double route_tts_difference(const NetworkState& x, const Topology& topo, const ModelParams& p) {
  return route_instant_tts(x, topo, p, kPrimary, kOriginRamp1) -
         route_instant_tts(x, topo, p, kSecondary, kOriginRamp2);
}

double bottleneck_density(const NetworkState& x, int route, const Topology& topo,
                          const ModelParams& p) {
  if (route != 1 && route != 2) throw std::invalid_argument("bottleneck_density: route must be 1 or 2");
  const int link = (route == 1) ? kPrimary : kSecondary;
  return effective_density(x.links[link][topo.links[link].bottleneck_segment], p);
}

}  // namespace trafficrl::traffic
