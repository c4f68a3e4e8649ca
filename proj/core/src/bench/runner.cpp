#include "trafficrl/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "trafficrl/seeds.hpp"

namespace trafficrl::bench {

std::uint64_t run_demand_seed(std::uint64_t base_seed, int run) {
  return mix_seed(base_seed, "eval-demand", static_cast<std::uint64_t>(run));
}

std::vector<double> evaluate_strategy(const env::ScenarioConfig& sc, env::Strategy strategy,
                                      std::span<rl::Agent* const> agents,
                                      const EvalOptions& opt) {
  if (opt.runs < 1) throw std::invalid_argument("evaluate_strategy: runs must be >= 1");
  std::vector<double> tts(opt.runs, 0.0);

  auto run_one = [&](int run) {
    env::EpisodeOptions eopt;
    eopt.strategy = strategy;
    eopt.demand_seed = run_demand_seed(opt.base_seed, run);
    eopt.obs_noise_sigma = opt.sigma;
    eopt.obs_noise_seed = mix_seed(opt.base_seed, "eval-obsnoise", run);
    eopt.training = false;
    tts[run] = env::run_episode(sc, eopt, agents).total_tts;
  };

  unsigned n_threads = opt.threads > 0 ? opt.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, opt.runs));
  if (n_threads == 1) {
    for (int r = 0; r < opt.runs; ++r) run_one(r);
    return tts;
  }

  std::atomic<int> next{0};
  std::exception_ptr fault;
  std::mutex fault_mx;
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= opt.runs) return;
      try {
        run_one(r);
      } catch (...) {
        std::lock_guard lock(fault_mx);
        if (!fault) fault = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (fault) std::rethrow_exception(fault);
  return tts;
}

}  // namespace trafficrl::bench
