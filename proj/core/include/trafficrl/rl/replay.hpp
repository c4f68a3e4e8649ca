#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace trafficrl::rl {

struct Transition {
  std::vector<double> obs;
  std::vector<double> action;  // raw pre-scaling action in [-1,1]^n
  double reward = 0.0;
  std::vector<double> next_obs;
  bool terminal = false;
};

/// Fixed-capacity ring of transitions; the oldest entry is overwritten once
/// the buffer is full.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay: capacity must be > 0");
    data_.reserve(capacity);
  }

  void push(Transition t) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[write_] = std::move(t);
    }
    write_ = (write_ + 1) % capacity_;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return data_[i]; }

  /// Uniform sample with replacement. Throws if fewer than `batch`
  /// transitions are stored ("insufficient experience").
  std::vector<std::size_t> sample_indices(std::size_t batch, std::mt19937_64& rng) const {
    if (data_.size() < batch) throw std::runtime_error("replay: insufficient experience");
    std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
    std::vector<std::size_t> idx(batch);
    for (auto& i : idx) i = pick(rng);
    return idx;
  }

 private:
  std::size_t capacity_;
  std::size_t write_ = 0;
  std::vector<Transition> data_;
};

}  // namespace trafficrl::rl
