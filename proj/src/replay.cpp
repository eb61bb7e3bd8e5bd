#include "treeirl/replay.hpp"

#include <cmath>
#include <stdexcept>

namespace treeirl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
  }
}

void ReplayBuffer::push(const Transition& t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(t);
}

void ReplayBuffer::push_all(const Trajectory& trajectory) {
  for (const Transition& t : trajectory.transitions) push(t);
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
  if (items_.empty()) {
    throw std::invalid_argument("ReplayBuffer: sample from empty buffer");
  }
  return items_[uniform_below(rng, items_.size())];
}

std::vector<Transition> ReplayBuffer::sample_batch(std::size_t n,
                                                   Rng& rng) const {
  std::vector<Transition> batch;
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.push_back(sample(rng));
  return batch;
}

void ExpertSet::add_trajectory(const Trajectory& trajectory) {
  for (const Transition& t : trajectory.transitions) {
    if (!t.is_expert) {
      throw std::invalid_argument("ExpertSet: transition not flagged expert");
    }
    if (!t.done && !t.expert_next_action) {
      throw std::invalid_argument(
          "ExpertSet: non-terminal expert transition lacks expert_next_action");
    }
    transitions_.push_back(t);
  }
}

std::vector<Transition> ExpertSet::sample_batch(std::size_t n, Rng& rng) const {
  if (transitions_.empty()) {
    throw std::invalid_argument("ExpertSet: sample from empty set");
  }
  std::vector<Transition> batch;
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.push_back(transitions_[uniform_below(rng, transitions_.size())]);
  }
  return batch;
}

MixedBatch sample_mixed_batch(const ExpertSet& expert,
                              const ReplayBuffer& policy_buffer,
                              int batch_size, double ratio, Rng& rng) {
  if (batch_size < 1) {
    throw std::invalid_argument("sample_mixed_batch: batch_size must be >= 1");
  }
  if (ratio < 0.0 || ratio > 1.0) {
    throw std::invalid_argument("sample_mixed_batch: ratio must be in [0, 1]");
  }
  const int expert_count =
      static_cast<int>(std::llround(ratio * batch_size));
  const int learner_count = batch_size - expert_count;
  if (expert_count > 0 && expert.empty()) {
    throw std::invalid_argument("sample_mixed_batch: expert set is empty");
  }
  if (learner_count > 0 && policy_buffer.empty()) {
    throw std::invalid_argument("sample_mixed_batch: policy buffer is empty");
  }

  MixedBatch batch;
  batch.expert_count = expert_count;
  batch.transitions = expert_count > 0
                          ? expert.sample_batch(expert_count, rng)
                          : std::vector<Transition>{};
  if (learner_count > 0) {
    std::vector<Transition> learner = policy_buffer.sample_batch(learner_count, rng);
    batch.transitions.insert(batch.transitions.end(), learner.begin(),
                             learner.end());
  }
  return batch;
}

void relabel(std::vector<Transition>& batch, const SparseTable& reward) {
  for (Transition& t : batch) t.reward = reward.get(t.state, t.action);
}

void relabel(MixedBatch& batch, const SparseTable& reward) {
  relabel(batch.transitions, reward);
}

void reward_update(SparseTable& reward,
                   const std::vector<Transition>& expert_batch,
                   const std::vector<Transition>& learner_batch, double eta_r) {
  if (expert_batch.empty() || learner_batch.empty()) {
    throw std::invalid_argument("reward_update: empty batch");
  }
  if (!(eta_r > 0.0)) {
    throw std::invalid_argument("reward_update: eta_r must be > 0");
  }
  const double expert_step = eta_r / static_cast<double>(expert_batch.size());
  const double learner_step = eta_r / static_cast<double>(learner_batch.size());
  for (const Transition& t : expert_batch) {
    reward.add(t.state, t.action, expert_step);
  }
  for (const Transition& t : learner_batch) {
    reward.add(t.state, t.action, -learner_step);
  }
}

}  // namespace treeirl
