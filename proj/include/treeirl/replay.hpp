#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "treeirl/rng.hpp"
#include "treeirl/sparse_table.hpp"
#include "treeirl/tree_mdp.hpp"

namespace treeirl {

/// Bounded FIFO of transitions; eviction is strictly oldest-first.
/// Sampling is uniform with replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);
  void push_all(const Trajectory& trajectory);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const Transition& at(std::size_t i) const { return items_.at(i); }

  const Transition& sample(Rng& rng) const;
  std::vector<Transition> sample_batch(std::size_t n, Rng& rng) const;

 private:
  std::deque<Transition> items_;
  std::size_t capacity_;
};

/// Expert demonstrations flattened to transitions. Every element is
/// flagged is_expert and every non-terminal element carries the expert's
/// next action.
class ExpertSet {
 public:
  void add_trajectory(const Trajectory& trajectory);

  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }
  const std::vector<Transition>& transitions() const { return transitions_; }

  std::vector<Transition> sample_batch(std::size_t n, Rng& rng) const;

 private:
  std::vector<Transition> transitions_;
};

struct MixedBatch {
  std::vector<Transition> transitions;
  int expert_count = 0;  // expert transitions occupy the front of the batch
};

/// Draws exactly round(ratio * batch_size) expert transitions and fills
/// the remainder from the policy buffer, both uniformly with replacement.
/// Total batch size is always batch_size.
MixedBatch sample_mixed_batch(const ExpertSet& expert,
                              const ReplayBuffer& policy_buffer,
                              int batch_size, double ratio, Rng& rng);

/// Replaces every stored reward with the current learned reward for its
/// (state, action). Stored rewards go stale as the reward table moves, so
/// batches are relabeled at sample time.
void relabel(std::vector<Transition>& batch, const SparseTable& reward);
void relabel(MixedBatch& batch, const SparseTable& reward);

/// Batch-mean reward gradient step: +eta_r/|B_E| on each expert sample's
/// (s,a), -eta_r/|B_L| on each learner sample's. With unit batches this is
/// the per-sample +eta_r/-eta_r rule.
void reward_update(SparseTable& reward,
                   const std::vector<Transition>& expert_batch,
                   const std::vector<Transition>& learner_batch, double eta_r);

}  // namespace treeirl
