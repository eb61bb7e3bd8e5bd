#pragma once

#include <Eigen/Core>

#include "treeirl/rng.hpp"
#include "treeirl/sparse_table.hpp"

namespace treeirl {

/// Tabular softmax policy: p(a|s) = exp(v(s,a)) / sum_a' exp(v(s,a')).
/// Logits live in a default-zero SparseTable, so an untouched state is a
/// uniform distribution.
///
/// An optional deterministic init-noise offset (keyed by seed, state,
/// action) can be added to the stored logits. It breaks the all-equal tie
/// at never-updated states, which otherwise makes the greedy action 0 — the
/// leftmost, reward-carrying action — everywhere. Noise scale 0 disables it.
class SoftmaxPolicy {
 public:
  SoftmaxPolicy() = default;
  SoftmaxPolicy(double init_noise_scale, std::uint64_t noise_seed)
      : init_noise_scale_(init_noise_scale), noise_seed_(noise_seed) {}

  double logit(StateId s, ActionId a) const {
    double v = logits_.get(s, a);
    if (init_noise_scale_ != 0.0) {
      v += init_noise_scale_ * hash_noise(noise_seed_, static_cast<std::uint64_t>(s),
                                          static_cast<std::uint64_t>(a));
    }
    return v;
  }

  void add_logit(StateId s, ActionId a, double dv) { logits_.add(s, a, dv); }
  void set_logit(StateId s, ActionId a, double v) { logits_.set(s, a, v); }

  SparseTable& logits() { return logits_; }
  const SparseTable& logits() const { return logits_; }

  /// Logit row for one state as a dense vector of length action_count.
  Eigen::VectorXd logit_row(StateId s, int action_count) const;

 private:
  SparseTable logits_;
  double init_noise_scale_ = 0.0;
  std::uint64_t noise_seed_ = 0;
};

/// Softmax of the state's logit row, computed with max-subtraction.
/// Entries are strictly positive and sum to 1.
Eigen::VectorXd action_distribution(const SoftmaxPolicy& policy, StateId s,
                                    int action_count);

/// log p(a|s); finite for finite logits.
double log_prob(const SoftmaxPolicy& policy, StateId s, ActionId a,
                int action_count);

/// Draws an action from the policy distribution.
ActionId sample_action(const SoftmaxPolicy& policy, StateId s,
                       int action_count, Rng& rng);

/// Argmax-probability action; ties broken by lowest action id.
ActionId greedy_action(const SoftmaxPolicy& policy, StateId s,
                       int action_count);

}  // namespace treeirl
