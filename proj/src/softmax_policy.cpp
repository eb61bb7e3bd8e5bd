#include "treeirl/softmax_policy.hpp"

#include <cmath>
#include <stdexcept>

namespace treeirl {

Eigen::VectorXd SoftmaxPolicy::logit_row(StateId s, int action_count) const {
  Eigen::VectorXd row(action_count);
  for (int a = 0; a < action_count; ++a) row[a] = logit(s, a);
  return row;
}

Eigen::VectorXd action_distribution(const SoftmaxPolicy& policy, StateId s,
                                    int action_count) {
  if (action_count < 1) {
    throw std::invalid_argument("action_distribution: action_count must be >= 1");
  }
  Eigen::VectorXd row = policy.logit_row(s, action_count);
  const Eigen::VectorXd shifted = row.array() - row.maxCoeff();
  Eigen::VectorXd probs = shifted.array().exp();
  probs /= probs.sum();
  return probs;
}

double log_prob(const SoftmaxPolicy& policy, StateId s, ActionId a,
                int action_count) {
  const Eigen::VectorXd row = policy.logit_row(s, action_count);
  const double max = row.maxCoeff();
  const double log_z = std::log((row.array() - max).exp().sum()) + max;
  return row[a] - log_z;
}

ActionId sample_action(const SoftmaxPolicy& policy, StateId s,
                       int action_count, Rng& rng) {
  return sample_categorical(action_distribution(policy, s, action_count), rng);
}

ActionId greedy_action(const SoftmaxPolicy& policy, StateId s,
                       int action_count) {
  ActionId best = 0;
  double best_logit = policy.logit(s, 0);
  for (ActionId a = 1; a < action_count; ++a) {
    const double v = policy.logit(s, a);
    if (v > best_logit) {
      best = a;
      best_logit = v;
    }
  }
  return best;
}

}  // namespace treeirl
