#include "treeirl/learner.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace treeirl {

namespace {

void require_positive_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument(std::string(where) + ": alpha must be > 0");
  }
}

Eigen::VectorXd q_row(const SparseTable& q, StateId s, int action_count) {
  Eigen::VectorXd row(action_count);
  for (int a = 0; a < action_count; ++a) row[a] = q.get(s, a);
  return row;
}

}  // namespace

double v_eqb(double q_policy_action, double q_expert_action, double alpha) {
  require_positive_alpha(alpha, "v_eqb");
  const double m = std::max(q_policy_action, q_expert_action);
  return m + alpha * std::log(std::exp((q_expert_action - m) / alpha) +
                              std::exp((q_policy_action - m) / alpha));
}

double v_eqb_density(double q1, double q2, double logp1, double logp2,
                     double alpha) {
  require_positive_alpha(alpha, "v_eqb_density");
  const double x1 = q1 - alpha * logp1;
  const double x2 = q2 - alpha * logp2;
  const double m = std::max(x1, x2);
  return m + alpha * std::log(std::exp((x1 - m) / alpha) +
                              std::exp((x2 - m) / alpha));
}

double optimal_mixture_weight(double q1, double q2, double logp1, double logp2,
                              double alpha) {
  require_positive_alpha(alpha, "optimal_mixture_weight");
  const double gap = (q2 - alpha * logp2) - (q1 - alpha * logp1);
  // Logistic in the density-adjusted gap; write both branches so neither
  // exponential can overflow.
  if (gap >= 0.0) {
    const double e = std::exp(-gap / alpha);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(gap / alpha));
}

double sac_target(const SparseTable& q, const SoftmaxPolicy& policy,
                  const Transition& t, const LearnerConfig& cfg,
                  int action_count, Rng& rng) {
  if (t.done) return t.reward;
  const Eigen::VectorXd probs =
      action_distribution(policy, t.next_state, action_count);
  const ActionId sampled = sample_categorical(probs, rng);
  const double soft_value =
      q.get(t.next_state, sampled) - cfg.alpha * std::log(probs[sampled]);
  return t.reward + cfg.gamma * soft_value;
}

double eqb_target(const SparseTable& q, const SoftmaxPolicy& policy,
                  const Transition& t, const LearnerConfig& cfg,
                  int action_count, Rng& rng) {
  if (!t.is_expert) {
    throw std::invalid_argument("eqb_target: transition is not expert");
  }
  if (t.done) return t.reward;
  if (!t.expert_next_action) {
    throw std::invalid_argument(
        "eqb_target: non-terminal expert transition lacks expert_next_action");
  }
  const ActionId sampled = sample_action(policy, t.next_state, action_count, rng);
  const double value = v_eqb(q.get(t.next_state, sampled),
                             q.get(t.next_state, *t.expert_next_action),
                             cfg.alpha_eqb);
  return t.reward + cfg.gamma * value;
}

double eqb_density_target(const SparseTable& q, const SoftmaxPolicy& policy,
                          const Transition& t, const LearnerConfig& cfg,
                          int action_count, Rng& rng) {
  if (!t.is_expert) {
    throw std::invalid_argument("eqb_density_target: transition is not expert");
  }
  if (t.done) return t.reward;
  if (!t.expert_next_action) {
    throw std::invalid_argument(
        "eqb_density_target: non-terminal expert transition lacks "
        "expert_next_action");
  }
  const Eigen::VectorXd probs =
      action_distribution(policy, t.next_state, action_count);
  const ActionId sampled = sample_categorical(probs, rng);
  const ActionId expert = *t.expert_next_action;
  const double value = v_eqb_density(
      q.get(t.next_state, sampled), q.get(t.next_state, expert),
      std::log(probs[sampled]), std::log(probs[expert]), cfg.alpha_eqb);
  return t.reward + cfg.gamma * value;
}

void q_update(SparseTable& q, StateId s, ActionId a, double y, double eta_q) {
  if (!(eta_q > 0.0)) {
    throw std::invalid_argument("q_update: eta_q must be > 0");
  }
  q.add(s, a, eta_q * (y - q.get(s, a)));
}

double policy_objective(const SoftmaxPolicy& policy, const SparseTable& q,
                        StateId s, int action_count, double alpha) {
  const Eigen::VectorXd probs = action_distribution(policy, s, action_count);
  const Eigen::VectorXd log_probs = probs.array().log();
  return probs.dot(q_row(q, s, action_count) - alpha * log_probs);
}

Eigen::VectorXd policy_objective_gradient(const SoftmaxPolicy& policy,
                                          const SparseTable& q, StateId s,
                                          int action_count, double alpha) {
  const Eigen::VectorXd probs = action_distribution(policy, s, action_count);
  const Eigen::VectorXd log_probs = probs.array().log();
  const Eigen::VectorXd qs = q_row(q, s, action_count);
  const double mean_q = probs.dot(qs);
  const double mean_log_prob = probs.dot(log_probs);
  return probs.array() * ((qs.array() - mean_q) -
                          alpha * (log_probs.array() - mean_log_prob));
}

void policy_gradient_update(SoftmaxPolicy& policy, const SparseTable& q,
                            const std::vector<StateId>& states,
                            int action_count, double eta_pi, double alpha) {
  if (!(eta_pi > 0.0)) {
    throw std::invalid_argument("policy_gradient_update: eta_pi must be > 0");
  }
  // Gradients for the whole batch are taken at the current logits, then
  // applied; duplicated states accumulate one contribution per occurrence.
  std::map<StateId, Eigen::VectorXd> grads;
  for (const StateId s : states) {
    Eigen::VectorXd g = policy_objective_gradient(policy, q, s, action_count, alpha);
    auto it = grads.find(s);
    if (it == grads.end()) {
      grads.emplace(s, std::move(g));
    } else {
      it->second += g;
    }
  }
  for (const auto& [s, grad] : grads) {
    for (int a = 0; a < action_count; ++a) {
      policy.add_logit(s, a, eta_pi * grad[a]);
    }
  }
}

void bc_update(SoftmaxPolicy& policy, const std::vector<Transition>& expert_batch,
               double eta, int action_count) {
  if (expert_batch.empty()) {
    throw std::invalid_argument("bc_update: empty batch");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("bc_update: eta must be > 0");
  }
  // d/dv log pi(a_E|s) = onehot(a_E) - pi(.|s); summed over the batch at
  // the current logits.
  std::map<StateId, Eigen::VectorXd> grads;
  for (const Transition& t : expert_batch) {
    Eigen::VectorXd g = -action_distribution(policy, t.state, action_count);
    g[t.action] += 1.0;
    auto it = grads.find(t.state);
    if (it == grads.end()) {
      grads.emplace(t.state, std::move(g));
    } else {
      it->second += g;
    }
  }
  for (const auto& [s, grad] : grads) {
    for (int a = 0; a < action_count; ++a) {
      policy.add_logit(s, a, eta * grad[a]);
    }
  }
}

}  // namespace treeirl
