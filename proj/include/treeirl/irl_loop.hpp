#pragma once

#include <cstdint>
#include <string>

#include "treeirl/learner.hpp"
#include "treeirl/metrics.hpp"
#include "treeirl/tree_mdp.hpp"

namespace treeirl {

enum class Method { baseline, erb, erb_eqb, bc };

std::string method_name(Method method);
Method parse_method(const std::string& name);

/// Full configuration of one run. Defaults follow the toy-problem setup:
/// gamma = alpha = 1, eta_q = eta_r = 0.01, half-expert batches.
struct IrlConfig {
  TreeSpec tree;
  LearnerConfig learner;
  Method method = Method::erb;

  int epochs = 500;            // outer reward iterations (N)
  int inner_steps = 10;        // policy steps per epoch (T)
  int sac_updates_per_step = 1;
  int batch_size = 64;
  double expert_ratio = 0.5;   // expert share of inner-update batches
  double eta_r = 0.01;
  std::size_t buffer_capacity = 100000;
  int expert_demos = 1;
  int rollouts_per_epoch = 1;       // into the reward buffer D_L
  int rollouts_per_inner_step = 1;  // into the policy buffer D_P
  int eval_episodes = 10;
  // Scale of the deterministic per-seed offset on fresh logits (uniform in
  // +-noise/2), standing in for a random tabular init. Breaks the zero-init
  // tie that otherwise points greedy evaluation down the leftmost (expert)
  // path before any learning happens, and sets how much accumulated logit
  // movement a greedy flip requires.
  double policy_init_noise = 0.3;
  int step_cap = 0;  // 0 = MDP default (levels-1 clean, 4*(levels-1) shaky)
  std::uint64_t seed = 0;

  /// The baseline method never mixes expert transitions into inner batches.
  double effective_expert_ratio() const {
    return method == Method::baseline ? 0.0 : expert_ratio;
  }

  void validate() const;
};

/// Runs the outer reward-learning loop: per epoch, one reward gradient
/// step from fresh expert/learner batches, then inner_steps actor-critic
/// steps on (optionally expert-mixed) relabeled batches, with the
/// expert-state bootstrap target when method = erb_eqb. Appends one curve
/// point (greedy + sampled return) per epoch. Deterministic given seed.
LearningCurve run_maxentirl(const IrlConfig& config);

/// Behavior-cloning baseline: log-likelihood steps on expert batches, with
/// the same per-epoch evaluation on the (possibly shaky) environment.
LearningCurve run_bc(const IrlConfig& config);

/// The inner actor-critic alone, trained against the environment's
/// ground-truth reward (no reward learning, no expert mixing). Used to
/// separate reinforcement-learning convergence from reward recovery.
LearningCurve run_actor_critic(const IrlConfig& config);

/// Dispatches on config.method.
LearningCurve run_irl(const IrlConfig& config);

}  // namespace treeirl
