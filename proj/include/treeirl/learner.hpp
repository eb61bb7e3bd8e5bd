#pragma once

#include <vector>

#include <Eigen/Core>

#include "treeirl/rng.hpp"
#include "treeirl/softmax_policy.hpp"
#include "treeirl/sparse_table.hpp"
#include "treeirl/tree_mdp.hpp"

namespace treeirl {

struct LearnerConfig {
  double gamma = 1.0;
  double alpha = 1.0;      // entropy weight in standard targets and policy objective
  double alpha_eqb = 1.0;  // entropy weight inside the expert-state two-action softmax
  double eta_q = 0.01;
  double eta_pi = 0.01;
  // Expert-state targets: density-aware two-action soft value (true) or the
  // entropy-term-removed form (false). The density-aware form keeps expert
  // targets on the same entropy scale as the b-action standard targets; the
  // removed form undershoots them by about alpha*ln(b/2) while the policy is
  // near uniform, which stalls expert-state value propagation on wide trees.
  bool eqb_density = true;
};

/// Entropy-regularized soft value of a two-action choice:
///   alpha * log(exp(q_expert/alpha) + exp(q_policy/alpha)),
/// computed with max-subtraction. This is the optimal value of mixing the
/// policy's sampled action with the expert's recorded next action; it
/// exceeds max(q_policy, q_expert) by at most alpha*ln 2 (exactly ln 2 at a
/// tie — the constant two-choice entropy, deliberately not subtracted).
double v_eqb(double q_policy_action, double q_expert_action, double alpha);

/// Density-aware variant: each Q is offset by -alpha*log of that action's
/// density before the two-action softmax. With zero log-densities this
/// reduces exactly to v_eqb.
double v_eqb_density(double q1, double q2, double logp1, double logp2,
                     double alpha);

/// Closed-form maximizer of the two-action mixture objective: the weight
/// placed on action 1 (the policy's action). Strictly inside (0,1) for
/// finite inputs.
double optimal_mixture_weight(double q1, double q2, double logp1, double logp2,
                              double alpha);

/// Standard soft actor-critic target
///   y = r + gamma*(1-d)*(Q(s',a~') - alpha*log pi(a~'|s')),  a~' ~ pi(.|s').
/// Terminal transitions return r without touching the RNG.
double sac_target(const SparseTable& q, const SoftmaxPolicy& policy,
                  const Transition& t, const LearnerConfig& cfg,
                  int action_count, Rng& rng);

/// Expert-state target: bootstraps through the two-action soft value over
/// the expert's recorded next action and a policy sample,
///   y = r + gamma*(1-d)*v_eqb(Q(s',a~'), Q(s',a'_E), alpha_eqb).
/// Requires expert_next_action on non-terminal expert transitions.
double eqb_target(const SparseTable& q, const SoftmaxPolicy& policy,
                  const Transition& t, const LearnerConfig& cfg,
                  int action_count, Rng& rng);

/// Density-aware expert-state target: same two-action bootstrap but each Q
/// is offset by -alpha_eqb*log pi(a|s') inside the soft value (the expert
/// density approximated by the current policy). Equals a standard
/// entropy-regularized value over the two-action mixture.
double eqb_density_target(const SparseTable& q, const SoftmaxPolicy& policy,
                          const Transition& t, const LearnerConfig& cfg,
                          int action_count, Rng& rng);

/// In-place convex step: Q(s,a) += eta_q * (y - Q(s,a)).
void q_update(SparseTable& q, StateId s, ActionId a, double y, double eta_q);

/// Exact expected entropy-regularized Q value at one state,
///   sum_a pi(a|s) * (Q(s,a) - alpha*log pi(a|s)),
/// computed in closed form over the action set.
double policy_objective(const SoftmaxPolicy& policy, const SparseTable& q,
                        StateId s, int action_count, double alpha);

/// Analytic gradient of policy_objective with respect to the state's
/// logits: grad_k = p_k * ((q_k - E[q]) - alpha*(log p_k - E[log p])).
Eigen::VectorXd policy_objective_gradient(const SoftmaxPolicy& policy,
                                          const SparseTable& q, StateId s,
                                          int action_count, double alpha);

/// One ascent step on the summed policy objective over the given states
/// (duplicates contribute once per occurrence). Gradients are evaluated at
/// the current logits for all states before any are applied.
void policy_gradient_update(SoftmaxPolicy& policy, const SparseTable& q,
                            const std::vector<StateId>& states,
                            int action_count, double eta_pi, double alpha);

/// One ascent step on the summed log-likelihood of expert actions,
/// sum log pi(a_E|s_E), over the batch.
void bc_update(SoftmaxPolicy& policy, const std::vector<Transition>& expert_batch,
               double eta, int action_count);

}  // namespace treeirl
