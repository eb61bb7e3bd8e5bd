#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treeirl/softmax_policy.hpp"
#include "treeirl/tree_mdp.hpp"

namespace treeirl {

struct CurvePoint {
  int iteration = 0;
  double det_return = 0.0;
  double sto_return = 0.0;
};

/// Per-iteration returns of one (config, seed) run.
struct LearningCurve {
  std::string config_id;
  int seed_index = 0;
  std::vector<CurvePoint> points;
};

/// Greedy mode: ground-truth return of a single greedy rollout (note that
/// with an all-tied logit row the tie-break picks action 0, the leftmost —
/// on clean trees an untrained policy therefore scores the expert return).
/// Sampled mode: mean ground-truth return over `episodes` sampled rollouts.
/// step_cap 0 means the MDP default.
double evaluate(const SoftmaxPolicy& policy, const TreeMdp& mdp,
                RolloutMode mode, Rng& rng, int episodes = 10,
                int step_cap = 0);

/// Smallest iteration whose deterministic return reaches
/// fraction * expert_return; nullopt when the curve never gets there.
std::optional<int> iterations_to_fraction(const LearningCurve& curve,
                                          double expert_return,
                                          double fraction);

}  // namespace treeirl
