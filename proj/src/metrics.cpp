#include "treeirl/metrics.hpp"

#include <stdexcept>

namespace treeirl {

double evaluate(const SoftmaxPolicy& policy, const TreeMdp& mdp,
                RolloutMode mode, Rng& rng, int episodes, int step_cap) {
  const int cap = step_cap > 0 ? step_cap : mdp.default_step_cap();
  if (mode == RolloutMode::greedy) {
    return mdp.rollout(policy, rng, RolloutMode::greedy, cap).total_return;
  }
  if (episodes < 1) {
    throw std::invalid_argument("evaluate: episodes must be >= 1");
  }
  double total = 0.0;
  for (int i = 0; i < episodes; ++i) {
    total += mdp.rollout(policy, rng, RolloutMode::sampled, cap).total_return;
  }
  return total / episodes;
}

std::optional<int> iterations_to_fraction(const LearningCurve& curve,
                                          double expert_return,
                                          double fraction) {
  if (curve.points.empty()) {
    throw std::invalid_argument("iterations_to_fraction: empty curve");
  }
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("iterations_to_fraction: fraction outside [0, 1]");
  }
  const double threshold = fraction * expert_return;
  for (const CurvePoint& p : curve.points) {
    if (p.det_return >= threshold) return p.iteration;
  }
  return std::nullopt;
}

}  // namespace treeirl
