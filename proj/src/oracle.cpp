#include "treeirl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treeirl/learner.hpp"

namespace treeirl {

SoftSolution soft_backward_induction(
    const TreeMdp& mdp, const std::function<double(StateId, ActionId)>& reward,
    double alpha, double gamma) {
  if (mdp.spec().shaky) {
    throw std::invalid_argument(
        "soft_backward_induction: shaky trees are not supported");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("soft_backward_induction: alpha must be > 0");
  }

  const int b = mdp.spec().branching;
  SoftSolution sol;
  sol.v_star.assign(static_cast<std::size_t>(mdp.state_count()), 0.0);

  // Level-order ids put every child after its parent, so a single
  // descending pass visits children before parents.
  Eigen::VectorXd q_row(b);
  for (StateId s = mdp.state_count() - 1; s >= 0; --s) {
    if (mdp.is_leaf(s)) continue;
    for (ActionId a = 0; a < b; ++a) {
      q_row[a] = reward(s, a) + gamma * sol.v_star[mdp.child(s, a)];
      sol.q_star.set(s, a, q_row[a]);
    }
    const double m = q_row.maxCoeff();
    const double lse = std::log(((q_row.array() - m) / alpha).exp().sum());
    sol.v_star[s] = m + alpha * lse;
    for (ActionId a = 0; a < b; ++a) {
      sol.pi_star.set_logit(s, a, q_row[a] / alpha);
    }
  }
  return sol;
}

namespace {

// Mixture objective with the w*ln(w) -> 0 limits at the endpoints.
double mixture_objective(double advantage1, double advantage2, double alpha,
                         double w) {
  double value = 0.0;
  if (w > 0.0) value += w * (advantage1 - alpha * std::log(w));
  if (w < 1.0) value += (1.0 - w) * (advantage2 - alpha * std::log(1.0 - w));
  return value;
}

}  // namespace

NumericVeqb numeric_veqb(double q1, double q2, double logp1, double logp2,
                         double alpha, bool use_density) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("numeric_veqb: alpha must be > 0");
  }
  const double a1 = q1 - (use_density ? alpha * logp1 : 0.0);
  const double a2 = q2 - (use_density ? alpha * logp2 : 0.0);
  const auto objective = [&](double w) {
    return mixture_objective(a1, a2, alpha, w);
  };

  std::vector<double> candidates;
  candidates.reserve(10000 + 130);
  for (int i = 1; i < 10000; ++i) candidates.push_back(i / 10000.0);
  for (int k = 14; k <= 62; ++k) {
    const double tail = std::ldexp(1.0, -k);
    candidates.push_back(tail);
    candidates.push_back(1.0 - tail);
  }
  std::sort(candidates.begin(), candidates.end());

  std::size_t best = 0;
  double best_value = objective(candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = objective(candidates[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  // Golden-section refinement on the bracket around the best grid point;
  // the objective is strictly concave in w, so the bracket holds the max.
  double lo = best == 0 ? 0.0 : candidates[best - 1];
  double hi = best + 1 == candidates.size() ? 1.0 : candidates[best + 1];
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = objective(x1);
    }
  }

  NumericVeqb result;
  result.w = 0.5 * (lo + hi);
  result.value = objective(result.w);
  // The endpoints are the degenerate single-action mixtures; keep them as
  // candidates for extreme dominance where even the log-spaced grid is coarse.
  for (double w : {0.0, 1.0}) {
    const double v = objective(w);
    if (v > result.value) {
      result.value = v;
      result.w = w;
    }
  }
  return result;
}

Eigen::VectorXd finite_diff_policy_gradient(const SoftmaxPolicy& policy,
                                            const SparseTable& q, StateId s,
                                            int action_count, double alpha,
                                            double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("finite_diff_policy_gradient: epsilon must be > 0");
  }
  Eigen::VectorXd grad(action_count);
  for (ActionId a = 0; a < action_count; ++a) {
    SoftmaxPolicy plus = policy;
    plus.add_logit(s, a, epsilon);
    SoftmaxPolicy minus = policy;
    minus.add_logit(s, a, -epsilon);
    grad[a] = (policy_objective(plus, q, s, action_count, alpha) -
               policy_objective(minus, q, s, action_count, alpha)) /
              (2.0 * epsilon);
  }
  return grad;
}

}  // namespace treeirl
