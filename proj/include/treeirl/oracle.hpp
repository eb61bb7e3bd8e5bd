#pragma once

#include <functional>
#include <vector>

#include "treeirl/softmax_policy.hpp"
#include "treeirl/sparse_table.hpp"
#include "treeirl/tree_mdp.hpp"

namespace treeirl {

/// Exact entropy-regularized solution of a deterministic tree:
///   V*(s) = alpha * log sum_a exp(Q*(s,a)/alpha),
///   pi*(a|s) proportional to exp(Q*(s,a)/alpha).
struct SoftSolution {
  SparseTable q_star;
  std::vector<double> v_star;  // indexed by state id; 0 at leaves
  SoftmaxPolicy pi_star;
};

/// One backward pass over the tree (a finite-horizon DAG), deepest nodes
/// first: Q*(s,a) = r(s,a) + gamma*V*(child). Exact; rejects shaky trees,
/// whose stochastic dynamics are outside this oracle's scope.
SoftSolution soft_backward_induction(
    const TreeMdp& mdp, const std::function<double(StateId, ActionId)>& reward,
    double alpha, double gamma);

struct NumericVeqb {
  double value = 0.0;
  double w = 0.0;  // weight on the q1 side
};

/// Independent check of the two-action soft value: maximizes
///   w*(A - alpha*ln w) + (1-w)*(B - alpha*ln(1-w)),  w in (0,1),
/// where A = q1 [- alpha*logp1 with density], B likewise, by grid search
/// (10^4 uniform points plus log-spaced points toward both endpoints, so
/// maximizers exponentially close to 0 or 1 are still bracketed) followed
/// by golden-section refinement to |dw| < 1e-8.
NumericVeqb numeric_veqb(double q1, double q2, double logp1, double logp2,
                         double alpha, bool use_density);

/// Central finite differences of policy_objective with respect to each
/// logit of the given state.
Eigen::VectorXd finite_diff_policy_gradient(const SoftmaxPolicy& policy,
                                            const SparseTable& q, StateId s,
                                            int action_count, double alpha,
                                            double epsilon);

}  // namespace treeirl
