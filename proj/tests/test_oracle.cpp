#include <doctest.h>

#include <cmath>

#include "treeirl/learner.hpp"
#include "treeirl/oracle.hpp"

using namespace treeirl;

namespace {

TreeMdp small_tree(int b, int levels) {
  TreeSpec spec;
  spec.branching = b;
  spec.levels = levels;
  return build_tree(spec);
}

std::function<double(StateId, ActionId)> gt_of(const TreeMdp& mdp) {
  return [&mdp](StateId s, ActionId a) { return mdp.gt_reward(s, a); };
}

}  // namespace

TEST_CASE("hand-checked backup on the two-level binary tree") {
  const TreeMdp mdp = small_tree(2, 2);
  const SoftSolution sol = soft_backward_induction(mdp, gt_of(mdp), 1.0, 1.0);
  CHECK(sol.q_star.get(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.q_star.get(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.v_star[0] ==
        doctest::Approx(std::log(std::exp(1.0) + 1.0)).epsilon(1e-9));
  const Eigen::VectorXd p = action_distribution(sol.pi_star, 0, 2);
  CHECK(p[0] ==
        doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-9));
}

TEST_CASE("vanishing entropy weight recovers the max reward path sum") {
  const TreeMdp mdp = small_tree(2, 4);
  const SoftSolution sol = soft_backward_induction(mdp, gt_of(mdp), 1e-3, 1.0);
  CHECK(std::abs(sol.v_star[0] - 3.0) < 1e-2);
}

TEST_CASE("zero reward telescopes to per-depth uniform entropy") {
  const int b = 3, levels = 5;
  const TreeMdp mdp = small_tree(b, levels);
  const double alpha = 0.7;
  const SoftSolution sol = soft_backward_induction(
      mdp, [](StateId, ActionId) { return 0.0; }, alpha, 1.0);
  // V*(layer l) = alpha * (levels - l) * ln b, independently derived from
  // the recursion V_l = alpha*ln(b) + V_{l+1}, V_levels = 0.
  for (int layer = 1; layer <= levels; ++layer) {
    const StateId node = mdp.leftmost_node_at_layer(layer);
    CHECK(sol.v_star[node] ==
          doctest::Approx(alpha * (levels - layer) * std::log(b)).epsilon(1e-12));
  }
}

TEST_CASE("backward induction is exact and self-consistent") {
  const TreeMdp mdp = small_tree(3, 4);
  const SoftSolution a = soft_backward_induction(mdp, gt_of(mdp), 1.0, 0.9);
  const SoftSolution b = soft_backward_induction(mdp, gt_of(mdp), 1.0, 0.9);
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    CHECK(a.v_star[s] == b.v_star[s]);  // bit-identical rerun
    if (mdp.is_leaf(s)) {
      CHECK(a.v_star[s] == 0.0);
      continue;
    }
    // V* = alpha * log-sum-exp of the Q* row.
    double lse = 0.0;
    for (ActionId action = 0; action < 3; ++action) {
      lse += std::exp(a.q_star.get(s, action));
    }
    CHECK(a.v_star[s] == doctest::Approx(std::log(lse)).epsilon(1e-12));
  }
}

TEST_CASE("optimal soft policy leans leftmost on the reward path") {
  const TreeMdp mdp = small_tree(3, 5);
  const SoftSolution sol = soft_backward_induction(mdp, gt_of(mdp), 1.0, 1.0);
  for (int layer = 1; layer < 5; ++layer) {
    const StateId node = mdp.leftmost_node_at_layer(layer);
    const Eigen::VectorXd p = action_distribution(sol.pi_star, node, 3);
    int argmax = 0;
    p.maxCoeff(&argmax);
    CHECK(argmax == 0);
  }
}

TEST_CASE("oracle rejects shaky trees") {
  TreeSpec spec;
  spec.branching = 2;
  spec.levels = 3;
  spec.shaky = true;
  const TreeMdp mdp = build_tree(spec);
  CHECK_THROWS_AS(
      soft_backward_induction(mdp, [](StateId, ActionId) { return 0.0; }, 1.0, 1.0),
      std::invalid_argument);
}

TEST_CASE("numeric mixture maximization: symmetry and dominance limits") {
  const NumericVeqb sym = numeric_veqb(2.0, 2.0, 0, 0, 0.5, false);
  CHECK(sym.w == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(sym.value == doctest::Approx(2.0 + 0.5 * std::log(2.0)).epsilon(1e-9));

  // Gap of 100*alpha: all weight on the dominant side, value = its Q.
  const NumericVeqb dom = numeric_veqb(50.0, -50.0, 0, 0, 1.0, false);
  CHECK(dom.w > 1.0 - 1e-6);
  CHECK(dom.value == doctest::Approx(50.0).epsilon(1e-6));
  const NumericVeqb dom2 = numeric_veqb(-50.0, 50.0, 0, 0, 1.0, false);
  CHECK(dom2.w < 1e-6);
  CHECK(dom2.value == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("numeric maximization agrees with both closed forms") {
  Rng rng(863);
  for (int i = 0; i < 300; ++i) {
    const double q1 = uniform01(rng) * 6 - 3;
    const double q2 = uniform01(rng) * 6 - 3;
    const double logp1 = std::log(0.02 + uniform01(rng) * 0.98);
    const double logp2 = std::log(0.02 + uniform01(rng) * 0.98);
    const double alpha = 0.1 + uniform01(rng) * 1.9;

    const NumericVeqb plain = numeric_veqb(q1, q2, 0, 0, alpha, false);
    CHECK(std::abs(plain.value - v_eqb(q1, q2, alpha)) < 1e-6);

    const NumericVeqb dens = numeric_veqb(q1, q2, logp1, logp2, alpha, true);
    CHECK(std::abs(dens.value - v_eqb_density(q1, q2, logp1, logp2, alpha)) <
          1e-6);

    // The returned argmax reproduces the returned max when plugged back in.
    const double a1 = q1 - alpha * logp1;
    const double a2 = q2 - alpha * logp2;
    double replug = 0.0;
    if (dens.w > 0.0) replug += dens.w * (a1 - alpha * std::log(dens.w));
    if (dens.w < 1.0) {
      replug += (1 - dens.w) * (a2 - alpha * std::log(1 - dens.w));
    }
    CHECK(std::abs(replug - dens.value) < 1e-10);
  }
}

TEST_CASE("finite differences vanish at the entropy stationary point") {
  SparseTable flat;
  for (int a = 0; a < 6; ++a) flat.set(0, a, 1.25);
  SoftmaxPolicy uniform;
  const Eigen::VectorXd g =
      finite_diff_policy_gradient(uniform, flat, 0, 6, 1.0, 1e-5);
  CHECK(g.norm() < 1e-6);
}

TEST_CASE("central differences converge quadratically") {
  SoftmaxPolicy policy;
  SparseTable q;
  Rng rng(17);
  for (int a = 0; a < 4; ++a) {
    policy.set_logit(0, a, uniform01(rng) * 2 - 1);
    q.set(0, a, uniform01(rng) * 8 - 4);
  }
  const Eigen::VectorXd exact = policy_objective_gradient(policy, q, 0, 4, 1.0);
  const double err_coarse =
      (finite_diff_policy_gradient(policy, q, 0, 4, 1.0, 2e-3) - exact).norm();
  const double err_fine =
      (finite_diff_policy_gradient(policy, q, 0, 4, 1.0, 1e-3) - exact).norm();
  // Halving epsilon should cut the truncation error by about 4.
  CHECK(err_fine < err_coarse / 2.5);
  CHECK(err_fine > err_coarse / 6.0);
}
