#include <doctest.h>

#include <cmath>

#include "treeirl/learner.hpp"
#include "treeirl/oracle.hpp"

using namespace treeirl;

namespace {

Transition make_transition(StateId s, ActionId a, double r, StateId next,
                           bool done) {
  Transition t;
  t.state = s;
  t.action = a;
  t.reward = r;
  t.next_state = next;
  t.done = done;
  return t;
}

Transition make_expert(StateId s, ActionId a, double r, StateId next, bool done,
                       std::optional<ActionId> next_action) {
  Transition t = make_transition(s, a, r, next, done);
  t.is_expert = true;
  t.expert_next_action = next_action;
  return t;
}

}  // namespace

TEST_CASE("v_eqb closed form on pinned inputs") {
  CHECK(v_eqb(0, 0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(v_eqb(1, 1, 0.2) ==
        doctest::Approx(1.0 + 0.2 * std::log(2.0)).epsilon(1e-12));
  CHECK(v_eqb(0, 1, 1) ==
        doctest::Approx(std::log(1.0 + std::exp(1.0))).epsilon(1e-12));
  CHECK_THROWS_AS(v_eqb(0, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(v_eqb(0, 0, -1.0), std::invalid_argument);
}

TEST_CASE("v_eqb dominates the max, symmetrically, by at most alpha ln 2") {
  Rng rng(5150);
  for (int i = 0; i < 500; ++i) {
    const double x = uniform01(rng) * 200 - 100;
    const double y = uniform01(rng) * 200 - 100;
    const double alpha = 0.05 + uniform01(rng) * 3;
    const double v = v_eqb(x, y, alpha);
    CHECK(v >= std::max(x, y));
    CHECK(v - std::max(x, y) <= alpha * std::log(2.0) + 1e-12);
    CHECK(v == doctest::Approx(v_eqb(y, x, alpha)).epsilon(1e-12));
    // Monotone in each argument.
    CHECK(v_eqb(x + 0.5, y, alpha) >= v);
    CHECK(v_eqb(x, y + 0.5, alpha) >= v);
  }
  const double tie = v_eqb(3.0, 3.0, 0.7);
  CHECK(tie - 3.0 == doctest::Approx(0.7 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("density form reduces to the plain form at zero log-densities") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const double q1 = uniform01(rng) * 20 - 10;
    const double q2 = uniform01(rng) * 20 - 10;
    const double alpha = 0.1 + uniform01(rng) * 2;
    CHECK(v_eqb_density(q1, q2, 0.0, 0.0, alpha) ==
          doctest::Approx(v_eqb(q1, q2, alpha)).epsilon(1e-12));
  }
  CHECK(v_eqb_density(0, 0, 0, 0, 1) == doctest::Approx(std::log(2.0)));
  // Equal Q, both densities 1/2: each exponent becomes ln 2.
  CHECK(v_eqb_density(0, 0, std::log(0.5), std::log(0.5), 1) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("optimal mixture weight: symmetry, the ln-3 case, open interval") {
  CHECK(optimal_mixture_weight(2, 2, -1, -1, 0.7) == doctest::Approx(0.5));
  // Density-adjusted gap of ln 3 puts weight 1/4 on the policy action.
  CHECK(optimal_mixture_weight(0, std::log(3.0), 0, 0, 1) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // Strictly inside (0,1) wherever the logistic is representable; beyond
  // |gap|/alpha of about 36 the far exponential underflows and w rounds
  // to an endpoint.
  Rng rng(123);
  for (int i = 0; i < 200; ++i) {
    const double w = optimal_mixture_weight(
        uniform01(rng) * 20 - 10, uniform01(rng) * 20 - 10,
        uniform01(rng) * 4 - 4, uniform01(rng) * 4 - 4, 1.0 + uniform01(rng));
    CHECK(w > 0.0);
    CHECK(w < 1.0);
  }
}

TEST_CASE("optimal weight attains the density soft value in the objective") {
  Rng rng(321);
  for (int i = 0; i < 200; ++i) {
    const double q1 = uniform01(rng) * 6 - 3;
    const double q2 = uniform01(rng) * 6 - 3;
    const double logp1 = std::log(0.02 + uniform01(rng) * 0.98);
    const double logp2 = std::log(0.02 + uniform01(rng) * 0.98);
    const double alpha = 0.1 + uniform01(rng) * 1.9;
    const double w = optimal_mixture_weight(q1, q2, logp1, logp2, alpha);
    const double a1 = q1 - alpha * logp1;
    const double a2 = q2 - alpha * logp2;
    const double objective = w * (a1 - alpha * std::log(w)) +
                             (1 - w) * (a2 - alpha * std::log(1 - w));
    CHECK(objective ==
          doctest::Approx(v_eqb_density(q1, q2, logp1, logp2, alpha))
              .epsilon(1e-9));
  }
}

TEST_CASE("sac target: terminal, uniform-entropy, and zero-discount cases") {
  SparseTable q;
  SoftmaxPolicy policy;
  LearnerConfig cfg;
  Rng rng(0);

  const Transition terminal = make_transition(0, 0, 1.0, 1, true);
  q.set(1, 0, 123.0);
  CHECK(sac_target(q, policy, terminal, cfg, 2, rng) == 1.0);

  // r=0, gamma=alpha=1, Q(s',.) = 0, uniform over 2 actions: y = ln 2
  // whichever action is sampled.
  SparseTable zero_q;
  const Transition mid = make_transition(0, 0, 0.0, 1, false);
  CHECK(sac_target(zero_q, policy, mid, cfg, 2, rng) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  LearnerConfig myopic = cfg;
  myopic.gamma = 0.0;
  const Transition t = make_transition(0, 1, 0.25, 2, false);
  CHECK(sac_target(q, policy, t, myopic, 2, rng) == 0.25);
}

TEST_CASE("sac target at d=1 is independent of Q and policy") {
  LearnerConfig cfg;
  Rng rng(1);
  const Transition terminal = make_transition(3, 1, -0.5, 9, true);
  SparseTable q1, q2;
  q2.set(9, 0, 1e9);
  SoftmaxPolicy p1, p2;
  p2.set_logit(9, 1, 40.0);
  CHECK(sac_target(q1, p1, terminal, cfg, 2, rng) ==
        sac_target(q2, p2, terminal, cfg, 2, rng));
}

TEST_CASE("eqb target bootstraps through the two-action soft value") {
  LearnerConfig cfg;
  Rng rng(0);
  SparseTable q;
  SoftmaxPolicy policy;

  // Both next-state Q values zero: y = ln 2.
  const Transition t = make_expert(0, 0, 0.0, 1, false, 0);
  CHECK(eqb_target(q, policy, t, cfg, 2, rng) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Equal Q values q0: y = r + gamma*(q0 + alpha_eqb * ln 2).
  q.set(1, 0, 1.7);
  q.set(1, 1, 1.7);
  const Transition t2 = make_expert(0, 0, 0.3, 1, false, 0);
  CHECK(eqb_target(q, policy, t2, cfg, 2, rng) ==
        doctest::Approx(0.3 + 1.7 + std::log(2.0)).epsilon(1e-12));

  // Expert action Q = 1, policy action Q = 0 (policy pinned to action 1):
  // y = ln(e + 1), matching the numeric mixture maximization.
  SparseTable q3;
  q3.set(1, 0, 1.0);
  SoftmaxPolicy pinned;
  pinned.set_logit(1, 1, 1000.0);
  const Transition t3 = make_expert(0, 0, 0.0, 1, false, 0);
  const double y = eqb_target(q3, pinned, t3, cfg, 2, rng);
  CHECK(y == doctest::Approx(std::log(std::exp(1.0) + 1.0)).epsilon(1e-12));
  CHECK(y == doctest::Approx(numeric_veqb(0.0, 1.0, 0, 0, 1.0, false).value)
                 .epsilon(1e-9));

  // Terminal expert transitions return r.
  const Transition done = make_expert(0, 0, 0.9, 1, true, std::nullopt);
  CHECK(eqb_target(q3, pinned, done, cfg, 2, rng) == 0.9);
}

TEST_CASE("density-aware eqb target under a uniform policy") {
  LearnerConfig cfg;
  Rng rng(0);
  SparseTable q;
  const SoftmaxPolicy uniform;
  const int b = 5;

  // All Q zero, densities 1/b on both actions: y = ln(2b) whichever action
  // is sampled.
  const Transition t = make_expert(0, 0, 0.0, 1, false, 0);
  CHECK(eqb_density_target(q, uniform, t, cfg, b, rng) ==
        doctest::Approx(std::log(2.0 * b)).epsilon(1e-12));

  // Equal Q values shift the target by q; the uniform-density offset adds
  // ln b on top of the plain two-action form.
  for (int a = 0; a < b; ++a) q.set(1, a, 2.5);
  Rng rng_density(3), rng_plain(3);
  const double density = eqb_density_target(q, uniform, t, cfg, b, rng_density);
  const double plain = eqb_target(q, uniform, t, cfg, b, rng_plain);
  CHECK(density == doctest::Approx(2.5 + std::log(2.0 * b)).epsilon(1e-12));
  CHECK(density - plain == doctest::Approx(std::log(b)).epsilon(1e-12));

  const Transition done = make_expert(0, 0, 1.5, 1, true, std::nullopt);
  CHECK(eqb_density_target(q, uniform, done, cfg, b, rng) == 1.5);

  const Transition missing = make_expert(0, 0, 0.0, 1, false, std::nullopt);
  CHECK_THROWS_AS(eqb_density_target(q, uniform, missing, cfg, b, rng),
                  std::invalid_argument);
}

TEST_CASE("eqb target rejects malformed transitions") {
  LearnerConfig cfg;
  Rng rng(0);
  SparseTable q;
  SoftmaxPolicy policy;
  const Transition not_expert = make_transition(0, 0, 0.0, 1, false);
  CHECK_THROWS_AS(eqb_target(q, policy, not_expert, cfg, 2, rng),
                  std::invalid_argument);
  const Transition missing = make_expert(0, 0, 0.0, 1, false, std::nullopt);
  CHECK_THROWS_AS(eqb_target(q, policy, missing, cfg, 2, rng),
                  std::invalid_argument);
}

TEST_CASE("eqb target dominates the entropy-free sac bootstrap") {
  // With the same sampled next action, log-sum-exp >= the single Q term.
  LearnerConfig cfg;
  SparseTable q;
  Rng rng(777);
  SoftmaxPolicy policy;
  for (int i = 0; i < 100; ++i) {
    q.set(1, 0, uniform01(rng) * 10 - 5);
    q.set(1, 1, uniform01(rng) * 10 - 5);
    const Transition t = make_expert(0, 0, uniform01(rng) - 0.5, 1, false, 0);
    Rng fork_a = rng, fork_b = rng;
    const double eqb = eqb_target(q, policy, t, cfg, 2, fork_a);
    const ActionId sampled = sample_action(policy, 1, 2, fork_b);
    CHECK(eqb >= t.reward + cfg.gamma * q.get(1, sampled) - 1e-12);
  }
}

TEST_CASE("q_update steps toward the target") {
  SparseTable q;
  q_update(q, 0, 0, 1.0, 0.01);
  CHECK(q.get(0, 0) == doctest::Approx(0.01));

  q.set(2, 1, 0.6);
  q_update(q, 2, 1, 0.6, 0.5);
  CHECK(q.get(2, 1) == 0.6);  // already at the target

  q.set(3, 0, -4.0);
  q_update(q, 3, 0, 2.0, 1.0);
  CHECK(q.get(3, 0) == 2.0);  // full step
}

TEST_CASE("policy objective: uniform entropy, alpha = 0, near-greedy limit") {
  const int b = 5;
  SparseTable q;
  for (int a = 0; a < b; ++a) q.set(0, a, 2.0);
  SoftmaxPolicy uniform;
  CHECK(policy_objective(uniform, q, 0, b, 1.0) ==
        doctest::Approx(2.0 + std::log(b)).epsilon(1e-12));

  SparseTable varied;
  varied.set(0, 0, 1.0);
  varied.set(0, 1, -3.0);
  SoftmaxPolicy tilted;
  tilted.set_logit(0, 0, 0.8);
  const Eigen::VectorXd p = action_distribution(tilted, 0, 2);
  CHECK(policy_objective(tilted, varied, 0, 2, 0.0) ==
        doctest::Approx(p[0] * 1.0 + p[1] * -3.0).epsilon(1e-12));

  SoftmaxPolicy sharp;
  sharp.set_logit(0, 0, 30.0);
  CHECK(policy_objective(sharp, varied, 0, 2, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("policy gradient ascends and is stationary at max entropy") {
  SparseTable q;
  q.set(0, 0, 1.0);
  SoftmaxPolicy policy;
  const double before = policy.logit(0, 0);
  policy_gradient_update(policy, q, {0}, 3, 0.1, 1.0);
  CHECK(policy.logit(0, 0) > before);

  // Constant Q at uniform: entropy already maximal, gradient = 0.
  SparseTable flat;
  for (int a = 0; a < 4; ++a) flat.set(7, a, 3.3);
  SoftmaxPolicy uniform;
  const Eigen::VectorXd g = policy_objective_gradient(uniform, flat, 7, 4, 1.0);
  CHECK(g.norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int actions = 2 + static_cast<int>(uniform_below(rng, 7));
    const double alpha = 0.1 + uniform01(rng) * 1.9;
    SoftmaxPolicy policy;
    SparseTable q;
    for (int a = 0; a < actions; ++a) {
      policy.set_logit(0, a, uniform01(rng) * 4 - 2);
      q.set(0, a, uniform01(rng) * 10 - 5);
    }
    const Eigen::VectorXd analytic =
        policy_objective_gradient(policy, q, 0, actions, alpha);
    const Eigen::VectorXd numeric =
        finite_diff_policy_gradient(policy, q, 0, actions, alpha, 1e-5);
    worst = std::max(worst, (analytic - numeric).norm() /
                                std::max(numeric.norm(), 1e-12));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("duplicate states in a batch accumulate per occurrence") {
  SparseTable q;
  q.set(0, 0, 1.0);
  SoftmaxPolicy once, twice;
  policy_gradient_update(once, q, {0}, 2, 0.1, 1.0);
  policy_gradient_update(twice, q, {0, 0}, 2, 0.1, 1.0);
  CHECK(twice.logit(0, 0) == doctest::Approx(2 * once.logit(0, 0)));
}

TEST_CASE("bc updates raise the expert action and leave other states alone") {
  SoftmaxPolicy policy;
  std::vector<Transition> batch = {make_expert(0, 1, 0, 2, false, 1)};
  bc_update(policy, batch, 0.5, 3);
  CHECK(policy.logit(0, 1) > 0.0);
  CHECK(policy.logit(0, 0) < 0.0);
  CHECK(policy.logit(0, 2) < 0.0);
  CHECK(policy.logit(5, 0) == 0.0);

  CHECK_THROWS_AS(bc_update(policy, {}, 0.5, 3), std::invalid_argument);
}

TEST_CASE("repeated bc updates make greedy match consistent demos") {
  SoftmaxPolicy policy;
  std::vector<Transition> batch = {make_expert(0, 2, 0, 3, false, 1),
                                   make_expert(3, 1, 0, 7, true, std::nullopt)};
  for (int i = 0; i < 200; ++i) bc_update(policy, batch, 0.1, 4);
  CHECK(greedy_action(policy, 0, 4) == 2);
  CHECK(greedy_action(policy, 3, 4) == 1);
}
