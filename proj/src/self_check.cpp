#include "treeirl/self_check.hpp"

#include <cmath>
#include <sstream>

#include "treeirl/learner.hpp"
#include "treeirl/oracle.hpp"
#include "treeirl/rng.hpp"

namespace treeirl {

namespace {

double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

std::string describe(double worst, double tolerance, int instances) {
  std::ostringstream out;
  out << "max |err| " << worst << " (tol " << tolerance << ", " << instances
      << " instances)";
  return out.str();
}

}  // namespace

CheckResult check_eqb_closed_form(int instances, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const double q1 = uniform_in(rng, -3.0, 3.0);
    const double q2 = uniform_in(rng, -3.0, 3.0);
    const double alpha = uniform_in(rng, 0.1, 2.0);
    const double logp1 = std::log(uniform_in(rng, 0.02, 1.0));
    const double logp2 = std::log(uniform_in(rng, 0.02, 1.0));

    const double plain = v_eqb(q1, q2, alpha);
    const double plain_numeric = numeric_veqb(q1, q2, 0.0, 0.0, alpha, false).value;
    worst = std::max(worst, std::abs(plain - plain_numeric));

    const double dens = v_eqb_density(q1, q2, logp1, logp2, alpha);
    const double dens_numeric =
        numeric_veqb(q1, q2, logp1, logp2, alpha, true).value;
    worst = std::max(worst, std::abs(dens - dens_numeric));
  }
  return {"eqb closed form vs numeric maximization", worst < 1e-6,
          describe(worst, 1e-6, instances)};
}

CheckResult check_optimal_weight(int instances, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const double q1 = uniform_in(rng, -3.0, 3.0);
    const double q2 = uniform_in(rng, -3.0, 3.0);
    const double alpha = uniform_in(rng, 0.1, 2.0);
    const double logp1 = std::log(uniform_in(rng, 0.02, 1.0));
    const double logp2 = std::log(uniform_in(rng, 0.02, 1.0));
    const double w = optimal_mixture_weight(q1, q2, logp1, logp2, alpha);
    const double w_numeric = numeric_veqb(q1, q2, logp1, logp2, alpha, true).w;
    worst = std::max(worst, std::abs(w - w_numeric));
  }
  return {"optimal mixture weight vs numeric argmax", worst < 1e-4,
          describe(worst, 1e-4, instances)};
}

CheckResult check_policy_gradient(int instances, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const int actions = 2 + static_cast<int>(uniform_below(rng, 7));
    const double alpha = uniform_in(rng, 0.1, 2.0);
    const StateId s = static_cast<StateId>(uniform_below(rng, 100));
    SoftmaxPolicy policy;
    SparseTable q;
    for (int a = 0; a < actions; ++a) {
      policy.set_logit(s, a, uniform_in(rng, -2.0, 2.0));
      q.set(s, a, uniform_in(rng, -5.0, 5.0));
    }
    const Eigen::VectorXd analytic =
        policy_objective_gradient(policy, q, s, actions, alpha);
    const Eigen::VectorXd numeric =
        finite_diff_policy_gradient(policy, q, s, actions, alpha, 1e-5);
    const double rel = (analytic - numeric).norm() /
                       std::max(numeric.norm(), 1e-12);
    worst = std::max(worst, rel);
  }
  return {"analytic policy gradient vs finite differences", worst < 1e-4,
          describe(worst, 1e-4, instances)};
}

CheckResult check_oracle_sanity() {
  TreeSpec spec;
  spec.branching = 2;
  spec.levels = 2;
  const TreeMdp mdp = build_tree(spec);
  const SoftSolution sol = soft_backward_induction(
      mdp, [&](StateId s, ActionId a) { return mdp.gt_reward(s, a); }, 1.0, 1.0);
  const double v_expected = std::log(std::exp(1.0) + 1.0);
  const double p_expected = std::exp(1.0) / (std::exp(1.0) + 1.0);
  const double p_left = action_distribution(sol.pi_star, 0, 2)[0];
  const double v_err = std::abs(sol.v_star[0] - v_expected);
  const double p_err = std::abs(p_left - p_expected);
  std::ostringstream detail;
  detail << "|V*(root) - ln(e+1)| = " << v_err << ", |pi*(left) - e/(e+1)| = "
         << p_err << " (tol 1e-9)";
  return {"soft backward induction sanity", v_err < 1e-9 && p_err < 1e-9,
          detail.str()};
}

std::vector<CheckResult> run_core_checks(std::uint64_t seed) {
  return {
      check_eqb_closed_form(1000, derive_seed(seed, 1)),
      check_optimal_weight(1000, derive_seed(seed, 2)),
      check_policy_gradient(100, derive_seed(seed, 3)),
      check_oracle_sanity(),
  };
}

bool report_checks(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const CheckResult& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
        << '\n';
    all = all && r.passed;
  }
  return all;
}

}  // namespace treeirl
