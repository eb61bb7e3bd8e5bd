#include "treeirl/irl_loop.hpp"

#include <stdexcept>

#include "treeirl/replay.hpp"

namespace treeirl {

std::string method_name(Method method) {
  switch (method) {
    case Method::baseline: return "baseline";
    case Method::erb: return "erb";
    case Method::erb_eqb: return "erb-eqb";
    case Method::bc: return "bc";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "baseline") return Method::baseline;
  if (name == "erb") return Method::erb;
  if (name == "erb-eqb" || name == "erb_eqb") return Method::erb_eqb;
  if (name == "bc") return Method::bc;
  throw std::invalid_argument("unknown method: " + name);
}

void IrlConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("IrlConfig: epochs must be >= 1");
  if (inner_steps < 1) {
    throw std::invalid_argument("IrlConfig: inner_steps must be >= 1");
  }
  if (sac_updates_per_step < 1) {
    throw std::invalid_argument("IrlConfig: sac_updates_per_step must be >= 1");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("IrlConfig: batch_size must be >= 1");
  }
  if (expert_ratio < 0.0 || expert_ratio > 1.0) {
    throw std::invalid_argument("IrlConfig: expert_ratio must be in [0, 1]");
  }
  if (!(eta_r > 0.0)) throw std::invalid_argument("IrlConfig: eta_r must be > 0");
  if (buffer_capacity == 0) {
    throw std::invalid_argument("IrlConfig: buffer_capacity must be > 0");
  }
  if (expert_demos < 1) {
    throw std::invalid_argument("IrlConfig: expert_demos must be >= 1");
  }
  if (rollouts_per_epoch < 1 || rollouts_per_inner_step < 1) {
    throw std::invalid_argument("IrlConfig: rollout counts must be >= 1");
  }
  if (eval_episodes < 1) {
    throw std::invalid_argument("IrlConfig: eval_episodes must be >= 1");
  }
  if (policy_init_noise < 0.0) {
    throw std::invalid_argument("IrlConfig: policy_init_noise must be >= 0");
  }
  if (step_cap < 0) throw std::invalid_argument("IrlConfig: step_cap must be >= 0");
  if (learner.gamma < 0.0 || learner.gamma > 1.0) {
    throw std::invalid_argument("IrlConfig: gamma must be in [0, 1]");
  }
  if (!(learner.alpha > 0.0) || !(learner.alpha_eqb > 0.0)) {
    throw std::invalid_argument("IrlConfig: entropy weights must be > 0");
  }
  if (!(learner.eta_q > 0.0) || !(learner.eta_pi > 0.0)) {
    throw std::invalid_argument("IrlConfig: learning rates must be > 0");
  }
}

namespace {

// Sub-stream labels for one run's seed.
constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kEvalStream = 2;

ExpertSet make_expert_set(const TreeMdp& mdp, int demos) {
  ExpertSet expert;
  for (int i = 0; i < demos; ++i) expert.add_trajectory(mdp.leftmost_demo());
  return expert;
}

// Greedy and sampled returns with their own per-epoch stream, so the
// training stream is untouched by evaluation settings.
CurvePoint evaluate_epoch(const SoftmaxPolicy& policy, const TreeMdp& mdp,
                          const IrlConfig& cfg, std::uint64_t eval_base,
                          int epoch, int cap) {
  Rng eval_rng(derive_seed(eval_base, static_cast<std::uint64_t>(epoch)));
  CurvePoint point;
  point.iteration = epoch;
  point.det_return =
      evaluate(policy, mdp, RolloutMode::greedy, eval_rng, 1, cap);
  point.sto_return = evaluate(policy, mdp, RolloutMode::sampled, eval_rng,
                              cfg.eval_episodes, cap);
  return point;
}

}  // namespace

LearningCurve run_maxentirl(const IrlConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::bc) {
    throw std::invalid_argument("run_maxentirl: method bc is run_bc's job");
  }

  const TreeMdp mdp = build_tree(cfg.tree);
  const int n_actions = mdp.action_count();
  const int cap = cfg.step_cap > 0 ? cfg.step_cap : mdp.default_step_cap();
  const double ratio = cfg.effective_expert_ratio();

  const ExpertSet expert = make_expert_set(mdp, cfg.expert_demos);
  ReplayBuffer reward_buffer(cfg.buffer_capacity);  // D_L
  ReplayBuffer policy_buffer(cfg.buffer_capacity);  // D_P

  SparseTable q;
  SparseTable reward;
  SoftmaxPolicy policy(cfg.policy_init_noise, derive_seed(cfg.seed, kNoiseStream));
  Rng rng(derive_seed(cfg.seed, kTrainStream));
  const std::uint64_t eval_base = derive_seed(cfg.seed, kEvalStream);

  LearningCurve curve;
  curve.points.reserve(cfg.epochs);
  std::vector<double> targets;
  std::vector<StateId> batch_states;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int i = 0; i < cfg.rollouts_per_epoch; ++i) {
      reward_buffer.push_all(mdp.rollout(policy, rng, RolloutMode::sampled, cap));
    }
    const std::vector<Transition> expert_batch =
        expert.sample_batch(cfg.batch_size, rng);
    const std::vector<Transition> learner_batch =
        reward_buffer.sample_batch(cfg.batch_size, rng);
    reward_update(reward, expert_batch, learner_batch, cfg.eta_r);

    for (int step = 0; step < cfg.inner_steps; ++step) {
      for (int i = 0; i < cfg.rollouts_per_inner_step; ++i) {
        policy_buffer.push_all(
            mdp.rollout(policy, rng, RolloutMode::sampled, cap));
      }
      for (int update = 0; update < cfg.sac_updates_per_step; ++update) {
        MixedBatch batch =
            sample_mixed_batch(expert, policy_buffer, cfg.batch_size, ratio, rng);
        relabel(batch, reward);

        // Targets for the whole batch are computed against the pre-update
        // Q table, then applied.
        targets.clear();
        for (const Transition& t : batch.transitions) {
          if (cfg.method == Method::erb_eqb && t.is_expert) {
            targets.push_back(
                cfg.learner.eqb_density
                    ? eqb_density_target(q, policy, t, cfg.learner, n_actions, rng)
                    : eqb_target(q, policy, t, cfg.learner, n_actions, rng));
          } else {
            targets.push_back(
                sac_target(q, policy, t, cfg.learner, n_actions, rng));
          }
        }
        batch_states.clear();
        for (std::size_t i = 0; i < batch.transitions.size(); ++i) {
          const Transition& t = batch.transitions[i];
          q_update(q, t.state, t.action, targets[i], cfg.learner.eta_q);
          batch_states.push_back(t.state);
        }
        policy_gradient_update(policy, q, batch_states, n_actions,
                               cfg.learner.eta_pi, cfg.learner.alpha);
      }
    }

    curve.points.push_back(evaluate_epoch(policy, mdp, cfg, eval_base, epoch, cap));
  }
  return curve;
}

LearningCurve run_bc(const IrlConfig& cfg) {
  cfg.validate();
  if (cfg.method != Method::bc) {
    throw std::invalid_argument("run_bc: config method is not bc");
  }

  const TreeMdp mdp = build_tree(cfg.tree);
  const int n_actions = mdp.action_count();
  const int cap = cfg.step_cap > 0 ? cfg.step_cap : mdp.default_step_cap();

  const ExpertSet expert = make_expert_set(mdp, cfg.expert_demos);
  if (expert.empty()) {
    throw std::invalid_argument("run_bc: no expert demonstrations");
  }

  SoftmaxPolicy policy(cfg.policy_init_noise, derive_seed(cfg.seed, kNoiseStream));
  Rng rng(derive_seed(cfg.seed, kTrainStream));
  const std::uint64_t eval_base = derive_seed(cfg.seed, kEvalStream);

  LearningCurve curve;
  curve.points.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int step = 0; step < cfg.inner_steps; ++step) {
      bc_update(policy, expert.sample_batch(cfg.batch_size, rng),
                cfg.learner.eta_pi, n_actions);
    }
    curve.points.push_back(evaluate_epoch(policy, mdp, cfg, eval_base, epoch, cap));
  }
  return curve;
}

LearningCurve run_actor_critic(const IrlConfig& cfg) {
  cfg.validate();
  const TreeMdp mdp = build_tree(cfg.tree);
  const int n_actions = mdp.action_count();
  const int cap = cfg.step_cap > 0 ? cfg.step_cap : mdp.default_step_cap();

  ReplayBuffer policy_buffer(cfg.buffer_capacity);
  SparseTable q;
  SoftmaxPolicy policy(cfg.policy_init_noise, derive_seed(cfg.seed, kNoiseStream));
  Rng rng(derive_seed(cfg.seed, kTrainStream));
  const std::uint64_t eval_base = derive_seed(cfg.seed, kEvalStream);

  LearningCurve curve;
  curve.points.reserve(cfg.epochs);
  std::vector<double> targets;
  std::vector<StateId> batch_states;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int step = 0; step < cfg.inner_steps; ++step) {
      for (int i = 0; i < cfg.rollouts_per_inner_step; ++i) {
        policy_buffer.push_all(
            mdp.rollout(policy, rng, RolloutMode::sampled, cap));
      }
      for (int update = 0; update < cfg.sac_updates_per_step; ++update) {
        // Rollouts already carry ground-truth rewards; no relabeling.
        std::vector<Transition> batch =
            policy_buffer.sample_batch(cfg.batch_size, rng);
        targets.clear();
        for (const Transition& t : batch) {
          targets.push_back(sac_target(q, policy, t, cfg.learner, n_actions, rng));
        }
        batch_states.clear();
        for (std::size_t i = 0; i < batch.size(); ++i) {
          q_update(q, batch[i].state, batch[i].action, targets[i],
                   cfg.learner.eta_q);
          batch_states.push_back(batch[i].state);
        }
        policy_gradient_update(policy, q, batch_states, n_actions,
                               cfg.learner.eta_pi, cfg.learner.alpha);
      }
    }
    curve.points.push_back(evaluate_epoch(policy, mdp, cfg, eval_base, epoch, cap));
  }
  return curve;
}

LearningCurve run_irl(const IrlConfig& cfg) {
  return cfg.method == Method::bc ? run_bc(cfg) : run_maxentirl(cfg);
}

}  // namespace treeirl
