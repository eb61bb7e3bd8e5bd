#include "treeirl/tree_mdp.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace treeirl {

namespace {

// (b^levels - 1) / (b - 1) with overflow guard; this is the node count of
// a full b-ary tree with `levels` layers.
std::int64_t geometric_node_count(int b, int levels) {
  std::int64_t count = 0;
  std::int64_t layer = 1;
  for (int l = 0; l < levels; ++l) {
    count += layer;
    if (layer > (std::numeric_limits<std::int64_t>::max() >> 8) / b) {
      throw std::invalid_argument("TreeSpec: tree too large for 64-bit ids");
    }
    layer *= b;
  }
  return count;
}

}  // namespace

TreeMdp::TreeMdp(const TreeSpec& spec) : spec_(spec) {
  if (spec.branching < 2) {
    throw std::invalid_argument("TreeSpec: branching must be >= 2");
  }
  if (spec.branching > 254) {  // action ids must fit the table key's byte
    throw std::invalid_argument("TreeSpec: branching must be <= 254");
  }
  if (spec.levels < 2) {
    throw std::invalid_argument("TreeSpec: levels must be >= 2");
  }
  if (spec.reward_magnitude <= 0.0) {
    throw std::invalid_argument("TreeSpec: reward_magnitude must be > 0");
  }
  if (spec.p_random < 0.0 || spec.p_random > 1.0) {
    throw std::invalid_argument("TreeSpec: p_random must be in [0, 1]");
  }
  state_count_ = geometric_node_count(spec.branching, spec.levels);
  internal_count_ = geometric_node_count(spec.branching, spec.levels - 1);
  action_count_ = spec.branching + (spec.shaky ? 1 : 0);
}

TreeMdp build_tree(const TreeSpec& spec) { return TreeMdp(spec); }

bool TreeMdp::on_leftmost_path(StateId s) const {
  // Every step up must come from the leftmost child (n*b + 1).
  while (s > 0) {
    if ((s - 1) % spec_.branching != 0) return false;
    s = (s - 1) / spec_.branching;
  }
  return true;
}

StateId TreeMdp::leftmost_node_at_layer(int layer) const {
  StateId node = 0;
  for (int l = 1; l < layer; ++l) node = child(node, 0);
  return node;
}

void TreeMdp::check_state(StateId s) const {
  if (s < 0 || s >= state_count_) {
    throw std::out_of_range("TreeMdp: state id " + std::to_string(s) +
                            " out of range");
  }
}

void TreeMdp::check_action(ActionId a) const {
  if (a < 0 || a >= action_count_) {
    throw std::out_of_range("TreeMdp: action id " + std::to_string(a) +
                            " out of range");
  }
}

double TreeMdp::gt_reward(StateId s, ActionId a) const {
  check_state(s);
  check_action(a);
  if (is_leaf(s) || is_parent_action(a)) return 0.0;
  return (a == 0 && on_leftmost_path(s)) ? spec_.reward_magnitude : 0.0;
}

Transition TreeMdp::step(StateId s, ActionId a, Rng& rng) const {
  check_state(s);
  check_action(a);
  if (is_leaf(s)) {
    throw std::invalid_argument("TreeMdp::step: cannot step from a leaf");
  }

  ActionId executed = a;
  if (spec_.shaky && uniform01(rng) < spec_.p_random) {
    executed = static_cast<ActionId>(uniform_below(rng, action_count_));
  }

  StateId next;
  if (is_parent_action(executed)) {
    next = parent(s);  // self-loop at the root
  } else {
    next = child(s, executed);
  }

  Transition t;
  t.state = s;
  t.action = a;
  t.reward = gt_reward(s, executed);
  t.next_state = next;
  t.done = is_leaf(next);
  return t;
}

Trajectory TreeMdp::leftmost_demo() const {
  Trajectory traj;
  traj.step_cap = spec_.levels - 1;
  StateId s = 0;
  for (int l = 0; l < spec_.levels - 1; ++l) {
    Transition t;
    t.state = s;
    t.action = 0;
    t.reward = spec_.reward_magnitude;
    t.next_state = child(s, 0);
    t.done = is_leaf(t.next_state);
    t.is_expert = true;
    if (!t.done) t.expert_next_action = 0;
    traj.total_return += t.reward;
    traj.transitions.push_back(t);
    s = t.next_state;
  }
  return traj;
}

Trajectory TreeMdp::rollout(const SoftmaxPolicy& policy, Rng& rng,
                            RolloutMode mode, int step_cap) const {
  Trajectory traj;
  traj.step_cap = step_cap;
  StateId s = root();
  for (int step_index = 0; step_index < step_cap; ++step_index) {
    const ActionId a = mode == RolloutMode::greedy
                           ? greedy_action(policy, s, action_count_)
                           : sample_action(policy, s, action_count_, rng);
    Transition t = step(s, a, rng);
    traj.total_return += t.reward;
    s = t.next_state;
    traj.transitions.push_back(std::move(t));
    if (traj.transitions.back().done) return traj;
  }
  traj.truncated = !traj.transitions.empty() && !traj.transitions.back().done;
  return traj;
}

int TreeMdp::default_step_cap() const {
  const int edges = spec_.levels - 1;
  return spec_.shaky ? 4 * edges : edges;
}

}  // namespace treeirl
