#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treeirl/rng.hpp"
#include "treeirl/softmax_policy.hpp"
#include "treeirl/sparse_table.hpp"

namespace treeirl {

/// Parameters of a tree MDP. Node layers are counted from the root
/// (root = layer 1), so a tree with L levels has L-1 edges on any
/// root-to-leaf path.
struct TreeSpec {
  int branching = 2;
  int levels = 3;
  double reward_magnitude = 1.0;
  bool shaky = false;
  double p_random = 0.2;  // only used when shaky
};

/// One environment step: (s, a, r, s', done) plus expert annotations.
/// The action field is the chosen action; on shaky trees the executed
/// action may differ and is reflected only in reward and next_state.
struct Transition {
  StateId state = 0;
  ActionId action = 0;
  double reward = 0.0;
  StateId next_state = 0;
  bool done = false;
  bool is_expert = false;
  std::optional<ActionId> expert_next_action;  // set iff is_expert and !done
};

struct Trajectory {
  std::vector<Transition> transitions;
  double total_return = 0.0;  // ground-truth return at collection time
  int step_cap = 0;
  bool truncated = false;
};

enum class RolloutMode { sampled, greedy };

/// Finite tree MDP with level-order node ids: root = 0, descend-action k
/// at node n leads to child n*b + k + 1. Children of distinct (node,
/// action) pairs never collide, and every non-root node is reached by
/// exactly one pair. Leaves are terminal.
///
/// The shaky variant adds one action (id = branching) that climbs to the
/// parent (self-loop at the root) and executes a uniformly random action
/// instead of the chosen one with probability p_random.
///
/// All structure is arithmetic on ids; nothing is stored per state, so
/// multi-million-state trees are free to construct. Instances are
/// immutable and safe to share across threads.
class TreeMdp {
 public:
  explicit TreeMdp(const TreeSpec& spec);

  const TreeSpec& spec() const { return spec_; }
  std::int64_t state_count() const { return state_count_; }
  int action_count() const { return action_count_; }
  StateId root() const { return 0; }

  bool is_leaf(StateId s) const { return s >= internal_count_; }
  StateId child(StateId s, ActionId descend_action) const {
    return s * spec_.branching + descend_action + 1;
  }
  StateId parent(StateId s) const {
    return s == 0 ? 0 : (s - 1) / spec_.branching;
  }
  bool is_parent_action(ActionId a) const {
    return spec_.shaky && a == spec_.branching;
  }
  bool on_leftmost_path(StateId s) const;
  /// First node of the given layer (layer 1 = root); the leftmost path is
  /// exactly these nodes.
  StateId leftmost_node_at_layer(int layer) const;

  /// Ground-truth reward: reward_magnitude iff the state is on the
  /// leftmost path and the action is the leftmost descend-action.
  double gt_reward(StateId s, ActionId a) const;

  /// Executes one step from a non-terminal state. Clean trees descend
  /// deterministically; shaky trees execute a uniformly random action with
  /// probability p_random and reward the action actually executed.
  Transition step(StateId s, ActionId a, Rng& rng) const;

  /// The expert demonstration: levels-1 transitions straight down the
  /// leftmost path, unaffected by shaky hands.
  Trajectory leftmost_demo() const;

  /// Episode from the root until done or step_cap transitions.
  Trajectory rollout(const SoftmaxPolicy& policy, Rng& rng, RolloutMode mode,
                     int step_cap) const;
  Trajectory rollout(const SoftmaxPolicy& policy, Rng& rng,
                     RolloutMode mode) const {
    return rollout(policy, rng, mode, default_step_cap());
  }

  /// levels-1 on clean trees; 4*(levels-1) on shaky trees, which can
  /// wander upward.
  int default_step_cap() const;

 private:
  void check_state(StateId s) const;
  void check_action(ActionId a) const;

  TreeSpec spec_;
  std::int64_t state_count_ = 0;
  std::int64_t internal_count_ = 0;
  int action_count_ = 0;
};

/// Validates the spec and constructs the MDP.
TreeMdp build_tree(const TreeSpec& spec);

}  // namespace treeirl
