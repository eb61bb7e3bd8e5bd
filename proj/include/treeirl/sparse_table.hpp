#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <vector>

namespace treeirl {

using StateId = std::int64_t;
using ActionId = int;

/// Default-zero map from (state, action) to a scalar. Backs Q tables,
/// learned rewards, and policy logits. Only visited entries are stored;
/// reading a never-written key returns exactly 0.0.
class SparseTable {
 public:
  double get(StateId s, ActionId a) const {
    auto it = values_.find(key(s, a));
    return it == values_.end() ? 0.0 : it->second;
  }

  void set(StateId s, ActionId a, double v) { values_[key(s, a)] = v; }

  void add(StateId s, ActionId a, double dv) { values_[key(s, a)] += dv; }

  std::size_t size() const { return values_.size(); }

  bool contains(StateId s, ActionId a) const {
    return values_.count(key(s, a)) != 0;
  }

  /// Writes "state action value" per line, sorted by (state, action) so
  /// snapshots are diffable.
  void save(std::ostream& out) const;

  /// Reads the flat text format written by save(), replacing the contents.
  void load(std::istream& in);

  /// Entries sorted by (state, action).
  std::vector<std::tuple<StateId, ActionId, double>> sorted_entries() const;

 private:
  // Actions fit comfortably in one byte for tree MDPs (branching <= 255);
  // states take the remaining 56 bits.
  static std::uint64_t key(StateId s, ActionId a) {
    return (static_cast<std::uint64_t>(s) << 8) |
           (static_cast<std::uint64_t>(a) & 0xff);
  }

  std::unordered_map<std::uint64_t, double> values_;
};

}  // namespace treeirl
