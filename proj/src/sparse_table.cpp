#include "treeirl/sparse_table.hpp"

#include <cinttypes>
#include <cstdio>
#include <string>
#include <tuple>

namespace treeirl {

std::vector<std::tuple<StateId, ActionId, double>> SparseTable::sorted_entries()
    const {
  std::vector<std::tuple<StateId, ActionId, double>> entries;
  entries.reserve(values_.size());
  for (const auto& [k, v] : values_) {
    entries.emplace_back(static_cast<StateId>(k >> 8),
                         static_cast<ActionId>(k & 0xff), v);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& lhs, const auto& rhs) {
              return std::tie(std::get<0>(lhs), std::get<1>(lhs)) <
                     std::tie(std::get<0>(rhs), std::get<1>(rhs));
            });
  return entries;
}

void SparseTable::save(std::ostream& out) const {
  char line[80];
  for (const auto& [s, a, v] : sorted_entries()) {
    std::snprintf(line, sizeof(line), "%" PRId64 " %d %.17g\n", s, a, v);
    out << line;
  }
}

void SparseTable::load(std::istream& in) {
  values_.clear();
  StateId s = 0;
  long long a = 0;
  double v = 0.0;
  while (in >> s >> a >> v) {
    set(s, static_cast<ActionId>(a), v);
  }
}

}  // namespace treeirl
