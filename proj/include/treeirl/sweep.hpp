#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeirl/irl_loop.hpp"
#include "treeirl/metrics.hpp"

namespace treeirl {

/// Bad configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Failed file I/O (CLI exit code 2).
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunRecord {
  IrlConfig config;
  std::string config_id;
  int run_id = 0;      // position in the (config x seed) enumeration
  int seed_index = 0;  // 0..seeds-1
  LearningCurve curve;
};

/// Mean/std curves over seeds for one config (population std, matching
/// the usual shaded-band convention).
struct AggregateCurve {
  std::string config_id;
  IrlConfig config;
  std::vector<double> mean_det, std_det, mean_sto, std_sto;
};

/// Iterations-to-threshold summary for one (config, fraction); runs that
/// never reach the threshold are censored at the epoch budget.
struct ThresholdRow {
  std::string config_id;
  double fraction = 0.0;
  std::vector<std::optional<int>> per_seed;
  double mean_iterations = 0.0;
  int reached_count = 0;
};

struct SweepResult {
  std::vector<RunRecord> runs;  // canonical order: (grid index, seed index)
  std::vector<AggregateCurve> aggregates;
  std::vector<ThresholdRow> thresholds;  // fractions 0.5, 0.7, 0.9
};

/// Deterministic per-grid-entry id, e.g. "erb-b15-L7-pi0.0001-r0.5".
std::string config_label(const IrlConfig& config);

/// Ground-truth expert return for a config's tree.
double expert_return(const IrlConfig& config);

/// Runs every (config, seed) pair on a worker pool of the given size.
/// Each run's RNG stream is derived from (master_seed, run index), and
/// results land in preallocated slots, so the outcome is byte-identical
/// for any parallelism degree.
SweepResult run_sweep(const std::vector<IrlConfig>& grid, int seeds,
                      int parallelism, std::uint64_t master_seed);

/// One row per iteration per run:
/// run_id,method,branching,levels,eta_pi,expert_ratio,seed,iteration,
/// det_return,sto_return. Returns are printed with round-trip precision.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);

/// Iterations-to-threshold table (one row per config and fraction).
void emit_thresholds_csv(const SweepResult& result, std::ostream& out);
void emit_thresholds_csv(const SweepResult& result, const std::string& path);

/// One chart per (tree, eta_pi) panel; mean line per method (and per
/// expert ratio when a panel mixes ratios) with a +-1 std band.
void emit_svg(const SweepResult& result, std::ostream& out);
void emit_svg(const SweepResult& result, const std::string& path);

/// Parses a flat key = value config file ('#' starts a comment; blank
/// lines allowed). Order-preserving. Throws IoError when unreadable and
/// ConfigError on a malformed line.
std::vector<std::pair<std::string, std::string>> parse_flat_config(
    const std::string& path);

/// The three bundled studies; each pins the dimensions that are the study
/// and takes the rest from `base`.
///   fig2:   {baseline, erb, erb-eqb} x branching {10, 15} x eta_pi
///           {0.01, 0.001, 0.0001} on the clean tree (levels/epochs from
///           base).
///   shaky:  {bc, baseline, erb, erb-eqb} on the shaky b=3, 6-level tree,
///           800 epochs.
///   ratios: erb with expert_ratio {0, 0.25, 0.5, 0.75, 1} on the same
///           shaky tree, 200 epochs.
std::vector<IrlConfig> preset_grid(const std::string& name,
                                   const IrlConfig& base);

}  // namespace treeirl
