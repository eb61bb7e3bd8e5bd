#include "treeirl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace treeirl {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string param(double v) { return fmt("%.10g", v); }
std::string round_trip(double v) { return fmt("%.17g", v); }

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  writer(out);
  out.flush();
  if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace

std::string config_label(const IrlConfig& config) {
  std::ostringstream label;
  label << method_name(config.method) << "-b" << config.tree.branching << "-L"
        << config.tree.levels << "-pi" << param(config.learner.eta_pi) << "-r"
        << param(config.effective_expert_ratio());
  if (config.tree.shaky) label << "-shaky";
  return label.str();
}

double expert_return(const IrlConfig& config) {
  return config.tree.reward_magnitude * (config.tree.levels - 1);
}

namespace {

std::vector<std::string> grid_labels(const std::vector<IrlConfig>& grid) {
  std::vector<std::string> labels;
  labels.reserve(grid.size());
  std::map<std::string, int> seen;
  for (const IrlConfig& config : grid) {
    std::string label = config_label(config);
    const int n = seen[label]++;
    if (n > 0) label += "#" + std::to_string(n);
    labels.push_back(label);
  }
  return labels;
}

void aggregate_runs(SweepResult& result, const std::vector<IrlConfig>& grid,
                    const std::vector<std::string>& labels, int seeds) {
  const std::vector<double> fractions = {0.5, 0.7, 0.9};
  for (std::size_t ci = 0; ci < grid.size(); ++ci) {
    const RunRecord& first = result.runs[ci * seeds];
    const std::size_t iterations = first.curve.points.size();

    AggregateCurve agg;
    agg.config_id = labels[ci];
    agg.config = grid[ci];
    agg.mean_det.assign(iterations, 0.0);
    agg.std_det.assign(iterations, 0.0);
    agg.mean_sto.assign(iterations, 0.0);
    agg.std_sto.assign(iterations, 0.0);
    for (int si = 0; si < seeds; ++si) {
      const LearningCurve& curve = result.runs[ci * seeds + si].curve;
      for (std::size_t i = 0; i < iterations; ++i) {
        agg.mean_det[i] += curve.points[i].det_return;
        agg.mean_sto[i] += curve.points[i].sto_return;
      }
    }
    for (std::size_t i = 0; i < iterations; ++i) {
      agg.mean_det[i] /= seeds;
      agg.mean_sto[i] /= seeds;
    }
    for (int si = 0; si < seeds; ++si) {
      const LearningCurve& curve = result.runs[ci * seeds + si].curve;
      for (std::size_t i = 0; i < iterations; ++i) {
        const double dd = curve.points[i].det_return - agg.mean_det[i];
        const double ds = curve.points[i].sto_return - agg.mean_sto[i];
        agg.std_det[i] += dd * dd;
        agg.std_sto[i] += ds * ds;
      }
    }
    for (std::size_t i = 0; i < iterations; ++i) {
      agg.std_det[i] = std::sqrt(agg.std_det[i] / seeds);
      agg.std_sto[i] = std::sqrt(agg.std_sto[i] / seeds);
    }
    result.aggregates.push_back(std::move(agg));

    const double expert = expert_return(grid[ci]);
    for (const double fraction : fractions) {
      ThresholdRow row;
      row.config_id = labels[ci];
      row.fraction = fraction;
      double total = 0.0;
      for (int si = 0; si < seeds; ++si) {
        const auto reached = iterations_to_fraction(
            result.runs[ci * seeds + si].curve, expert, fraction);
        row.per_seed.push_back(reached);
        if (reached) ++row.reached_count;
        total += reached ? *reached : grid[ci].epochs;  // censor at budget
      }
      row.mean_iterations = total / seeds;
      result.thresholds.push_back(std::move(row));
    }
  }
}

}  // namespace

SweepResult run_sweep(const std::vector<IrlConfig>& grid, int seeds,
                      int parallelism, std::uint64_t master_seed) {
  if (grid.empty()) throw ConfigError("run_sweep: empty config grid");
  if (seeds < 1) throw ConfigError("run_sweep: seeds must be >= 1");
  for (const IrlConfig& config : grid) config.validate();

  const std::vector<std::string> labels = grid_labels(grid);

  SweepResult result;
  result.runs.resize(grid.size() * static_cast<std::size_t>(seeds));
  for (std::size_t ci = 0; ci < grid.size(); ++ci) {
    for (int si = 0; si < seeds; ++si) {
      const std::size_t index = ci * seeds + si;
      RunRecord& record = result.runs[index];
      record.config = grid[ci];
      record.config.seed = derive_seed(master_seed, index);
      record.config_id = labels[ci];
      record.run_id = static_cast<int>(index);
      record.seed_index = si;
    }
  }

  // Workers pull run indices from a shared counter; every run owns its
  // state and writes into its own slot, so scheduling cannot change the
  // result.
  const int workers =
      std::max(1, std::min<int>(parallelism, static_cast<int>(result.runs.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.runs.size()) return;
      try {
        RunRecord& record = result.runs[i];
        record.curve = run_irl(record.config);
        record.curve.config_id = record.config_id;
        record.curve.seed_index = record.seed_index;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  aggregate_runs(result, grid, labels, seeds);
  return result;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "run_id,method,branching,levels,eta_pi,expert_ratio,seed,iteration,"
         "det_return,sto_return\n";
  for (const RunRecord& record : result.runs) {
    const IrlConfig& config = record.config;
    std::ostringstream prefix;
    prefix << record.run_id << ',' << method_name(config.method) << ','
           << config.tree.branching << ',' << config.tree.levels << ','
           << param(config.learner.eta_pi) << ','
           << param(config.effective_expert_ratio()) << ','
           << record.seed_index << ',';
    for (const CurvePoint& p : record.curve.points) {
      out << prefix.str() << p.iteration << ',' << round_trip(p.det_return)
          << ',' << round_trip(p.sto_return) << '\n';
    }
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& out) { emit_csv(result, out); });
}

void emit_thresholds_csv(const SweepResult& result, std::ostream& out) {
  out << "config_id,fraction,seeds,reached,mean_iterations\n";
  for (const ThresholdRow& row : result.thresholds) {
    out << row.config_id << ',' << param(row.fraction) << ','
        << row.per_seed.size() << ',' << row.reached_count << ','
        << param(row.mean_iterations) << '\n';
  }
}

void emit_thresholds_csv(const SweepResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& out) { emit_thresholds_csv(result, out); });
}

namespace {

struct PanelKey {
  int branching;
  int levels;
  bool shaky;
  double eta_pi;
  auto operator<=>(const PanelKey&) const = default;
};

std::string panel_title(const PanelKey& key) {
  std::ostringstream title;
  title << "b=" << key.branching << " L=" << key.levels
        << " eta_pi=" << param(key.eta_pi);
  if (key.shaky) title << " (shaky)";
  return title.str();
}

std::string svg_num(double v) { return fmt("%.6g", v); }

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};

}  // namespace

void emit_svg(const SweepResult& result, std::ostream& out) {
  if (result.aggregates.empty()) {
    throw ConfigError("emit_svg: empty sweep result");
  }

  std::map<PanelKey, std::vector<const AggregateCurve*>> panels;
  for (const AggregateCurve& agg : result.aggregates) {
    const PanelKey key{agg.config.tree.branching, agg.config.tree.levels,
                       agg.config.tree.shaky, agg.config.learner.eta_pi};
    panels[key].push_back(&agg);
  }

  // Line label = method, plus the expert ratio when a panel varies it.
  auto line_label = [](const AggregateCurve& agg, bool show_ratio) {
    std::string label = method_name(agg.config.method);
    if (show_ratio) {
      label += " r=" + param(agg.config.effective_expert_ratio());
    }
    return label;
  };

  std::set<std::string> all_labels;
  std::map<const AggregateCurve*, std::string> labels;
  for (const auto& [key, curves] : panels) {
    std::set<double> ratios;
    for (const AggregateCurve* agg : curves) {
      ratios.insert(agg->config.effective_expert_ratio());
    }
    const bool show_ratio = ratios.size() > 1;
    for (const AggregateCurve* agg : curves) {
      labels[agg] = line_label(*agg, show_ratio);
      all_labels.insert(labels[agg]);
    }
  }
  std::map<std::string, std::string> color_of;
  int color_index = 0;
  for (const std::string& label : all_labels) {
    color_of[label] = kPalette[color_index++ % std::size(kPalette)];
  }

  constexpr int kPlotW = 520, kPlotH = 280;
  constexpr int kMarginL = 70, kMarginR = 170, kMarginT = 46, kMarginB = 56;
  const int panel_w = kMarginL + kPlotW + kMarginR;
  const int panel_h = kMarginT + kPlotH + kMarginB;
  const int total_h = panel_h * static_cast<int>(panels.size());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel_w
      << "\" height=\"" << total_h << "\" viewBox=\"0 0 " << panel_w << ' '
      << total_h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int panel_index = 0;
  for (const auto& [key, curves] : panels) {
    const int oy = panel_index * panel_h;
    double x_max = 1.0;
    double y_max = 0.0;
    for (const AggregateCurve* agg : curves) {
      x_max = std::max(x_max, static_cast<double>(agg->mean_det.size()) - 1.0);
      for (std::size_t i = 0; i < agg->mean_det.size(); ++i) {
        y_max = std::max(y_max, agg->mean_det[i] + agg->std_det[i]);
      }
    }
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;

    const auto x_of = [&](double it) {
      return kMarginL + kPlotW * (it / x_max);
    };
    const auto y_of = [&](double v) {
      return oy + kMarginT + kPlotH * (1.0 - v / y_max);
    };

    out << "<text x=\"" << kMarginL << "\" y=\"" << oy + kMarginT - 16
        << "\" font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\">"
        << panel_title(key) << "</text>\n";
    out << "<rect x=\"" << kMarginL << "\" y=\"" << oy + kMarginT
        << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int tick = 0; tick <= 4; ++tick) {
      const double ty = y_max * tick / 4.0;
      const double tx = x_max * tick / 4.0;
      out << "<text x=\"" << kMarginL - 6 << "\" y=\""
          << svg_num(y_of(ty) + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
          << fmt("%.4g", ty) << "</text>\n";
      out << "<text x=\"" << svg_num(x_of(tx)) << "\" y=\""
          << oy + kMarginT + kPlotH + 18
          << "\" font-family=\"sans-serif\" font-size=\"11\" "
             "text-anchor=\"middle\">"
          << fmt("%.4g", tx) << "</text>\n";
    }
    out << "<text x=\"" << kMarginL + kPlotW / 2 << "\" y=\""
        << oy + kMarginT + kPlotH + 40
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">iterations</text>\n";
    out << "<text x=\"18\" y=\"" << oy + kMarginT + kPlotH / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << oy + kMarginT + kPlotH / 2 << ")\">return</text>\n";

    int line_index = 0;
    for (const AggregateCurve* agg : curves) {
      const std::string& color = color_of[labels[agg]];
      const std::size_t n = agg->mean_det.size();

      out << "<path fill=\"" << color << "\" fill-opacity=\"0.15\" "
          << "stroke=\"none\" d=\"";
      for (std::size_t i = 0; i < n; ++i) {
        out << (i == 0 ? 'M' : 'L') << svg_num(x_of(static_cast<double>(i)))
            << ' ' << svg_num(y_of(agg->mean_det[i] + agg->std_det[i]));
      }
      for (std::size_t i = n; i-- > 0;) {
        out << 'L' << svg_num(x_of(static_cast<double>(i))) << ' '
            << svg_num(y_of(std::max(0.0, agg->mean_det[i] - agg->std_det[i])));
      }
      out << "Z\"/>\n";

      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.6\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        out << svg_num(x_of(static_cast<double>(i))) << ','
            << svg_num(y_of(agg->mean_det[i])) << ' ';
      }
      out << "\"/>\n";

      const int ly = oy + kMarginT + 14 + 18 * line_index;
      out << "<rect x=\"" << kMarginL + kPlotW + 14 << "\" y=\"" << ly - 9
          << "\" width=\"14\" height=\"4\" fill=\"" << color << "\"/>\n";
      out << "<text x=\"" << kMarginL + kPlotW + 34 << "\" y=\"" << ly
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << labels[agg]
          << "</text>\n";
      ++line_index;
    }
    ++panel_index;
  }
  out << "</svg>\n";
}

void emit_svg(const SweepResult& result, const std::string& path) {
  write_file(path, [&](std::ostream& out) { emit_svg(result, out); });
}

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_flat_config(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        " is not key = value: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        " has an empty key or value");
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

std::vector<IrlConfig> preset_grid(const std::string& name,
                                   const IrlConfig& base) {
  std::vector<IrlConfig> grid;
  if (name == "fig2") {
    for (const int branching : {10, 15}) {
      for (const double eta_pi : {0.01, 0.001, 0.0001}) {
        for (const Method method :
             {Method::baseline, Method::erb, Method::erb_eqb}) {
          IrlConfig config = base;
          config.tree.shaky = false;
          config.tree.branching = branching;
          config.learner.eta_pi = eta_pi;
          config.method = method;
          grid.push_back(config);
        }
      }
    }
  } else if (name == "shaky") {
    for (const Method method :
         {Method::bc, Method::baseline, Method::erb, Method::erb_eqb}) {
      IrlConfig config = base;
      config.tree.shaky = true;
      config.tree.branching = 3;
      config.tree.levels = 6;
      config.epochs = 800;
      config.method = method;
      grid.push_back(config);
    }
  } else if (name == "ratios") {
    // Run on the shaky tree: with deterministic dynamics the evaluation
    // path is exactly the set of states a pure-expert batch trains, so the
    // extremes only separate when perturbations force the policy off-path.
    for (const double ratio : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      IrlConfig config = base;
      config.tree.shaky = true;
      config.tree.branching = 3;
      config.tree.levels = 6;
      config.epochs = 200;
      config.method = Method::erb;
      config.expert_ratio = ratio;
      grid.push_back(config);
    }
  } else {
    throw ConfigError("unknown preset: " + name +
                      " (expected fig2, shaky, or ratios)");
  }
  return grid;
}

}  // namespace treeirl
