#include "ecaopt/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <utility>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/mip.hpp"
#include "ecaopt/preprocessing.hpp"

namespace ecaopt {

namespace {

using nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double saved_percent(std::int64_t unreduced, std::int64_t reduced) {
  if (unreduced <= 0) return 0.0;
  return 100.0 * static_cast<double>(unreduced - reduced) / static_cast<double>(unreduced);
}

ordered_json sizes_json(const ModelSizes& s) {
  ordered_json out;
  out["variables"] = s.variables;
  out["constraints"] = s.constraints;
  out["nonzeros"] = s.nonzeros;
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_double(double value) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

ordered_json instance_summary(const Instance& inst, const std::string& path,
                              std::string_view raw_text) {
  ordered_json out;
  out["path"] = path;
  out["digest"] = "fnv1a64:" + hex64(fnv1a64(raw_text));
  out["vertices"] = inst.vertices.size();
  out["arcs"] = inst.arcs.size();
  out["options"] = inst.options.size();
  out["budget"] = inst.budget;
  return out;
}

ordered_json solution_json(const Instance& inst, const Solution& sol) {
  ordered_json out;
  auto ids = ordered_json::array();
  for (int oi : sol.selected) ids.push_back(inst.options[oi].id);
  out["selected"] = std::move(ids);
  out["cost"] = sol.cost;
  out["eca"] = sol.eca;
  out["eca_squared"] = sol.eca_squared;
  return out;
}

ordered_json compute_payload(const Instance& inst, double area, bool per_target, int threads) {
  const EffectiveGraph g =
      apply_scenario(inst, Scenario(static_cast<int>(inst.options.size())));
  const DistanceMatrix m = build_distance_matrix(g, threads);
  const std::vector<double> f = per_target_f(m, g.vertex_weight, threads);
  const EcaValue v = eca_from_matrix(m, g.vertex_weight, threads);

  ordered_json out;
  out["total_weight"] = inst.total_weight();
  out["eca"] = v.eca;
  out["eca_squared"] = v.squared;
  if (area > 0.0) {
    out["area"] = area;
    out["pc"] = pc(v, area);
  }
  if (per_target) {
    auto rows = ordered_json::array();
    for (std::size_t t = 0; t < inst.vertices.size(); ++t) {
      ordered_json row;
      row["target"] = inst.vertices[t].id;
      row["f"] = f[t];
      rows.push_back(std::move(row));
    }
    out["per_target"] = std::move(rows);
  }
  return out;
}

ordered_json preprocess_payload(const Instance& inst, int threads) {
  const IntervalGraph ig = interval_graph(inst);
  const TargetSets sets = compute_all_sets(ig, threads);
  const std::vector<TargetReduction> reds = reduce_all(inst, sets, threads);

  auto targets = ordered_json::array();
  std::int64_t strong_total = 0, useless_total = 0;
  std::int64_t contracted_total = 0, removed_total = 0;
  int affected = 0;
  for (std::size_t t = 0; t < inst.vertices.size(); ++t) {
    const auto ns = sets.strong_arcs[t].size();
    const auto nu = sets.useless_arcs[t].size();
    strong_total += static_cast<std::int64_t>(ns);
    useless_total += static_cast<std::int64_t>(nu);
    contracted_total += reds[t].contracted;
    removed_total += reds[t].removed;
    if (ns + nu == 0) continue;
    ++affected;
    ordered_json row;
    row["target"] = inst.vertices[t].id;
    row["strong_arcs"] = ns;
    row["useless_arcs"] = nu;
    row["contracted_vertices"] = reds[t].contracted;
    row["removed_arcs"] = reds[t].removed;
    row["reduced_vertices"] = reds[t].graph.vertices.size();
    row["reduced_arcs"] = reds[t].graph.arcs.size();
    targets.push_back(std::move(row));
  }

  ordered_json aggregate;
  aggregate["strong_arcs"] = strong_total;
  aggregate["useless_arcs"] = useless_total;
  aggregate["contracted_vertices"] = contracted_total;
  aggregate["removed_arcs"] = removed_total;
  aggregate["targets_affected"] = affected;

  const ModelSizes u = count_bceca_sizes(inst, nullptr);
  const ModelSizes r = count_bceca_sizes(inst, &reds);
  ordered_json model;
  model["unreduced"] = sizes_json(u);
  model["reduced"] = sizes_json(r);
  ordered_json saved;
  saved["variables"] = saved_percent(u.variables, r.variables);
  saved["constraints"] = saved_percent(u.constraints, r.constraints);
  saved["nonzeros"] = saved_percent(u.nonzeros, r.nonzeros);
  model["saved_percent"] = std::move(saved);

  ordered_json out;
  out["targets"] = std::move(targets);
  out["aggregate"] = std::move(aggregate);
  out["model"] = std::move(model);
  return out;
}

ordered_json greedy_payload(const Instance& inst, GreedyKind kind, double budget,
                            const GreedyResult& res) {
  ordered_json out;
  out["algorithm"] = greedy_kind_name(kind);
  out["budget"] = budget;
  out["baseline_eca"] = res.baseline_eca;
  out["solution"] = solution_json(inst, res.solution);
  auto rows = ordered_json::array();
  for (const TraceEntry& e : res.trace) {
    ordered_json row;
    row["step"] = e.step;
    row["action"] = e.add ? "add" : "remove";
    row["option"] = inst.options[e.option].id;
    row["ratio"] = e.ratio;
    row["eca_after"] = e.eca_after;
    rows.push_back(std::move(row));
  }
  out["trace"] = std::move(rows);
  return out;
}

ordered_json exhaustive_payload(const Instance& inst, double budget, bool use_reductions,
                                std::uint64_t evaluated_subsets, const Solution& sol) {
  ordered_json out;
  out["algorithm"] = "exhaustive";
  out["budget"] = budget;
  out["preprocess"] = use_reductions;
  out["evaluated_subsets"] = evaluated_subsets;
  out["solution"] = solution_json(inst, sol);
  return out;
}

ordered_json sweep_payload(const Instance& inst, const std::vector<double>& budgets,
                           const OracleReport& rep) {
  ordered_json out;
  out["budgets"] = budgets;
  out["baseline_eca"] = rep.baseline_eca;
  out["evaluated_subsets"] = rep.evaluated_subsets;
  auto rows = ordered_json::array();
  for (const SweepRow& r : rep.rows) {
    ordered_json row;
    row["budget"] = r.budget;
    row["opt_eca"] = r.opt_eca;
    row["ig_eca"] = r.ig_eca;
    row["dg_eca"] = r.dg_eca;
    row["si_eca"] = r.si_eca;
    row["sd_eca"] = r.sd_eca;
    row["ig_ratio"] = r.ig_ratio;
    row["dg_ratio"] = r.dg_ratio;
    row["si_ratio"] = r.si_ratio;
    row["sd_ratio"] = r.sd_ratio;
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);

  auto summary = ordered_json::array();
  if (!rep.rows.empty()) {
    const char* names[] = {"ig", "dg", "si", "sd"};
    for (int a = 0; a < 4; ++a) {
      double mn = 0.0, sum = 0.0;
      bool first = true;
      for (const SweepRow& r : rep.rows) {
        const double v = a == 0   ? r.ig_ratio
                         : a == 1 ? r.dg_ratio
                         : a == 2 ? r.si_ratio
                                  : r.sd_ratio;
        mn = first ? v : std::min(mn, v);
        first = false;
        sum += v;
      }
      ordered_json row;
      row["algorithm"] = names[a];
      row["min_ratio"] = mn;
      row["avg_ratio"] = sum / static_cast<double>(rep.rows.size());
      summary.push_back(std::move(row));
    }
  }
  out["summary"] = std::move(summary);
  out["best"] = solution_json(inst, rep.best);
  return out;
}

MipExport mip_export(const Instance& inst, double budget, bool use_reductions, int threads) {
  std::vector<TargetReduction> reds;
  const std::vector<TargetReduction>* redp = nullptr;
  if (use_reductions) {
    reds = reduce_all(inst, threads);
    redp = &reds;
  }
  MipModel model = build_bceca_mip(inst, redp, budget);
  extend_vertex_improvements(model);

  MipExport out;
  out.lp = write_lp(model);
  out.mps = write_mps(model);
  out.metadata = write_metadata(model);
  out.payload["budget"] = budget;
  out.payload["preprocess"] = use_reductions;
  out.payload["sizes"] = sizes_json(model_sizes(model));
  return out;
}

std::string trace_csv(const Instance& inst, const std::vector<TraceEntry>& trace) {
  std::string out = "step,action,option,ratio,eca_after\n";
  for (const TraceEntry& e : trace) {
    out += std::to_string(e.step);
    out += e.add ? ",add," : ",remove,";
    out += csv_field(inst.options[e.option].id);
    out += ',';
    out += format_double(e.ratio);
    out += ',';
    out += format_double(e.eca_after);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const OracleReport& rep) {
  std::string out =
      "budget,opt_eca,ig_eca,dg_eca,si_eca,sd_eca,ig_ratio,dg_ratio,si_ratio,sd_ratio\n";
  for (const SweepRow& r : rep.rows) {
    out += format_double(r.budget);
    for (double v : {r.opt_eca, r.ig_eca, r.dg_eca, r.si_eca, r.sd_eca, r.ig_ratio, r.dg_ratio,
                     r.si_ratio, r.sd_ratio}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  if (rep.rows.empty()) return out;

  out += "\nalgorithm,min_ratio,avg_ratio\n";
  const char* names[] = {"ig", "dg", "si", "sd"};
  for (int a = 0; a < 4; ++a) {
    double mn = 0.0, sum = 0.0;
    bool first = true;
    for (const SweepRow& r : rep.rows) {
      const double v = a == 0   ? r.ig_ratio
                       : a == 1 ? r.dg_ratio
                       : a == 2 ? r.si_ratio
                                : r.sd_ratio;
      mn = first ? v : std::min(mn, v);
      first = false;
      sum += v;
    }
    out += names[a];
    out += ',';
    out += format_double(mn);
    out += ',';
    out += format_double(sum / static_cast<double>(rep.rows.size()));
    out += '\n';
  }
  return out;
}

}  // namespace ecaopt
