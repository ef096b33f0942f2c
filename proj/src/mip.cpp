#include "ecaopt/mip.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/kernels.hpp"

namespace ecaopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int add_var(MipModel& m, std::string name, bool integral, VarRole role) {
  const int idx = static_cast<int>(m.vars.size());
  m.vars.push_back(Variable{std::move(name), integral});
  m.roles.push_back(role);
  return idx;
}

// The uncontracted instance in ReducedGraph clothing, so the builder only
// has to know one graph shape. target stays unset; callers pass the slot.
ReducedGraph identity_view(const Instance& inst) {
  ReducedGraph g;
  g.vertices.reserve(inst.vertices.size());
  for (int z = 0; z < static_cast<int>(inst.vertices.size()); ++z) {
    const Vertex& v = inst.vertices[z];
    ReducedVertex rv;
    rv.original = z;
    rv.weight = v.weight;
    rv.improved_weight = v.improvement ? v.improvement->weight : v.weight;
    rv.option = inst.vertex_option(z);
    g.vertices.push_back(rv);
  }
  g.arcs.reserve(inst.arcs.size());
  for (int a = 0; a < static_cast<int>(inst.arcs.size()); ++a) {
    const Arc& arc = inst.arcs[a];
    ReducedArc ra;
    ra.source = arc.source;
    ra.target = arc.target;
    ra.upper = probability_to_length(arc.probability);
    ra.lower = arc.improvement ? probability_to_length(arc.improvement->probability) : ra.upper;
    ra.option = arc.option;
    ra.origin = a;
    g.arcs.push_back(ra);
  }
  return g;
}

}  // namespace

MipModel build_single_target_lp(const EffectiveGraph& g, int target) {
  const Instance& inst = *g.instance;
  const int n = static_cast<int>(inst.vertices.size());
  if (target < 0 || target >= n)
    throw std::invalid_argument("build_single_target_lp: target out of range");

  MipModel m;
  m.instance = &inst;

  const int zvar = add_var(m, "z", false, VarRole{VarRole::f_value, target, -1, -1});
  std::vector<int> phi(inst.arcs.size(), -1);
  for (int a = 0; a < static_cast<int>(inst.arcs.size()); ++a)
    phi[a] = add_var(m, "phi_a" + std::to_string(a), false,
                     VarRole{VarRole::flow, target, a, -1});

  std::vector<std::vector<LinearTerm>> acc(static_cast<std::size_t>(n));
  for (int a = 0; a < static_cast<int>(inst.arcs.size()); ++a) {
    const Arc& arc = inst.arcs[a];
    acc[arc.source].push_back({phi[a], 1.0});
    const double p = std::exp(-g.arc_length[a]);
    if (p > 0.0) acc[arc.target].push_back({phi[a], -p});
  }

  for (int u = 0; u < n; ++u) {
    LinearRow row;
    row.rhs = g.vertex_weight[u];
    row.terms = std::move(acc[u]);
    if (u == target) {
      row.name = "a2";
      row.sense = RowSense::eq;
      row.terms.push_back({zvar, 1.0});
    } else {
      row.name = "a1_v" + std::to_string(u);
      row.sense = RowSense::le;
    }
    m.rows.push_back(std::move(row));
  }

  m.objective.push_back({zvar, 1.0});
  return m;
}

std::vector<double> big_m_table(const Instance& inst, int threads) {
  Scenario all(static_cast<int>(inst.options.size()));
  for (int oi = 0; oi < all.size(); ++oi) all.set(oi, true);
  const EffectiveGraph eff = apply_scenario(inst, all);
  const DistanceMatrix m = build_distance_matrix(eff, threads);
  return per_target_f(m, eff.vertex_weight, threads);
}

double big_m(const Instance& inst, int arc) {
  if (arc < 0 || arc >= static_cast<int>(inst.arcs.size()))
    throw std::invalid_argument("big_m: arc out of range");
  Scenario all(static_cast<int>(inst.options.size()));
  for (int oi = 0; oi < all.size(); ++oi) all.set(oi, true);
  const EffectiveGraph eff = apply_scenario(inst, all);
  const std::vector<double> probs = reliabilities_to_target(eff, inst.arcs[arc].source);
  return kernels::active().weighted_sum(eff.vertex_weight.data(), probs.data(),
                                        probs.size());
}

MipModel build_bceca_mip(const Instance& inst, const std::vector<TargetReduction>* reductions,
                         double budget) {
  const int n = static_cast<int>(inst.vertices.size());
  if (!(budget >= 0.0)) throw std::invalid_argument("build_bceca_mip: budget must be >= 0");
  if (reductions && static_cast<int>(reductions->size()) != n)
    throw std::invalid_argument("build_bceca_mip: need one reduction per vertex");

  MipModel m;
  m.instance = &inst;
  m.budget = budget;
  m.reduced = reductions != nullptr;

  std::vector<int> xvar(inst.options.size(), -1);
  for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi) {
    if (inst.options[oi].kind != OptionKind::arc_upgrade) continue;
    xvar[oi] = add_var(m, "x_o" + std::to_string(oi), true,
                       VarRole{VarRole::arc_binary, -1, -1, oi});
  }

  bool any_arc_option = false;
  for (int v : xvar) any_arc_option = any_arc_option || v >= 0;
  if (any_arc_option) {
    m.budget_row = static_cast<int>(m.rows.size());
    LinearRow bud;
    bud.name = "bud";
    bud.sense = RowSense::le;
    bud.rhs = budget;
    for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi)
      if (xvar[oi] >= 0) bud.terms.push_back({xvar[oi], inst.options[oi].cost});
    m.rows.push_back(std::move(bud));
  }

  const std::vector<double> bigm = big_m_table(inst);
  ReducedGraph ident;
  if (!reductions) ident = identity_view(inst);

  for (int t = 0; t < n; ++t) {
    const ReducedGraph& g = reductions ? (*reductions)[t].graph : ident;
    const int tslot = reductions ? g.target : t;
    const std::string ts = std::to_string(t);
    const int slots = static_cast<int>(g.vertices.size());

    MipModel::Block blk;
    blk.target = t;
    blk.target_slot = tslot;
    blk.f_var = add_var(m, "f_t" + ts, false, VarRole{VarRole::f_value, t, -1, -1});

    std::vector<int> phi(g.arcs.size(), -1);
    std::vector<std::vector<LinearTerm>> acc(static_cast<std::size_t>(slots));
    for (int k = 0; k < static_cast<int>(g.arcs.size()); ++k) {
      const ReducedArc& arc = g.arcs[k];
      phi[k] = add_var(m, "phi_t" + ts + "_a" + std::to_string(k), false,
                       VarRole{VarRole::flow, t, arc.origin, -1});
      acc[arc.source].push_back({phi[k], 1.0});
      const double p = std::exp(-arc.upper);
      if (p > 0.0) acc[arc.target].push_back({phi[k], -p});
    }
    std::vector<int> copy(g.arcs.size(), -1);
    for (int k = 0; k < static_cast<int>(g.arcs.size()); ++k) {
      const ReducedArc& arc = g.arcs[k];
      if (arc.option < 0) continue;
      copy[k] = add_var(m, "phi_t" + ts + "_c" + std::to_string(k), false,
                        VarRole{VarRole::flow_copy, t, arc.origin, arc.option});
      acc[arc.source].push_back({copy[k], 1.0});
      const double pimp = std::exp(-arc.lower);
      if (pimp > 0.0) acc[arc.target].push_back({copy[k], -pimp});
    }

    for (int u = 0; u < slots; ++u) {
      LinearRow row;
      row.rhs = g.vertices[u].weight;
      row.terms = std::move(acc[u]);
      if (u == tslot) {
        row.name = "b2_t" + ts;
        row.sense = RowSense::eq;
        row.terms.push_back({blk.f_var, 1.0});
      } else {
        row.name = "b1_t" + ts + "_v" + std::to_string(u);
        row.sense = RowSense::le;
      }
      blk.vertex_rows.push_back(static_cast<int>(m.rows.size()));
      m.rows.push_back(std::move(row));
    }

    for (int k = 0; k < static_cast<int>(g.arcs.size()); ++k) {
      if (copy[k] < 0) continue;
      const ReducedArc& arc = g.arcs[k];
      LinearRow row;
      row.name = "b3_t" + ts + "_a" + std::to_string(k);
      row.sense = RowSense::le;
      row.rhs = 0.0;
      row.terms.push_back({copy[k], 1.0});
      // The gate term stays even when M is zero; it is the structure of
      // the constraint, not an incidence that may vanish.
      row.terms.push_back({xvar[arc.option], -bigm[g.vertices[arc.source].original]});
      m.rows.push_back(std::move(row));
    }

    for (int u = 0; u < slots; ++u) {
      blk.slot_original.push_back(g.vertices[u].original);
      blk.slot_option.push_back(g.vertices[u].option);
      blk.slot_delta.push_back(g.vertices[u].improved_weight - g.vertices[u].weight);
    }

    const double wt = inst.vertices[t].weight;
    if (wt != 0.0) m.objective.push_back({blk.f_var, wt});
    m.blocks.push_back(std::move(blk));
  }

  return m;
}

void extend_vertex_improvements(MipModel& m) {
  if (m.vertex_extension)
    throw std::logic_error("extend_vertex_improvements: already applied to this model");
  if (!m.instance)
    throw std::invalid_argument("extend_vertex_improvements: model has no instance");
  const Instance& inst = *m.instance;
  m.vertex_extension = true;

  std::vector<int> yvar(inst.options.size(), -1);
  bool any = false;
  for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi)
    any = any || inst.options[oi].kind == OptionKind::vertex_upgrade;
  if (!any) return;

  if (m.budget_row < 0) {
    m.budget_row = static_cast<int>(m.rows.size());
    LinearRow bud;
    bud.name = "bud";
    bud.sense = RowSense::le;
    bud.rhs = m.budget;
    m.rows.push_back(std::move(bud));
  }
  for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi) {
    if (inst.options[oi].kind != OptionKind::vertex_upgrade) continue;
    yvar[oi] = add_var(m, "y_o" + std::to_string(oi), true,
                       VarRole{VarRole::vertex_binary, -1, -1, oi});
    m.rows[m.budget_row].terms.push_back({yvar[oi], inst.options[oi].cost});
  }

  // Buying y_u raises the conservation RHS at u from w_u to w_u + delta:
  // keep the row RHS and move -delta * y_u to the left side.
  for (MipModel::Block& blk : m.blocks) {
    for (int s = 0; s < static_cast<int>(blk.slot_option.size()); ++s) {
      const int oi = blk.slot_option[s];
      if (oi < 0) continue;
      const double delta = blk.slot_delta[s];
      if (delta == 0.0) continue;
      m.rows[blk.vertex_rows[s]].terms.push_back({yvar[oi], -delta});
    }
  }

  // Objective gains delta_t * y_t * f_t per improvable target, linearised
  // through fp_t <= f_t, fp_t <= M y_t with M bounding any f value.
  double total_improved_weight = 0.0;
  for (const Vertex& v : inst.vertices)
    total_improved_weight += v.improvement ? v.improvement->weight : v.weight;

  for (MipModel::Block& blk : m.blocks) {
    const int oi = blk.slot_option[blk.target_slot];
    if (oi < 0) continue;
    const double delta = blk.slot_delta[blk.target_slot];
    const std::string ts = std::to_string(blk.target);
    const int fp = add_var(m, "fp_t" + ts, false,
                           VarRole{VarRole::f_improved, blk.target, -1, oi});
    if (delta != 0.0) m.objective.push_back({fp, delta});

    LinearRow cap;
    cap.name = "mc1_t" + ts;
    cap.sense = RowSense::le;
    cap.rhs = 0.0;
    cap.terms.push_back({fp, 1.0});
    cap.terms.push_back({blk.f_var, -1.0});
    m.rows.push_back(std::move(cap));

    LinearRow gate;
    gate.name = "mc2_t" + ts;
    gate.sense = RowSense::le;
    gate.rhs = 0.0;
    gate.terms.push_back({fp, 1.0});
    gate.terms.push_back({yvar[oi], -total_improved_weight});
    m.rows.push_back(std::move(gate));
  }
}

ModelSizes count_bceca_sizes(const Instance& inst,
                             const std::vector<TargetReduction>* reductions) {
  const int n = static_cast<int>(inst.vertices.size());
  if (reductions && static_cast<int>(reductions->size()) != n)
    throw std::invalid_argument("count_bceca_sizes: need one reduction per vertex");

  ModelSizes s;
  std::int64_t arc_options = 0;
  for (const ImprovementOption& o : inst.options)
    if (o.kind == OptionKind::arc_upgrade) ++arc_options;
  s.variables += arc_options;
  if (arc_options > 0) {
    s.constraints += 1;
    s.nonzeros += arc_options;
  }

  const auto add_block = [&s](std::int64_t verts, std::int64_t arcs, std::int64_t copies,
                              std::int64_t finite_in, std::int64_t finite_in_improved) {
    s.variables += 1 + arcs + copies;
    s.constraints += verts + copies;
    // per arc: outflow + maybe inflow; per copy: outflow + maybe inflow +
    // the two B3 entries; plus f in the target row
    s.nonzeros += 1 + arcs + finite_in + 3 * copies + finite_in_improved;
  };

  if (reductions) {
    for (int t = 0; t < n; ++t) {
      const ReducedGraph& g = (*reductions)[t].graph;
      std::int64_t copies = 0, finite_in = 0, finite_in_improved = 0;
      for (const ReducedArc& a : g.arcs) {
        if (std::exp(-a.upper) > 0.0) ++finite_in;
        if (a.option >= 0) {
          ++copies;
          if (std::exp(-a.lower) > 0.0) ++finite_in_improved;
        }
      }
      add_block(static_cast<std::int64_t>(g.vertices.size()),
                static_cast<std::int64_t>(g.arcs.size()), copies, finite_in,
                finite_in_improved);
    }
  } else {
    std::int64_t copies = 0, finite_in = 0;
    for (const Arc& a : inst.arcs) {
      if (a.option >= 0) ++copies;  // improved probabilities are always positive
      if (a.probability > 0.0) ++finite_in;
    }
    for (int t = 0; t < n; ++t)
      add_block(n, static_cast<std::int64_t>(inst.arcs.size()), copies, finite_in, copies);
  }
  return s;
}

ModelSizes model_sizes(const MipModel& m) {
  ModelSizes s;
  s.variables = static_cast<std::int64_t>(m.vars.size());
  s.constraints = static_cast<std::int64_t>(m.rows.size());
  for (const LinearRow& row : m.rows) s.nonzeros += static_cast<std::int64_t>(row.terms.size());
  return s;
}

namespace {

void append_terms(std::string& out, const MipModel& m, const std::vector<LinearTerm>& terms,
                  std::string& line) {
  bool first = true;
  for (const LinearTerm& t : terms) {
    std::string piece;
    if (first) {
      piece = (t.coef < 0.0 ? "-" : "") + fmt(std::fabs(t.coef)) + " " + m.vars[t.var].name;
      first = false;
    } else {
      piece = (t.coef < 0.0 ? "- " : "+ ") + fmt(std::fabs(t.coef)) + " " + m.vars[t.var].name;
    }
    if (line.size() + piece.size() > 230) {
      out += line;
      out += "\n";
      line = "   ";
    }
    line += " " + piece;
  }
  if (first) {
    // A vacuous row still needs a syntactically valid left side.
    line += " 0 " + m.vars[0].name;
  }
}

}  // namespace

std::string write_lp(const MipModel& m) {
  if (m.vars.empty()) throw std::invalid_argument("write_lp: empty model");
  std::string out;
  out += "\\ ecaopt exported model\n";
  out += "Maximize\n";
  {
    std::string line = " obj:";
    append_terms(out, m, m.objective, line);
    out += line;
    out += "\n";
  }
  out += "Subject To\n";
  for (const LinearRow& row : m.rows) {
    std::string line = " " + row.name + ":";
    append_terms(out, m, row.terms, line);
    line += row.sense == RowSense::eq ? " = " : " <= ";
    line += fmt(row.rhs);
    out += line;
    out += "\n";
  }
  bool any_bin = false;
  for (const Variable& v : m.vars) any_bin = any_bin || v.integral;
  if (any_bin) {
    out += "Binaries\n";
    std::string line = "";
    for (const Variable& v : m.vars) {
      if (!v.integral) continue;
      if (line.size() + v.name.size() > 230) {
        out += line;
        out += "\n";
        line = "";
      }
      line += " " + v.name;
    }
    if (!line.empty()) {
      out += line;
      out += "\n";
    }
  }
  out += "End\n";
  return out;
}

std::string write_mps(const MipModel& m) {
  if (m.vars.empty()) throw std::invalid_argument("write_mps: empty model");
  std::string out;
  out += "NAME ecaopt\n";
  out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n N obj\n";
  for (const LinearRow& row : m.rows) {
    out += row.sense == RowSense::eq ? " E " : " L ";
    out += row.name;
    out += "\n";
  }

  // Column-major view: objective entry first, then row entries in row order.
  std::vector<std::vector<std::pair<int, double>>> cols(m.vars.size());
  for (const LinearTerm& t : m.objective) cols[t.var].push_back({-1, t.coef});
  for (int r = 0; r < static_cast<int>(m.rows.size()); ++r)
    for (const LinearTerm& t : m.rows[r].terms) cols[t.var].push_back({r, t.coef});

  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int v = 0; v < static_cast<int>(m.vars.size()); ++v) {
    if (m.vars[v].integral != in_int) {
      out += "    M" + std::to_string(marker++) + " 'MARKER' ";
      out += in_int ? "'INTEND'" : "'INTORG'";
      out += "\n";
      in_int = m.vars[v].integral;
    }
    if (cols[v].empty()) {
      out += "    " + m.vars[v].name + " obj 0\n";
      continue;
    }
    for (const auto& [r, coef] : cols[v]) {
      out += "    " + m.vars[v].name + " " + (r < 0 ? "obj" : m.rows[r].name) + " " +
             fmt(coef) + "\n";
    }
  }
  if (in_int) out += "    M" + std::to_string(marker++) + " 'MARKER' 'INTEND'\n";

  out += "RHS\n";
  for (const LinearRow& row : m.rows)
    out += "    rhs " + row.name + " " + fmt(row.rhs) + "\n";

  bool any_bin = false;
  for (const Variable& v : m.vars) any_bin = any_bin || v.integral;
  if (any_bin) {
    out += "BOUNDS\n";
    for (const Variable& v : m.vars)
      if (v.integral) out += " BV bnd " + v.name + "\n";
  }
  out += "ENDATA\n";
  return out;
}

std::string write_metadata(const MipModel& m) {
  if (!m.instance) throw std::invalid_argument("write_metadata: model has no instance");
  const Instance& inst = *m.instance;
  nlohmann::ordered_json doc;
  doc["format"] = "bceca-mip";
  doc["version"] = 1;
  doc["objective_sense"] = "maximize";
  doc["budget"] = m.budget;
  doc["reduced"] = m.reduced;
  doc["vertex_extension"] = m.vertex_extension;
  const ModelSizes s = model_sizes(m);
  doc["sizes"] = {{"variables", s.variables},
                  {"constraints", s.constraints},
                  {"nonzeros", s.nonzeros}};
  nlohmann::ordered_json bins = nlohmann::ordered_json::array();
  nlohmann::ordered_json fvars = nlohmann::ordered_json::array();
  for (int v = 0; v < static_cast<int>(m.vars.size()); ++v) {
    const VarRole& role = m.roles[v];
    if (role.kind == VarRole::arc_binary || role.kind == VarRole::vertex_binary) {
      const ImprovementOption& o = inst.options[role.option];
      bins.push_back({{"name", m.vars[v].name},
                      {"option", o.id},
                      {"cost", o.cost},
                      {"kind", role.kind == VarRole::arc_binary ? "arc" : "vertex"}});
    } else if (role.kind == VarRole::f_value && role.target >= 0) {
      fvars.push_back({{"name", m.vars[v].name}, {"target", inst.vertices[role.target].id}});
    }
  }
  doc["binaries"] = std::move(bins);
  doc["f_variables"] = std::move(fvars);
  return doc.dump(2) + "\n";
}

Solution decode_solution(const MipModel& m, const std::map<std::string, double>& values) {
  if (!m.instance) throw std::invalid_argument("decode_solution: model has no instance");
  const Instance& inst = *m.instance;

  const auto get = [&values](const std::string& name) {
    const auto it = values.find(name);
    if (it == values.end())
      throw std::invalid_argument("decode_solution: no value for variable " + name);
    return it->second;
  };

  Scenario x(static_cast<int>(inst.options.size()));
  for (int v = 0; v < static_cast<int>(m.vars.size()); ++v) {
    const VarRole& role = m.roles[v];
    if (role.kind != VarRole::arc_binary && role.kind != VarRole::vertex_binary) continue;
    const double val = get(m.vars[v].name);
    bool on;
    if (std::fabs(val) <= 1e-6) {
      on = false;
    } else if (std::fabs(val - 1.0) <= 1e-6) {
      on = true;
    } else {
      throw std::invalid_argument("decode_solution: " + m.vars[v].name + " = " + fmt(val) +
                                  " is not within 1e-6 of a binary value");
    }
    x.set(role.option, on);
  }

  const double cost = scenario_cost(inst, x);
  if (cost > m.budget + 1e-9)
    throw std::invalid_argument("decode_solution: selection costs " + fmt(cost) +
                                ", over the budget " + fmt(m.budget));

  const EffectiveGraph eff = apply_scenario(inst, x);
  const DistanceMatrix dm = build_distance_matrix(eff);
  const std::vector<double> f = per_target_f(dm, eff.vertex_weight);
  const double squared = kernels::active().weighted_sum(eff.vertex_weight.data(), f.data(),
                                                        f.size());

  double claimed = 0.0;
  for (const LinearTerm& t : m.objective) claimed += t.coef * get(m.vars[t.var].name);
  if (std::fabs(claimed - squared) > 1e-6 * std::fmax(1.0, std::fabs(squared)))
    throw std::invalid_argument("decode_solution: solver objective " + fmt(claimed) +
                                " disagrees with recomputed ECA^2 " + fmt(squared));

  Solution sol;
  sol.scenario = x;
  for (int oi = 0; oi < x.size(); ++oi)
    if (x.selected(oi)) sol.selected.push_back(oi);
  sol.cost = cost;
  sol.eca_squared = squared;
  sol.eca = std::sqrt(squared < 0.0 ? 0.0 : squared);
  sol.per_target_f = f;
  return sol;
}

}  // namespace ecaopt
