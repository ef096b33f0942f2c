#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecaopt/instance.hpp"
#include "ecaopt/preprocessing.hpp"
#include "ecaopt/solution.hpp"

namespace ecaopt {

enum class RowSense { le, eq };

struct LinearTerm {
  int var = -1;
  double coef = 0.0;
};

struct LinearRow {
  std::string name;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::vector<LinearTerm> terms;
};

struct Variable {
  std::string name;
  bool integral = false;  // integral vars are binaries here
};

struct VarRole {
  enum Kind { flow, flow_copy, f_value, f_improved, arc_binary, vertex_binary };
  Kind kind = flow;
  int target = -1;  // original vertex index of the owning block
  int origin = -1;  // instance arc index for flows
  int option = -1;  // option index for binaries and copies
};

// One flow block per target plus the coupling binaries. Also usable as a
// plain LP (no integral vars) for the single-target program.
struct MipModel {
  const Instance* instance = nullptr;
  std::vector<Variable> vars;
  std::vector<VarRole> roles;  // parallel to vars
  std::vector<LinearRow> rows;
  std::vector<LinearTerm> objective;  // sense is always maximize
  double budget = 0.0;
  int budget_row = -1;
  bool reduced = false;
  bool vertex_extension = false;

  // Structural handles the vertex-improvement extension rewrites through.
  struct Block {
    int target = -1;      // original vertex index
    int target_slot = -1;  // slot of the target inside this block's graph
    int f_var = -1;
    std::vector<int> vertex_rows;    // flow-conservation row per slot
    std::vector<int> slot_original;  // original vertex per slot
    std::vector<int> slot_option;    // vertex option per slot, -1 none
    std::vector<double> slot_delta;  // improved - base weight per slot
  };
  std::vector<Block> blocks;
};

struct ModelSizes {
  std::int64_t variables = 0;
  std::int64_t constraints = 0;
  std::int64_t nonzeros = 0;  // constraint-matrix entries (objective excluded)
};

// max z s.t. the flow relaxation at target t; the optimum equals f_t.
MipModel build_single_target_lp(const EffectiveGraph& g, int target);

// The budget-constrained formulation: per-target flow blocks with improved
// arc copies gated by purchase binaries. Pass reductions (one per vertex,
// from reduce_all) to build on the contracted graphs instead; objective
// weights stay the original ones either way.
MipModel build_bceca_mip(const Instance& inst, const std::vector<TargetReduction>* reductions,
                         double budget);

// Adds vertex-improvement binaries: RHS deltas on the conservation rows,
// McCormick-linearised objective terms, budget entries. Throws
// std::logic_error when called twice on the same model.
void extend_vertex_improvements(MipModel& model);

// Upper bound on flow through an improved copy of the arc: total weighted
// reliability into its source when everything is bought.
double big_m(const Instance& inst, int arc);
std::vector<double> big_m_table(const Instance& inst, int threads = 1);

// Sizes of the model build_bceca_mip would produce, without building it.
ModelSizes count_bceca_sizes(const Instance& inst,
                             const std::vector<TargetReduction>* reductions);
ModelSizes model_sizes(const MipModel& model);

std::string write_lp(const MipModel& model);
std::string write_mps(const MipModel& model);
std::string write_metadata(const MipModel& model);  // JSON sidecar for decoding

// Turns a solver assignment (variable name -> value) back into a purchase
// decision. Verifies binary integrality, the budget, and that the solver's
// objective agrees with a from-scratch ECA recomputation. Throws
// std::invalid_argument on any mismatch.
Solution decode_solution(const MipModel& model, const std::map<std::string, double>& values);

}  // namespace ecaopt
