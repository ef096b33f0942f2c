#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecaopt/greedy.hpp"
#include "ecaopt/instance.hpp"
#include "ecaopt/oracle.hpp"
#include "ecaopt/solution.hpp"

namespace ecaopt {

// Everything the CLI prints goes through here so that reports stay
// byte-identical across thread counts. Payload builders format results that
// were computed elsewhere; they never run solvers themselves. Timings are
// the caller's business and are kept out of payloads on purpose.

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

// Shortest round-trip decimal form, locale independent.
std::string format_double(double value);

// Header block naming the instance: path, content digest, counts, budget.
nlohmann::ordered_json instance_summary(const Instance& inst, const std::string& path,
                                        std::string_view raw_text);

nlohmann::ordered_json solution_json(const Instance& inst, const Solution& sol);

nlohmann::ordered_json compute_payload(const Instance& inst, double area, bool per_target,
                                       int threads);
nlohmann::ordered_json preprocess_payload(const Instance& inst, int threads);
nlohmann::ordered_json greedy_payload(const Instance& inst, GreedyKind kind, double budget,
                                      const GreedyResult& res);
nlohmann::ordered_json exhaustive_payload(const Instance& inst, double budget,
                                          bool use_reductions, std::uint64_t evaluated_subsets,
                                          const Solution& sol);
nlohmann::ordered_json sweep_payload(const Instance& inst, const std::vector<double>& budgets,
                                     const OracleReport& rep);

// Model files plus a payload describing them; written by `solve
// --algorithm mip-export`.
struct MipExport {
  nlohmann::ordered_json payload;
  std::string lp;
  std::string mps;
  std::string metadata;
};
MipExport mip_export(const Instance& inst, double budget, bool use_reductions, int threads);

// step,action,option,ratio,eca_after
std::string trace_csv(const Instance& inst, const std::vector<TraceEntry>& trace);

// budget,opt_eca,ig_eca,dg_eca,si_eca,sd_eca,ig_ratio,dg_ratio,si_ratio,
// sd_ratio; after a blank line, algorithm,min_ratio,avg_ratio summary rows.
std::string sweep_csv(const OracleReport& rep);

}  // namespace ecaopt
