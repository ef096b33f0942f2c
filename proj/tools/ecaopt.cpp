// Command line front end. Every code path funnels results through the
// report builders so that output stays byte-identical across thread
// counts; wall-clock numbers live in the final "timing" block only.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecaopt/errors.hpp"
#include "ecaopt/generators.hpp"
#include "ecaopt/greedy.hpp"
#include "ecaopt/instance.hpp"
#include "ecaopt/oracle.hpp"
#include "ecaopt/parallel.hpp"
#include "ecaopt/report.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ecaopt::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ecaopt::ParseError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw ecaopt::ParseError("cannot write " + path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    write_file(out_path, text);
}

struct Loaded {
  ecaopt::Instance inst;
  std::string raw;
  double parse_s = 0.0;
};

Loaded load(const std::string& path) {
  const auto t0 = Clock::now();
  Loaded li;
  li.raw = read_file(path);
  li.inst = ecaopt::parse_instance(li.raw);
  li.parse_s = secs_since(t0);
  return li;
}

ordered_json timing_json(int threads, double parse_s, double preprocess_s, double model_build_s,
                         double solve_s) {
  ordered_json t;
  t["threads"] = threads;
  t["parse_s"] = parse_s;
  t["preprocess_s"] = preprocess_s;
  t["model_build_s"] = model_build_s;
  t["solve_s"] = solve_s;
  return t;
}

void emit_report(const ordered_json& doc, const std::string& out_path) {
  emit(doc.dump(2) + "\n", out_path);
}

ecaopt::GreedyKind kind_of(const std::string& name) {
  if (name == "ig") return ecaopt::GreedyKind::incremental;
  if (name == "dg") return ecaopt::GreedyKind::decremental;
  if (name == "si") return ecaopt::GreedyKind::static_incremental;
  return ecaopt::GreedyKind::static_decremental;
}

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

int run_compute(const std::string& path, double area, bool per_target, const std::string& out,
                int threads) {
  Loaded li = load(path);
  const auto t0 = Clock::now();
  ordered_json results = ecaopt::compute_payload(li.inst, area, per_target, threads);
  const double solve_s = secs_since(t0);

  ordered_json doc;
  doc["command"] = "compute";
  doc["instance"] = ecaopt::instance_summary(li.inst, path, li.raw);
  ordered_json params;
  if (area > 0.0) params["area"] = area;
  params["per_target"] = per_target;
  doc["parameters"] = std::move(params);
  doc["results"] = std::move(results);
  doc["timing"] = timing_json(threads, li.parse_s, 0.0, 0.0, solve_s);
  emit_report(doc, out);
  return 0;
}

int run_preprocess(const std::string& path, const std::string& out, int threads) {
  Loaded li = load(path);
  const auto t0 = Clock::now();
  ordered_json results = ecaopt::preprocess_payload(li.inst, threads);
  const double preprocess_s = secs_since(t0);

  ordered_json doc;
  doc["command"] = "preprocess";
  doc["instance"] = ecaopt::instance_summary(li.inst, path, li.raw);
  doc["parameters"] = ordered_json::object();
  doc["results"] = std::move(results);
  doc["timing"] = timing_json(threads, li.parse_s, preprocess_s, 0.0, 0.0);
  emit_report(doc, out);
  return 0;
}

int run_solve(const std::string& path, const std::string& algorithm, bool has_budget,
              double budget_flag, const std::string& preprocess, const std::string& out,
              const std::string& trace_out, int threads) {
  Loaded li = load(path);
  const double budget = has_budget ? budget_flag : li.inst.budget;
  const bool pre_on = preprocess == "on";

  ordered_json doc;
  doc["command"] = "solve";
  doc["instance"] = ecaopt::instance_summary(li.inst, path, li.raw);
  ordered_json params;
  params["algorithm"] = algorithm;
  params["budget"] = budget;
  params["preprocess"] = preprocess;
  doc["parameters"] = std::move(params);

  if (algorithm == "mip-export") {
    if (out.empty()) return usage_error("mip-export needs --out as the output base path");
    const auto t0 = Clock::now();
    ecaopt::MipExport ex = ecaopt::mip_export(li.inst, budget, pre_on, threads);
    const double model_build_s = secs_since(t0);
    write_file(out + ".lp", ex.lp);
    write_file(out + ".mps", ex.mps);
    write_file(out + ".meta.json", ex.metadata);

    ordered_json results = std::move(ex.payload);
    ordered_json files;
    files["lp"] = out + ".lp";
    files["mps"] = out + ".mps";
    files["metadata"] = out + ".meta.json";
    results["files"] = std::move(files);
    doc["results"] = std::move(results);
    doc["timing"] = timing_json(threads, li.parse_s, 0.0, model_build_s, 0.0);
    emit_report(doc, "");
    return 0;
  }

  if (algorithm == "exhaustive") {
    ecaopt::OracleOptions oo;
    oo.threads = threads;
    oo.use_reductions = pre_on;
    const auto t0 = Clock::now();
    std::uint64_t evaluated = 0;
    ecaopt::Solution sol = ecaopt::exhaustive_optimum(li.inst, budget, oo, &evaluated);
    const double solve_s = secs_since(t0);
    doc["results"] = ecaopt::exhaustive_payload(li.inst, budget, pre_on, evaluated, sol);
    doc["timing"] = timing_json(threads, li.parse_s, 0.0, 0.0, solve_s);
    emit_report(doc, out);
    return 0;
  }

  const ecaopt::GreedyKind kind = kind_of(algorithm);
  const auto t0 = Clock::now();
  ecaopt::GreedyResult res = ecaopt::run_greedy(kind, li.inst, budget, threads);
  const double solve_s = secs_since(t0);
  doc["results"] = ecaopt::greedy_payload(li.inst, kind, budget, res);
  doc["timing"] = timing_json(threads, li.parse_s, 0.0, 0.0, solve_s);
  if (!trace_out.empty()) write_file(trace_out, ecaopt::trace_csv(li.inst, res.trace));
  emit_report(doc, out);
  return 0;
}

int run_sweep(const std::string& path, const std::vector<double>& budgets,
              const std::string& preprocess, const std::string& out, int threads) {
  Loaded li = load(path);
  ecaopt::OracleOptions oo;
  oo.threads = threads;
  oo.use_reductions = preprocess == "on";
  ecaopt::OracleReport rep = ecaopt::budget_sweep(li.inst, budgets, oo);
  emit(ecaopt::sweep_csv(rep), out);
  return 0;
}

int run_generate(const std::string& family, int k, double eps,
                 const ecaopt::RandomInstanceParams& rp, const std::string& out, int threads) {
  ordered_json params;
  params["family"] = family;

  const auto t0 = Clock::now();
  ecaopt::Instance inst;
  if (family == "random") {
    inst = ecaopt::make_random_instance(rp);
    params["n"] = rp.n;
    params["mean_degree"] = rp.mean_degree;
    params["improvable_fraction"] = rp.improvable_fraction;
    params["seed"] = rp.seed;
  } else {
    if (k < 1 || k > 99) return usage_error("--k must be in [1, 99]");
    params["k"] = k;
    if (family == "dg_bad") {
      inst = ecaopt::make_dg_bad(k);
    } else {
      if (!(eps > 0.0 && eps < 1.0)) return usage_error("--eps must be in (0, 1)");
      params["eps"] = eps;
      inst = family == "ig_bad" ? ecaopt::make_ig_bad(k, eps) : ecaopt::make_both_bad(k, eps);
    }
  }
  const std::string text = ecaopt::serialize_instance(inst);
  const double solve_s = secs_since(t0);
  write_file(out, text);

  ordered_json doc;
  doc["command"] = "generate";
  doc["instance"] = ecaopt::instance_summary(inst, out, text);
  doc["parameters"] = std::move(params);
  doc["timing"] = timing_json(threads, 0.0, 0.0, 0.0, solve_s);
  emit_report(doc, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivalent connected area toolkit"};
  app.require_subcommand(1);

  int threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "worker threads; 0 reads ECAOPT_THREADS, default 1");

  std::string instance_path, out_path, trace_out;
  double area = 0.0;
  bool per_target = false;

  CLI::App* compute = app.add_subcommand("compute", "evaluate ECA (and PC) of an instance");
  compute->add_option("instance", instance_path, "instance JSON file")->required();
  compute->add_option("--area", area, "landscape area, enables the PC value")
      ->check(CLI::PositiveNumber);
  compute->add_flag("--per-target", per_target, "include the per-target f table");
  compute->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* preprocess = app.add_subcommand("preprocess", "report reduction statistics");
  preprocess->add_option("instance", instance_path, "instance JSON file")->required();
  preprocess->add_option("--out", out_path, "write the report here instead of stdout");

  std::string algorithm, pre_flag = "off";
  double budget_flag = 0.0;

  CLI::App* solve = app.add_subcommand("solve", "optimise purchases under a budget");
  solve->add_option("instance", instance_path, "instance JSON file")->required();
  CLI::Option* alg_opt =
      solve->add_option("--algorithm", algorithm, "ig, dg, si, sd, exhaustive or mip-export")
          ->required()
          ->check(CLI::IsMember({"ig", "dg", "si", "sd", "exhaustive", "mip-export"}));
  CLI::Option* budget_opt = solve->add_option("--budget", budget_flag,
                                              "overrides the budget stored in the instance")
                                ->check(CLI::NonNegativeNumber);
  solve->add_option("--preprocess", pre_flag, "apply the interval reductions (on/off)")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--out", out_path,
                    "report destination; for mip-export the base path of the model files");
  solve->add_option("--trace-out", trace_out, "write the greedy trace CSV here");
  (void)alg_opt;

  std::vector<double> budgets;
  CLI::App* sweep = app.add_subcommand("sweep", "optimum vs greedy table over budgets");
  sweep->add_option("instance", instance_path, "instance JSON file")->required();
  sweep->add_option("--budgets", budgets, "comma separated budget list")
      ->required()
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--preprocess", pre_flag, "evaluate through the reduced graphs (on/off)")
      ->check(CLI::IsMember({"on", "off"}));
  sweep->add_option("--out", out_path, "write the CSV here instead of stdout");

  std::string family;
  int k = 1;
  double eps = 0.01;
  ecaopt::RandomInstanceParams rp;

  CLI::App* generate = app.add_subcommand("generate", "write a benchmark instance");
  generate->add_option("--family", family, "ig_bad, dg_bad, both_bad or random")
      ->required()
      ->check(CLI::IsMember({"ig_bad", "dg_bad", "both_bad", "random"}));
  generate->add_option("--k", k, "size parameter of the bad-case families");
  generate->add_option("--eps", eps, "stub weight of the bad-case families");
  generate->add_option("--n", rp.n, "vertex count of the random family")
      ->check(CLI::PositiveNumber);
  generate->add_option("--mean-degree", rp.mean_degree, "target mean degree of the random family")
      ->check(CLI::PositiveNumber);
  generate->add_option("--improvable-fraction", rp.improvable_fraction,
                       "fraction of improvable arcs in the random family")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", rp.seed, "random family seed");
  generate->add_option("--out", out_path, "instance file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const int threads = ecaopt::resolve_threads(threads_flag);
    if (compute->parsed()) return run_compute(instance_path, area, per_target, out_path, threads);
    if (preprocess->parsed()) return run_preprocess(instance_path, out_path, threads);
    if (solve->parsed())
      return run_solve(instance_path, algorithm, budget_opt->count() > 0, budget_flag, pre_flag,
                       out_path, trace_out, threads);
    if (sweep->parsed()) return run_sweep(instance_path, budgets, pre_flag, out_path, threads);
    if (generate->parsed()) return run_generate(family, k, eps, rp, out_path, threads);
    return usage_error("no subcommand given");
  } catch (const ecaopt::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 4;
  } catch (const ecaopt::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const ecaopt::ValidationError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
