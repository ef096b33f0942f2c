#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/generators.hpp"
#include "ecaopt/greedy.hpp"
#include "ecaopt/instance.hpp"
#include "support/builders.hpp"
#include "support/reference.hpp"

using namespace ecaopt;
using namespace ecaopt::testref;

namespace {

const GreedyKind kAllKinds[] = {GreedyKind::incremental, GreedyKind::decremental,
                                GreedyKind::static_incremental, GreedyKind::static_decremental};

double eca_of(const Instance& inst, const Scenario& sc) {
  return eca(apply_scenario(inst, sc)).eca;
}

}  // namespace

TEST_CASE("greedy: names follow the short-form convention") {
  CHECK(std::string(greedy_kind_name(GreedyKind::incremental)) == "ig");
  CHECK(std::string(greedy_kind_name(GreedyKind::decremental)) == "dg");
  CHECK(std::string(greedy_kind_name(GreedyKind::static_incremental)) == "si");
  CHECK(std::string(greedy_kind_name(GreedyKind::static_decremental)) == "sd");
}

TEST_CASE("greedy: solutions respect the budget and report their own ECA") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    Instance inst = random_test_instance(rng);
    for (GreedyKind kind : kAllKinds) {
      GreedyResult res = run_greedy(kind, inst, inst.budget);
      CAPTURE(trial);
      CAPTURE(greedy_kind_name(kind));
      CHECK(res.solution.cost <= inst.budget + 1e-9);
      CHECK(res.solution.cost ==
            doctest::Approx(scenario_cost(inst, res.solution.scenario)).epsilon(1e-12));
      CHECK(res.solution.eca ==
            doctest::Approx(eca_of(inst, res.solution.scenario)).epsilon(1e-9));
      CHECK(res.solution.eca_squared ==
            doctest::Approx(res.solution.eca * res.solution.eca).epsilon(1e-12));
      CHECK(res.baseline_eca ==
            doctest::Approx(eca_of(inst, Scenario((int)inst.options.size()))).epsilon(1e-9));
      CHECK(res.solution.eca >= res.baseline_eca - 1e-12);

      std::set<int> from_scenario;
      for (int oi = 0; oi < (int)inst.options.size(); ++oi)
        if (res.solution.scenario.selected(oi)) from_scenario.insert(oi);
      CHECK(std::set<int>(res.solution.selected.begin(), res.solution.selected.end()) ==
            from_scenario);
    }
  }
}

TEST_CASE("greedy: zero budget buys nothing") {
  std::mt19937_64 rng(72);
  Instance inst = random_test_instance(rng);
  for (GreedyKind kind : kAllKinds) {
    GreedyResult res = run_greedy(kind, inst, 0.0);
    CHECK(res.solution.selected.empty());
    CHECK(res.solution.cost == 0.0);
    CHECK(res.solution.eca == doctest::Approx(res.baseline_eca).epsilon(1e-12));
  }
}

TEST_CASE("greedy: unlimited budget buys every option") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = random_test_instance(rng);
    const double total = scenario_cost(inst, Scenario((int)inst.options.size(), true));
    for (GreedyKind kind : kAllKinds) {
      GreedyResult res = run_greedy(kind, inst, total + 1.0);
      CAPTURE(greedy_kind_name(kind));
      // Improvements never hurt ECA, so nothing is left on the table.
      CHECK(res.solution.selected.size() == inst.options.size());
    }
  }
}

TEST_CASE("greedy: trace entries replay to the reported solution") {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 15; ++trial) {
    Instance inst = random_test_instance(rng);
    for (GreedyKind kind : kAllKinds) {
      GreedyResult res = run_greedy(kind, inst, inst.budget);
      std::set<int> held;
      const bool decremental =
          kind == GreedyKind::decremental || kind == GreedyKind::static_decremental;
      if (decremental) {
        for (int oi = 0; oi < (int)inst.options.size(); ++oi) held.insert(oi);
      }
      int last_step = 0;
      for (const TraceEntry& e : res.trace) {
        CHECK(e.step == last_step + 1);
        last_step = e.step;
        REQUIRE(e.option >= 0);
        REQUIRE(e.option < (int)inst.options.size());
        if (e.add) {
          CHECK(held.insert(e.option).second);
        } else {
          CHECK(held.erase(e.option) == 1);
        }
        Scenario sc((int)inst.options.size());
        for (int oi : held) sc.set(oi, true);
        CHECK(e.eca_after == doctest::Approx(eca_of(inst, sc)).epsilon(1e-9));
      }
      CHECK(std::set<int>(res.solution.selected.begin(), res.solution.selected.end()) == held);
    }
  }
}

TEST_CASE("greedy: incremental walks into the stub trap") {
  // Cheap stubs pay off immediately; each branch needs two purchases to pay
  // at all. With budget 2 the incremental greedy buys two stubs while the
  // optimum is one full branch.
  Instance inst = make_ig_bad(4, 0.01);
  GreedyResult ig = greedy_incremental(inst, 2.0);
  GreedyResult dg = greedy_decremental(inst, 2.0);
  NaiveBest opt = naive_optimum(inst, 2.0);
  CHECK(ig.solution.eca_squared < opt.eca_squared * (1.0 - 1e-9));
  CHECK(dg.solution.eca_squared == doctest::Approx(opt.eca_squared).epsilon(1e-9));
}

TEST_CASE("greedy: decremental cascades down the path trap") {
  Instance inst = make_dg_bad(5);
  bool dg_failed_somewhere = false;
  for (double budget = 2.0; budget <= 6.0; budget += 1.0) {
    GreedyResult dg = greedy_decremental(inst, budget);
    NaiveBest opt = naive_optimum(inst, budget);
    if (dg.solution.eca_squared < opt.eca_squared * (1.0 - 1e-9)) dg_failed_somewhere = true;
  }
  CHECK(dg_failed_somewhere);
}

TEST_CASE("greedy: static orders are prefixes of their ranking") {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = random_test_instance(rng);

    // Static increasing only ever buys, in non-increasing ratio order, each
    // option at most once.
    {
      GreedyResult res = run_greedy(GreedyKind::static_incremental, inst, inst.budget);
      std::set<int> seen;
      double prev = std::numeric_limits<double>::infinity();
      for (const TraceEntry& e : res.trace) {
        CHECK(e.add);
        CHECK(seen.insert(e.option).second);
        CHECK(e.ratio <= prev);
        prev = e.ratio;
      }
    }

    // Static decreasing is a block of removals (ascending ratio) followed by
    // the refill (descending ratio); only removed options come back, and
    // nothing is removed or re-bought twice.
    {
      GreedyResult res = run_greedy(GreedyKind::static_decremental, inst, inst.budget);
      std::set<int> droppedset, readded;
      bool filling = false;
      double prev_drop = -std::numeric_limits<double>::infinity();
      double prev_add = std::numeric_limits<double>::infinity();
      for (const TraceEntry& e : res.trace) {
        if (e.add) filling = true;
        if (!e.add) {
          CHECK(!filling);
          CHECK(droppedset.insert(e.option).second);
          CHECK(e.ratio >= prev_drop);
          prev_drop = e.ratio;
        } else {
          CHECK(droppedset.count(e.option) == 1);
          CHECK(readded.insert(e.option).second);
          CHECK(e.ratio <= prev_add);
          prev_add = e.ratio;
        }
      }
    }
  }
}

TEST_CASE("greedy: thread count changes nothing observable") {
  std::mt19937_64 rng(76);
  for (int trial = 0; trial < 8; ++trial) {
    Instance inst = random_test_instance(rng);
    for (GreedyKind kind : kAllKinds) {
      GreedyResult a = run_greedy(kind, inst, inst.budget, 1);
      GreedyResult b = run_greedy(kind, inst, inst.budget, 4);
      CHECK(a.solution.selected == b.solution.selected);
      CHECK(a.solution.eca == b.solution.eca);
      REQUIRE(a.trace.size() == b.trace.size());
      for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].option == b.trace[i].option);
        CHECK(a.trace[i].ratio == b.trace[i].ratio);
        CHECK(a.trace[i].eca_after == b.trace[i].eca_after);
      }
    }
  }
}

TEST_CASE("greedy: never beats the exhaustive optimum") {
  std::mt19937_64 rng(77);
  RandomTestKnobs knobs;
  knobs.max_vertices = 7;
  knobs.max_arcs = 12;
  knobs.max_options = 6;
  for (int trial = 0; trial < 15; ++trial) {
    Instance inst = random_test_instance(rng, knobs);
    NaiveBest opt = naive_optimum(inst, inst.budget);
    for (GreedyKind kind : kAllKinds) {
      GreedyResult res = run_greedy(kind, inst, inst.budget);
      CHECK(res.solution.eca_squared <= opt.eca_squared * (1.0 + 1e-9) + 1e-12);
    }
  }
}
