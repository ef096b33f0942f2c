#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/generators.hpp"
#include "ecaopt/instance.hpp"
#include "ecaopt/preprocessing.hpp"
#include "support/builders.hpp"
#include "support/reference.hpp"

using namespace ecaopt;
using namespace ecaopt::testref;

namespace {

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::set<int> mask_set(const std::vector<char>& mask) {
  std::set<int> out;
  for (int i = 0; i < (int)mask.size(); ++i) {
    if (mask[i]) out.insert(i);
  }
  return out;
}

Instance path3() {
  auto v = nlohmann::ordered_json::array({jvertex("a", 1.0), jvertex("b", 1.0), jvertex("c", 1.0)});
  auto e = nlohmann::ordered_json::array(
      {jarc("ab", "a", "b", 0.5), jarc("bc", "b", "c", 0.8)});
  return parse_instance(jdoc(v, nlohmann::ordered_json::array(), e, 0.0).dump());
}

// Checks library sweeps against the definitional enumeration for every
// pivot arc of the instance.
void check_against_enumeration(const Instance& inst) {
  IntervalGraph g = interval_graph(inst);
  auto oracle = enumerate_color_sets(inst);
  REQUIRE(oracle.size() == inst.arcs.size());
  for (int a = 0; a < (int)inst.arcs.size(); ++a) {
    CAPTURE(a);
    CHECK(as_set(strong_targets(g, a)) == mask_set(oracle[a].strong));
    CHECK(as_set(strict_strong_targets(g, a)) == mask_set(oracle[a].strict_strong));
    CHECK(as_set(useless_targets(g, a)) == mask_set(oracle[a].useless));
  }
}

}  // namespace

TEST_CASE("preprocessing: interval graph carries one length interval per arc") {
  Instance inst = path3();
  IntervalGraph g = interval_graph(inst);
  CHECK(g.n == 3);
  REQUIRE(g.arcs.size() == inst.arcs.size());
  for (int k = 0; k < (int)inst.arcs.size(); ++k) {
    const auto& arc = inst.arcs[k];
    CHECK(g.arcs[k].source == arc.source);
    CHECK(g.arcs[k].target == arc.target);
    CHECK(g.arcs[k].upper == probability_to_length(arc.probability));
    if (arc.improvement) {
      CHECK(g.arcs[k].lower == probability_to_length(arc.improvement->probability));
      CHECK(g.arcs[k].option == arc.option);
    } else {
      CHECK(g.arcs[k].lower == g.arcs[k].upper);
      CHECK(g.arcs[k].option == -1);
    }
  }
  for (int v = 0; v < g.n; ++v) {
    for (int k : g.out[v]) CHECK(g.arcs[k].source == v);
  }
}

TEST_CASE("preprocessing: colored sets of a fixed path are the read-off ones") {
  Instance inst = path3();
  IntervalGraph g = interval_graph(inst);
  const int a = inst.vertex_index("a");
  const int b = inst.vertex_index("b");
  const int c = inst.vertex_index("c");
  const int ab = inst.arc_index("ab");
  const int ba = inst.arc_index("ab~rev");

  // a->b is the unique way out of a, so it starts every a-path.
  CHECK(as_set(strong_targets(g, ab)) == std::set<int>{b, c});
  CHECK(as_set(strict_strong_targets(g, ab)) == std::set<int>{b, c});
  CHECK(useless_targets(g, ab).empty());

  // b->a reaches only a; b's paths to c never route through a.
  CHECK(as_set(strong_targets(g, ba)) == std::set<int>{a});
  CHECK(as_set(useless_targets(g, ba)) == std::set<int>{c});
}

TEST_CASE("preprocessing: sweeps match scenario enumeration on random instances") {
  std::mt19937_64 rng(41);
  RandomTestKnobs knobs;
  knobs.max_vertices = 8;
  knobs.max_arcs = 14;
  knobs.max_options = 7;
  for (int trial = 0; trial < 50; ++trial) {
    Instance inst = random_test_instance(rng, knobs);
    CAPTURE(trial);
    check_against_enumeration(inst);
  }
}

TEST_CASE("preprocessing: sweeps match enumeration on generator families") {
  for (int k : {1, 2}) {
    check_against_enumeration(make_ig_bad(k, 0.05));
    check_against_enumeration(make_dg_bad(k));
    check_against_enumeration(make_both_bad(k, 0.05));
  }
}

TEST_CASE("preprocessing: compute_all_sets is the transposed per-arc view") {
  std::mt19937_64 rng(42);
  RandomTestKnobs knobs;
  knobs.max_vertices = 8;
  knobs.max_arcs = 16;
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = random_test_instance(rng, knobs);
    IntervalGraph g = interval_graph(inst);
    TargetSets sets = compute_all_sets(g);
    REQUIRE(sets.strong_arcs.size() == inst.vertices.size());
    REQUIRE(sets.strict_arcs.size() == inst.vertices.size());
    REQUIRE(sets.useless_arcs.size() == inst.vertices.size());

    TargetSets expect;
    expect.strong_arcs.resize(inst.vertices.size());
    expect.strict_arcs.resize(inst.vertices.size());
    expect.useless_arcs.resize(inst.vertices.size());
    for (int a = 0; a < (int)inst.arcs.size(); ++a) {
      for (int t : strong_targets(g, a)) expect.strong_arcs[t].push_back(a);
      for (int t : strict_strong_targets(g, a)) expect.strict_arcs[t].push_back(a);
      for (int t : useless_targets(g, a)) expect.useless_arcs[t].push_back(a);
    }
    for (std::size_t t = 0; t < inst.vertices.size(); ++t) {
      CHECK(as_set(sets.strong_arcs[t]) == as_set(expect.strong_arcs[t]));
      CHECK(as_set(sets.strict_arcs[t]) == as_set(expect.strict_arcs[t]));
      CHECK(as_set(sets.useless_arcs[t]) == as_set(expect.useless_arcs[t]));
    }

    TargetSets sets4 = compute_all_sets(g, 4);
    for (std::size_t t = 0; t < inst.vertices.size(); ++t) {
      CHECK(sets4.strong_arcs[t] == sets.strong_arcs[t]);
      CHECK(sets4.strict_arcs[t] == sets.strict_arcs[t]);
      CHECK(sets4.useless_arcs[t] == sets.useless_arcs[t]);
    }
  }
}

TEST_CASE("preprocessing: sweep work stays within the one-pass bounds") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = random_test_instance(rng);
    IntervalGraph g = interval_graph(inst);
    for (int a = 0; a < (int)inst.arcs.size(); ++a) {
      // Every vertex settles once; the pivot tail's out-arcs are priced a
      // second time when a walk re-enters the tail.
      const std::size_t cap = g.arcs.size() + g.out[g.arcs[a].source].size();
      SweepStats stats;
      strong_targets(g, a, &stats);
      CHECK(stats.settled <= (std::size_t)g.n);
      CHECK(stats.relaxations <= cap);
      stats = {};
      useless_targets(g, a, &stats);
      CHECK(stats.settled <= (std::size_t)g.n);
      CHECK(stats.relaxations <= cap);
    }
  }
}

TEST_CASE("preprocessing: reduction preserves f_t in every scenario") {
  std::mt19937_64 rng(44);
  RandomTestKnobs knobs;
  knobs.max_vertices = 8;
  knobs.max_arcs = 14;
  knobs.max_options = 7;
  int contracted_somewhere = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = random_test_instance(rng, knobs);
    auto reductions = reduce_all(inst, compute_all_sets(interval_graph(inst)));
    REQUIRE(reductions.size() == inst.vertices.size());

    // Count arc options only: vertex upgrades do not alter lengths, and
    // f_t fixes weights per call anyway.
    int arc_options = 0;
    for (const auto& o : inst.options) {
      if (o.kind == OptionKind::arc_upgrade) ++arc_options;
    }

    for (const auto& red : reductions) {
      contracted_somewhere += red.contracted + red.removed;
      CHECK(red.graph.vertices.size() + red.contracted == inst.vertices.size());
      for (std::uint64_t mask = 0; mask < (1ull << arc_options); ++mask) {
        Scenario sc(inst.options.size());
        int bit = 0;
        for (int o = 0; o < (int)inst.options.size(); ++o) {
          if (inst.options[o].kind != OptionKind::arc_upgrade) continue;
          sc.set(o, ((mask >> bit) & 1) != 0);
          ++bit;
        }
        const double full = f_t(apply_scenario(inst, sc), red.target);
        const double reduced = f_t_reduced(red.graph, sc);
        CHECK(reduced == doctest::Approx(full).epsilon(1e-9));
      }
    }
  }
  CHECK(contracted_somewhere > 0);
}

TEST_CASE("preprocessing: vertex map sends everyone to a live slot") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = random_test_instance(rng);
    auto reductions = reduce_all(inst, compute_all_sets(interval_graph(inst)));
    for (const auto& red : reductions) {
      REQUIRE(red.vertex_map.size() == inst.vertices.size());
      CHECK(red.graph.vertices[red.graph.target].original == red.target);
      for (const auto& vm : red.vertex_map) {
        REQUIRE(vm.slot >= 0);
        REQUIRE(vm.slot < (int)red.graph.vertices.size());
        CHECK(vm.offset >= 0.0);
      }
      for (int slot = 0; slot < (int)red.graph.vertices.size(); ++slot) {
        const auto& rv = red.graph.vertices[slot];
        CHECK(red.vertex_map[rv.original].slot == slot);
        CHECK(red.vertex_map[rv.original].offset == 0.0);
      }
    }
  }
}

TEST_CASE("preprocessing: reduce_all overload recomputes the sets itself") {
  std::mt19937_64 rng(46);
  Instance inst = random_test_instance(rng);
  auto a = reduce_all(inst, compute_all_sets(interval_graph(inst)));
  auto b = reduce_all(inst, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].contracted == b[t].contracted);
    CHECK(a[t].removed == b[t].removed);
    CHECK(a[t].graph.arcs.size() == b[t].graph.arcs.size());
  }
}
