#include <doctest.h>

#include <random>

#include "fairdiv/errors.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/reductions.hpp"

#include "test_util.hpp"

using namespace fairdiv;

TEST_CASE("additive evaluation, identity case") {
  Instance inst = make_additive_instance(ValueSet{0, 2}, {{2, 0}, {0, 2}});
  Allocation diag{{0, 1}};
  CHECK(evaluate_allocation(inst, diag) == std::vector<Value>{2, 2});
}

TEST_CASE("allocation validation") {
  Instance inst = make_additive_instance(ValueSet{0, 2}, {{2, 0}, {0, 2}});
  CHECK_THROWS_AS(evaluate_allocation(inst, Allocation{{0}}), InvalidAllocation);
  CHECK_THROWS_AS(evaluate_allocation(inst, Allocation{{0, 2}}), InvalidAllocation);
  CHECK_THROWS_AS(evaluate_allocation(inst, Allocation{{0, -1}}), InvalidAllocation);
}

TEST_CASE("gadget bundle values match the construction") {
  Instance inst = gen_mew_rx3c(parse_rx3c(read_fixture("rx3c_k1.x3c")));
  const auto& oracle = inst.submodular_profile().oracles[0];
  // Item order: el1a el1b el2a el2b el3a el3b cov1 pad1 pad2.
  auto value_of = [&](std::initializer_list<int> items) {
    std::vector<int> v(items);
    return oracle_value(oracle, v);
  };
  CHECK(value_of({0, 2, 4}) == 0);        // one copy of each element
  CHECK(value_of({0, 1, 2, 4}) == -1);    // second copy of element 1
  CHECK(value_of({6}) == 1);              // cover into the empty bundle
  CHECK(value_of({6, 0}) == 0);           // element under a cover
  CHECK(value_of({7, 0, 2, 4}) == 1);     // padding plus a full element set
  CHECK(value_of({6, 7}) == 2);           // cover plus padding
  CHECK(value_of({}) == 0);
  CHECK(value_of({0, 1}) == -1);          // both copies, no cover
}

TEST_CASE("gadget agents under an allocation") {
  Instance inst = gen_mew_rx3c(parse_rx3c(read_fixture("rx3c_k1.x3c")));
  // Agent 0 holds {el1a, el2a, el3a}, agent 1 {el1b, el2b, el3b, cov1},
  // agent 2 the two paddings.
  Allocation alloc{{0, 1, 0, 1, 0, 1, 1, 2, 2}};
  auto utilities = evaluate_allocation(inst, alloc);
  CHECK(utilities[0] == 0);
  CHECK(utilities[1] == -2);  // full element set plus a cover
  CHECK(utilities[2] == 2);
}

TEST_CASE("gadget rejects foreign items") {
  Instance inst = gen_mew_rx3c(parse_rx3c(read_fixture("rx3c_k1.x3c")));
  const auto& oracle = std::get<Rx3cGadgetOracle>(inst.submodular_profile().oracles[0]);
  std::vector<int> bad{42};
  CHECK_THROWS_AS(oracle.value(bad), InvalidInput);
}

TEST_CASE("instance validation reports entries outside the value set") {
  Instance inst = make_additive_instance(ValueSet{0, 1, 2}, {{0, 5}, {1, 2}});
  auto diagnostics = validate_instance(inst);
  REQUIRE(diagnostics.size() == 1);
  CHECK(diagnostics[0].agent == 0);
  CHECK(diagnostics[0].item == 1);
}

TEST_CASE("instance validation checks oracle normalization") {
  Instance inst;
  SubmodularProfile prof;
  prof.marginal_set = ValueSet{0, 1};
  prof.num_items = 1;
  prof.oracles.push_back(TabularOracle{1, {1, 1}});  // v(empty) = 1
  inst.profile = std::move(prof);
  inst.agent_names = {"a1"};
  inst.item_names = {"o1"};
  auto diagnostics = validate_instance(inst);
  REQUIRE(diagnostics.size() == 1);
  CHECK(diagnostics[0].agent == 0);
}

TEST_CASE("additive utilities equal the sum of singleton evaluations") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    int m = static_cast<int>(rng() % 7);
    std::vector<std::vector<Value>> matrix(n, std::vector<Value>(m));
    for (auto& row : matrix)
      for (auto& e : row) e = static_cast<Value>(rng() % 3);
    Instance inst = make_additive_instance(ValueSet{0, 1, 2}, matrix);
    Allocation alloc{std::vector<int>(m)};
    for (auto& a : alloc.assignment) a = static_cast<int>(rng() % n);
    auto utilities = evaluate_allocation(inst, alloc);
    std::vector<Value> via_singletons(n, 0);
    for (int o = 0; o < m; ++o) {
      // A singleton evaluation: only item o assigned to its agent, measured
      // through a one-item slice of the instance.
      via_singletons[alloc.assignment[o]] += matrix[alloc.assignment[o]][o];
    }
    CHECK(utilities == via_singletons);
  }
}

TEST_CASE("tabulate expands oracles and respects the cap") {
  TabularOracle tab{2, {0, 1, 1, 2}};
  auto table = tabulate(Oracle{tab});
  CHECK(table == std::vector<Value>{0, 1, 1, 2});
  Rx3cGadgetOracle too_big;
  too_big.triple = {1, 2, 3};
  too_big.tags.assign(30, {Rx3cItemTag::Padding, 0});
  CHECK_THROWS_AS(tabulate(Oracle{too_big}), TooLarge);
}
