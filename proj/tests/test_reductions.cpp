#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fairdiv/errors.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/reductions.hpp"
#include "fairdiv/solve.hpp"
#include "fairdiv/welfare.hpp"

#include "test_util.hpp"

using namespace fairdiv;

namespace {

Cnf2p2n fixture_phi() { return parse_cnf2p2n(read_fixture("sat_n3.cnf")); }
Graph3Reg fixture_k33() { return parse_graph3reg(read_fixture("k33.graph")); }
Graph3Reg fixture_k4() { return parse_graph3reg(read_fixture("k4.graph")); }
Rx3cInstance fixture_rx3c_k1() { return parse_rx3c(read_fixture("rx3c_k1.x3c")); }
Rx3cInstance fixture_rx3c_k2() { return parse_rx3c(read_fixture("rx3c_k2.x3c")); }

// How many agents value each item strictly above the instance floor.
std::vector<int> above_floor_counts(const Instance& inst, Value floor_value) {
  const auto& matrix = inst.additive_profile().matrix;
  std::vector<int> counts(inst.num_items(), 0);
  for (const auto& row : matrix)
    for (std::size_t o = 0; o < row.size(); ++o)
      if (row[o] > floor_value) ++counts[o];
  return counts;
}

int count_role(const std::vector<std::string>& roles, const std::string& role) {
  return static_cast<int>(std::count(roles.begin(), roles.end(), role));
}

}  // namespace

TEST_CASE("mnw-sat sizes and private-item structure") {
  Instance inst = gen_mnw_sat(fixture_phi(), 0, 1, 2);
  CHECK(inst.num_agents() == 24);  // 8n
  CHECK(inst.num_items() == 33);   // 11n
  CHECK(validate_instance(inst).empty());
  CHECK(count_role(inst.item_roles, "literal") == 12);
  CHECK(count_role(inst.item_roles, "clog") == 3);
  CHECK(count_role(inst.item_roles, "specialI") == 6);
  CHECK(count_role(inst.item_roles, "specialII") == 12);
  CHECK(count_role(inst.agent_roles, "dummyI") == 2);   // 2n - m
  CHECK(count_role(inst.agent_roles, "dummyII") == 12); // 4n

  // Every special item is valued above the floor by exactly one agent; every
  // clog by exactly the two matching literal agents.
  auto counts = above_floor_counts(inst, 0);
  for (std::size_t o = 0; o < inst.num_items(); ++o) {
    if (inst.item_roles[o] == "specialI" || inst.item_roles[o] == "specialII")
      CHECK(counts[o] == 1);
    if (inst.item_roles[o] == "clog") CHECK(counts[o] == 2);
  }
  // Type II specials are worth c to their dummy, and nothing else reaches c
  // outside clogs.
  const auto& matrix = inst.additive_profile().matrix;
  for (std::size_t o = 0; o < inst.num_items(); ++o) {
    if (inst.item_roles[o] != "specialII") continue;
    int at_c = 0;
    for (const auto& row : matrix) at_c += row[o] == 2;
    CHECK(at_c == 1);
  }
}

TEST_CASE("mnw-sat witness: all-true assignment gives every agent utility 2b") {
  Instance inst = gen_mnw_sat(fixture_phi(), 0, 1, 2);
  WitnessData witness{WitnessData::Assignment, {1, 1, 1}};
  Allocation alloc = build_witness(inst, witness);
  CHECK_NOTHROW(validate_allocation(inst, alloc));
  auto utilities = evaluate_allocation(inst, alloc);
  NashScore score = nash_score(utilities);
  CHECK(score.zero_count == 0);
  mpz_class expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 2, 24);
  CHECK(score.positive_product == expected);  // (2b)^{3n} c^{5n} = 2^24
  // Every single agent sits exactly at 2.
  for (Value u : utilities) CHECK(u == 2);
  // The witness matches the certificate threshold exactly.
  REQUIRE(inst.certificate.has_value());
  CHECK(compare_geometric_mean(score.positive_product, 24,
                               inst.certificate->yes_value->expr()) == 0);
}

TEST_CASE("mnw-sat witness is a strict-local-search fixed point") {
  Instance inst = gen_mnw_sat(fixture_phi(), 0, 1, 2);
  Allocation alloc = build_witness(inst, WitnessData{WitnessData::Assignment, {1, 1, 1}});
  CHECK(local_search(inst, alloc, Objective::Nsw) == alloc);
}

TEST_CASE("mnw-sat rejects bad witnesses and regimes") {
  CHECK_THROWS_AS(gen_mnw_sat(fixture_phi(), 0, 1, 3), WrongRegime);   // 2b < c
  CHECK_THROWS_AS(gen_mnw_sat(fixture_phi(), 1, 1, 2), WrongRegime);
  CHECK_THROWS_AS(gen_mnw_sat(fixture_phi(), 0, 1, 2, mpq_class(1, 1000)), InvalidInput);
  Instance inst = gen_mnw_sat(fixture_phi(), 0, 1, 2);
  // (1,1,0) leaves clause 4 = (-x1 v -x2 v x3) unsatisfied.
  CHECK_THROWS_AS(build_witness(inst, WitnessData{WitnessData::Assignment, {1, 1, 0}}),
                  InvalidWitness);
  CHECK_THROWS_AS(build_witness(inst, WitnessData{WitnessData::Assignment, {1, 1}}),
                  InvalidWitness);
  CHECK_THROWS_AS(build_witness(inst, WitnessData{WitnessData::VertexCover, {1, 1, 1}}),
                  InvalidWitness);
}

TEST_CASE("mnw-vc sizes, witness, and certificate") {
  Instance inst = gen_mnw_vc(fixture_k33(), 3, 0, 1, 3);
  CHECK(inst.num_agents() == 6);
  CHECK(inst.num_items() == 12);
  CHECK(validate_instance(inst).empty());
  CHECK(count_role(inst.agent_roles, "dummy") == 0);  // 3k - 1.5|V| = 0

  Allocation alloc = build_witness(inst, WitnessData{WitnessData::VertexCover, {1, 2, 3}});
  auto utilities = evaluate_allocation(inst, alloc);
  for (Value u : utilities) CHECK(u == 3);
  CHECK(compare_geometric_mean(nash_score(utilities).positive_product, 6,
                               inst.certificate->yes_value->expr()) == 0);

  Instance k4 = gen_mnw_vc(fixture_k4(), 2, 0, 1, 3);
  CHECK(k4.num_agents() == 4);
  CHECK(k4.num_items() == 8);
  CHECK(validate_instance(k4).empty());
  // K4 has no vertex cover of size 2.
  CHECK_THROWS_AS(build_witness(k4, WitnessData{WitnessData::VertexCover, {1, 2}}),
                  InvalidWitness);

  CHECK_THROWS_AS(gen_mnw_vc(fixture_k33(), 3, 0, 1, 2), WrongRegime);    // c <= 2b
  CHECK_THROWS_AS(gen_mnw_vc(fixture_k33(), 2, 0, 1, 3), InvalidSource);  // k < |V|/2
  CHECK_THROWS_AS(gen_mnw_vc(fixture_k33(), 7, 0, 1, 3), InvalidSource);  // k > |V|
}

TEST_CASE("mnw-vc dummies own disjoint special pairs") {
  // K4 with k = 3: 5 agents, 3 dummies, 6 specials.
  Instance inst = gen_mnw_vc(fixture_k4(), 3, 0, 1, 3);
  CHECK(inst.num_agents() == 7);   // 3k - |V|/2 = 9 - 2
  CHECK(inst.num_items() == 15);   // 7k - 1.5|V| = 21 - 6
  CHECK(count_role(inst.agent_roles, "dummy") == 3);
  CHECK(count_role(inst.item_roles, "special") == 6);
  auto counts = above_floor_counts(inst, 0);
  for (std::size_t o = 0; o < inst.num_items(); ++o)
    if (inst.item_roles[o] == "special") CHECK(counts[o] == 1);
  // Witness with a size-3 cover of K4.
  Allocation alloc = build_witness(inst, WitnessData{WitnessData::VertexCover, {1, 2, 3}});
  auto utilities = evaluate_allocation(inst, alloc);
  for (Value u : utilities) CHECK((u == 3));
}

TEST_CASE("mnw-3c sizes and the all-equal witness") {
  Instance inst = gen_mnw_bivalued3c(fixture_k33(), 3, 4);
  CHECK(inst.num_agents() == 6);
  CHECK(inst.num_items() == 21);  // 6k + ck - 1.5|V| = 18 + 12 - 9
  CHECK(validate_instance(inst).empty());
  CHECK(inst.additive_profile().value_set.values == std::vector<Value>{3, 4});

  Allocation alloc = build_witness(inst, WitnessData{WitnessData::VertexCover, {1, 2, 3}});
  auto utilities = evaluate_allocation(inst, alloc);
  for (Value u : utilities) CHECK(u == 12);  // 3c
  CHECK(compare_geometric_mean(nash_score(utilities).positive_product, 6,
                               inst.certificate->yes_value->expr()) == 0);

  CHECK_THROWS_AS(gen_mnw_bivalued3c(fixture_k33(), 3, 6), WrongRegime);  // 3 | c
  CHECK_THROWS_AS(gen_mnw_bivalued3c(fixture_k33(), 3, 3), WrongRegime);
}

TEST_CASE("mew-goods covers its three value cases") {
  // Case 1: c >= 2b.
  Instance case1 = gen_mew_goods(fixture_phi(), 0, 1, 2);
  CHECK(case1.num_agents() == 12);
  CHECK(case1.num_items() == 21);
  CHECK(case1.certificate->case_tag == 1);
  CHECK(case1.certificate->yes_value->rational() == 2);
  CHECK(case1.certificate->no_bound->rational() == 1);
  Allocation w1 = build_witness(case1, WitnessData{WitnessData::Assignment, {1, 1, 1}});
  CHECK(egalitarian_welfare(evaluate_allocation(case1, w1)) == 2);

  // Case 2: 2b > c, a = 0.
  Instance case2 = gen_mew_goods(fixture_phi(), 0, 2, 3);
  CHECK(case2.certificate->case_tag == 2);
  CHECK(case2.num_items() == 21);
  CHECK(case2.certificate->yes_value->rational() == 3);
  CHECK(case2.certificate->no_bound->rational() == 2);
  Allocation w2 = build_witness(case2, WitnessData{WitnessData::Assignment, {1, 1, 1}});
  CHECK(egalitarian_welfare(evaluate_allocation(case2, w2)) == 3);

  // Case 3: 2b > c, a > 0 adds n padding items.
  Instance case3 = gen_mew_goods(fixture_phi(), 1, 2, 3);
  CHECK(case3.certificate->case_tag == 3);
  CHECK(case3.num_items() == 24);
  CHECK(case3.certificate->yes_value->rational() == 4);  // min{c+a, 2b}
  CHECK(case3.certificate->no_bound->rational() == 3);
  Allocation w3 = build_witness(case3, WitnessData{WitnessData::Assignment, {1, 1, 1}});
  CHECK(egalitarian_welfare(evaluate_allocation(case3, w3)) == 4);
  for (const Instance* inst : {&case1, &case2, &case3})
    CHECK(validate_instance(*inst).empty());
}

TEST_CASE("mew-mixed sizes and the all-zero witness") {
  Instance inst = gen_mew_mixed(fixture_phi(), -2, 1);
  CHECK(inst.num_agents() == 12);
  CHECK(inst.num_items() == 27);  // 3|a|n + 3cn = 18 + 9
  CHECK(count_role(inst.item_roles, "special") == 6);   // 3|a|n - 4n
  CHECK(count_role(inst.item_roles, "padding") == 9);   // 3cn
  CHECK(validate_instance(inst).empty());
  CHECK(inst.additive_profile().value_set.values == std::vector<Value>{-2, 1});

  Allocation alloc = build_witness(inst, WitnessData{WitnessData::Assignment, {1, 1, 1}});
  auto utilities = evaluate_allocation(inst, alloc);
  for (Value u : utilities) CHECK(u == 0);
  CHECK(egalitarian_welfare(utilities) == 0);

  // Values are reduced by their gcd first: (-4, 2) behaves like (-2, 1).
  Instance scaled = gen_mew_mixed(fixture_phi(), -4, 2);
  CHECK(scaled.num_items() == 27);
  CHECK(scaled.additive_profile().value_set.values == std::vector<Value>{-2, 1});

  CHECK_THROWS_AS(gen_mew_mixed(fixture_phi(), -1, 2), WrongRegime);  // |a| <= |c|
  CHECK_THROWS_AS(gen_mew_mixed(fixture_phi(), 1, 2), WrongRegime);
}

TEST_CASE("mew-two-negative sizes and the all-zero witness") {
  Instance inst = gen_mew_two_negative(fixture_phi(), -1, 2);
  CHECK(inst.num_agents() == 12);
  CHECK(inst.num_items() == 27);  // 3nk* + 3n = 18 + 9
  CHECK(inst.additive_profile().value_set.values == std::vector<Value>{-2, -1, 2});
  CHECK(count_role(inst.item_roles, "special") == 6);  // 3nk* - 4n; k*=2 gives no sink specials
  CHECK(count_role(inst.item_roles, "padding") == 9);
  CHECK(validate_instance(inst).empty());

  Allocation alloc = build_witness(inst, WitnessData{WitnessData::Assignment, {1, 1, 1}});
  auto utilities = evaluate_allocation(inst, alloc);
  for (Value u : utilities) CHECK(u == 0);

  // Padding items are valued c by their owners only.
  const auto& matrix = inst.additive_profile().matrix;
  for (std::size_t o = 0; o < inst.num_items(); ++o) {
    if (inst.item_roles[o] != "padding") continue;
    int at_c = 0;
    for (const auto& row : matrix) at_c += row[o] == 2;
    bool shared_sink_padding = inst.item_names[o].starts_with("spad");
    CHECK(at_c == (shared_sink_padding ? 2 : 1));
  }

  CHECK_THROWS_AS(gen_mew_two_negative(fixture_phi(), -1, 1), WrongRegime);
  CHECK_THROWS_AS(gen_mew_two_negative(fixture_phi(), 1, 2), WrongRegime);
}

TEST_CASE("mew-rx3c sizes, roles, and witness") {
  Instance k1 = gen_mew_rx3c(fixture_rx3c_k1());
  CHECK(k1.num_agents() == 3);
  CHECK(k1.num_items() == 9);
  CHECK(count_role(k1.item_roles, "element") == 6);
  CHECK(count_role(k1.item_roles, "cover") == 1);
  CHECK(count_role(k1.item_roles, "padding") == 2);
  CHECK(validate_instance(k1).empty());

  Allocation alloc = build_witness(k1, WitnessData{WitnessData::ExactCover, {1}});
  CHECK(evaluate_allocation(k1, alloc) == std::vector<Value>{1, 1, 1});
  CHECK_THROWS_AS(build_witness(k1, WitnessData{WitnessData::ExactCover, {1, 2}}),
                  InvalidWitness);

  Instance k2 = gen_mew_rx3c(fixture_rx3c_k2());
  CHECK(k2.num_agents() == 6);
  CHECK(k2.num_items() == 18);
  Allocation alloc2 = build_witness(k2, WitnessData{WitnessData::ExactCover, {1, 2}});
  auto utilities2 = evaluate_allocation(k2, alloc2);
  for (Value u : utilities2) CHECK(u == 1);
}

TEST_CASE("a structured rx3c instance accepts each of its exact covers") {
  Rx3cInstance mixed = parse_rx3c(read_fixture("rx3c_mixed.x3c"));
  Instance inst = gen_mew_rx3c(mixed);
  CHECK(inst.num_agents() == 6);
  CHECK(inst.num_items() == 18);
  for (std::vector<int> cover : {std::vector<int>{1, 6}, std::vector<int>{2, 5},
                                 std::vector<int>{3, 4}}) {
    REQUIRE(is_exact_cover(mixed, cover));
    Allocation alloc = build_witness(inst, WitnessData{WitnessData::ExactCover, cover});
    for (Value u : evaluate_allocation(inst, alloc)) CHECK(u == 1);
  }
  CHECK_THROWS_AS(build_witness(inst, WitnessData{WitnessData::ExactCover, {1, 2}}),
                  InvalidWitness);
}

TEST_CASE("a larger formula exercises the SAT constructions at n=6") {
  Cnf2p2n phi6 = parse_cnf2p2n(read_fixture("sat_n6.cnf"));
  Instance sat = gen_mnw_sat(phi6, 0, 1, 2);
  CHECK(sat.num_agents() == 48);
  CHECK(sat.num_items() == 66);
  CHECK(validate_instance(sat).empty());

  // Any fully satisfying assignment lands every agent exactly at 2b.
  for (std::vector<int> sigma : {std::vector<int>{1, 1, 1, 1, 1, 1},
                                 std::vector<int>{1, 0, 0, 1, 0, 0},
                                 std::vector<int>{0, 1, 0, 0, 0, 1}}) {
    REQUIRE(satisfies(phi6, sigma));
    Allocation alloc = build_witness(sat, WitnessData{WitnessData::Assignment, sigma});
    for (Value u : evaluate_allocation(sat, alloc)) CHECK(u == 2);
  }

  Instance goods = gen_mew_goods(phi6, 1, 2, 3);
  CHECK(goods.num_agents() == 24);
  CHECK(goods.num_items() == 48);  // 7n + n padding items
  Allocation w = build_witness(goods, WitnessData{WitnessData::Assignment, {1, 1, 1, 1, 1, 1}});
  CHECK(egalitarian_welfare(evaluate_allocation(goods, w)) == 4);

  Instance mixed = gen_mew_mixed(phi6, -3, 2);
  CHECK(mixed.num_agents() == 24);
  CHECK(mixed.num_items() == 90);  // 3|a|n + 3cn = 54 + 36
  Allocation wm = build_witness(mixed, WitnessData{WitnessData::Assignment, {0, 1, 0, 0, 1, 0}});
  for (Value u : evaluate_allocation(mixed, wm)) CHECK(u == 0);

  Instance twoneg = gen_mew_two_negative(phi6, -2, 3);  // values {-4, -2, 6}
  CHECK(twoneg.num_agents() == 24);
  CHECK(twoneg.num_items() == 72);  // 3nk* + 3n = 54 + 18
  Allocation wt = build_witness(twoneg, WitnessData{WitnessData::Assignment, {1, 1, 1, 1, 1, 1}});
  for (Value u : evaluate_allocation(twoneg, wt)) CHECK(u == 0);
}

TEST_CASE("certificates stay consistent across the regime grid") {
  Cnf2p2n phi = fixture_phi();
  Graph3Reg k33 = fixture_k33();
  for (Value a = 0; a <= 4; ++a) {
    for (Value b = a + 1; b <= 5; ++b) {
      for (Value c = b + 1; c <= 8; ++c) {
        if (c <= 2 * b) {
          Instance inst = gen_mnw_sat(phi, a, b, c);
          CHECK(inst.certificate->yes_value->compare(*inst.certificate->no_bound) > 0);
        } else {
          Instance inst = gen_mnw_vc(k33, 3, a, b, c);
          CHECK(inst.certificate->yes_value->compare(*inst.certificate->no_bound) > 0);
        }
        Instance goods = gen_mew_goods(phi, a, b, c);
        CHECK(goods.certificate->yes_value->compare(*goods.certificate->no_bound) > 0);
      }
    }
  }
  for (Value c : {4, 5, 7, 8}) {
    Instance inst = gen_mnw_bivalued3c(k33, 3, c);
    CHECK(inst.certificate->yes_value->compare(*inst.certificate->no_bound) > 0);
  }
}

TEST_CASE("bound constants match their closed forms exactly") {
  BoundsQuery q1{"sat-case1", ValueSet{0, 1, 2}, mpq_class(0), {}, {}, {}};
  GapCertificate c1 = compute_bounds(q1);
  PowerExpr expected1;
  expected1.mul(mpq_class(4, 3), mpq_class(1, 6096));
  CHECK(c1.ratio->expr().compare(expected1) == 0);

  BoundsQuery q2{"vc-corollary", ValueSet{0, 1, 3}, mpq_class(0), {}, {}, {}};
  GapCertificate c2 = compute_bounds(q2);
  PowerExpr expected2;
  expected2.mul(mpq_class(9, 8), mpq_class(1, 891));
  CHECK(c2.ratio->expr().compare(expected2) == 0);

  BoundsQuery q3{"vc-3c", ValueSet{3, 4}, mpq_class(0), {}, {}, {}};
  GapCertificate c3 = compute_bounds(q3);
  PowerExpr expected3;
  expected3.mul(mpq_class(144, 143), mpq_class(1, 2970));
  CHECK(c3.ratio->expr().compare(expected3) == 0);

  // Case 2 ratio: (2b/(b+a))^{1/6096} on a b^2 < ca triple.
  BoundsQuery q4{"sat-case2", ValueSet{2, 3, 5}, mpq_class(0), {}, {}, {}};
  GapCertificate c4 = compute_bounds(q4);
  PowerExpr expected4;
  expected4.mul(mpq_class(6, 5), mpq_class(1, 6096));
  CHECK(c4.ratio->expr().compare(expected4) == 0);

  // The generic vc kind uses exponent gamma/5.
  BoundsQuery q5{"vc", ValueSet{0, 1, 3}, mpq_class(0), {}, {}, {}};
  GapCertificate c5 = compute_bounds(q5);
  PowerExpr expected5;
  expected5.mul(mpq_class(9, 8), mpq_class(1, 1485));
  CHECK(c5.ratio->expr().compare(expected5) == 0);

  BoundsQuery q6{"mew-goods", ValueSet{1, 2, 3}, mpq_class(0), {}, {}, {}};
  GapCertificate c6 = compute_bounds(q6);
  CHECK(c6.case_tag == 3);
  CHECK(c6.yes_value->rational() == 4);
  CHECK(c6.ratio->rational() == mpq_class(4, 3));

  CHECK_THROWS_AS(compute_bounds(BoundsQuery{"sat-case1", ValueSet{0, 1, 2},
                                             mpq_class(1, 1000), {}, {}, {}}),
                  InvalidInput);
  CHECK_THROWS_AS(compute_bounds(BoundsQuery{"sat-case1", ValueSet{2, 3, 5},
                                             mpq_class(0), {}, {}, {}}),
                  WrongRegime);  // that triple is case 2
  CHECK_THROWS_AS(compute_bounds(BoundsQuery{"vc", ValueSet{0, 1, 2}, mpq_class(0), {}, {}, {}}),
                  WrongRegime);
  CHECK_THROWS_AS(compute_bounds(BoundsQuery{"nope", ValueSet{0, 1, 2}, mpq_class(0), {}, {}, {}}),
                  InvalidInput);
}

TEST_CASE("instance-level vc thresholds match the generator's certificate") {
  Instance inst = gen_mnw_vc(fixture_k33(), 3, 0, 1, 3);
  BoundsQuery q{"vc", ValueSet{0, 1, 3}, mpq_class(0), 3, 6, {}};
  GapCertificate cert = compute_bounds(q);
  REQUIRE(cert.yes_value.has_value());
  REQUIRE(cert.no_bound.has_value());
  CHECK(cert.yes_value->compare(*inst.certificate->yes_value) == 0);
  CHECK(cert.no_bound->compare(*inst.certificate->no_bound) == 0);
}

TEST_CASE("epsilon widens the yes side and narrows the ratio") {
  Instance tight = gen_mnw_sat(fixture_phi(), 0, 1, 2, mpq_class(0));
  Instance slack = gen_mnw_sat(fixture_phi(), 0, 1, 2, mpq_class(1, 4064));
  CHECK(slack.certificate->yes_value->compare(*tight.certificate->yes_value) < 0);
  CHECK(slack.certificate->ratio->compare(*tight.certificate->ratio) < 0);
  CHECK(slack.certificate->ratio->compare(CertValue(mpq_class(1))) > 0);
}
