#include <doctest.h>

#include <array>
#include <vector>

#include "fairdiv/errors.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/reductions.hpp"

#include "test_util.hpp"

using namespace fairdiv;

TEST_CASE("the bundled 2P2N fixture parses and is satisfiable") {
  Cnf2p2n phi = parse_cnf2p2n(read_fixture("sat_n3.cnf"));
  CHECK(phi.num_vars == 3);
  CHECK(phi.num_clauses() == 4);

  // Independent oracle: enumerate all 8 assignments against a direct clause
  // evaluation, then check satisfies() agrees everywhere.
  int satisfying = 0;
  std::vector<std::vector<int>> sats;
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<int> sigma{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1};
    bool all = true;
    for (const auto& clause : phi.clauses) {
      bool clause_ok = false;
      for (int lit : clause)
        clause_ok = clause_ok || ((lit > 0) == (sigma[std::abs(lit) - 1] != 0));
      all = all && clause_ok;
    }
    CHECK(all == satisfies(phi, sigma));
    if (all) {
      ++satisfying;
      sats.push_back(sigma);
    }
  }
  CHECK(satisfying == 4);  // all-true plus the three one-hot assignments
  std::vector<int> all_true{1, 1, 1};
  CHECK(satisfies(phi, all_true));
}

TEST_CASE("2P2N parser and validator reject malformed formulas") {
  CHECK_THROWS_AS(parse_cnf2p2n("garbage\n"), ParseError);
  CHECK_THROWS_AS(parse_cnf2p2n("p cnf 3 4\n1 2 3 0\n"), ParseError);  // count mismatch
  CHECK_THROWS_AS(parse_cnf2p2n("p cnf 3 1\n1 2 3\n"), ParseError);    // missing terminator
  CHECK_THROWS_AS(parse_cnf2p2n("p cnf 3 1\n1 2 0\n"), InvalidSource); // arity
  // Occurrence counts off: x1 appears three times positively.
  CHECK_THROWS_AS(parse_cnf2p2n("p cnf 3 4\n1 2 3 0\n1 -2 -3 0\n1 2 -3 0\n-1 -2 3 0\n"),
                  InvalidSource);
  // Repeated variable inside a clause.
  CHECK_THROWS_AS(parse_cnf2p2n("p cnf 3 4\n1 -1 3 0\n1 -2 -3 0\n-1 2 -3 0\n2 -2 3 0\n"),
                  InvalidSource);
  try {
    parse_cnf2p2n("p cnf 3 4\nnope\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("graph parser enforces 3-regularity") {
  Graph3Reg k33 = parse_graph3reg(read_fixture("k33.graph"));
  CHECK(k33.num_vertices == 6);
  CHECK(k33.num_edges() == 9);
  std::vector<int> side{1, 2, 3};
  CHECK(is_vertex_cover(k33, side));
  std::vector<int> not_cover{1, 2};
  CHECK(!is_vertex_cover(k33, not_cover));

  CHECK_THROWS_AS(parse_graph3reg("p graph 2 1\n1 2\n"), InvalidSource);  // degree
  CHECK_THROWS_AS(parse_graph3reg("p graph 4 6\n1 1\n1 2\n1 3\n2 3\n2 4\n3 4\n"),
                  InvalidSource);  // self-loop
  CHECK_THROWS_AS(parse_graph3reg("p graph 4 2\n1 2\n"), ParseError);  // count mismatch
  CHECK_THROWS_AS(parse_graph3reg("p graph 4 6\n1 2 3\n"), ParseError);
}

TEST_CASE("rx3c parser enforces occurrence multiplicities") {
  Rx3cInstance r1 = parse_rx3c(read_fixture("rx3c_k1.x3c"));
  CHECK(r1.k == 1);
  std::vector<int> first{1};
  CHECK(is_exact_cover(r1, first));
  std::vector<int> two{1, 2};
  CHECK(!is_exact_cover(r1, two));

  Rx3cInstance r2 = parse_rx3c(read_fixture("rx3c_k2.x3c"));
  CHECK(r2.k == 2);
  std::vector<int> cover{1, 2};
  CHECK(is_exact_cover(r2, cover));
  std::vector<int> clash{1, 3};  // both contain element 1
  CHECK(!is_exact_cover(r2, clash));

  CHECK_THROWS_AS(parse_rx3c("1\n1 2 3\n1 2 3\n"), InvalidSource);      // missing triple
  CHECK_THROWS_AS(parse_rx3c("1\n1 2 3\n1 2 3\n1 2 4\n"), InvalidSource);  // out of range
  CHECK_THROWS_AS(parse_rx3c("1\n1 2\n1 2 3\n1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_rx3c("1\n1 1 2\n1 2 3\n2 3 3\n"), InvalidSource);  // repeat in triple
}

TEST_CASE("parse_source dispatches on the declared kind") {
  CHECK(std::holds_alternative<Cnf2p2n>(
      parse_source(SourceKind::Cnf2p2n, read_fixture("sat_n3.cnf"))));
  CHECK(std::holds_alternative<Graph3Reg>(
      parse_source(SourceKind::Graph3Reg, read_fixture("k33.graph"))));
  CHECK(std::holds_alternative<Rx3cInstance>(
      parse_source(SourceKind::Rx3c, read_fixture("rx3c_k1.x3c"))));
}

TEST_CASE("instance documents round-trip losslessly") {
  Cnf2p2n phi = parse_cnf2p2n(read_fixture("sat_n3.cnf"));
  Graph3Reg k33 = parse_graph3reg(read_fixture("k33.graph"));
  Rx3cInstance r1 = parse_rx3c(read_fixture("rx3c_k1.x3c"));

  std::vector<Instance> fixtures;
  fixtures.push_back(gen_mnw_sat(phi, 0, 1, 2));
  fixtures.push_back(gen_mnw_vc(k33, 3, 0, 1, 3));
  fixtures.push_back(gen_mnw_bivalued3c(k33, 3, 4));
  fixtures.push_back(gen_mew_goods(phi, 1, 2, 3));
  fixtures.push_back(gen_mew_mixed(phi, -2, 1));
  fixtures.push_back(gen_mew_two_negative(phi, -1, 2));
  fixtures.push_back(gen_mew_rx3c(r1));
  for (const Instance& inst : fixtures) {
    std::string stored = store_instance(inst);
    Instance loaded = load_instance(stored);
    CHECK(store_instance(loaded) == stored);
    CHECK(loaded.num_agents() == inst.num_agents());
    CHECK(loaded.num_items() == inst.num_items());
    CHECK(validate_instance(loaded).empty());
    REQUIRE(loaded.certificate.has_value());
    CHECK(loaded.certificate->yes_value->compare(*inst.certificate->yes_value) == 0);
    CHECK(loaded.certificate->no_bound->compare(*inst.certificate->no_bound) == 0);
  }
}

TEST_CASE("document parsing reports schema violations") {
  CHECK_THROWS_AS(load_instance("not json"), ParseError);
  CHECK_THROWS_AS(load_instance("{}"), ParseError);
  CHECK_THROWS_AS(load_instance(R"({"version":"fairdiv/1","agents":[],"items":[],)"
                                R"("valuation":{"type":"mystery"}})"),
                  ParseError);
}

TEST_CASE("degenerate instance with no items survives the round trip") {
  Instance inst = make_additive_instance(ValueSet{0, 1}, {{}, {}});
  std::string stored = store_instance(inst);
  Instance loaded = load_instance(stored);
  CHECK(loaded.num_agents() == 2);
  CHECK(loaded.num_items() == 0);
}

TEST_CASE("tabular oracle documents round-trip") {
  Instance inst;
  SubmodularProfile prof;
  prof.marginal_set = ValueSet{0, 1};
  prof.num_items = 2;
  prof.oracles.push_back(TabularOracle{2, {0, 1, 1, 1}});
  inst.profile = std::move(prof);
  inst.agent_names = {"a1"};
  inst.agent_roles = {"agent"};
  inst.item_names = {"o1", "o2"};
  inst.item_roles = {"item", "item"};
  std::string stored = store_instance(inst);
  Instance loaded = load_instance(stored);
  CHECK(store_instance(loaded) == stored);
  CHECK(oracle_value(loaded.submodular_profile().oracles[0], std::uint64_t{3}) == 1);
}

TEST_CASE("witness files round-trip") {
  WitnessData w = parse_witness(R"({"type":"assignment","values":[1,0,1]})");
  CHECK(w.kind == WitnessData::Assignment);
  CHECK(w.data == std::vector<int>{1, 0, 1});
  CHECK(parse_witness(store_witness(w)).data == w.data);
  CHECK_THROWS_AS(parse_witness(R"({"type":"wat","values":[]})"), ParseError);
}
