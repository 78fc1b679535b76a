#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/sources.hpp"

namespace fairdiv {

// Deterministic builders for the hardness gadgets. Every generator emits a
// complete Instance with role-labelled agents and items, the embedded source,
// reduction parameters, and a gap certificate; item and agent orders are
// fixed (variables, then clauses, then dummies; items grouped per variable,
// then specials).

// SAT -> NSW, regime 0 <= a < b < c <= 2b: 8n agents, 11n items.
Instance gen_mnw_sat(const Cnf2p2n& phi, Value a, Value b, Value c,
                     const mpq_class& epsilon = mpq_class(0));

// Vertex cover -> NSW, regime 2b < c: 3k - |V|/2 agents, 7k - 3|V|/2 items.
Instance gen_mnw_vc(const Graph3Reg& g, int k, Value a, Value b, Value c);

// Vertex cover -> NSW over {3, c}, c > 3 and not divisible by 3:
// 3k - |V|/2 agents, ck + 6k - 3|V|/2 items.
Instance gen_mnw_bivalued3c(const Graph3Reg& g, int k, Value c);

// SAT -> MEW for goods, any 0 <= a < b < c: 4n agents, 7n items, plus n
// padding items in the 2b > c, a > 0 case.
Instance gen_mew_goods(const Cnf2p2n& phi, Value a, Value b, Value c);

// SAT -> MEW for bivalued mixed manna {a, c}, a < 0 < c, |a| > |c|:
// 4n agents, 3|a|n + 3cn items (values reduced by gcd(|a|, |c|) first).
Instance gen_mew_mixed(const Cnf2p2n& phi, Value a, Value c);

// SAT -> MEW with two negative values {2b, b, -k*b}, b < 0, k* >= 2:
// 4n agents, 3nk* + 3n items.
Instance gen_mew_two_negative(const Cnf2p2n& phi, Value b, int kstar);

// RX3C -> MEW with the submodular triple gadget: 3k agents, 9k items.
Instance gen_mew_rx3c(const Rx3cInstance& r);

// YES-certificate of the source problem.
struct WitnessData {
  enum Kind { Assignment, VertexCover, ExactCover };
  Kind kind = Assignment;
  // Assignment: 0/1 per variable. VertexCover: 1-based vertex ids.
  // ExactCover: 1-based triple indices.
  std::vector<int> data;
};

// Replays the construction's forward direction on a reduced instance. All
// "choose arbitrarily" points resolve lowest-index-first, so the result is a
// deterministic, complete allocation. Throws InvalidWitness when the witness
// does not certify the source.
Allocation build_witness(const Instance& reduced, const WitnessData& witness);

// Gap-constant queries, independent of any concrete instance.
struct BoundsQuery {
  std::string kind;  // sat-case1 | sat-case2 | vc | vc-corollary | vc-3c |
                     // mew-goods | mew-mixed | mew-two-negative
  ValueSet values;
  mpq_class epsilon{0};
  std::optional<int> k;         // vc kinds: cover budget
  std::optional<int> vertices;  // vc kinds: |V|
  std::optional<int> kstar;     // mew-two-negative
};

// Exact expressions (plus float renderings via CertValue) for the YES
// threshold, NO bound, and inapproximability ratio of a reduction family.
// Instance-level thresholds for the VC kinds require k and vertices; the
// ratio constant never does.
GapCertificate compute_bounds(const BoundsQuery& query);

}  // namespace fairdiv
