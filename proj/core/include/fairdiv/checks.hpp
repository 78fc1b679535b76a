#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/reductions.hpp"
#include "fairdiv/solve.hpp"

namespace fairdiv {

// A reproducible witness of a structural violation: re-evaluating the stored
// bundles yields the stored numbers.
struct Violation {
  enum Kind { Submodularity, MarginalSet, OrderNeutrality };
  Kind kind = Submodularity;
  std::uint32_t s_mask = 0;
  std::uint32_t t_mask = 0;  // Submodularity only
  int o = -1;
  int o2 = -1;                   // OrderNeutrality only
  std::vector<Value> numbers;    // the marginals involved
};

struct CheckReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::uint64_t total = 0;  // may exceed violations.size() when truncated
  bool truncated = false;
};

// Exhaustive decreasing-marginals check over all S subset-of T, o not in T.
// Arity is capped at 14 items.
CheckReport check_submodularity(const Oracle& oracle);

// All single-item marginals over all bundles must lie in the declared set.
CheckReport check_marginal_set(const Oracle& oracle, const ValueSet& marginal_set);

// Adjacent-swap criterion: for every bundle S and items o != o' outside it,
// the two insertion orders must produce the same marginal multiset. By the
// bubble-sort argument this is equivalent to full order neutrality. Returns
// the first violation in scan order, with both multisets.
std::optional<Violation> check_order_neutrality(const Oracle& oracle);

struct DecompositionReport {
  bool ok = true;
  Value colliding_sum = 0;
  std::array<Value, 2> pair1{};
  std::array<Value, 2> pair2{};
};

// Whether every achievable sum of two marginals from {-1, 0, c} decomposes
// uniquely into an unordered pair; fails exactly for c = 1 with sum 0.
DecompositionReport check_unique_decomposition(Value c);

struct LemmaCheck {
  std::string name;
  std::string detail;  // instantiated inequality
  bool pass = false;
};

struct LemmaReport {
  Regime regime;
  std::vector<LemmaCheck> checks;
  bool all_pass = true;
};

// Evaluates the transfer-argument inequality chains of the regime that
// (a, b, c) falls in, with exact rational arithmetic. Throws WrongRegime for
// triples outside all goods regimes.
LemmaReport check_transfer_lemmas(Value a, Value b, Value c);

enum class GapVerdict { Confirmed, ForwardOnly, Refuted };
const char* to_string(GapVerdict v);

struct GapReport {
  GapVerdict verdict = GapVerdict::ForwardOnly;
  bool has_witness = false;

  // Forward direction (witness mode): the witness value against yes_value.
  std::string witness_welfare;
  bool forward_ok = false;

  // Backward direction: exact search against the certificate.
  bool backward_attempted = false;
  SolveStatus backward_status = SolveStatus::LimitReached;
  std::string backward_optimum;
  bool backward_ok = false;
  std::uint64_t nodes = 0;

  std::string summary;
};

// Checks a reduced instance against its certificate. With a witness the
// forward value must reach yes_value and exact search (within limits)
// upgrades the verdict to Confirmed; with the NO flag a Proved optimum must
// respect the certificate's bound. A search that only hits its limit yields
// ForwardOnly, never Refuted.
GapReport verify_gap(const Instance& reduced, const std::optional<WitnessData>& witness,
                     const SolveLimits& limits = {});

struct FuzzDiscrepancy {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string what;
};

struct FuzzSummary {
  std::uint64_t trials = 0;
  std::vector<FuzzDiscrepancy> discrepancies;
};

// Seeded random ternary instances, cross-checking branch and bound against
// brute force for both objectives, argmax invariance under positive scaling,
// and the fixed-point property of local search at an optimum. Per-trial seeds
// derive deterministically from the master seed, so the summary does not
// depend on the worker count.
FuzzSummary fuzz_cross_check(std::uint64_t seed, std::uint64_t trials,
                             int max_agents = 4, int max_items = 8, int workers = 1);
FuzzSummary fuzz_cross_check_tuned(std::uint64_t seed, std::uint64_t trials,
                                   int max_agents, int max_items, int workers,
                                   const BnbTuning& tuning);

}  // namespace fairdiv
