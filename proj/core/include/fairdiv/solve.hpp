#pragma once

#include <cstdint>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/welfare.hpp"

namespace fairdiv {

struct SolveLimits {
  // Node limits are the deterministic control knob: identical inputs and
  // node limits reproduce identical results regardless of worker count.
  std::uint64_t max_nodes = 200'000'000;
  // Wall-clock safety valve, checked at coarse checkpoints only; runs that
  // trip it are not guaranteed reproducible.
  double max_seconds = 0.0;  // 0 disables
  int workers = 0;           // 0 -> $FAIRDIV_WORKERS, else 1
};

int resolve_workers(int requested);

enum class SolveStatus { Proved, LimitReached };
enum class Method { Brute, Bnb };

const char* to_string(SolveStatus s);

struct OptResult {
  Objective objective = Objective::Nsw;
  SolveStatus status = SolveStatus::Proved;
  NashScore nash;      // meaningful when objective == Nsw
  Value mew = 0;       // meaningful when objective == Mew
  Allocation best;
  std::uint64_t nodes = 0;

  bool operator==(const OptResult&) const = default;
};

// Internal tuning, exposed so tests can plant a deliberately unsound bound
// and watch the cross-check harness catch it. The defaults are the only
// sound configuration.
struct BnbTuning {
  double bound_multiplier = 1.0;     // < 1 deliberately breaks admissibility
  bool local_search_incumbent = true;
};

// Exact optimization. Brute enumerates all n^m assignments in lexicographic
// order; branch and bound orders items by descending maximum value, prunes
// with an AM-GM product bound (NSW) or per-agent optimistic completions
// (MEW), and skips symmetric branches among identical agents. Both methods
// report the lexicographically smallest optimal assignment vector, so on a
// Proved run they return identical allocations.
OptResult solve_exact(const Instance& inst, Objective objective, Method method,
                      const SolveLimits& limits = {});
OptResult solve_exact_tuned(const Instance& inst, Objective objective, Method method,
                            const SolveLimits& limits, const BnbTuning& tuning);

// Complete set of optimal allocations, in lexicographic order. Throws
// TooLarge when n^m exceeds the cap.
std::vector<Allocation> enumerate_optima(const Instance& inst, Objective objective,
                                         std::uint64_t cap = 10'000'000);

// Whether moving an item (costing `loss` to its holder, adding `gain` to the
// receiver) improves the two-agent utility product:
// (u_i - loss) * (u_j + gain) > u_i * u_j, or >= when strict is false.
bool improving_move(Value u_i, Value loss, Value u_j, Value gain, bool strict);

// Applies strictly improving single-item transfers and pairwise swaps, first
// match in scan order, until a fixed point. The exact score strictly
// increases with every move, so this terminates.
Allocation local_search(const Instance& inst, const Allocation& start, Objective objective);

}  // namespace fairdiv
