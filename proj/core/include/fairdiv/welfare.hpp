#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>

#include "fairdiv/certificate.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/values.hpp"

namespace fairdiv {

// Exact-comparison Nash welfare value. Instead of an inexact geometric mean
// we keep the count of non-positive utilities and the exact product of the
// positive ones; comparisons are lexicographic (fewer non-positive agents
// wins, then the larger product).
struct NashScore {
  std::int64_t zero_count = 0;   // agents with utility <= 0
  mpz_class positive_product{1};

  // Display rendering; comparisons never go through this.
  double geometric_mean(std::size_t num_agents) const;
  std::string to_string(std::size_t num_agents) const;
  bool operator==(const NashScore&) const = default;
};

// -1, 0, 1 per the lexicographic order above.
int compare(const NashScore& lhs, const NashScore& rhs);

NashScore nash_score(std::span<const Value> utilities);

// Exact min / sum; both throw InvalidInput on an empty utility sequence.
Value egalitarian_welfare(std::span<const Value> utilities);
Value utilitarian_welfare(std::span<const Value> utilities);

enum class Ordering { Less, Equal, Greater };

// Total preorder on allocations under an objective. Nash comparisons demand
// an instance whose items can never be valued negatively and throw
// ObjectiveUndefined otherwise.
Ordering compare_allocations(const Instance& inst, const Allocation& x1,
                             const Allocation& x2, Objective objective);

}  // namespace fairdiv
