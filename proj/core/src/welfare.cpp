#include "fairdiv/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

const char* to_string(Objective o) { return o == Objective::Nsw ? "nsw" : "mew"; }

double NashScore::geometric_mean(std::size_t num_agents) const {
  if (num_agents == 0) return 0.0;
  if (zero_count > 0) return 0.0;
  // log2 keeps the rendering stable for products far beyond double range.
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, positive_product.get_mpz_t());
  double log2_product = std::log2(mant) + static_cast<double>(exp2);
  return std::exp2(log2_product / static_cast<double>(num_agents));
}

std::string NashScore::to_string(std::size_t num_agents) const {
  std::ostringstream os;
  os << "(zero_count=" << zero_count << ", product=" << positive_product.get_str()
     << ", geometric_mean=" << geometric_mean(num_agents) << ")";
  return os.str();
}

int compare(const NashScore& lhs, const NashScore& rhs) {
  if (lhs.zero_count != rhs.zero_count) return lhs.zero_count < rhs.zero_count ? 1 : -1;
  int c = cmp(lhs.positive_product, rhs.positive_product);
  return c > 0 ? 1 : (c == 0 ? 0 : -1);
}

NashScore nash_score(std::span<const Value> utilities) {
  NashScore score;
  for (Value u : utilities) {
    if (u <= 0)
      ++score.zero_count;
    else
      score.positive_product *= u;
  }
  return score;
}

Value egalitarian_welfare(std::span<const Value> utilities) {
  if (utilities.empty()) throw InvalidInput("egalitarian welfare of an empty utility sequence");
  return *std::min_element(utilities.begin(), utilities.end());
}

Value utilitarian_welfare(std::span<const Value> utilities) {
  if (utilities.empty()) throw InvalidInput("utilitarian welfare of an empty utility sequence");
  return std::accumulate(utilities.begin(), utilities.end(), Value{0});
}

Ordering compare_allocations(const Instance& inst, const Allocation& x1, const Allocation& x2,
                             Objective objective) {
  if (objective == Objective::Nsw && inst.min_possible_value() < 0)
    throw ObjectiveUndefined(
        "Nash welfare is only defined when no item can be valued negatively");
  std::vector<Value> u1 = evaluate_allocation(inst, x1);
  std::vector<Value> u2 = evaluate_allocation(inst, x2);
  int c;
  if (objective == Objective::Nsw) {
    c = compare(nash_score(u1), nash_score(u2));
  } else {
    Value m1 = egalitarian_welfare(u1), m2 = egalitarian_welfare(u2);
    c = m1 < m2 ? -1 : (m1 == m2 ? 0 : 1);
  }
  return c < 0 ? Ordering::Less : (c == 0 ? Ordering::Equal : Ordering::Greater);
}

}  // namespace fairdiv
