#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "fairdiv/power_expr.hpp"
#include "fairdiv/values.hpp"

namespace fairdiv {

enum class Objective { Nsw, Mew };

const char* to_string(Objective o);

// The decision gap a reduction certifies: every YES source maps to an
// instance with welfare at least yes_value, every NO source to one where all
// allocations stay at or below no_bound. The ratio (absent for the mixed
// manna decision problems, which carry no approximation claim) is the implied
// inapproximability constant.
struct GapCertificate {
  Objective objective = Objective::Nsw;
  std::string kind;  // generator kind, e.g. "mnw-vc"
  Regime regime;
  int case_tag = 0;          // construction case, 0 when the kind has only one
  mpq_class epsilon{0};      // promise-gap slack for the SAT-based NSW kinds
  std::optional<CertValue> yes_value;
  std::optional<CertValue> no_bound;
  std::optional<CertValue> ratio;
};

}  // namespace fairdiv
