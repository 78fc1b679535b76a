#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace fairdiv {

using Value = std::int64_t;

// The common item-value alphabet shared by all agents: two or three strictly
// increasing integers, conventionally written a < b < c.
struct ValueSet {
  std::vector<Value> values;

  ValueSet() = default;
  ValueSet(std::initializer_list<Value> vs) : values(vs) {}
  explicit ValueSet(std::vector<Value> vs) : values(std::move(vs)) {}

  std::size_t size() const { return values.size(); }
  Value low() const { return values.front(); }
  Value high() const { return values.back(); }
  bool contains(Value v) const;
  std::string to_string() const;
};

// Throws InvalidValueSet unless the set is strictly increasing with 2 or 3
// members.
void validate(const ValueSet& vs);

enum class RegimeTag {
  GoodsCase1,          // 0 <= a < b < c, c <= 2b, b^2 >= ca
  GoodsCase2,          // 0 <= a < b < c, c <= 2b, b^2 <  ca
  GoodsVC,             // 0 <= a < b < c, 2b < c
  GoodsVC3c,           // bivalued {3, c}, c > 3, c not divisible by 3
  MixedLargeNegative,  // bivalued {a, c}, a < 0 < c, |a| > |c| after gcd scaling
  TwoNegative,         // a < b < 0 < c with a = 2b and c = -k*b, k* >= 2
  TractablePriorWork,  // known polynomial-time classes
  ChoresPriorWork,     // all values non-positive
  Unclassified,
};

const char* to_string(RegimeTag tag);
RegimeTag regime_tag_from_string(const std::string& s);

struct Regime {
  RegimeTag tag = RegimeTag::Unclassified;
  ValueSet values;
};

// Maps a validated two- or three-value set onto the unique regime whose
// defining inequalities hold. Bivalued sets are reduced by their gcd first.
Regime classify_regime(const ValueSet& vs);
Regime classify_regime(Value a, Value b, Value c);

}  // namespace fairdiv
