#include "fairdiv/values.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

bool ValueSet::contains(Value v) const {
  return std::find(values.begin(), values.end(), v) != values.end();
}

std::string ValueSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << values[i];
  }
  os << '}';
  return os.str();
}

void validate(const ValueSet& vs) {
  if (vs.values.size() < 2 || vs.values.size() > 3)
    throw InvalidValueSet("value set must have 2 or 3 members, got " +
                          std::to_string(vs.values.size()));
  for (std::size_t i = 1; i < vs.values.size(); ++i)
    if (vs.values[i - 1] >= vs.values[i])
      throw InvalidValueSet("value set must be strictly increasing: " + vs.to_string());
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::GoodsCase1: return "GoodsCase1";
    case RegimeTag::GoodsCase2: return "GoodsCase2";
    case RegimeTag::GoodsVC: return "GoodsVC";
    case RegimeTag::GoodsVC3c: return "GoodsVC3c";
    case RegimeTag::MixedLargeNegative: return "MixedLargeNegative";
    case RegimeTag::TwoNegative: return "TwoNegative";
    case RegimeTag::TractablePriorWork: return "TractablePriorWork";
    case RegimeTag::ChoresPriorWork: return "ChoresPriorWork";
    case RegimeTag::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

RegimeTag regime_tag_from_string(const std::string& s) {
  for (RegimeTag tag :
       {RegimeTag::GoodsCase1, RegimeTag::GoodsCase2, RegimeTag::GoodsVC,
        RegimeTag::GoodsVC3c, RegimeTag::MixedLargeNegative, RegimeTag::TwoNegative,
        RegimeTag::TractablePriorWork, RegimeTag::ChoresPriorWork, RegimeTag::Unclassified})
    if (s == to_string(tag)) return tag;
  throw InvalidInput("unknown regime tag: " + s);
}

namespace {

RegimeTag classify_pair(Value x, Value y) {
  if (y <= 0) return RegimeTag::ChoresPriorWork;
  if (x >= 0) {
    // Goods. Scale out the gcd; {0,c} behaves like {0,1}.
    if (x == 0) return RegimeTag::TractablePriorWork;
    Value g = std::gcd(x, y);
    Value lo = x / g, hi = y / g;
    if (lo <= 2) return RegimeTag::TractablePriorWork;
    if (lo == 3 && hi > 3 && hi % 3 != 0) return RegimeTag::GoodsVC3c;
    return RegimeTag::Unclassified;  // bivalued lo > 3: hard by prior work
  }
  // Mixed pair x < 0 < y.
  Value g = std::gcd(-x, y);
  Value neg = -x / g, pos = y / g;
  if (neg == 1) return RegimeTag::TractablePriorWork;  // {-1, c} family
  if (neg > pos) return RegimeTag::MixedLargeNegative;
  return RegimeTag::Unclassified;
}

RegimeTag classify_triple(Value a, Value b, Value c) {
  if (a >= 0) {
    if (c <= 2 * b)
      return b * b >= c * a ? RegimeTag::GoodsCase1 : RegimeTag::GoodsCase2;
    return RegimeTag::GoodsVC;
  }
  if (c <= 0) return RegimeTag::ChoresPriorWork;
  if (b == 0) {
    if (a == -1) return RegimeTag::TractablePriorWork;
    if (a == -2) return RegimeTag::Unclassified;  // open conjecture
    return -a > c ? RegimeTag::MixedLargeNegative : RegimeTag::Unclassified;
  }
  if (b < 0) {
    // The two-negative gadget normal form: a = 2b, c = -k*b with k* >= 2.
    if (a == 2 * b && c % (-b) == 0 && c / (-b) >= 2) return RegimeTag::TwoNegative;
    return RegimeTag::Unclassified;
  }
  return RegimeTag::Unclassified;  // a < 0 < b < c
}

}  // namespace

Regime classify_regime(const ValueSet& vs) {
  validate(vs);
  Regime regime;
  regime.values = vs;
  if (vs.size() == 2)
    regime.tag = classify_pair(vs.values[0], vs.values[1]);
  else
    regime.tag = classify_triple(vs.values[0], vs.values[1], vs.values[2]);
  return regime;
}

Regime classify_regime(Value a, Value b, Value c) {
  return classify_regime(ValueSet{a, b, c});
}

}  // namespace fairdiv
