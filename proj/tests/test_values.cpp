#include <doctest.h>

#include "fairdiv/errors.hpp"
#include "fairdiv/values.hpp"

using namespace fairdiv;

TEST_CASE("value sets must be short, strictly increasing") {
  CHECK_NOTHROW(validate(ValueSet{0, 1, 2}));
  CHECK_NOTHROW(validate(ValueSet{-2, 1}));
  CHECK_THROWS_AS(validate(ValueSet{2, 1, 3}), InvalidValueSet);
  CHECK_THROWS_AS(validate(ValueSet{1, 1, 2}), InvalidValueSet);
  CHECK_THROWS_AS(validate(ValueSet{1}), InvalidValueSet);
  CHECK_THROWS_AS(validate(ValueSet{1, 2, 3, 4}), InvalidValueSet);
}

TEST_CASE("goods triples split on c vs 2b and b^2 vs ca") {
  CHECK(classify_regime(0, 1, 2).tag == RegimeTag::GoodsCase1);
  CHECK(classify_regime(1, 2, 3).tag == RegimeTag::GoodsCase1);  // 4 >= 3
  CHECK(classify_regime(2, 3, 5).tag == RegimeTag::GoodsCase2);  // 9 < 10
  CHECK(classify_regime(0, 1, 3).tag == RegimeTag::GoodsVC);
  CHECK(classify_regime(1, 2, 5).tag == RegimeTag::GoodsVC);
  // Boundary c = 2b stays in the SAT regime; b^2 = ca selects case 1.
  CHECK(classify_regime(1, 2, 4).tag == RegimeTag::GoodsCase1);
}

TEST_CASE("mixed and chores classifications") {
  CHECK(classify_regime(-1, 0, 2).tag == RegimeTag::TractablePriorWork);
  CHECK(classify_regime(-2, 0, 5).tag == RegimeTag::Unclassified);  // open conjecture
  CHECK(classify_regime(-2, -1, 2).tag == RegimeTag::TwoNegative);  // a=2b, c=-2b
  CHECK(classify_regime(-4, -2, 6).tag == RegimeTag::TwoNegative);  // k* = 3
  CHECK(classify_regime(-4, -2, 3).tag == RegimeTag::Unclassified); // c not a multiple of |b|
  CHECK(classify_regime(-3, -2, -1).tag == RegimeTag::ChoresPriorWork);
  CHECK(classify_regime(-1, 2, 3).tag == RegimeTag::Unclassified);
}

TEST_CASE("bivalued pairs reduce by gcd before classifying") {
  CHECK(classify_regime(ValueSet{3, 4}).tag == RegimeTag::GoodsVC3c);
  CHECK(classify_regime(ValueSet{3, 7}).tag == RegimeTag::GoodsVC3c);
  CHECK(classify_regime(ValueSet{3, 6}).tag == RegimeTag::TractablePriorWork);  // -> {1, 2}
  CHECK(classify_regime(ValueSet{0, 5}).tag == RegimeTag::TractablePriorWork);
  CHECK(classify_regime(ValueSet{2, 9}).tag == RegimeTag::TractablePriorWork);
  CHECK(classify_regime(ValueSet{4, 5}).tag == RegimeTag::Unclassified);
  CHECK(classify_regime(ValueSet{-2, 1}).tag == RegimeTag::MixedLargeNegative);
  CHECK(classify_regime(ValueSet{-6, 4}).tag == RegimeTag::MixedLargeNegative);  // -> {-3, 2}
  CHECK(classify_regime(ValueSet{-1, 5}).tag == RegimeTag::TractablePriorWork);
  CHECK(classify_regime(ValueSet{-2, -1}).tag == RegimeTag::ChoresPriorWork);
}

TEST_CASE("classification rejects malformed sets") {
  CHECK_THROWS_AS(classify_regime(2, 1, 3), InvalidValueSet);
  CHECK_THROWS_AS(classify_regime(ValueSet{5}), InvalidValueSet);
}

TEST_CASE("regime tags round-trip through strings") {
  for (RegimeTag tag : {RegimeTag::GoodsCase1, RegimeTag::GoodsVC3c, RegimeTag::TwoNegative,
                        RegimeTag::Unclassified})
    CHECK(regime_tag_from_string(to_string(tag)) == tag);
  CHECK_THROWS_AS(regime_tag_from_string("NoSuchRegime"), InvalidInput);
}
