#include <doctest.h>

#include "fairdiv/errors.hpp"
#include "fairdiv/power_expr.hpp"

using namespace fairdiv;

namespace {

mpq_class q(long num, long den = 1) {
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace

TEST_CASE("merging factors with equal bases") {
  PowerExpr e;
  e.mul(q(2), q(3, 8));
  e.mul(q(2), q(5, 8));
  CHECK(e.compare(PowerExpr::from_integer(2)) == 0);
  CHECK(e.to_string() == "2");
}

TEST_CASE("exact comparison against rational thresholds") {
  PowerExpr ratio;
  ratio.mul(q(4, 3), q(1, 6096));
  // (4/3)^(1/6096) lies strictly inside [1.000045, 1.000050].
  CHECK(ratio.compare(q(1000045, 1000000)) > 0);
  CHECK(ratio.compare(q(1000050, 1000000)) < 0);
  CHECK(ratio.compare(q(1)) > 0);
  CHECK(ratio.to_double() == doctest::Approx(1.0000471931).epsilon(1e-9));
}

TEST_CASE("roots of big products compare exactly") {
  mpz_class product = 729;
  CHECK(compare_geometric_mean(product, 6, PowerExpr::from_integer(3)) == 0);
  CHECK(compare_geometric_mean(728, 6, PowerExpr::from_integer(3)) < 0);
  CHECK(compare_geometric_mean(730, 6, PowerExpr::from_integer(3)) > 0);
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 24);
  CHECK(compare_geometric_mean(big, 24, PowerExpr::from_integer(2)) == 0);
}

TEST_CASE("bases below one normalize away") {
  PowerExpr e;
  e.mul(q(3, 4), q(-1, 6096));
  PowerExpr f;
  f.mul(q(4, 3), q(1, 6096));
  CHECK(e.compare(f) == 0);
  CHECK(e.to_string() == f.to_string());
}

TEST_CASE("division and powers") {
  PowerExpr yes;
  yes.mul(q(3), q(1));
  PowerExpr no = yes;
  no.mul(q(9, 8), q(-1, 594));
  PowerExpr ratio = yes.div(no);
  PowerExpr expected;
  expected.mul(q(9, 8), q(1, 594));
  CHECK(ratio.compare(expected) == 0);
  CHECK(ratio.pow(q(594)).compare(q(9, 8)) == 0);
}

TEST_CASE("cert values order rationals and expressions together") {
  CertValue zero = CertValue::from_integer(0);
  CertValue minus = CertValue::from_integer(-1);
  CertValue three = CertValue(PowerExpr::from_integer(3));
  CHECK(zero.compare(minus) > 0);
  CHECK(minus.compare(zero) < 0);
  CHECK(zero.compare(three) < 0);
  CHECK(three.compare(zero) > 0);
  CHECK(three.compare(CertValue(q(3))) == 0);
  CHECK(CertValue(q(7, 2)).compare(three) > 0);
}

TEST_CASE("positive-base guard") {
  PowerExpr e;
  CHECK_THROWS_AS(e.mul(q(0), q(1)), InvalidInput);
  CHECK_THROWS_AS(e.mul(q(-2), q(1)), InvalidInput);
  CHECK_THROWS_AS(PowerExpr::from_rational(q(-1)), InvalidInput);
}
