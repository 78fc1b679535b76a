#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fairdiv {

// Product of positive rational bases raised to rational exponents, kept in
// exact form. Welfare thresholds such as (c^k (3b)^(2k-|V|/2))^(1/A) and gap
// ratios such as (4/3)^(1/6096) live here; floating point is for display only.
class PowerExpr {
 public:
  struct Factor {
    mpq_class base;      // > 0, != 1 after normalization
    mpq_class exponent;  // != 0 after normalization
  };

  PowerExpr() = default;  // the empty product, i.e. 1

  static PowerExpr one() { return PowerExpr(); }
  static PowerExpr from_rational(const mpq_class& q);  // q > 0
  static PowerExpr from_integer(long v);

  // Appends base^exponent and renormalizes.
  PowerExpr& mul(const mpq_class& base, const mpq_class& exponent);
  PowerExpr& mul(const PowerExpr& other);
  PowerExpr pow(const mpq_class& exponent) const;
  PowerExpr div(const PowerExpr& other) const;

  // Exact three-way comparisons: negative, zero, or positive sign of
  // (*this - other). Exactness is obtained by clearing exponent denominators
  // and comparing big-rational powers, never by floating point.
  int compare(const PowerExpr& other) const;
  int compare(const mpq_class& q) const;

  double to_double() const;
  std::string to_string() const;  // e.g. "(4/3)^(1/6096)"

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

 private:
  void normalize();

  std::vector<Factor> factors_;
};

// A certificate threshold: either an exact rational (any sign; the MEW
// thresholds) or a positive power expression (the NSW thresholds).
class CertValue {
 public:
  CertValue() : v_(mpq_class(0)) {}
  explicit CertValue(mpq_class q) : v_(std::move(q)) {}
  explicit CertValue(PowerExpr e) : v_(std::move(e)) {}
  static CertValue from_integer(long v) { return CertValue(mpq_class(v)); }

  bool is_rational() const { return std::holds_alternative<mpq_class>(v_); }
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  const PowerExpr& expr() const { return std::get<PowerExpr>(v_); }

  int compare(const CertValue& other) const;
  double to_double() const;
  std::string to_string() const;

 private:
  std::variant<mpq_class, PowerExpr> v_;
};

// Sign of product^(1/n) - expr for a non-negative integer product, used to
// compare an exact Nash score against a certificate threshold.
int compare_geometric_mean(const mpz_class& product, unsigned long n,
                           const PowerExpr& expr);

}  // namespace fairdiv
