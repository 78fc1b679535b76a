#include "fairdiv/power_expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

mpq_class mpq_pow_int(const mpq_class& base, const mpz_class& exponent) {
  if (exponent == 0) return mpq_class(1);
  mpz_class mag = abs(exponent);
  if (!mag.fits_ulong_p())
    throw TooLarge("power-expression exponent too large for exact comparison");
  unsigned long e = mag.get_ui();
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
  mpq_class out(num, den);
  out.canonicalize();
  if (exponent < 0) out = 1 / out;
  return out;
}

std::string mpq_str(const mpq_class& q) { return q.get_str(); }

}  // namespace

PowerExpr PowerExpr::from_rational(const mpq_class& q) {
  if (q <= 0) throw InvalidInput("power expression bases must be positive, got " + mpq_str(q));
  PowerExpr e;
  e.mul(q, mpq_class(1));
  return e;
}

PowerExpr PowerExpr::from_integer(long v) { return from_rational(mpq_class(v)); }

PowerExpr& PowerExpr::mul(const mpq_class& base, const mpq_class& exponent) {
  if (base <= 0) throw InvalidInput("power expression bases must be positive, got " + mpq_str(base));
  factors_.push_back({base, exponent});
  normalize();
  return *this;
}

PowerExpr& PowerExpr::mul(const PowerExpr& other) {
  for (const auto& f : other.factors_) factors_.push_back(f);
  normalize();
  return *this;
}

PowerExpr PowerExpr::pow(const mpq_class& exponent) const {
  PowerExpr out;
  for (const auto& f : factors_) out.factors_.push_back({f.base, f.exponent * exponent});
  out.normalize();
  return out;
}

PowerExpr PowerExpr::div(const PowerExpr& other) const {
  PowerExpr out = *this;
  out.mul(other.pow(mpq_class(-1)));
  return out;
}

void PowerExpr::normalize() {
  // Canonical form keeps every base above 1.
  for (Factor& f : factors_) {
    if (f.base < 1 && f.base > 0) {
      f.base = 1 / f.base;
      f.exponent = -f.exponent;
    }
  }
  std::sort(factors_.begin(), factors_.end(),
            [](const Factor& x, const Factor& y) { return x.base < y.base; });
  std::vector<Factor> merged;
  for (const auto& f : factors_) {
    if (!merged.empty() && merged.back().base == f.base)
      merged.back().exponent += f.exponent;
    else
      merged.push_back(f);
  }
  std::erase_if(merged, [](const Factor& f) { return f.exponent == 0 || f.base == 1; });
  factors_ = std::move(merged);
}

int PowerExpr::compare(const PowerExpr& other) const {
  PowerExpr ratio = div(other);
  if (ratio.factors_.empty()) return 0;
  // Clear exponent denominators, then compare the integral-power products of
  // the positive-exponent and negative-exponent sides exactly.
  mpz_class common(1);
  for (const auto& f : ratio.factors_)
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), f.exponent.get_den().get_mpz_t());
  mpq_class lhs(1), rhs(1);
  for (const auto& f : ratio.factors_) {
    mpz_class e = f.exponent.get_num() * (common / f.exponent.get_den());
    if (e > 0)
      lhs *= mpq_pow_int(f.base, e);
    else
      rhs *= mpq_pow_int(f.base, -e);
  }
  return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

int PowerExpr::compare(const mpq_class& q) const {
  if (q <= 0) return 1;  // every power expression is positive
  return compare(from_rational(q));
}

double PowerExpr::to_double() const {
  double log_sum = 0.0;
  for (const auto& f : factors_)
    log_sum += f.exponent.get_d() * std::log(f.base.get_d());
  return std::exp(log_sum);
}

std::string PowerExpr::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (i) os << " * ";
    bool base_frac = f.base.get_den() != 1;
    if (f.exponent == 1) {
      os << mpq_str(f.base);
    } else {
      os << (base_frac ? "(" : "") << mpq_str(f.base) << (base_frac ? ")" : "") << "^("
         << mpq_str(f.exponent) << ")";
    }
  }
  return os.str();
}

int CertValue::compare(const CertValue& other) const {
  if (is_rational() && other.is_rational()) {
    int c = cmp(rational(), other.rational());
    return c < 0 ? -1 : (c == 0 ? 0 : 1);
  }
  if (is_rational()) return -other.compare(*this);
  if (other.is_rational()) return expr().compare(other.rational());
  return expr().compare(other.expr());
}

double CertValue::to_double() const {
  return is_rational() ? rational().get_d() : expr().to_double();
}

std::string CertValue::to_string() const {
  return is_rational() ? rational().get_str() : expr().to_string();
}

int compare_geometric_mean(const mpz_class& product, unsigned long n, const PowerExpr& expr) {
  if (product <= 0) return -1;
  PowerExpr mean = PowerExpr::from_rational(mpq_class(product)).pow(mpq_class(1, n));
  return mean.compare(expr);
}

}  // namespace fairdiv
