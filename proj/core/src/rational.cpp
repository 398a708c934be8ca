#include "aef/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace aef {
namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min() + 1)
    throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return Rational(narrow(n), narrow(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = n;
  den_ = d;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return Rational(narrow(-static_cast<i128>(num_)), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

Rational Rational::pow(std::int64_t e) const {
  if (e < 0) {
    if (num_ == 0) throw std::domain_error("zero to a negative power");
    return Rational(1) / pow(-e);
  }
  Rational result(1);
  Rational base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool Rational::approximate(double x, std::int64_t max_den, double tol, Rational& out) {
  if (!std::isfinite(x) || std::fabs(x) > 1e12) return false;
  // Continued fraction convergents.
  double rest = x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(rest);
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t p2 = ai * p1 + p0;
    std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::fabs(approx - x) <= tol * (1.0 + std::fabs(x))) {
      out = Rational(p1, q1);
      return true;
    }
    double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return false;
}

Rational Rational::from_decimal(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::int64_t den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) {
    if (den > std::numeric_limits<std::int64_t>::max() / 10) throw std::overflow_error("decimal literal too long");
    den *= 10;
  }
  if (digits.empty()) digits = "0";
  return Rational(std::stoll(digits), den);
}

}  // namespace aef
