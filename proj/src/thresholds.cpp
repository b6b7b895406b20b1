#include "distrecon/thresholds.hpp"

#include <cmath>
#include <numeric>

#include "distrecon/error.hpp"

namespace distrecon {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::make(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational{-b.num, b.den}; }

Rational eta(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "eta needs d >= 1");
  const std::int64_t k = d + 3;
  return Rational::make(k * (k - 1) / 2 - 2, k - 2);
}

Rational eta_closed_form(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "eta needs d >= 1");
  return Rational::make(d + 4, 2) - Rational::make(1, d + 1);
}

double p_star(double n, int d) {
  if (!(n >= 3.0)) throw Error(ErrorKind::InvalidArgument, "p_star needs n >= 3");
  const double e = eta(d).value();
  const double ln = std::log(n);
  return std::pow(ln / std::log(ln), 2.0 / e) * std::pow(n, -1.0 / e);
}

}  // namespace distrecon
