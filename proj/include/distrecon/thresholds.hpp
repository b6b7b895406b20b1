#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace distrecon {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);

/// (C(d+3, 2) - 2) / (d + 1), the exponent governing K_{d+3} percolation.
Rational eta(int d);
/// The same quantity as (d + 4)/2 - 1/(d + 1).
Rational eta_closed_form(int d);

/// (log n / log log n)^(2/eta(d)) * n^(-1/eta(d)), natural logarithms.
double p_star(double n, int d);

}  // namespace distrecon
