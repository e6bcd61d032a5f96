#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace ominv {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "p", "-p", "p/q" (q may be negative; result is normalized).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational &q);
std::string to_string(const Integer &z);

Rational make_rational(long num, long den = 1);
Rational rat_abs(const Rational &q);
int sign(const Rational &q);
int sign(const Integer &z);

Integer floor_rat(const Rational &q);
Integer ceil_rat(const Rational &q);
// 2^e for any integer e.
Rational pow2(long e);
Rational pow_rat(const Rational &base, unsigned long e);

// Largest dyadic m/2^k <= q, and smallest >= q.
Rational dyadic_floor(const Rational &q, unsigned k);
Rational dyadic_ceil(const Rational &q, unsigned k);

Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);

using RatVec = std::vector<Rational>;
using IntVec = std::vector<Integer>;

std::string to_string(const RatVec &v);

} // namespace ominv
