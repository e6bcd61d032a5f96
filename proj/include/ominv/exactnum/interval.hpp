#pragma once

#include "ominv/exactnum/rational.hpp"

#include <mpfr.h>

#include <string>

namespace ominv {

class RealAlgebraic;

mpfr_prec_t working_precision();
void set_working_precision(mpfr_prec_t p);

class PrecisionGuard {
  public:
    explicit PrecisionGuard(mpfr_prec_t p) : old_(working_precision()) { set_working_precision(p); }
    ~PrecisionGuard() { set_working_precision(old_); }
    PrecisionGuard(const PrecisionGuard &) = delete;
    PrecisionGuard &operator=(const PrecisionGuard &) = delete;

  private:
    mpfr_prec_t old_;
};

// Closed interval with MPFR endpoints and outward rounding.
class Interval {
  public:
    Interval();
    explicit Interval(const Rational &q);
    Interval(const Rational &lo, const Rational &hi);
    Interval(long v);
    Interval(const Interval &o);
    Interval(Interval &&o) noexcept;
    Interval &operator=(const Interval &o);
    Interval &operator=(Interval &&o) noexcept;
    ~Interval();

    static Interval whole_unit(); // [-1, 1]
    static Interval pi();
    static Interval hull(const Interval &a, const Interval &b);

    mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    mpfr_ptr lo_mut() { return lo_; }
    mpfr_ptr hi_mut() { return hi_; }

    Rational lo_rat() const;
    Rational hi_rat() const;
    Rational mid_rat() const;
    Rational width_rat() const;
    double width() const;
    double mid_double() const;
    // upper bound of |x| over the interval, and lower bound
    Rational mag() const;
    Rational mig() const;
    Interval abs() const;

    bool positive() const;    // lo > 0
    bool negative() const;    // hi < 0
    bool nonnegative() const; // lo >= 0
    bool nonpositive() const; // hi <= 0
    bool contains_zero() const;
    bool is_point_zero() const;
    bool contains(const Rational &q) const;
    bool contains(const Interval &o) const;
    bool overlaps(const Interval &o) const;
    bool finite() const;
    // sign if certain, 0 if the interval is exactly {0}, 2 if undetermined
    int certain_sign() const;

    Interval operator-() const;
    Interval &operator+=(const Interval &o);
    Interval &operator-=(const Interval &o);
    Interval &operator*=(const Interval &o);
    Interval &operator/=(const Interval &o);
    friend Interval operator+(Interval a, const Interval &b) { return a += b; }
    friend Interval operator-(Interval a, const Interval &b) { return a -= b; }
    friend Interval operator*(Interval a, const Interval &b) { return a *= b; }
    friend Interval operator/(Interval a, const Interval &b) { return a /= b; }

    std::string to_string(int digits = 20) const;

  private:
    void init(mpfr_prec_t p);
    mpfr_t lo_, hi_;
};

Interval sqr(const Interval &x);
Interval pow_int(const Interval &x, unsigned n);
Interval exp(const Interval &x);
Interval log(const Interval &x);
Interval sqrt(const Interval &x);
Interval sin(const Interval &x);
Interval cos(const Interval &x);
// x^y for x > 0
Interval pow(const Interval &x, const Interval &y);
Interval intersect(const Interval &a, const Interval &b);

// Enclosure of an algebraic number at the working precision.
Interval enclose(const RealAlgebraic &a);

struct ComplexInterval {
    Interval re, im;
    ComplexInterval() = default;
    ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    explicit ComplexInterval(const Interval &r) : re(r), im(0) {}
    ComplexInterval conj() const { return {re, -im}; }
    ComplexInterval &operator+=(const ComplexInterval &o);
    ComplexInterval &operator-=(const ComplexInterval &o);
    friend ComplexInterval operator+(ComplexInterval a, const ComplexInterval &b) { return a += b; }
    friend ComplexInterval operator-(ComplexInterval a, const ComplexInterval &b) { return a -= b; }
    friend ComplexInterval operator*(const ComplexInterval &a, const ComplexInterval &b);
    friend ComplexInterval operator/(const ComplexInterval &a, const ComplexInterval &b);
    ComplexInterval operator-() const { return {-re, -im}; }
    // upper bound of the modulus
    Rational mag() const;
    Interval abs() const;
};

ComplexInterval cexp(const ComplexInterval &z);

} // namespace ominv
