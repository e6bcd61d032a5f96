#pragma once

#include "ominv/exactnum/poly.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace ominv {

// Process-wide cap on the degree of intermediate defining polynomials and
// number fields.
unsigned degree_cap();
void set_degree_cap(unsigned cap);

enum class Ordering { LT = -1, EQ = 0, GT = 1 };

// A real algebraic number: irreducible monic defining polynomial plus a
// rational isolating interval. Rationals have degree 1 and a point interval.
class RealAlgebraic {
  public:
    RealAlgebraic();
    RealAlgebraic(const Rational &q);
    RealAlgebraic(long v) : RealAlgebraic(Rational(v)) {}

    // minpoly must be irreducible; [lo, hi] must isolate exactly one root.
    static RealAlgebraic from_isolated_root(const QPoly &minpoly, const Rational &lo,
                                            const Rational &hi);
    // Any nonzero polynomial with exactly one root in [lo, hi].
    static RealAlgebraic from_poly_interval(const QPoly &p, const Rational &lo, const Rational &hi);

    bool is_rational() const;
    Rational rational_value() const;
    int degree() const;
    const QPoly &minpoly() const;
    ZPoly defining() const;
    std::pair<Rational, Rational> isolator() const;

    // Pure narrowing: shrink the isolator to width <= w.
    void refine_to(const Rational &w) const;
    void refine_bits(unsigned bits) const;
    // Interval of width <= w that contains the value (refines first).
    std::pair<Rational, Rational> bounds(const Rational &w) const;
    Rational approx(const Rational &w) const;
    double to_double() const;

    // Decimal enclosure "[lo, hi]" with the given number of digits.
    std::string enclosure_string(int digits = 20) const;
    // {"minpoly": [...], "interval": ["a/b","c/d"]}
    std::string to_json() const;
    std::string to_string() const;

  private:
    struct State {
        QPoly minpoly;
        Rational lo, hi;
        int sign_lo = 0;
        mutable std::mutex mu;
    };
    explicit RealAlgebraic(std::shared_ptr<State> s) : st_(std::move(s)) {}
    std::shared_ptr<State> st_;
};

struct ComplexAlgebraic {
    RealAlgebraic re, im;
    ComplexAlgebraic conjugate() const;
};

std::vector<RealAlgebraic> isolate_real_roots(const QPoly &p);
std::vector<RealAlgebraic> isolate_real_roots(const ZPoly &p);

Ordering alg_compare(const RealAlgebraic &a, const RealAlgebraic &b);
int alg_sign(const RealAlgebraic &a);
bool alg_equal(const RealAlgebraic &a, const RealAlgebraic &b);

enum class ArithOp { Add, Sub, Mul, Div };
RealAlgebraic alg_arith(const RealAlgebraic &a, ArithOp op, const RealAlgebraic &b);
RealAlgebraic alg_neg(const RealAlgebraic &a);
RealAlgebraic alg_abs(const RealAlgebraic &a);

inline RealAlgebraic operator+(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_arith(a, ArithOp::Add, b); }
inline RealAlgebraic operator-(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_arith(a, ArithOp::Sub, b); }
inline RealAlgebraic operator*(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_arith(a, ArithOp::Mul, b); }
inline RealAlgebraic operator/(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_arith(a, ArithOp::Div, b); }
inline RealAlgebraic operator-(const RealAlgebraic &a) { return alg_neg(a); }
inline bool operator<(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_compare(a, b) == Ordering::LT; }
inline bool operator==(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_equal(a, b); }

RealAlgebraic sqrt_alg(const Rational &q);

// Choose, among the given irreducible polynomials, the unique real root lying
// in every interval produced by `enclose(width)` as width shrinks.
template <class Enclose>
RealAlgebraic pick_root(const std::vector<QPoly> &candidates, Enclose &&enclose);

} // namespace ominv

#include "ominv/exactnum/realalg_impl.hpp"
