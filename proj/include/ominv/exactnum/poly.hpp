#pragma once

#include "ominv/exactnum/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ominv {

// Dense univariate polynomial over Q, ascending coefficients, no trailing zeros.
class QPoly {
  public:
    QPoly() = default;
    explicit QPoly(std::vector<Rational> c);
    QPoly(std::initializer_list<long> c);

    static QPoly constant(const Rational &c);
    static QPoly monomial(const Rational &c, size_t k);
    static QPoly x() { return monomial(Rational(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational> &coeffs() const { return c_; }
    Rational coeff(size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    const Rational &lc() const { return c_.back(); }

    QPoly operator-() const;
    QPoly &operator+=(const QPoly &o);
    QPoly &operator-=(const QPoly &o);
    QPoly &operator*=(const QPoly &o);
    QPoly &operator*=(const Rational &r);
    friend QPoly operator+(QPoly a, const QPoly &b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly &b) { return a -= b; }
    friend QPoly operator*(QPoly a, const QPoly &b) { return a *= b; }
    friend QPoly operator*(QPoly a, const Rational &r) { return a *= r; }
    friend QPoly operator*(const Rational &r, QPoly a) { return a *= r; }
    bool operator==(const QPoly &o) const { return c_ == o.c_; }
    bool operator!=(const QPoly &o) const { return !(*this == o); }

    Rational eval(const Rational &x) const;
    int sign_at(const Rational &x) const { return sgn(eval(x)); }
    QPoly derivative() const;
    QPoly monic() const;
    QPoly compose(const QPoly &inner) const;
    // p(x + a)
    QPoly shift(const Rational &a) const;
    // p(a x)
    QPoly scale(const Rational &a) const;
    // x^deg p(1/x)
    QPoly reversed() const;
    // p(-x)
    QPoly negate_var() const;
    QPoly pow(unsigned e) const;

    std::string to_string(const std::string &var = "x") const;
    // "[c0,c1,...]"
    std::string to_list_string() const;

  private:
    void trim();
    std::vector<Rational> c_;
};

std::pair<QPoly, QPoly> divmod(const QPoly &a, const QPoly &b);
QPoly operator/(const QPoly &a, const QPoly &b);
QPoly operator%(const QPoly &a, const QPoly &b);
// Monic gcd (zero if both zero).
QPoly gcd(const QPoly &a, const QPoly &b);
// Returns (g, s, t) with s a + t b = g, g monic.
std::tuple<QPoly, QPoly, QPoly> ext_gcd(const QPoly &a, const QPoly &b);
QPoly squarefree_part(const QPoly &p);

// Integer polynomial, ascending; content not forced to 1.
struct ZPoly {
    std::vector<Integer> c;
    ZPoly() = default;
    explicit ZPoly(std::vector<Integer> coeffs);
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Integer &lc() const { return c.back(); }
    void trim();
    bool operator==(const ZPoly &o) const { return c == o.c; }
    bool operator<(const ZPoly &o) const;
    std::string to_list_string() const;
};

QPoly to_qpoly(const ZPoly &p);
// Primitive integer polynomial with positive leading coefficient, same roots.
ZPoly primitive_z(const QPoly &p);
ZPoly primitive_z(const ZPoly &p);
Integer content(const ZPoly &p);
ZPoly zmul(const ZPoly &a, const ZPoly &b);
// Exact division over Z; returns false if b does not divide a.
bool zdivides(const ZPoly &a, const ZPoly &b, ZPoly *quot);
ZPoly parse_zpoly(const std::string &text);
QPoly parse_qpoly(const std::string &text);

// Sturm chain of p (uses the squarefree part).
std::vector<QPoly> sturm_sequence(const QPoly &p);
int sign_variations(const std::vector<QPoly> &seq, const Rational &x);
int sign_variations_at_infinity(const std::vector<QPoly> &seq, bool positive);
// Number of distinct real roots in (a, b].
int count_real_roots(const std::vector<QPoly> &seq, const Rational &a, const Rational &b);
int count_all_real_roots(const QPoly &p);
// Bound B with every complex root |z| < B.
Rational root_bound(const QPoly &p);

// Power sums p_k = sum of root^k for k = 0..n of a monic polynomial.
std::vector<Rational> power_sums(const QPoly &monic_p, size_t n);
// Monic polynomial of degree n from power sums p_0..p_n (p_0 = n).
QPoly from_power_sums(const std::vector<Rational> &ps, size_t n);
// Monic polynomial whose roots are a_i + b_j (resp. a_i * b_j).
QPoly sum_poly(const QPoly &a, const QPoly &b);
QPoly product_poly(const QPoly &a, const QPoly &b);

} // namespace ominv
