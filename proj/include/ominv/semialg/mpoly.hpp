#pragma once

#include "ominv/exactnum/interval.hpp"
#include "ominv/exactnum/numfield.hpp"
#include "ominv/exactnum/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ominv {

// Sorted (variable, exponent) pairs, exponents positive.
struct Monomial {
    std::vector<std::pair<std::string, unsigned>> f;

    static Monomial var(const std::string &v, unsigned e = 1);
    unsigned degree() const;
    unsigned degree_in(const std::string &v) const;
    Monomial operator*(const Monomial &o) const;
    bool operator<(const Monomial &o) const;
    bool operator==(const Monomial &o) const { return f == o.f; }
};

// Sparse multivariate polynomial with rational coefficients over named variables.
class MPoly {
  public:
    MPoly() = default;
    MPoly(const Rational &c);
    MPoly(long c) : MPoly(Rational(c)) {}
    static MPoly var(const std::string &v);
    static MPoly term(const Rational &c, const Monomial &m);
    // univariate polynomial in v
    static MPoly from_qpoly(const QPoly &p, const std::string &v);

    const std::map<Monomial, Rational> &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    unsigned degree() const;
    unsigned degree_in(const std::string &v) const;
    std::set<std::string> vars() const;

    MPoly operator-() const;
    MPoly &operator+=(const MPoly &o);
    MPoly &operator-=(const MPoly &o);
    MPoly &operator*=(const MPoly &o);
    MPoly &operator*=(const Rational &c);
    friend MPoly operator+(MPoly a, const MPoly &b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly &b) { return a -= b; }
    friend MPoly operator*(const MPoly &a, const MPoly &b);
    friend MPoly operator*(MPoly a, const Rational &c) { return a *= c; }
    bool operator==(const MPoly &o) const { return t_ == o.t_; }
    bool operator!=(const MPoly &o) const { return !(t_ == o.t_); }
    MPoly pow(unsigned e) const;

    // Positive rational multiple with coprime integer coefficients.
    MPoly primitive() const;

    Rational eval(const std::map<std::string, Rational> &pt) const;
    NFElem eval(const std::map<std::string, NFElem> &pt, const FieldPtr &K) const;
    MPoly substitute(const std::map<std::string, MPoly> &subs) const;

    // "(poly (c (x 2) (y 1)) ...)"
    std::string to_sexpr() const;
    std::string to_string() const;

  private:
    void add_term(const Monomial &m, const Rational &c);
    std::map<Monomial, Rational> t_;
};

// Polynomial compiled against a fixed variable order for repeated evaluation.
class CompiledPoly {
  public:
    CompiledPoly() = default;
    CompiledPoly(const MPoly &p, const std::vector<std::string> &order);
    Interval eval(const std::vector<Interval> &x) const;
    Rational eval(const std::vector<Rational> &x) const;

  private:
    struct Term {
        Rational c;
        std::vector<std::pair<size_t, unsigned>> f;
    };
    std::vector<Term> terms_;
};

} // namespace ominv
