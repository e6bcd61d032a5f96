#pragma once

#include "ominv/exactnum/interval.hpp"
#include "ominv/exactnum/poly.hpp"
#include "ominv/exactnum/realalg.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace ominv {

// Q(theta) with theta a root of a monic irreducible polynomial. When a real
// embedding is attached, theta denotes that real root.
class NumberField {
  public:
    static std::shared_ptr<const NumberField> rationals();
    static std::shared_ptr<const NumberField> make(const QPoly &minpoly);
    static std::shared_ptr<const NumberField> make_real(const RealAlgebraic &generator);

    int degree() const { return minpoly_.degree(); }
    const QPoly &minpoly() const { return minpoly_; }
    bool is_real() const { return generator_.has_value(); }
    const RealAlgebraic &generator() const;
    // traces of theta^j, j = 0..2n-2
    const std::vector<Rational> &traces() const { return traces_; }
    std::string describe() const;

  private:
    NumberField() = default;
    QPoly minpoly_;
    std::optional<RealAlgebraic> generator_;
    std::vector<Rational> traces_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

class NFElem {
  public:
    NFElem() = default;
    NFElem(FieldPtr K, const Rational &c);
    NFElem(FieldPtr K, QPoly p);
    static NFElem from_coords(FieldPtr K, const std::vector<Rational> &coords);
    static NFElem generator(FieldPtr K);

    const FieldPtr &field() const { return K_; }
    const QPoly &poly() const { return p_; }
    std::vector<Rational> coords() const;
    bool is_zero() const { return p_.is_zero(); }
    bool is_rational() const { return p_.degree() <= 0; }
    Rational rational_value() const { return p_.coeff(0); }

    NFElem operator-() const;
    NFElem &operator+=(const NFElem &o);
    NFElem &operator-=(const NFElem &o);
    NFElem &operator*=(const NFElem &o);
    NFElem &operator*=(const Rational &r);
    friend NFElem operator+(NFElem a, const NFElem &b) { return a += b; }
    friend NFElem operator-(NFElem a, const NFElem &b) { return a -= b; }
    friend NFElem operator*(NFElem a, const NFElem &b) { return a *= b; }
    friend NFElem operator*(NFElem a, const Rational &r) { return a *= r; }
    friend NFElem operator/(const NFElem &a, const NFElem &b) { return a * b.inverse(); }
    bool operator==(const NFElem &o) const { return p_ == o.p_; }
    bool operator!=(const NFElem &o) const { return !(p_ == o.p_); }

    NFElem inverse() const;
    NFElem pow(unsigned e) const;
    Rational trace() const;
    QPoly charpoly() const;
    QPoly minpoly() const;

    // Real-embedding operations (field must be real).
    int sign() const;
    Interval enclose() const;
    RealAlgebraic to_real() const;
    // Evaluate at a complex enclosure of the generator.
    ComplexInterval enclose_at(const ComplexInterval &theta) const;

    std::string to_string(const std::string &var = "t") const;

  private:
    FieldPtr K_;
    QPoly p_;
};

int nf_compare(const NFElem &a, const NFElem &b);

// Result of embedding several real algebraic numbers into one real field.
struct CommonField {
    FieldPtr field;
    std::vector<std::vector<Rational>> coordinates;
    std::vector<NFElem> elements;
};

CommonField common_field(const std::vector<RealAlgebraic> &xs);

// Embed x into an existing real field if it lies there.
std::optional<NFElem> embed_in_field(const FieldPtr &K, const RealAlgebraic &x);

// Dense polynomial over a number field (ascending coefficients).
using NFPoly = std::vector<NFElem>;
NFPoly nfpoly_gcd(NFPoly a, NFPoly b);

} // namespace ominv
