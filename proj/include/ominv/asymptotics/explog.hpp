#pragma once

#include "ominv/exactnum/interval.hpp"
#include "ominv/exactnum/numfield.hpp"
#include "ominv/exactnum/poly.hpp"
#include "ominv/semialg/mpoly.hpp"
#include "ominv/spectral/lattice.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ominv {

// s^exponent * coeff(r), where r stands for log s.
struct ExpLogTerm {
    NFElem exponent;
    QPoly coeff;
};

// Sum of ExpLogTerms with pairwise distinct exponents in one real field,
// sorted by decreasing exponent.
class ExpLogSum {
  public:
    ExpLogSum() = default;
    explicit ExpLogSum(FieldPtr K) : K_(std::move(K)) {}
    // Merges equal exponents, drops zero coefficients and sorts.
    static ExpLogSum make(FieldPtr K, std::vector<ExpLogTerm> terms);

    const FieldPtr &field() const { return K_; }
    const std::vector<ExpLogTerm> &terms() const { return t_; }
    bool empty() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    unsigned max_degree() const;

    friend ExpLogSum operator+(const ExpLogSum &a, const ExpLogSum &b);
    friend ExpLogSum operator-(const ExpLogSum &a, const ExpLogSum &b);
    friend ExpLogSum operator*(const ExpLogSum &a, const ExpLogSum &b);
    ExpLogSum scaled(const Rational &c) const;
    bool operator==(const ExpLogSum &o) const;

    // Enclosure of the value at s > 0.
    Interval eval(const Interval &s) const;

    // One line per term: "s^(<enclosure> | <element> in <field>) * [<poly in r>]".
    std::string dump() const;

  private:
    FieldPtr K_;
    std::vector<ExpLogTerm> t_;
};

// Value of one variable: s^{n . rho} f(r).
struct LambdaEntry {
    IntVec n;
    QPoly f;
};

struct LambdaData {
    FieldPtr field;
    std::vector<NFElem> rho;
    std::map<std::string, LambdaEntry> vars;

    NFElem exponent(const IntVec &n) const;
};

struct CollectResult {
    ExpLogSum sum;
    // aggregated exponent vectors n' whose coefficient survived before
    // merging equal exponents
    std::vector<IntVec> vectors;
};

CollectResult collect(const MPoly &R, const LambdaData &L);

// Sign of S(s) for all sufficiently large s; 0 iff S is empty.
int asymptotic_sign(const ExpLogSum &S);

// Smallest r_f >= 0 found such that f has constant sign, equal to the sign
// of its leading coefficient, on [r_f, oo) and |f(r)| >= m_f r^deg there.
struct LeadingBound {
    Rational r_from;
    Rational m;
};
LeadingBound leading_bound(const QPoly &f);

// Certified s0 with sign(S(s)) = asymptotic_sign(S) for all s >= s0.
Rational sign_threshold(const ExpLogSum &S);

// Interval check that the dominant term exceeds the sum of absolute values
// of the others at s.
bool dominance_holds(const ExpLogSum &S, const Rational &s);

struct GapData {
    // exact minimum of |rho.(n - n')| over pairs with nonzero value
    std::optional<NFElem> mu;
    // max squared euclidean norm of n - n'
    Integer M2 = 0;
    unsigned B = 0;
};

GapData gap_data(const std::vector<ExpLogSum> &sums, const std::vector<IntVec> &vectors,
                 const std::vector<NFElem> &rho);

} // namespace ominv
