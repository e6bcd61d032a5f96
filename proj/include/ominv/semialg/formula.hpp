#pragma once

#include "ominv/semialg/mpoly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ominv {

enum class Rel { Gt, Ge, Eq };
const char *rel_name(Rel r);

struct BoundVar {
    std::string name;
    std::optional<Rational> lo, hi;
    bool bounded() const { return lo.has_value() && hi.has_value(); }
};

enum class FKind { True, False, Atom, And, Or, Not, Forall, Exists };

// Immutable formula tree. Atoms read "poly rel 0" with the polynomial
// stored primitive over Z.
class Formula {
  public:
    struct Node;
    Formula();

    static Formula truth(bool v);
    // Constant polynomials fold to true/false.
    static Formula atom(const MPoly &p, Rel r);
    static Formula conj(std::vector<Formula> xs);
    static Formula disj(std::vector<Formula> xs);
    static Formula negate(const Formula &x);
    static Formula forall(std::vector<BoundVar> vs, const Formula &body);
    static Formula exists(std::vector<BoundVar> vs, const Formula &body);

    static Formula gt(const MPoly &a, const MPoly &b = MPoly()) { return atom(a - b, Rel::Gt); }
    static Formula ge(const MPoly &a, const MPoly &b = MPoly()) { return atom(a - b, Rel::Ge); }
    static Formula eq(const MPoly &a, const MPoly &b = MPoly()) { return atom(a - b, Rel::Eq); }
    static Formula lt(const MPoly &a, const MPoly &b = MPoly()) { return atom(b - a, Rel::Gt); }
    static Formula le(const MPoly &a, const MPoly &b = MPoly()) { return atom(b - a, Rel::Ge); }
    static Formula implies(const Formula &a, const Formula &b) { return disj({negate(a), b}); }

    FKind kind() const;
    const MPoly &poly() const;
    Rel rel() const;
    const std::vector<Formula> &children() const;
    const std::vector<BoundVar> &bound() const;
    const Formula &body() const { return children().front(); }

    bool quantifier_free() const;
    std::set<std::string> free_vars() const;
    size_t size() const;

    std::string to_sexpr() const;
    static Formula parse(const std::string &text);

    bool operator==(const Formula &o) const { return to_sexpr() == o.to_sexpr(); }
    static Formula from_node(std::shared_ptr<const Node> n) { return Formula(std::move(n)); }

  private:
    explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

bool eval_formula(const Formula &phi, const std::map<std::string, Rational> &pt);
// Exact evaluation with values in one real number field.
bool eval_formula(const Formula &phi, const std::map<std::string, NFElem> &pt, const FieldPtr &K);

// Capture-avoiding substitution of free variables by polynomials.
Formula substitute(const Formula &phi, const std::map<std::string, MPoly> &subs);

// Atoms of a quantifier-free formula in DNF: disjuncts of (poly, rel) lists.
struct DnfAtom {
    MPoly poly;
    Rel rel;
};
using Dnf = std::vector<std::vector<DnfAtom>>;
// Conversion of a quantifier-free formula to DNF; negations are pushed to
// atoms (not p > 0 becomes -p >= 0, not p = 0 becomes p > 0 or -p > 0).
Dnf to_dnf(const Formula &phi);
Formula from_dnf(const Dnf &d);

} // namespace ominv
