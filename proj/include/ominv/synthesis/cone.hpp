#pragma once

#include "ominv/exactnum/interval.hpp"
#include "ominv/semialg/formula.hpp"
#include "ominv/spectral/jordan.hpp"
#include "ominv/spectral/lattice.hpp"
#include "ominv/spectral/realfield.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ominv {

// Orbit data restricted to the Jordan blocks that x0 actually excites.
// Writing X_a = s^{rho_a} tau_a for active block a, the cone point is
//   x_i = sum_a sum_j X_a r^j G[a][i][j],   r = log s, s = e^t.
struct ConeSpec {
    RationalMatrix A;
    RatVec x0;
    JordanData jordan;
    SpectralData spectral;
    SpectralField F;
    // indices into jordan.blocks with P^{-1} x0 nonzero on the block
    std::vector<size_t> active;
    // per active block: z = block of P^{-1} x0 and G[a][i][j]
    std::vector<std::vector<CElem>> z;
    std::vector<std::vector<std::vector<CElem>>> G;
    // active index of the conjugate partner, or -1 for a real block
    std::vector<long> partner;
    RelationLattice omega_relations, rho_relations;
    // integer basis h_1..h_q of the orthogonal complement of omega_relations;
    // tau_a = exp(i sum_j h_j[a] theta_j) parametrizes the torus
    std::vector<IntVec> torus_basis;
    Rational t0 = 0;

    static ConeSpec build(const RationalMatrix &A, const RatVec &x0);

    size_t dim() const { return x0.size(); }
    size_t k() const { return active.size(); }
    size_t block_size(size_t a) const { return jordan.blocks[active[a]].size; }
    const NFElem &rho(size_t a) const { return F.rho[active[a]]; }
    const NFElem &omega(size_t a) const { return F.omega[active[a]]; }
    std::vector<NFElem> rhos() const;
    std::vector<NFElem> omegas() const;
    NFElem zero() const { return F.constant(0); }
};

// Real classes: one per real active block or conjugate pair (upper member).
struct ConeClass {
    size_t block;
    bool pair;
};
std::vector<ConeClass> cone_classes(const ConeSpec &C);

struct ConeMonomial {
    IntVec n;
    unsigned b = 0;
    bool operator<(const ConeMonomial &o) const { return n != o.n ? n < o.n : b < o.b; }
};
using ConePoly = std::map<ConeMonomial, CElem>;

ConePoly cone_state(const ConeSpec &C, size_t i);
ConePoly cone_mul(const ConePoly &a, const ConePoly &b);
// R(x(s, tau)) expanded over X and r; variables named by state_vars.
ConePoly expand_polynomial(const ConeSpec &C, const MPoly &R, const std::vector<std::string> &state_vars);

// sum_m Re(D_m e^{i m.theta}) with m canonical (first nonzero entry positive).
struct TrigTerm {
    IntVec m;
    NFElem re, im;
};
struct TrigPoly {
    std::vector<TrigTerm> terms;
    bool zero() const { return terms.empty(); }
    // exact value at theta = 0
    NFElem at_zero(const NFElem &zero) const;
    Interval eval(const std::vector<Interval> &theta) const;
};

struct ExpClass {
    NFElem e;
    // r-degree -> coefficient, highest degree first, all nonzero
    std::vector<std::pair<unsigned, TrigPoly>> by_degree;
};

struct AtomExpansion {
    MPoly poly;
    Rel rel;
    // decreasing exponent, every class nonzero
    std::vector<ExpClass> classes;
    // exponent vectors n with a nonzero coefficient before merging
    std::vector<IntVec> vectors;
    unsigned max_b = 0;
};

AtomExpansion analyze_atom(const ConeSpec &C, const MPoly &R, Rel rel, const std::vector<std::string> &state_vars);

std::vector<std::string> state_var_names(size_t d);

// x(t) at a torus point given per active block as complex enclosures.
std::vector<Interval> cone_point_enclosure(const ConeSpec &C, const Interval &t,
                                           const std::vector<ComplexInterval> &tau);
// Generalized point: w_a > 0 replaces s^{rho_a}, r replaces log s.
std::vector<Interval> fat_point_enclosure(const ConeSpec &C, const std::vector<Interval> &w, const Interval &r,
                                          const std::vector<ComplexInterval> &tau);
// Exact version over the spectral field.
std::vector<NFElem> fat_point_exact(const ConeSpec &C, const std::vector<NFElem> &w, const NFElem &r,
                                    const std::vector<CElem> &tau);

// tau_a = exp(i h.theta) at a theta enclosure.
std::vector<ComplexInterval> torus_from_theta(const ConeSpec &C, const std::vector<Interval> &theta);

// Torus membership of exact per-block values: |tau_a| = 1 and prod tau^g = 1
// for every omega-relation generator g.
bool on_torus(const ConeSpec &C, const std::vector<CElem> &tau);

// Exact torus point tau_a = prod_j zeta_j^{h_j[a]} with the rational circle
// points zeta_j = ((1-u_j^2) + 2u_j i) / (1+u_j^2).
std::vector<CElem> rational_torus_point(const ConeSpec &C, const RatVec &u);

} // namespace ominv
