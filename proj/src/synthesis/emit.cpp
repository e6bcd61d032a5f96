#include "ominv/synthesis/emit.hpp"
#include "ominv/error.hpp"
#include "ominv/semialg/torus.hpp"
#include "ominv/synthesis/fatcone.hpp"

#include <sstream>

namespace ominv {

MembershipSample cone_membership_sample(const ConeSpec &C, const Rational &t,
                                        const std::vector<std::pair<Rational, Rational>> &tau) {
    require(tau.size() == C.k(), ErrorCode::ShapeMismatch, "torus point needs one entry per active block");
    require(t >= 0, ErrorCode::InvalidInput, "t must be nonnegative");
    std::vector<CElem> ct;
    for (auto &[re, im] : tau)
        ct.emplace_back(C.F.constant(re), C.F.constant(im));
    if (!on_torus(C, ct))
        fail(ErrorCode::NotOnTorus, "torus point violates |tau| = 1 or an omega relation");
    MembershipSample out;
    bool exact = true;
    for (size_t a = 0; a < C.k(); ++a)
        exact = exact && (t == 0 || C.rho(a).is_zero());
    if (exact) {
        NFElem zero = C.zero(), one = C.F.constant(1), r = C.F.constant(t);
        std::vector<NFElem> w(C.k(), one);
        for (size_t i = 0; i < C.dim(); ++i) {
            CElem acc(zero, zero);
            for (size_t a = 0; a < C.k(); ++a) {
                NFElem rp = one;
                for (size_t j = 0; j < C.block_size(a); ++j) {
                    acc += C.G[a][i][j] * ct[a] * rp;
                    rp *= r;
                }
            }
            require(acc.im.is_zero(), ErrorCode::Internal, "cone point not real");
        }
        out.exact = true;
        out.state = fat_point_exact(C, w, r, ct);
        return out;
    }
    std::vector<ComplexInterval> it;
    for (auto &[re, im] : tau)
        it.push_back({Interval(re), Interval(im)});
    out.enclosure = cone_point_enclosure(C, Interval(t), it);
    return out;
}

namespace {

std::string field_text(const NFElem &c) {
    if (c.is_rational())
        return to_string(c.rational_value());
    return field_poly(c).to_sexpr();
}

// sum_a sum_j exp(rho_a t) t^j Re(G tau_a) with tau_a given by (cos, sin) text
std::string state_text(const ConeSpec &C, size_t i, const std::vector<std::pair<std::string, std::string>> &trig,
                       const std::string &t) {
    std::vector<std::string> terms;
    for (size_t a = 0; a < C.k(); ++a)
        for (size_t j = 0; j < C.block_size(a); ++j) {
            const CElem &g = C.G[a][i][j];
            if (g.is_zero())
                continue;
            std::ostringstream os;
            os << "(* (exp (* " << field_text(C.rho(a)) << " " << t << "))";
            if (j > 0)
                os << " (pow " << t << " " << j << ")";
            os << " (- (* " << field_text(g.re) << " " << trig[a].first << ") (* " << field_text(g.im) << " "
               << trig[a].second << ")))";
            terms.push_back(os.str());
        }
    if (terms.empty())
        return "0";
    if (terms.size() == 1)
        return terms.front();
    std::string s = "(+";
    for (auto &x : terms)
        s += " " + x;
    return s + ")";
}

} // namespace

ExtendedInvariant emit_whole_orbit_invariant(const ConeSpec &C, const Rational &t0,
                                             const std::vector<std::string> &state_vars) {
    require(t0 >= 0, ErrorCode::InvalidInput, "t0 must be nonnegative");
    std::vector<std::pair<std::string, std::string>> names, trig;
    for (size_t a = 0; a < C.k(); ++a) {
        names.push_back(torus_var_names(a));
        std::string om = field_text(C.omega(a));
        trig.push_back({"(cos (* " + om + " t))", "(sin (* " + om + " t))"});
    }
    std::ostringstream cone;
    cone << "(exists ((t " << to_string(t0) << " inf)";
    for (auto &[c, s] : names)
        cone << " (" << c << " -1 1) (" << s << " -1 1)";
    if (C.F.field->degree() > 1) {
        auto [lo, hi] = C.F.field->generator().isolator();
        cone << " (g " << to_string(lo) << " " << to_string(hi) << ")";
    }
    cone << ") (and";
    if (C.k() > 0)
        cone << " " << build_torus_formula(C.omega_relations, names).to_sexpr();
    if (C.F.field->degree() > 1)
        cone << " " << generator_guard(C.F.field).to_sexpr();
    for (size_t i = 0; i < C.dim(); ++i)
        cone << " (= " << state_vars[i] << " " << state_text(C, i, names, "t") << ")";
    cone << "))";

    ExtendedInvariant out;
    out.note = "extended language (exp, cos, sin); not decidable by this artifact; disjointness from a "
               "semi-algebraic target is decidable only conditionally on Schanuel's conjecture";
    if (t0 == 0) {
        out.text = cone.str();
        return out;
    }
    std::ostringstream seg;
    seg << "(exists ((t 0 " << to_string(t0) << ")";
    if (C.F.field->degree() > 1) {
        auto [lo, hi] = C.F.field->generator().isolator();
        seg << " (g " << to_string(lo) << " " << to_string(hi) << ")";
    }
    seg << ") (and";
    if (C.F.field->degree() > 1)
        seg << " " << generator_guard(C.F.field).to_sexpr();
    for (size_t i = 0; i < C.dim(); ++i)
        seg << " (= " << state_vars[i] << " " << state_text(C, i, trig, "t") << ")";
    seg << "))";
    out.text = "(or " + cone.str() + " " + seg.str() + ")";
    return out;
}

} // namespace ominv
