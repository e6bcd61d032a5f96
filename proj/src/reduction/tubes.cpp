#include "internal.hpp"
#include "ominv/error.hpp"

#include <random>

namespace ominv {

using nlohmann::json;
using namespace detail;

namespace {

NFElem field_value(const FieldPtr &K, const RealAlgebraic &x) {
    if (x.is_rational())
        return NFElem(K, x.rational_value());
    if (K->degree() > 1 && alg_equal(K->generator(), x))
        return NFElem::generator(K);
    auto e = embed_in_field(K, x);
    require(e.has_value(), ErrorCode::Internal, "rate outside its field");
    return *e;
}

// P_k = rho^k / k!, Q_k = mu^k P_k
void tube_coeffs(const NFElem &rho, unsigned n, const Rational &mu, std::vector<NFElem> &P, std::vector<NFElem> &Q) {
    P.clear();
    Q.clear();
    NFElem p(rho.field(), Rational(1));
    Rational m(1);
    for (unsigned k = 0; k <= n; ++k) {
        if (k > 0) {
            p = p * rho * (Rational(1) / Rational(static_cast<long>(k)));
            m *= mu;
        }
        P.push_back(p);
        Q.push_back(p * m);
    }
}

std::vector<Interval> enclose_coeffs(const std::vector<NFElem> &c) {
    std::vector<Interval> out;
    for (auto &e : c)
        out.push_back(e.is_rational() ? Interval(e.rational_value()) : e.enclose());
    return out;
}

Interval horner(const std::vector<Interval> &c, const Interval &t) {
    Interval s(0);
    for (size_t k = c.size(); k-- > 0;)
        s = s * t + c[k];
    return s;
}

Rational horner_exact(const std::vector<NFElem> &c, const Rational &t) {
    Rational s(0);
    for (size_t k = c.size(); k-- > 0;)
        s = s * t + c[k].rational_value();
    return s;
}

MPoly poly_in(const std::vector<NFElem> &c, const MPoly &t) {
    MPoly s;
    for (size_t k = c.size(); k-- > 0;)
        s = s * t + nf_to_mpoly(c[k]);
    return s;
}

Formula window(const MPoly &t, const Rational &t0, const std::vector<Formula> &inner) {
    std::vector<Formula> in{Formula::ge(t), Formula::le(t, MPoly(t0))};
    in.insert(in.end(), inner.begin(), inner.end());
    return Formula::disj({Formula::conj(in), Formula::gt(t, MPoly(t0))});
}

} // namespace

unsigned tube_threshold(const RealAlgebraic &rho, const Rational &t0, const Rational &mu) {
    require(mu > 1, ErrorCode::InvalidInput, "mu must exceed 1");
    require(alg_sign(rho) >= 0, ErrorCode::InvalidInput, "rate must be nonnegative");
    if (alg_sign(rho) == 0 || t0 == 0)
        return 0;
    PrecisionGuard g(128);
    Interval X = Interval(mu * t0) * enclose(rho);
    Interval eX = exp(X);
    Rational target = (mu - 1) / mu;
    Interval term(1);
    for (unsigned n = 1; n <= 100000; ++n) {
        term = term * X / Interval(static_cast<long>(n));
        if ((term * eX).hi_rat() < target)
            return n;
    }
    fail(ErrorCode::SearchExhausted, "tube threshold not found");
}

Interval TubeInvariant::eval_P(const Interval &t) const { return horner(enclose_coeffs(P), t); }
Interval TubeInvariant::eval_Q(const Interval &t) const { return horner(enclose_coeffs(Q), t); }

Formula TubeInvariant::formula(const std::string &y, const std::string &t, bool lower, bool upper) const {
    MPoly T = MPoly::var(t), Y = MPoly::var(y);
    std::vector<Formula> in;
    if (lower)
        in.push_back(Formula::ge(Y, poly_in(P, T)));
    if (upper)
        in.push_back(Formula::le(Y, poly_in(Q, T)));
    return close_over_field(K, window(T, t0, in));
}

TubeInvariant lower_tube(const RealAlgebraic &rho, const Rational &t0, unsigned n) {
    require(alg_sign(rho) >= 0, ErrorCode::InvalidInput, "rate must be nonnegative");
    TubeInvariant T;
    T.n = n;
    T.t0 = t0;
    T.K = NumberField::make_real(rho);
    T.rho = field_value(T.K, rho);
    std::vector<NFElem> Q;
    tube_coeffs(T.rho, n, Rational(2), T.P, Q);
    T.report.add("lower-below-exp", CheckVerdict::Pass, "rate >= 0 and all Taylor coefficients nonnegative");
    return T;
}

TubeInvariant tube_invariant(const RealAlgebraic &rho, const Rational &t0, unsigned n, const Rational &mu) {
    TubeInvariant T;
    T.n = n;
    T.mu = mu;
    T.t0 = t0;
    T.n0 = tube_threshold(rho, t0, mu);
    if (n < T.n0)
        fail(ErrorCode::BelowThreshold,
             "n=" + std::to_string(n) + " below certified threshold n0=" + std::to_string(T.n0));
    T.K = NumberField::make_real(rho);
    T.rho = field_value(T.K, rho);
    tube_coeffs(T.rho, n, mu, T.P, T.Q);
    T.upper_certified = true;

    bool nonneg = std::all_of(T.P.begin(), T.P.end(), [](const NFElem &c) { return c.sign() >= 0; });
    T.report.add("lower-below-exp", nonneg ? CheckVerdict::Pass : CheckVerdict::Fail,
                 "rate >= 0 and all Taylor coefficients nonnegative");
    bool unit = T.P[0].is_rational() && T.P[0].rational_value() == 1;
    T.report.add("lower-derivative", nonneg && unit ? CheckVerdict::Pass : CheckVerdict::Fail,
                 "reduces to P_n(t1) >= 1: constant term 1, other coefficients nonnegative");
    T.report.add("upper-threshold", CheckVerdict::Pass,
                 "n0=" + std::to_string(T.n0) + " n=" + std::to_string(n) + " mu=" + to_string(mu));
    PrecisionGuard g(128);
    CheckVerdict v = CheckVerdict::Pass;
    std::string ev;
    Interval r = enclose(rho);
    for (Rational t : std::vector<Rational>{Rational(0), Rational(t0 / 2), t0}) {
        Interval ti(t);
        Interval d = T.eval_Q(ti) - exp(r * ti);
        Interval e = exp(r * ti) - T.eval_P(ti);
        if (d.negative() || e.negative())
            v = CheckVerdict::Fail;
        else if ((d.lo_rat() < 0 || e.lo_rat() < 0) && v == CheckVerdict::Pass)
            v = CheckVerdict::Unknown;
        ev += "t=" + to_string(t) + " Q-exp>=" + d.to_string(6) + " exp-P>=" + e.to_string(6) + " ";
    }
    T.report.add("sandwich-samples", v, ev);
    return T;
}

json TubeCertificate::to_json() const {
    json ts = json::array();
    for (bool b : two_sided)
        ts.push_back(b);
    return {{"found", found},
            {"n", n},
            {"mu", to_string(mu)},
            {"two_sided", ts},
            {"pieces", pieces},
            {"candidates", candidates},
            {"jordan_invariant", jordan_invariant.to_sexpr()},
            {"invariant", invariant.to_sexpr()},
            {"reason", reason}};
}

TubeCertificate invariant_from_tubes(const ReductionInstance &inst, const ExponentialPolynomial &f,
                                     const TubeSearchOptions &opt) {
    ZeroCertificate z = certify_zero_freeness(f);
    require(z.status == ZeroStatus::NoZero, ErrorCode::InvalidInput,
            std::string("tube invariant requires a zero-free f, got ") + zero_status_name(z.status));
    const ExponentialPolynomial &g = inst.g;
    size_t nr = g.terms();
    const Rational &t0 = g.t0;
    int s = z.sign;
    std::vector<int> as;
    for (auto &a : g.a)
        as.push_back(s * alg_sign(a));

    TubeCertificate cert;
    PrecisionGuard guard(opt.precision);
    std::vector<Interval> ae;
    for (auto &a : g.a)
        ae.push_back(Interval(Rational(s)) * enclose(a));
    for (unsigned n : opt.n_schedule) {
        for (unsigned j = 0; j < opt.mu_steps; ++j) {
            Rational mu = 1 + pow2(-static_cast<long>(j));
            ++cert.candidates;
            std::vector<bool> two(nr);
            bool ok = true;
            for (size_t i = 0; i < nr; ++i) {
                two[i] = n >= tube_threshold(g.rho[i], t0, mu);
                if (as[i] < 0 && !two[i])
                    ok = false;
            }
            if (!ok)
                continue;
            std::vector<std::vector<NFElem>> P(nr), Q(nr);
            std::vector<std::vector<Interval>> Pe(nr), Qe(nr);
            for (size_t i = 0; i < nr; ++i) {
                tube_coeffs(inst.rho[i], n, mu, P[i], Q[i]);
                Pe[i] = enclose_coeffs(P[i]);
                Qe[i] = enclose_coeffs(Q[i]);
            }
            // s * sum a_i y_i over the tube is bounded below by monotone endpoint values
            struct Piece {
                Rational l, h;
                unsigned depth;
            };
            std::vector<Piece> stack{{Rational(0), t0, 0}};
            size_t pieces = 0;
            while (ok && !stack.empty()) {
                Piece p = stack.back();
                stack.pop_back();
                ++pieces;
                Interval lo(0);
                for (size_t i = 0; i < nr; ++i)
                    lo += ae[i] * (as[i] > 0 ? horner(Pe[i], Interval(p.l)) : horner(Qe[i], Interval(p.h)));
                if (lo.positive())
                    continue;
                if (p.depth >= opt.depth) {
                    ok = false;
                    break;
                }
                Rational m = (p.l + p.h) / 2;
                stack.push_back({m, p.h, p.depth + 1});
                stack.push_back({p.l, m, p.depth + 1});
            }
            if (!ok)
                continue;

            cert.found = true;
            cert.n = n;
            cert.mu = mu;
            cert.two_sided = two;
            cert.pieces = pieces;
            std::vector<std::string> jv;
            for (size_t i = 0; i <= nr; ++i)
                jv.push_back("x" + std::to_string(i + 1));
            MPoly tj = MPoly::var(jv[nr]);
            std::vector<Formula> in;
            for (size_t i = 0; i < nr; ++i) {
                MPoly y = MPoly::var(jv[i]);
                in.push_back(Formula::ge(y, poly_in(P[i], tj)));
                if (two[i])
                    in.push_back(Formula::le(y, poly_in(Q[i], tj)));
            }
            Formula jbody = window(tj, t0, in);
            cert.jordan_invariant = close_over_field(inst.K, jbody);
            std::map<std::string, MPoly> sub;
            for (size_t i = 0; i < nr; ++i) {
                MPoly y;
                for (size_t k = 0; k < inst.vars.size(); ++k)
                    y += nf_to_mpoly(inst.coord_rows[i][k]) * MPoly::var(inst.vars[k]);
                sub[jv[i]] = y;
            }
            sub[jv[nr]] = linear_form(inst.time_row, inst.vars);
            Formula body = substitute(jbody, sub);
            Formula unit = Formula::eq(linear_form(inst.unit_row, inst.vars), MPoly(1));
            cert.invariant_body = close_over_field(inst.K, body);
            cert.invariant = close_over_field(inst.K, Formula::conj({unit, body}));
            cert.reason = "avoidance proved on " + std::to_string(pieces) + " pieces";
            return cert;
        }
    }
    cert.reason = "SearchExhausted after " + std::to_string(cert.candidates) + " candidates";
    return cert;
}

ValidationReport validate_tube_certificate(const ReductionInstance &inst, const TubeCertificate &cert,
                                           size_t samples, uint64_t seed) {
    ValidationReport rep;
    if (!cert.found) {
        rep.add("certificate", CheckVerdict::Fail, cert.reason);
        return rep;
    }
    const FieldPtr &K = inst.K;
    size_t d = inst.vars.size(), nr = inst.g.terms();
    {
        bool in;
        if (cert.invariant.quantifier_free()) {
            std::map<std::string, Rational> pt;
            for (size_t k = 0; k < d; ++k)
                pt[inst.vars[k]] = inst.x0[k];
            in = eval_formula(cert.invariant, pt);
        } else {
            std::map<std::string, NFElem> pt;
            for (size_t k = 0; k < d; ++k)
                pt.emplace(inst.vars[k], NFElem(K, inst.x0[k]));
            pt.emplace("g", NFElem::generator(K));
            in = eval_formula(cert.invariant.body(), pt, K);
        }
        rep.add("contains-x0", in ? CheckVerdict::Pass : CheckVerdict::Fail, "exact evaluation at x0");
    }
    bool rational = d == nr + 2 && cert.invariant.quantifier_free();
    for (auto &row : inst.coord_rows)
        for (auto &e : row)
            rational = rational && e.is_rational();
    if (!rational) {
        rep.add("invariance", CheckVerdict::Unknown, "coordinates not rational; sampled flow check skipped");
        rep.add("disjoint", CheckVerdict::Unknown, "coordinates not rational; sampled disjointness skipped");
        return rep;
    }
    RationalMatrix M(d, d);
    for (size_t i = 0; i < nr; ++i)
        for (size_t k = 0; k < d; ++k)
            M.at(i, k) = inst.coord_rows[i][k].rational_value();
    for (size_t k = 0; k < d; ++k) {
        M.at(nr, k) = inst.time_row[k];
        M.at(nr + 1, k) = inst.unit_row[k];
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> tk(0, 64), fr(0, 16);
    std::vector<RatVec> xs;
    std::vector<std::vector<NFElem>> P(nr), Q(nr);
    for (size_t i = 0; i < nr; ++i)
        tube_coeffs(inst.rho[i], cert.n, cert.mu, P[i], Q[i]);
    for (size_t k = 0; k < samples; ++k) {
        Rational t = inst.g.t0 * Rational(tk(rng), 64);
        t.canonicalize();
        RatVec b(d);
        for (size_t i = 0; i < nr; ++i) {
            Rational lo = horner_exact(P[i], t);
            Rational f(2 * fr(rng) + 1, 34);
            f.canonicalize();
            b[i] = cert.two_sided[i] ? Rational(lo + f * (horner_exact(Q[i], t) - lo)) : Rational(lo + f * 4);
        }
        b[nr] = t;
        b[nr + 1] = 1;
        xs.push_back(solve_square(M, b));
    }
    std::vector<Rational> deltas{Rational(1, 7), Rational(3, 11), Rational(5, 13), Rational(2)};
    rep.merge(check_invariance_sampled(cert.invariant_body, inst.A, xs, deltas, inst.vars));
    size_t inI = 0, hit = 0;
    std::string witness;
    for (auto &x : xs) {
        std::map<std::string, Rational> pt;
        for (size_t k = 0; k < d; ++k)
            pt[inst.vars[k]] = x[k];
        if (!eval_formula(cert.invariant, pt))
            continue;
        ++inI;
        if (eval_formula(inst.Y, pt) && witness.empty()) {
            ++hit;
            witness = to_string(x);
        }
    }
    if (hit)
        rep.add("disjoint-tube-samples", CheckVerdict::Fail, "common point " + witness);
    else if (inI == 0)
        rep.add("disjoint-tube-samples", CheckVerdict::Unknown, "no sample inside the invariant");
    else
        rep.add("disjoint-tube-samples", CheckVerdict::Pass, "tube samples in I=" + std::to_string(inI) + " none in Y");
    rep.merge(check_disjoint_sampled(cert.invariant, inst.Y, inst.vars, samples, seed));
    return rep;
}

} // namespace ominv
