#include "doctest.h"

#include "ominv/checker/checker.hpp"
#include "ominv/error.hpp"
#include "ominv/reduction/reduction.hpp"
#include "ominv/semialg/boxqe.hpp"
#include "ominv/spectral/jordan.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

using namespace ominv;
using Dec = boost::multiprecision::cpp_dec_float_100;

namespace {

Rational R(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

Dec dec(const Rational &q) { return Dec(Integer(q.get_num()).get_str()) / Dec(Integer(q.get_den()).get_str()); }

bool inside(const Interval &I, const Dec &v) { return dec(I.lo_rat()) <= v && v <= dec(I.hi_rat()); }

ExponentialPolynomial EP(const std::string &text) { return ExponentialPolynomial::parse(text); }

bool throws_code(ErrorCode c, const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code() == c;
    }
    return false;
}

Interval dot(const std::vector<NFElem> &row, const IntervalVector &x) {
    Interval s(0);
    for (size_t k = 0; k < row.size(); ++k)
        s += (row[k].is_rational() ? Interval(row[k].rational_value()) : row[k].enclose()) * x[k];
    return s;
}

Interval dot(const RatVec &row, const IntervalVector &x) {
    Interval s(0);
    for (size_t k = 0; k < row.size(); ++k)
        s += Interval(row[k]) * x[k];
    return s;
}

// f(t) in 100 digits from decimal coefficients and rates
Dec f_dec(const std::vector<std::pair<Dec, Dec>> &terms, const Dec &t) {
    Dec s = 0;
    for (auto &[a, r] : terms)
        s += a * boost::multiprecision::exp(r * t);
    return s;
}

} // namespace

TEST_CASE("algebraic input grammar") {
    CHECK(alg_equal(parse_algebraic(nlohmann::json(3)), RealAlgebraic(3)));
    CHECK(alg_equal(parse_algebraic(nlohmann::json("-2/6")), RealAlgebraic(R(-1, 3))));
    CHECK(alg_equal(parse_algebraic(nlohmann::json("sqrt(9/4)")), RealAlgebraic(R(3, 2))));
    RealAlgebraic s2 = parse_algebraic(nlohmann::json("sqrt(2)"));
    CHECK(s2.degree() == 2);
    CHECK(std::abs(s2.to_double() - 1.41421356237) < 1e-9);
    CHECK(alg_sign(parse_algebraic(nlohmann::json("-sqrt(3)"))) < 0);
    auto obj = nlohmann::json::parse(R"J({"minpoly": [-2, 0, 0, 1], "interval": ["1", "2"]})J");
    CHECK(std::abs(parse_algebraic(obj).to_double() - 1.25992104989) < 1e-9);
    CHECK(throws_code(ErrorCode::ParseError, [] { parse_algebraic(nlohmann::json("e")); }));
    CHECK(throws_code(ErrorCode::ParseError, [] { EP(R"J({"terms": [["1", "1"], ["-e", "0"]], "t0": "1"})J"); }));
    CHECK(throws_code(ErrorCode::ParseError, [] { EP(R"J({"terms": [["1", "1"]]})J"); }));
    CHECK(throws_code(ErrorCode::ParseError, [] { EP("not json"); }));
    auto f = EP(R"J({"terms": [["1", "sqrt(2)"], [-1, 1]], "t0": "3/2"})J");
    CHECK(f.t0 == R(3, 2));
    auto g = ExponentialPolynomial::from_json(f.to_json());
    REQUIRE(g.terms() == 2);
    CHECK(alg_equal(g.rho[0], f.rho[0]));
    CHECK(alg_equal(g.a[1], RealAlgebraic(-1)));
}

TEST_CASE("normalization merges, drops and shifts rates") {
    Rational shift;
    auto g = EP(R"J({"terms": [["1", "1"], ["-1", "1"], ["1", "0"]], "t0": "1"})J").normalize(&shift);
    REQUIRE(g.terms() == 1);
    CHECK(shift == 1);
    CHECK(alg_equal(g.rho[0], RealAlgebraic(1)));
    CHECK(alg_equal(g.a[0], RealAlgebraic(1)));

    auto h = EP(R"J({"terms": [["2", "-5/2"], ["3", "1"], ["1", "-5/2"]], "t0": "1"})J").normalize(&shift);
    REQUIRE(h.terms() == 2);
    CHECK(shift == 3);
    CHECK(alg_equal(h.rho[0], RealAlgebraic(R(1, 2))));
    CHECK(alg_equal(h.a[0], RealAlgebraic(3)));
    CHECK(alg_equal(h.rho[1], RealAlgebraic(4)));

    Rational none;
    auto k = EP(R"J({"terms": [["1", "2"], ["-2", "1"]], "t0": "1"})J").normalize(&none);
    CHECK(none == 0);
    CHECK(k.terms() == 2);
}

TEST_CASE("reduction of e^{2t} - 2 e^t") {
    auto f = EP(R"J({"terms": [["1", "2"], ["-2", "1"]], "t0": "1"})J");
    ReductionInstance I = build_reduction(f);
    QPoly expect = QPoly{-2, 1} * QPoly{-1, 1} * QPoly{0, 0, 1};
    CHECK(I.companion_poly == expect);
    REQUIRE(I.A.rows() == 4);
    CHECK(char_poly(I.A) == expect);
    RationalMatrix hand(4, 4, {R(0), R(1), R(0), R(0), R(0), R(0), R(1), R(0), R(0), R(0), R(0), R(1), R(0), R(0),
                               R(-2), R(3)});
    CHECK(I.A == hand);
    CHECK(I.rational_target);
    MPoly x1 = MPoly::var("x1"), x2 = MPoly::var("x2"), x3 = MPoly::var("x3");
    Formula phi = Formula::conj({Formula::eq(x1 - x2 * R(2)), Formula::ge(x3), Formula::le(x3, MPoly(1))});
    CHECK(I.phi == phi);

    auto D = jordan_decompose(I.A);
    size_t simple = 0, nil = 0;
    for (auto &b : D.jordan.blocks) {
        if (alg_sign(b.lambda.re) == 0) {
            CHECK(b.size == 2);
            ++nil;
        } else {
            CHECK(b.size == 1);
            ++simple;
        }
    }
    CHECK(simple == 2);
    CHECK(nil == 1);

    // coordinates along the orbit: y_i = e^{rho_i t}, T = t, z2 = 1
    for (Rational t : {R(0), R(1, 2), R(1), R(7, 3)}) {
        IntervalVector x = orbit_enclosure(I.A, I.x0, t, 120);
        CHECK(inside(dot(I.coord_rows[0], x), boost::multiprecision::exp(2 * dec(t))));
        CHECK(inside(dot(I.coord_rows[1], x), boost::multiprecision::exp(dec(t))));
        CHECK(inside(dot(I.time_row, x), dec(t)));
        CHECK(inside(dot(I.unit_row, x), Dec(1)));
    }
    std::map<std::string, Rational> pt;
    for (size_t k = 0; k < 4; ++k)
        pt[I.vars[k]] = I.x0[k];
    CHECK_FALSE(eval_formula(I.Y, pt));

    auto pj = I.problem_json();
    CHECK(matrix_from_json(pj["system"]["matrix"]) == I.A);
    CHECK(ratvec_from_json(pj["system"]["x0"]) == I.x0);
    CHECK(Formula::parse(pj["target"].get<std::string>()) == I.Y);
    CHECK(pj["state_vars"].size() == 4);

    CHECK(throws_code(ErrorCode::DegreeCapExceeded, [&] { build_reduction(f, 3); }));
    CHECK(throws_code(ErrorCode::InvalidInput, [] { build_reduction(EP(R"J({"terms": [["1", "1"], ["-1", "1"]], "t0": "1"})J")); }));
}

TEST_CASE("reduction of e^{sqrt2 t} - e^t") {
    auto f = EP(R"J({"terms": [["1", "sqrt(2)"], ["-1", "1"]], "t0": "1"})J");
    ReductionInstance I = build_reduction(f);
    REQUIRE(I.factors.size() == 2);
    CHECK(I.factors[0] == (QPoly{-2, 0, 1}));
    CHECK(I.factors[1] == (QPoly{-1, 1}));
    QPoly expect = QPoly{-2, 0, 1} * QPoly{-1, 1} * QPoly{0, 0, 1};
    CHECK(expect.degree() == 5);
    CHECK(I.A.rows() == 5);
    CHECK(char_poly(I.A) == expect);
    CHECK_FALSE(I.rational_target);
    CHECK(I.Y.quantifier_free());
    CHECK_FALSE(I.Y_exact.quantifier_free());
    auto D = jordan_decompose(I.A);
    size_t nil = 0;
    for (auto &b : D.jordan.blocks)
        if (alg_sign(b.lambda.re) == 0) {
            CHECK(b.size == 2);
            ++nil;
        } else {
            CHECK(b.size == 1);
        }
    CHECK(nil == 1);
    for (Rational t : {R(0), R(1, 3), R(1)}) {
        IntervalVector x = orbit_enclosure(I.A, I.x0, t, 120);
        CHECK(inside(dot(I.coord_rows[0], x), boost::multiprecision::exp(boost::multiprecision::sqrt(Dec(2)) * dec(t))));
        CHECK(inside(dot(I.coord_rows[1], x), boost::multiprecision::exp(dec(t))));
        CHECK(inside(dot(I.time_row, x), dec(t)));
    }
    // the norm form vanishes wherever the exact linear form does
    const FieldPtr &K = I.K;
    std::map<std::string, NFElem> pt;
    std::vector<NFElem> x(5, NFElem(K, Rational(0)));
    // choose x with L(x) = 0: x_k = 1 except at one coordinate with nonzero coefficient
    size_t piv = 0;
    while (I.beta[piv].is_zero())
        ++piv;
    NFElem acc(K, Rational(0));
    for (size_t k = 0; k < 5; ++k)
        if (k != piv) {
            x[k] = NFElem(K, Rational(k + 1));
            acc += I.beta[k] * x[k];
        }
    x[piv] = -acc / I.beta[piv];
    MPoly N = I.Y.children()[0].poly();
    for (size_t k = 0; k < 5; ++k)
        pt.emplace(I.vars[k], x[k]);
    CHECK(N.eval(pt, K).is_zero());
}

TEST_CASE("tube polynomials and thresholds") {
    TubeInvariant T = lower_tube(RealAlgebraic(1), R(1), 2);
    CHECK(T.P.size() == 3);
    CHECK(T.P[0].rational_value() == R(1));
    CHECK(T.P[1].rational_value() == R(1));
    CHECK(T.P[2].rational_value() == R(1, 2));
    CHECK(T.Q.empty());
    CHECK_FALSE(T.upper_certified);
    Interval p1 = T.eval_P(Interval(R(1)));
    CHECK(p1.contains(R(5, 2)));
    CHECK(dec(R(5, 2)) <= boost::multiprecision::exp(Dec(1)));

    unsigned n0 = tube_threshold(RealAlgebraic(1), R(1), R(2));
    // oracle: least n with 2^n/n! e^2 < 1/2
    unsigned oracle = 0;
    {
        Dec term = 1, e2 = boost::multiprecision::exp(Dec(2));
        for (unsigned n = 1; n < 100; ++n) {
            term = term * 2 / n;
            if (term * e2 < Dec(1) / 2) {
                oracle = n;
                break;
            }
        }
    }
    CHECK(n0 == oracle);
    CHECK(throws_code(ErrorCode::BelowThreshold, [&] { tube_invariant(RealAlgebraic(1), R(1), n0 - 1, R(2)); }));
    TubeInvariant U = tube_invariant(RealAlgebraic(1), R(1), n0, R(2));
    CHECK(U.report.overall() == CheckVerdict::Pass);
    PrecisionGuard g(128);
    for (Rational t : {R(0), R(1, 2), R(1)}) {
        Dec e = boost::multiprecision::exp(dec(t));
        CHECK(dec(U.eval_Q(Interval(t)).lo_rat()) >= e);
        CHECK(dec(U.eval_P(Interval(t)).hi_rat()) <= e);
    }

    TubeInvariant Z = tube_invariant(RealAlgebraic(0), R(1), 3, R(3, 2));
    CHECK(Z.n0 == 0);
    for (size_t k = 1; k < Z.P.size(); ++k) {
        CHECK(Z.P[k].is_zero());
        CHECK(Z.Q[k].is_zero());
    }
    CHECK(Z.report.overall() == CheckVerdict::Pass);

    TubeInvariant S = tube_invariant(parse_algebraic(nlohmann::json("sqrt(2)")), R(1), 20, R(2));
    CHECK(S.report.overall() == CheckVerdict::Pass);
    CHECK_FALSE(S.formula("y", "t", true, true).quantifier_free());
    CHECK(throws_code(ErrorCode::InvalidInput, [] { tube_threshold(RealAlgebraic(1), R(1), R(1)); }));
}

TEST_CASE("tube convergence is monotone on a grid") {
    PrecisionGuard g(128);
    std::vector<Rational> grid;
    for (long k = 0; k <= 16; ++k)
        grid.push_back(R(k, 16));
    auto gap_exp = [&](unsigned n) {
        TubeInvariant T = tube_invariant(RealAlgebraic(1), R(1), n, R(2));
        Dec m = 0;
        for (auto &t : grid)
            m = std::max(m, boost::multiprecision::exp(dec(t)) - dec(T.eval_P(Interval(t)).mid_rat()));
        return m;
    };
    Dec prev = 1e9;
    for (unsigned n = 8; n <= 24; n += 4) {
        Dec m = gap_exp(n);
        CHECK(m < prev);
        prev = m;
    }
    // along mu_j = 1 + 2^-j with n = n0(mu_j), and for fixed n as mu decreases
    auto width = [&](unsigned n, const Rational &mu) {
        TubeInvariant T = tube_invariant(RealAlgebraic(1), R(1), n, mu);
        Dec m = 0;
        for (auto &t : grid)
            m = std::max(m, dec(T.eval_Q(Interval(t)).mid_rat()) - dec(T.eval_P(Interval(t)).mid_rat()));
        return m;
    };
    prev = 1e9;
    for (unsigned j = 0; j < 8; ++j) {
        Rational mu = 1 + pow2(-static_cast<long>(j));
        Dec m = width(tube_threshold(RealAlgebraic(1), R(1), mu), mu);
        CHECK(m < prev);
        prev = m;
    }
    prev = 1e9;
    for (unsigned j = 0; j < 6; ++j) {
        Rational mu = 1 + pow2(-static_cast<long>(j));
        Dec m = width(40, mu);
        CHECK(m < prev);
        prev = m;
    }
}

TEST_CASE("sampled invariance of the lower and upper tube sets") {
    for (long rn : {1L, 2L}) {
        Rational rho = R(rn, 1);
        RationalMatrix A(3, 3, {rho, R(0), R(0), R(0), R(0), R(1), R(0), R(0), R(0)});
        unsigned n0 = tube_threshold(RealAlgebraic(rho), R(1), R(2));
        TubeInvariant T = tube_invariant(RealAlgebraic(rho), R(1), n0, R(2));
        Formula L = T.formula("y", "t", true, false), U = T.formula("y", "t", false, true);
        std::mt19937_64 rng(7 + rn);
        std::uniform_int_distribution<long> tk(0, 64), yk(1, 64);
        std::vector<RatVec> sl, su;
        for (int k = 0; k < 200; ++k) {
            Rational t = R(tk(rng), 64);
            Rational p(0), q(0), tp(1);
            for (size_t i = 0; i < T.P.size(); ++i) {
                p += T.P[i].rational_value() * tp;
                q += T.Q[i].rational_value() * tp;
                tp *= t;
            }
            sl.push_back({Rational(p + R(yk(rng), 16)), t, R(1)});
            su.push_back({Rational(q - R(yk(rng), 16)), t, R(1)});
        }
        std::vector<Rational> deltas{R(1, 7), R(3, 11), R(5, 13), R(3)};
        std::vector<std::string> vars{"y", "t", "s"};
        auto rl = check_invariance_sampled(L, A, sl, deltas, vars);
        auto ru = check_invariance_sampled(U, A, su, deltas, vars);
        CAPTURE(rl.text());
        CAPTURE(ru.text());
        CHECK(rl.overall() == CheckVerdict::Pass);
        CHECK(ru.overall() == CheckVerdict::Pass);
        CHECK_FALSE(eval_formula(L, {{"y", R(1)}, {"t", R(1, 2)}, {"s", R(1)}}));
    }
}

TEST_CASE("zero certification") {
    Dec ln2 = boost::multiprecision::log(Dec(2));
    {
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "2"], ["-2", "1"]], "t0": "1"})J"));
        REQUIRE(z.status == ZeroStatus::ZeroFound);
        CHECK(dec(z.lo) <= ln2);
        CHECK(ln2 <= dec(z.hi));
        // independent Newton refinement from the bracket midpoint
        std::vector<std::pair<Dec, Dec>> terms{{Dec(1), Dec(2)}, {Dec(-2), Dec(1)}};
        Dec t = dec((z.lo + z.hi) / 2);
        for (int k = 0; k < 20; ++k) {
            Dec fp = 2 * boost::multiprecision::exp(2 * t) - 2 * boost::multiprecision::exp(t);
            t -= f_dec(terms, t) / fp;
        }
        CHECK(dec(z.lo) <= t);
        CHECK(t <= dec(z.hi));
        CHECK(boost::multiprecision::abs(t - ln2) < Dec("1e-20"));
        CHECK(boost::multiprecision::abs(dec(z.hi) - dec(z.lo)) < Dec("1e-20"));
    }
    {
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "2"], ["1", "1"], ["1", "0"]], "t0": "1"})J"));
        CHECK(z.status == ZeroStatus::NoZero);
        CHECK(z.sign == 1);
    }
    {
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "1"], ["-1", "1"], ["1", "0"]], "t0": "1"})J"));
        CHECK(z.status == ZeroStatus::NoZero);
        CHECK(z.sign == 1);
    }
    {
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "1"], ["-3", "0"]], "t0": "1"})J"));
        CHECK(z.status == ZeroStatus::NoZero);
        CHECK(z.sign == -1);
    }
    {
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "2"], ["-2", "1"], ["1", "0"]], "t0": "1"})J"));
        CHECK(z.status == ZeroStatus::ZeroFound);
        CHECK(z.hi == 0);
    }
    {
        // (e^t - 2)^2 touches zero at ln 2 without a sign change
        ZeroOptions o;
        o.depth = 24;
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "2"], ["-4", "1"], ["4", "0"]], "t0": "1"})J"), o);
        CHECK(z.status == ZeroStatus::Unknown);
        CHECK(boost::multiprecision::abs(dec((z.lo + z.hi) / 2) - ln2) < Dec("1e-4"));
    }
    {
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "sqrt(2)"], ["-1", "1"]], "t0": "1"})J"));
        CHECK(z.status == ZeroStatus::ZeroFound);
        CHECK(z.hi == 0);
    }
    {
        // e^{sqrt2 t} - 2 e^t vanishes at ln 2 / (sqrt2 - 1)
        auto z = certify_zero_freeness(EP(R"J({"terms": [["1", "sqrt(2)"], ["-2", "1"]], "t0": "2"})J"));
        REQUIRE(z.status == ZeroStatus::ZeroFound);
        Dec root = ln2 / (boost::multiprecision::sqrt(Dec(2)) - 1);
        CHECK(dec(z.lo) <= root);
        CHECK(root <= dec(z.hi));
    }
}

TEST_CASE("tube invariants from zero-free exponential polynomials") {
    {
        auto f = EP(R"J({"terms": [["1", "2"], ["1", "1"], ["1", "0"]], "t0": "1"})J");
        ReductionInstance I = build_reduction(f);
        TubeCertificate c = invariant_from_tubes(I, f);
        REQUIRE(c.found);
        CHECK(c.n == 1);
        CHECK(c.invariant.quantifier_free());
        auto rep = validate_tube_certificate(I, c, 200, 3);
        CAPTURE(rep.text());
        CHECK(rep.overall() == CheckVerdict::Pass);
        // the orbit lies in the Jordan-coordinate invariant
        PrecisionGuard g(128);
        std::vector<std::string> jv{"x1", "x2", "x3", "x4"};
        for (Rational t : {R(0), R(1, 3), R(1), R(2)}) {
            Interval ti(t);
            IntervalVector y{exp(Interval(3) * ti), exp(Interval(2) * ti), exp(ti), ti};
            CHECK(eval_on_box(c.jordan_invariant, jv, y) == 1);
        }
        IntervalVector off{Interval(0), Interval(0), Interval(0), Interval(R(1, 2))};
        CHECK(eval_on_box(c.jordan_invariant, jv, off) == 0);
    }
    {
        auto f = EP(R"J({"terms": [["1", "1"], ["-3", "0"]], "t0": "1"})J");
        ReductionInstance I = build_reduction(f);
        TubeCertificate c = invariant_from_tubes(I, f);
        REQUIRE(c.found);
        CHECK(c.two_sided[0]);
        // the upper tube of e^{2t} stays below 3 times the lower tube of e^t at t = 1
        PrecisionGuard g(128);
        Rational Q1(0), P1(0);
        Rational fac(1);
        for (unsigned k = 0; k <= c.n; ++k) {
            if (k)
                fac *= k;
            Q1 += pow_rat(2 * c.mu, k) / fac;
            P1 += Rational(1) / fac;
        }
        CHECK(Q1 < 3 * P1);
        auto rep = validate_tube_certificate(I, c, 64, 5);
        CAPTURE(rep.text());
        CHECK(rep.overall() == CheckVerdict::Pass);
    }
    {
        auto f = EP(R"J({"terms": [["1", "sqrt(2)"], ["1", "0"]], "t0": "1"})J");
        ReductionInstance I = build_reduction(f);
        TubeCertificate c = invariant_from_tubes(I, f);
        REQUIRE(c.found);
        CHECK_FALSE(c.invariant.quantifier_free());
        auto rep = validate_tube_certificate(I, c);
        CHECK(rep.checks[0].verdict == CheckVerdict::Pass);
        CHECK(rep.overall() == CheckVerdict::Unknown);
    }
    {
        auto f = EP(R"J({"terms": [["1", "2"], ["-2", "1"]], "t0": "1"})J");
        ReductionInstance I = build_reduction(f);
        CHECK(throws_code(ErrorCode::InvalidInput, [&] { invariant_from_tubes(I, f); }));
    }
    {
        auto f = EP(R"J({"terms": [["1", "2"], ["1", "1"], ["1", "0"]], "t0": "1"})J");
        ReductionInstance I = build_reduction(f);
        TubeSearchOptions o;
        o.n_schedule = {1};
        o.mu_steps = 1;
        TubeCertificate a = invariant_from_tubes(I, f, o), b = invariant_from_tubes(I, f, o);
        CHECK(a.to_json().dump() == b.to_json().dump());
    }
}
