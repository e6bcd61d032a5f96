#include "doctest.h"

#include "ominv/checker/checker.hpp"
#include "ominv/error.hpp"
#include "ominv/synthesis/decide.hpp"
#include "ominv/synthesis/fixtures.hpp"

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

Rational width(const Interval &I) { return I.hi_rat() - I.lo_rat(); }

// e^{At} x0 in 100-digit floating point by scaling and squaring
std::vector<Dec> float_orbit(const RationalMatrix &A, const RatVec &x0, const Rational &t) {
    size_t n = A.rows();
    using M = std::vector<std::vector<Dec>>;
    M B(n, std::vector<Dec>(n));
    Dec tt = dec(t);
    unsigned sq = 12;
    Dec scale = tt / Dec(1u << sq);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            B[i][j] = dec(A.at(i, j)) * scale;
    auto mul = [&](const M &X, const M &Y) {
        M Z(n, std::vector<Dec>(n, Dec(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l)
                for (size_t j = 0; j < n; ++j)
                    Z[i][j] += X[i][l] * Y[l][j];
        return Z;
    };
    M E(n, std::vector<Dec>(n, Dec(0))), T = E;
    for (size_t i = 0; i < n; ++i)
        E[i][i] = T[i][i] = Dec(1);
    for (unsigned k = 1; k < 60; ++k) {
        T = mul(T, B);
        for (auto &row : T)
            for (auto &e : row)
                e /= Dec(k);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                E[i][j] += T[i][j];
    }
    for (unsigned s = 0; s < sq; ++s)
        E = mul(E, E);
    std::vector<Dec> x(n, Dec(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            x[i] += E[i][j] * dec(x0[j]);
    return x;
}

FatConeCertificate certificate(const RationalMatrix &A, const RatVec &x0, const Formula &Y) {
    DecideConfig cfg;
    cfg.mode = DecideMode::Builtin;
    DecisionOutcome out = decide_eventual(A, x0, Y, cfg);
    REQUIRE(out.verdict == Outcome::Exists);
    REQUIRE(out.certificate.has_value());
    return *out.certificate;
}

CheckVerdict check_of(const ValidationReport &rep, const std::string &name) {
    for (auto &c : rep.checks)
        if (c.name == name)
            return c.verdict;
    FAIL("missing check " << name);
    return CheckVerdict::Unknown;
}

MPoly X1() { return MPoly::var("x1"); }
MPoly X2() { return MPoly::var("x2"); }

} // namespace

TEST_CASE("orbit enclosure of the oscillator") {
    RationalMatrix A{{0, 1}, {-1, 0}};
    RatVec x0{R(1), R(0)};
    IntervalVector x = orbit_enclosure(A, x0, R(0), 64);
    REQUIRE(x.size() == 2);
    CHECK(x[0].contains(Interval(1)));
    CHECK(x[1].contains(Interval(0)));
    CHECK(width(x[0]) <= pow2(-63));
    CHECK(width(x[1]) <= pow2(-63));

    IntervalVector y = orbit_enclosure(A, x0, R(157, 100), 100);
    Dec t = dec(R(157, 100));
    CHECK(inside(y[0], boost::multiprecision::cos(t)));
    CHECK(inside(y[1], -boost::multiprecision::sin(t)));
    CHECK(width(y[0]) <= pow2(-99));
}

TEST_CASE("orbit enclosure of e") {
    IntervalVector x = orbit_enclosure(RationalMatrix{{1}}, {R(1)}, R(1), 100);
    Dec e = boost::multiprecision::exp(Dec(1));
    CHECK(inside(x[0], e));
    CHECK(width(x[0]) <= Rational(1) / Rational(Integer("10000000000000000000000000")));
    CHECK_THROWS_AS(orbit_enclosure(RationalMatrix{{1}}, {R(1)}, R(-1), 64), Error);
}

TEST_CASE("orbit enclosure width bound tightens with precision") {
    std::vector<std::tuple<RationalMatrix, RatVec, Rational>> sys = {
        {RationalMatrix{{0, 1}, {-1, 0}}, {R(1), R(0)}, R(157, 100)},
        {RationalMatrix{{-1, 1}, {-1, -1}}, {R(1), R(0)}, R(3)},
        {RationalMatrix{{-1, 1}, {0, -1}}, {R(0), R(1)}, R(5, 2)},
        {RationalMatrix{{1}}, {R(1)}, R(1)},
    };
    for (auto &[A, x0, t] : sys) {
        Rational prev = -1;
        for (unsigned bits = 40; bits <= 80; ++bits) {
            IntervalVector x = orbit_enclosure(A, x0, t, bits);
            Rational w(0);
            for (auto &v : x) {
                Rational scale = std::max(Rational(1), v.mag());
                CHECK(width(v) <= pow2(1 - static_cast<long>(bits)) * scale);
                w = std::max(w, width(v));
            }
            if (prev >= 0)
                CHECK(w <= prev / 2);
            prev = w;
        }
    }
}

TEST_CASE("orbit enclosures contain a 100-digit float oracle") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> ent(-3, 3), tn(0, 12), dim(1, 3);
    size_t done = 0;
    while (done < 200) {
        size_t n = static_cast<size_t>(dim(rng));
        std::vector<Rational> e;
        for (size_t i = 0; i < n * n; ++i)
            e.push_back(R(ent(rng)));
        RationalMatrix A(n, n, e);
        RatVec x0;
        for (size_t i = 0; i < n; ++i)
            x0.push_back(R(ent(rng), 2));
        Rational t = R(tn(rng), 4);
        CAPTURE(to_string(RatVec(e)));
        CAPTURE(to_string(x0));
        CAPTURE(to_string(t));
        IntervalVector x = orbit_enclosure(A, x0, t, 100);
        std::vector<Dec> f = float_orbit(A, x0, t);
        for (size_t i = 0; i < n; ++i)
            CHECK(inside(x[i], f[i]));
        ++done;
    }
}

TEST_CASE("Jordan enclosure of the exponential matches the Taylor series") {
    std::vector<RationalMatrix> mats = {RationalMatrix{{0, 1}, {-1, 0}}, RationalMatrix{{-1, 1}, {-1, -1}},
                                        RationalMatrix{{-1, 1}, {0, -1}},
                                        RationalMatrix{{2, 0, 0}, {0, 0, -2}, {0, 2, 0}}};
    Rational tol = Rational(1) / Rational(Integer("10000000000000000000000000"));
    for (auto &A : mats) {
        size_t n = A.rows();
        for (Rational t : {R(0), R(1, 2), R(1)}) {
            auto T = taylor_exp_matrix(A, t);
            for (size_t j = 0; j < n; ++j) {
                RatVec e(n, R(0));
                e[j] = 1;
                IntervalVector col = orbit_enclosure(A, e, t, 128);
                for (size_t i = 0; i < n; ++i) {
                    CHECK((col[i] - T[i][j]).contains_zero());
                    CHECK(width(col[i]) <= tol);
                    CHECK(width(T[i][j]) <= tol);
                }
            }
        }
    }
}

TEST_CASE("sampled invariance") {
    RationalMatrix A{{-1}};
    std::vector<RatVec> pts = {{R(0)}, {R(1, 2)}, {R(1)}, {R(2)}, {R(-1)}};
    std::vector<Rational> deltas = {R(0), R(1), R(2)};
    MPoly x = MPoly::var("x");
    ValidationReport ok = check_invariance_sampled(Formula::ge(x), A, pts, deltas, {"x"});
    CHECK(ok.overall() == CheckVerdict::Pass);
    ValidationReport bad = check_invariance_sampled(Formula::ge(x, MPoly(1)), A, pts, deltas, {"x"});
    REQUIRE(bad.overall() == CheckVerdict::Fail);
    CHECK(bad.checks.front().evidence.find("x=(1) delta=1") != std::string::npos);
    ValidationReport none = check_invariance_sampled(Formula::ge(x, MPoly(10)), A, pts, deltas, {"x"});
    CHECK(none.overall() == CheckVerdict::Unknown);
}

TEST_CASE("sampled disjointness") {
    MPoly x = MPoly::var("x");
    Formula I = Formula::conj({Formula::ge(x), Formula::le(x, MPoly(1))});
    Formula Y = Formula::conj({Formula::ge(x, MPoly(2)), Formula::le(x, MPoly(3))});
    CHECK(check_disjoint_sampled(I, I, {"x"}, 200).overall() == CheckVerdict::Fail);
    CHECK(check_disjoint_sampled(I, Y, {"x"}, 200).overall() == CheckVerdict::Pass);
}

TEST_CASE("report verdict merge") {
    ValidationReport r;
    r.add("a", CheckVerdict::Pass, "x");
    CHECK(r.overall() == CheckVerdict::Pass);
    r.add("b", CheckVerdict::Unknown, "y");
    CHECK(r.overall() == CheckVerdict::Unknown);
    r.add("c", CheckVerdict::Fail, "z");
    CHECK(r.overall() == CheckVerdict::Fail);
    CHECK(r.text().find("overall fail") != std::string::npos);
    CHECK(r.to_json()["checks"].size() == 3);
}

TEST_CASE("fat cone membership") {
    RationalMatrix A{{-1, 1}, {0, -1}};
    RatVec x0{R(0), R(1)};
    Formula Y = Formula::ge(X1() * X1() + X2() * X2(), MPoly(4));
    FatConeCertificate c = certificate(A, x0, Y);
    ConeSpec C = ConeSpec::build(A, x0);
    CHECK(c.eps == R(1, 3));
    CHECK(c.B == 2);
    size_t members = 0;
    for (long i = 0; i < 6; ++i) {
        Rational s = c.s1 * Rational(1 + i);
        Rational r = c.delta + R(i, 2);
        auto pt = fat_assignment(C, c, s, r, {R(-1)}, rational_torus_point(C, {}));
        REQUIRE(pt.has_value());
        RatVec y{pt->at("x1").rational_value(), pt->at("x2").rational_value()};
        Verdict v = fat_cone_member(C, c, y);
        CHECK(v == Verdict::True);
        members += v == Verdict::True;
    }
    CHECK(members == 6);
    CHECK(fat_cone_member(C, c, x0) == Verdict::False);
    CHECK(fat_cone_member(C, c, {R(2), R(0)}) == Verdict::False);
    CHECK(fat_cone_member(C, c, {R(0), R(0)}) == Verdict::False);
}

TEST_CASE("synthesized certificates validate") {
    for (auto &f : curated_fixtures()) {
        if (f.builtin != Outcome::Exists)
            continue;
        CAPTURE(f.name);
        FatConeCertificate c = certificate(f.A, f.x0, f.target);
        ValidationReport rep = validate_certificate(c, f.A, f.x0, f.target);
        CAPTURE(rep.text());
        CHECK(rep.overall() == CheckVerdict::Pass);
        CHECK(check_of(rep, "invariance") == CheckVerdict::Pass);
        CHECK(check_of(rep, "I-samples") == CheckVerdict::Pass);
        CHECK(rep.text().find("samples=1000") != std::string::npos);
    }
    RationalMatrix A{{-1, 1}, {0, -1}};
    RatVec x0{R(0), R(1)};
    Formula Y = Formula::ge(X1() * X1() + X2() * X2(), MPoly(4));
    ValidationReport rep = validate_certificate(certificate(A, x0, Y), A, x0, Y);
    CAPTURE(rep.text());
    CHECK(rep.overall() == CheckVerdict::Pass);
}

TEST_CASE("corrupted certificates fail") {
    std::vector<std::tuple<RationalMatrix, RatVec, Formula>> sys = {
        {RationalMatrix{{-1, 1}, {0, -1}}, {R(0), R(1)}, Formula::ge(X1() * X1() + X2() * X2(), MPoly(4))},
        {RationalMatrix{{-1, 1}, {-1, -1}}, {R(1), R(0)}, Formula::ge(X1() * X1() + X2() * X2(), MPoly(4))},
        {RationalMatrix{{0, 1}, {-1, 0}}, {R(1), R(0)}, Formula::ge(X1(), MPoly(2))},
    };
    ValidateOptions opt;
    opt.invariance_samples = 200;
    for (auto &[A, x0, Y] : sys) {
        FatConeCertificate c = certificate(A, x0, Y);
        auto muts = certificate_mutations(c);
        REQUIRE(muts.size() == 10);
        for (auto &[label, m] : muts) {
            CAPTURE(label);
            ValidationReport rep = validate_certificate(m, A, x0, Y, opt);
            CAPTURE(rep.text());
            CHECK(rep.overall() == CheckVerdict::Fail);
            if (label == "eps-doubled")
                CHECK(check_of(rep, "eps-gap") == CheckVerdict::Fail);
            if (label == "u-below-rho")
                CHECK(check_of(rep, "box") == CheckVerdict::Fail);
            if (label == "box-widened")
                CHECK(check_of(rep, "box") == CheckVerdict::Fail);
            if (label == "formula-shifted")
                CHECK(check_of(rep, "formula-matches") == CheckVerdict::Fail);
        }
        ValidationReport mismatch = validate_certificate(c, A, {R(1), R(1)}, Y, opt);
        CHECK(check_of(mismatch, "inputs-match") == CheckVerdict::Fail);
    }
}

TEST_CASE("validation is deterministic and survives json") {
    RationalMatrix A{{-1, 1}, {-1, -1}};
    RatVec x0{R(1), R(0)};
    Formula Y = Formula::ge(X1() * X1() + X2() * X2(), MPoly(4));
    FatConeCertificate c = certificate(A, x0, Y);
    ValidateOptions par, ser;
    par.invariance_samples = ser.invariance_samples = 100;
    ser.parallel = false;
    std::string a = validate_certificate(c, A, x0, Y, par).text();
    CHECK(a == validate_certificate(c, A, x0, Y, ser).text());
    FatConeCertificate back = certificate_from_json(nlohmann::json::parse(certificate_to_json(c).dump()));
    CHECK(validate_certificate(back, A, x0, Y, par).text() == a);
}
