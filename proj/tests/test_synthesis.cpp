#include "doctest.h"

#include "ominv/error.hpp"
#include "ominv/synthesis/decide.hpp"
#include "ominv/synthesis/emit.hpp"
#include "ominv/synthesis/fatcone.hpp"
#include "ominv/synthesis/fixtures.hpp"

#include <chrono>
#include <random>

using namespace ominv;

namespace {

Rational R(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

const Fixture &fixture(const std::string &name) {
    static std::vector<Fixture> all = curated_fixtures();
    for (auto &f : all)
        if (f.name == name)
            return f;
    FAIL("missing fixture " << name);
    return all.front();
}

// e^{A delta} by a 60-term Taylor series with a tail bound.
std::vector<std::vector<Interval>> taylor_exp(const RationalMatrix &A, const Rational &delta) {
    size_t n = A.rows();
    std::vector<std::vector<Interval>> S(n, std::vector<Interval>(n, Interval(0))), T = S;
    for (size_t i = 0; i < n; ++i)
        S[i][i] = T[i][i] = Interval(1);
    Rational norm(0);
    for (size_t i = 0; i < n; ++i) {
        Rational row(0);
        for (size_t j = 0; j < n; ++j)
            row += rat_abs(A.at(i, j));
        norm = std::max(norm, row);
    }
    Interval d(delta);
    for (unsigned k = 1; k < 60; ++k) {
        std::vector<std::vector<Interval>> N(n, std::vector<Interval>(n, Interval(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t l = 0; l < n; ++l)
                    if (A.at(l, j) != 0)
                        N[i][j] += T[i][l] * Interval(A.at(l, j));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                T[i][j] = N[i][j] * d / Interval(Rational(k));
                S[i][j] += T[i][j];
            }
    }
    Interval x = Interval(norm * delta);
    Interval tail = pow_int(x, 60) / Interval(Rational(factorial(60))) * exp(x);
    Rational h = tail.hi_rat();
    for (auto &row : S)
        for (auto &e : row)
            e += Interval(-h, h);
    return S;
}

bool overlaps(const Interval &a, const Interval &b) { return !(a.hi_rat() < b.lo_rat() || b.hi_rat() < a.lo_rat()); }

DecideConfig builtin() {
    DecideConfig c;
    c.mode = DecideMode::Builtin;
    return c;
}

} // namespace

TEST_CASE("cone spec of the oscillator") {
    ConeSpec C = ConeSpec::build(RationalMatrix{{0, 1}, {-1, 0}}, {R(1), R(0)});
    CHECK(C.k() == 2);
    CHECK(C.omega_relations.rank() == 1);
    CHECK(C.omega_relations.contains({Integer(1), Integer(1)}));
    CHECK(C.rho_relations.rank() == 2);
    CHECK(C.torus_basis.size() == 1);
    CHECK(cone_classes(C).size() == 1);
}

TEST_CASE("cone membership samples") {
    ConeSpec osc = ConeSpec::build(RationalMatrix{{0, 1}, {-1, 0}}, {R(1), R(0)});
    size_t up = osc.omega(0).sign() > 0 ? 0 : 1;
    std::vector<std::pair<Rational, Rational>> tau(2);
    tau[up] = {R(3, 5), R(4, 5)};
    tau[1 - up] = {R(3, 5), R(-4, 5)};
    for (Rational t : {R(0), R(1), R(7, 2)}) {
        MembershipSample m = cone_membership_sample(osc, t, tau);
        REQUIRE(m.exact);
        CHECK(m.state[0] == osc.F.constant(R(3, 5)));
        CHECK(m.state[1] == osc.F.constant(R(-4, 5)));
    }
    std::vector<std::pair<Rational, Rational>> ones(2, {R(1), R(0)});
    MembershipSample x0 = cone_membership_sample(osc, R(0), ones);
    CHECK(x0.state[0] == osc.F.constant(R(1)));
    CHECK(x0.state[1].is_zero());
    std::vector<std::pair<Rational, Rational>> bad(2, {R(3, 5), R(4, 5)});
    CHECK_THROWS_AS(cone_membership_sample(osc, R(0), bad), Error);
    try {
        cone_membership_sample(osc, R(0), bad);
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotOnTorus);
    }

    ConeSpec jb = ConeSpec::build(RationalMatrix{{0, 1}, {0, 0}}, {R(0), R(1)});
    MembershipSample m = cone_membership_sample(jb, R(2), std::vector<std::pair<Rational, Rational>>(jb.k(), {R(1), R(0)}));
    REQUIRE(m.exact);
    CHECK(m.state[0] == jb.F.constant(R(2)));
    CHECK(m.state[1] == jb.F.constant(R(1)));

    ConeSpec spiral = ConeSpec::build(RationalMatrix{{-1, 1}, {-1, -1}}, {R(1), R(0)});
    MembershipSample e = cone_membership_sample(spiral, R(1), std::vector<std::pair<Rational, Rational>>(2, {R(1), R(0)}));
    REQUIRE(!e.exact);
    Interval em1 = exp(Interval(-1));
    CHECK(overlaps(e.enclosure[0], em1));
    CHECK(e.enclosure[1].contains_zero());
    CHECK((e.enclosure[0].hi_rat() - e.enclosure[0].lo_rat()) < Rational(1, 1000000));
}

TEST_CASE("built-in decisions on the curated fixtures") {
    for (auto &f : curated_fixtures()) {
        CAPTURE(f.name);
        auto t0 = std::chrono::steady_clock::now();
        DecisionOutcome o = decide_eventual(f.A, f.x0, f.target, builtin());
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(o.verdict == f.builtin);
        CHECK(secs < 30.0);
        if (o.verdict == Outcome::Exists)
            CHECK(o.certificate.has_value());
    }
    DecisionOutcome spiral = decide_eventual(fixture("spiral-outside-disk").A, fixture("spiral-outside-disk").x0,
                                             fixture("spiral-outside-disk").target, builtin());
    CHECK(spiral.t0 == 0);

    const Fixture &ge1 = fixture("oscillator-x1-ge-1");
    DecisionOutcome o = decide_eventual(ge1.A, ge1.x0, ge1.target, builtin());
    REQUIRE(o.witness.has_value());
    CHECK(o.witness->kind == "torus-ones");
    CHECK(o.witness->exact);
    CHECK(o.witness->state == std::vector<std::string>{"1", "0"});

    const Fixture &g5 = fixture("growth-x-ge-5");
    DecisionOutcome w = decide_eventual(g5.A, g5.x0, g5.target, builtin());
    REQUIRE(w.witness.has_value());
    CHECK(w.witness->exact);
    CHECK(parse_rational(w.witness->state[0]) >= 5);

    const Fixture &gt1 = fixture("oscillator-x1-gt-1");
    DecisionOutcome u = decide_eventual(gt1.A, gt1.x0, gt1.target, builtin());
    CHECK(u.verdict == Outcome::Unknown);
    CHECK(u.reason == UnknownReason::TangentialSuspected);
}

TEST_CASE("backend decisions agree with the built-in mode") {
    SubprocessBackend backend(std::string(OMINV_MOCK_QE) + " --table " + OMINV_QE_TABLE);
    for (auto &f : curated_fixtures()) {
        CAPTURE(f.name);
        DecideConfig cfg;
        cfg.mode = DecideMode::Backend;
        cfg.backend = &backend;
        DecisionOutcome a = decide_eventual(f.A, f.x0, f.target, cfg);
        CHECK(a.verdict == f.backend);
        CHECK(a.mode_used == DecideMode::Backend);
        CHECK(a.transcript.contains("request_sha256"));
        DecisionOutcome b = decide_eventual(f.A, f.x0, f.target, builtin());
        if (b.verdict != Outcome::Unknown)
            CHECK(a.verdict == b.verdict);
    }
    const Fixture &sp = fixture("spiral-outside-disk");
    DecideConfig cfg;
    cfg.backend = &backend;
    DecisionOutcome a = decide_eventual(sp.A, sp.x0, sp.target, cfg);
    CHECK(a.mode_used == DecideMode::Backend);
    CHECK(a.t0 == 0);
    const Fixture &gt1 = fixture("oscillator-x1-gt-1");
    cfg.mode = DecideMode::Backend;
    DecisionOutcome t = decide_eventual(gt1.A, gt1.x0, gt1.target, cfg);
    CHECK(t.verdict == Outcome::Exists);
    CHECK(!t.certificate.has_value());
    CHECK(!t.certificate_error.empty());
}

TEST_CASE("backend mode without a backend") {
    const Fixture &sp = fixture("spiral-outside-disk");
    DecideConfig cfg;
    cfg.mode = DecideMode::Backend;
    CHECK_THROWS_AS(decide_eventual(sp.A, sp.x0, sp.target, cfg), Error);
}

TEST_CASE("fat cone constants") {
    const Fixture &sp = fixture("spiral-outside-disk");
    ConeSpec C = ConeSpec::build(sp.A, sp.x0);
    FatConeCertificate c = synthesize_fat_cone(C, sp.target, state_var_names(2));
    CHECK(c.rho_relations.rank() == 1);
    CHECK(c.rho_relations.contains({Integer(1), Integer(-1)}));
    for (size_t a = 0; a < C.k(); ++a) {
        CHECK(c.ell[a] == -1);
        CHECK(c.u[a] == -1);
    }
    CHECK(c.s1 >= c.s0);
    CHECK(c.delta >= 1);
    if (c.B > 0)
        CHECK(c.eps * Rational(3 * c.B) <= c.mu_lo);

    // single real eigenvalue 3, no log terms
    ConeSpec g3 = ConeSpec::build(RationalMatrix{{3}}, {R(1)});
    FatConeCertificate c3 = synthesize_fat_cone(g3, Formula::le(MPoly::var("x1"), MPoly(0)), state_var_names(1));
    CHECK(c3.B == 0);
    CHECK(c3.eps == 1);
    CHECK(!c3.mu.has_value());
    CHECK(c3.ell[0] == 3);
    CHECK(c3.u[0] == 3);

    // exponents {0, 1, sqrt 2, -sqrt 2}
    RationalMatrix A(4, 4);
    A.at(1, 1) = 1;
    A.at(2, 3) = 1;
    A.at(3, 2) = 2;
    ConeSpec C4 = ConeSpec::build(A, {R(1), R(1), R(1), R(0)});
    MPoly x2 = MPoly::var("x2"), x3 = MPoly::var("x3"), x1 = MPoly::var("x1");
    Formula Y = Formula::le(x3 * x2 + x1, MPoly(0));
    FatConeCertificate c4 = synthesize_fat_cone(C4, Y, state_var_names(4));
    REQUIRE(c4.mu.has_value());
    CHECK(c4.B == 0);
    for (size_t a = 0; a < C4.k(); ++a) {
        CHECK(nf_compare(C4.F.constant(c4.ell[a]), C4.rho(a)) <= 0);
        CHECK(nf_compare(C4.rho(a), C4.F.constant(c4.u[a])) <= 0);
        Rational w = c4.u[a] - c4.ell[a];
        CHECK(Rational(4) * Rational(c4.M2) * Rational(static_cast<long>(C4.k())) * w * w <= c4.mu_lo * c4.mu_lo);
    }
    CHECK(nf_compare(C4.F.constant(c4.mu_lo), *c4.mu) <= 0);
}

TEST_CASE("fat cone formula holds at rational fat points and avoids the target") {
    std::mt19937_64 rng(7);
    for (const char *name : {"spiral-outside-disk", "oscillator-x1-ge-2"}) {
        CAPTURE(name);
        const Fixture &f = fixture(name);
        ConeSpec C = ConeSpec::build(f.A, f.x0);
        FatConeCertificate c = synthesize_fat_cone(C, f.target, state_var_names(2));
        Formula body = c.formula.body();
        RatVec q;
        for (size_t a = 0; a < C.k(); ++a)
            q.push_back(C.rho(a).rational_value());
        std::uniform_int_distribution<long> un(-40, 40);
        size_t checked = 0;
        for (int it = 0; it < 60; ++it) {
            Rational s = c.s1 * Rational(1 + it % 5);
            Rational r = c.delta + R(it % 7, 3);
            if (!(exact_power(s, c.eps) && r <= *exact_power(s, c.eps)))
                continue;
            std::vector<CElem> tau = rational_torus_point(C, {R(un(rng), 7)});
            auto pt = fat_assignment(C, c, s, r, q, tau);
            REQUIRE(pt.has_value());
            CHECK(eval_formula(body, *pt, C.F.field));
            std::map<std::string, NFElem> st;
            for (auto &v : c.state_vars)
                st.emplace(v, pt->at(v));
            CHECK(!eval_formula(f.target, st, C.F.field));
            ++checked;
        }
        CHECK(checked > 10);
    }
}

TEST_CASE("cone invariance under the flow, sampled") {
    std::vector<std::pair<RationalMatrix, RatVec>> systems = {
        {RationalMatrix{{-1, 1}, {-1, -1}}, {R(1), R(0)}},
        {RationalMatrix{{0, 1}, {-1, 0}}, {R(1), R(0)}},
        {RationalMatrix{{0, 1}, {0, 0}}, {R(0), R(1)}},
        {RationalMatrix{{1, 1, 0}, {0, 1, 0}, {0, 0, -2}}, {R(1), R(2), R(3)}},
    };
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(0, 64), un(-30, 30);
    PrecisionGuard g(160);
    for (auto &[A, x0] : systems) {
        ConeSpec C = ConeSpec::build(A, x0);
        for (int it = 0; it < 1000; ++it) {
            Rational t = R(num(rng), 32), delta = R(num(rng), 16);
            RatVec u;
            for (size_t j = 0; j < C.torus_basis.size(); ++j)
                u.push_back(R(un(rng), 5));
            std::vector<CElem> tau = rational_torus_point(C, u);
            std::vector<ComplexInterval> ti, tj;
            for (size_t a = 0; a < C.k(); ++a) {
                Interval re = tau[a].re.enclose(), im = tau[a].im.enclose();
                ti.push_back({re, im});
                Interval ph = C.omega(a).enclose() * Interval(delta);
                Interval c = cos(ph), s = sin(ph);
                tj.push_back({re * c - im * s, re * s + im * c});
            }
            std::vector<Interval> v = cone_point_enclosure(C, Interval(t), ti);
            std::vector<Interval> moved = cone_point_enclosure(C, Interval(t + delta), tj);
            auto E = taylor_exp(A, delta);
            for (size_t i = 0; i < C.dim(); ++i) {
                Interval acc(0);
                for (size_t j = 0; j < C.dim(); ++j)
                    acc += E[i][j] * v[j];
                CHECK(overlaps(acc, moved[i]));
            }
        }
    }
}

TEST_CASE("whole-orbit invariant text") {
    ConeSpec osc = ConeSpec::build(RationalMatrix{{0, 1}, {-1, 0}}, {R(1), R(0)});
    ExtendedInvariant e0 = emit_whole_orbit_invariant(osc, R(0), state_var_names(2));
    CHECK(e0.text.rfind("(exists ((t 0 inf)", 0) == 0);
    CHECK(!e0.decidable);
    CHECK(e0.note.find("Schanuel") != std::string::npos);
    ExtendedInvariant e1 = emit_whole_orbit_invariant(osc, R(1), state_var_names(2));
    CHECK(e1.text.rfind("(or ", 0) == 0);
    CHECK(e1.text.find("(exists ((t 0 1))") != std::string::npos);
    CHECK(e1.text.find("(cos (* ") != std::string::npos);
    ConeSpec grow = ConeSpec::build(RationalMatrix{{1}}, {R(1)});
    ExtendedInvariant e2 = emit_whole_orbit_invariant(grow, R(2), {"x"});
    CHECK(e2.text.find("(exists ((t 2 inf)") != std::string::npos);
    CHECK(e2.text.find("(exp (* 1 t))") != std::string::npos);
}

TEST_CASE("certificate json round trip and determinism") {
    const Fixture &sp = fixture("spiral-outside-disk");
    DecisionOutcome a = decide_eventual(sp.A, sp.x0, sp.target, builtin());
    DecideConfig serial = builtin();
    serial.tail.parallel = false;
    DecisionOutcome b = decide_eventual(sp.A, sp.x0, sp.target, serial);
    REQUIRE(a.certificate.has_value());
    REQUIRE(b.certificate.has_value());
    std::string ja = outcome_to_json(a).dump(), jb = outcome_to_json(b).dump();
    CHECK(ja == jb);
    FatConeCertificate back = certificate_from_json(certificate_to_json(*a.certificate));
    CHECK(back.formula == a.certificate->formula);
    CHECK(back.s1 == a.certificate->s1);
    CHECK(back.rho_relations == a.certificate->rho_relations);
    CHECK(certificate_to_json(back)["formula"] == certificate_to_json(*a.certificate)["formula"]);
}
