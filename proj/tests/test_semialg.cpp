#include "doctest.h"

#include "ominv/error.hpp"
#include "ominv/semialg/boxqe.hpp"
#include "ominv/semialg/formula.hpp"
#include "ominv/semialg/qe.hpp"
#include "ominv/semialg/torus.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace ominv;

namespace {

MPoly X(const char *v) { return MPoly::var(v); }
Rational R(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

std::map<std::string, Rational> pt(std::initializer_list<std::pair<const std::string, Rational>> xs) { return xs; }

Formula circle_implies_not(const Formula &atom) {
    Formula circ = Formula::eq(X("c") * X("c") + X("s") * X("s"), MPoly(1));
    return Formula::implies(circ, Formula::negate(atom));
}

Box unit_box() { return {{"c", {R(-1), R(1)}}, {"s", {R(-1), R(1)}}}; }
Box slack_box() { return {{"c", {R(-2), R(2)}}, {"s", {R(-2), R(2)}}}; }

MPoly random_poly(std::mt19937_64 &rng, const std::vector<std::string> &vars, unsigned deg) {
    std::uniform_int_distribution<int> coef(-5, 5), ex(0, static_cast<int>(deg));
    MPoly p;
    for (int t = 0; t < 4; ++t) {
        Monomial m;
        for (auto &v : vars) {
            int e = ex(rng);
            if (e)
                m = m * Monomial::var(v, static_cast<unsigned>(e));
        }
        p += MPoly::term(Rational(coef(rng)), m);
    }
    return p;
}

Formula random_formula(std::mt19937_64 &rng, const std::vector<std::string> &vars) {
    std::uniform_int_distribution<int> pick(0, 2);
    std::vector<Formula> ds;
    for (int i = 0; i < 2; ++i) {
        std::vector<Formula> cs;
        for (int j = 0; j < 2; ++j) {
            Rel r = pick(rng) == 0 ? Rel::Gt : pick(rng) == 1 ? Rel::Ge : Rel::Gt;
            cs.push_back(Formula::atom(random_poly(rng, vars, 2), r));
        }
        ds.push_back(Formula::conj(cs));
    }
    return Formula::disj(ds);
}

std::string mock_path() { return OMINV_MOCK_QE; }

std::filesystem::path write_table(const std::string &name,
                                  const std::vector<std::pair<Formula, std::string>> &rows) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    for (auto &[f, reply] : rows)
        out << sha256_hex(f.to_sexpr()) << " " << reply << "\n";
    return p;
}

} // namespace

TEST_CASE("torus formula without relations is the full circle") {
    RelationLattice rel;
    rel.k = 1;
    Formula t = build_torus_formula(rel);
    CHECK(t.to_sexpr() == Formula::eq(X("c1") * X("c1") + X("s1") * X("s1"), MPoly(1)).to_sexpr());
    CHECK(eval_formula(t, pt({{"c1", R(3, 5)}, {"s1", R(4, 5)}})));
    CHECK_FALSE(eval_formula(t, pt({{"c1", R(1, 2)}, {"s1", R(1, 2)}})));
}

TEST_CASE("torus formula for a conjugate pair") {
    RelationLattice rel;
    rel.k = 2;
    rel.generators = {IntVec{1, 1}};
    Formula t = build_torus_formula(rel);
    MPoly c1 = X("c1"), s1 = X("s1"), c2 = X("c2"), s2 = X("s2");
    Formula hand = Formula::conj({Formula::eq(c1 * c1 + s1 * s1, MPoly(1)), Formula::eq(c2 * c2 + s2 * s2, MPoly(1)),
                                  Formula::eq(c1 * c2 - s1 * s2, MPoly(1)), Formula::eq(c1 * s2 + s1 * c2)});
    CHECK(t == hand);
    CHECK(eval_formula(t, pt({{"c1", R(3, 5)}, {"s1", R(4, 5)}, {"c2", R(3, 5)}, {"s2", R(-4, 5)}})));
    CHECK_FALSE(eval_formula(t, pt({{"c1", R(3, 5)}, {"s1", R(4, 5)}, {"c2", R(3, 5)}, {"s2", R(4, 5)}})));
}

TEST_CASE("negative exponents use the conjugate") {
    auto names = std::vector<std::pair<std::string, std::string>>{torus_var_names(0)};
    auto [re, im] = torus_character(IntVec{-2}, names);
    // (3/5 - 4/5 i)^2 = -7/25 - 24/25 i
    auto p = pt({{"c1", R(3, 5)}, {"s1", R(4, 5)}});
    CHECK(re.eval(p) == R(-7, 25));
    CHECK(im.eval(p) == R(-24, 25));
}

TEST_CASE("all-ones point satisfies every torus formula") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-3, 3), kk(1, 4), gg(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        RelationLattice rel;
        rel.k = static_cast<size_t>(kk(rng));
        int g = gg(rng);
        for (int i = 0; i < g; ++i) {
            IntVec a(rel.k);
            for (auto &x : a)
                x = d(rng);
            rel.generators.push_back(a);
        }
        std::map<std::string, Rational> one;
        for (size_t l = 0; l < rel.k; ++l) {
            auto [c, s] = torus_var_names(l);
            one[c] = 1;
            one[s] = 0;
        }
        CHECK(eval_formula(build_torus_formula(rel), one));
    }
}

TEST_CASE("exact evaluation") {
    CHECK(eval_formula(Formula::eq(X("x") * X("x") + X("y") * X("y"), MPoly(1)), pt({{"x", R(3, 5)}, {"y", R(4, 5)}})));
    CHECK_FALSE(eval_formula(Formula::gt(X("x"), MPoly(2)), pt({{"x", R(2)}})));
    CHECK(eval_formula(Formula::ge(X("x"), MPoly(2)), pt({{"x", R(2)}})));
    try {
        eval_formula(Formula::gt(X("x")), pt({{"y", R(1)}}));
        FAIL("expected UnboundVariable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::UnboundVariable);
    }
}

TEST_CASE("formula text round trip") {
    Formula f = Formula::forall({{"c", R(-1), R(1)}, {"s", R(-1), R(1)}},
                                circle_implies_not(Formula::ge(X("c") * R(3, 2) - X("s"), MPoly(2))));
    std::string text = f.to_sexpr();
    CHECK(Formula::parse(text).to_sexpr() == text);
    CHECK(Formula::parse("(exists ((y)) (and (atom (poly (1 (y 2)) (-1 (x 1))) eq) (atom (poly (1 (y 1))) gt)))")
              .free_vars() == std::set<std::string>{"x"});
    try {
        Formula::parse("(atom (poly (1 (x 1))) lt)");
        FAIL("expected ParseError");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

TEST_CASE("atoms are canonical") {
    CHECK(Formula::gt(X("x") * R(2) - MPoly(4)) == Formula::gt(X("x") - MPoly(2)));
    CHECK(Formula::eq(MPoly(2) - X("x")) == Formula::eq(X("x") - MPoly(2)));
    CHECK(Formula::gt(MPoly(1)).kind() == FKind::True);
    CHECK(Formula::ge(MPoly(-1)).kind() == FKind::False);
}

TEST_CASE("box decision on the circle") {
    BoxOptions opt;
    Formula far = circle_implies_not(Formula::ge(X("c"), MPoly(2)));
    Formula touch = circle_implies_not(Formula::ge(X("c"), MPoly(1)));
    Formula tangent = circle_implies_not(Formula::gt(X("c"), MPoly(1)));
    for (const Box &b : {unit_box(), slack_box()}) {
        auto v = decide_forall_box(far, b, opt);
        CHECK(v.verdict == Verdict::True);
        auto w = decide_forall_box(touch, b, opt);
        REQUIRE(w.verdict == Verdict::False);
        CHECK(w.witness.at("c") == 1);
        CHECK(w.witness.at("s") == 0);
    }
    CHECK(decide_forall_box(far, unit_box(), opt).depth <= 3);

    opt.depth_cap = 14;
    auto t = decide_forall_box(tangent, slack_box(), opt);
    CHECK(t.verdict == Verdict::Unknown);
    CHECK(t.reason == UnknownReason::DepthExhausted);
    // inside the unit box the halfplane c > 1 is empty, so this one is provable
    CHECK(decide_forall_box(tangent, unit_box(), opt).verdict == Verdict::True);
}

TEST_CASE("box decision is deterministic across serial and parallel runs") {
    std::mt19937_64 rng(11);
    std::vector<std::string> vars{"x", "y"};
    for (int trial = 0; trial < 40; ++trial) {
        Formula f = random_formula(rng, vars);
        Box b{{"x", {R(-2), R(1)}}, {"y", {R(-1), R(2)}}};
        BoxOptions ser{8, 1 << 12, 128, false}, par{8, 1 << 12, 128, true};
        auto a = decide_forall_box(f, b, ser), c = decide_forall_box(f, b, par);
        CHECK(a.verdict == c.verdict);
        CHECK(a.witness == c.witness);
        CHECK(a.depth == c.depth);
    }
}

TEST_CASE("box decision soundness on random formulas") {
    std::mt19937_64 rng(2024);
    std::vector<std::string> vars{"x", "y"};
    int proved = 0, refuted = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Formula f = random_formula(rng, vars);
        std::uniform_int_distribution<int> lo(-4, 0), w(1, 4);
        Rational xl = lo(rng), yl = lo(rng);
        Rational xh = xl + w(rng), yh = yl + w(rng);
        Box b{{"x", {xl, xh}}, {"y", {yl, yh}}};
        auto v = decide_forall_box(f, b, BoxOptions{8, 1 << 12, 128, true});
        if (v.verdict == Verdict::False) {
            ++refuted;
            CHECK_FALSE(eval_formula(f, v.witness));
            CHECK(v.witness.at("x") >= xl);
            CHECK(v.witness.at("x") <= xh);
        }
        bool counter = false;
        std::uniform_int_distribution<long> u(0, 1 << 10);
        for (int k = 0; k < 1000; ++k) {
            Rational px = xl + (xh - xl) * R(u(rng), 1 << 10);
            Rational py = yl + (yh - yl) * R(u(rng), 1 << 10);
            if (!eval_formula(f, pt({{"x", px}, {"y", py}})))
                counter = true;
        }
        if (v.verdict == Verdict::True) {
            ++proved;
            CHECK_FALSE(counter);
        }
        if (counter)
            CHECK(v.verdict != Verdict::True);
    }
    CHECK(proved > 0);
    CHECK(refuted > 0);
}

TEST_CASE("substitution") {
    MPoly t = X("t");
    CHECK(substitute(Formula::gt(X("x")), {{"x", t * t}}) == Formula::gt(t * t));
    Formula lin = Formula::eq(X("x") + X("y"), MPoly(1));
    MPoly u = X("u");
    CHECK(substitute(lin, {{"x", u}, {"y", MPoly(1) - u}}).kind() == FKind::True);

    RelationLattice rel;
    rel.k = 2;
    rel.generators = {IntVec{1, 1}};
    Formula tor = build_torus_formula(rel);
    Formula closed = substitute(tor, {{"c1", MPoly(R(3, 5))}, {"s1", MPoly(R(4, 5))}, {"c2", MPoly(R(3, 5))},
                                      {"s2", MPoly(R(-4, 5))}});
    CHECK(closed.free_vars().empty());
    CHECK(eval_formula(closed, {}));
}

TEST_CASE("substitution avoids capture") {
    // exists y in [0,4]: y > x, with x -> y + 1
    Formula f = Formula::exists({{"y", R(0), R(4)}}, Formula::gt(X("y"), X("x")));
    Formula g = substitute(f, {{"x", X("y") + MPoly(1)}});
    CHECK(g.free_vars() == std::set<std::string>{"y"});
    // y0 = 2: exists y' in [0,4] with y' > 3
    CHECK(decide_closed(substitute(g, {{"y", MPoly(2)}}), {}).verdict == Verdict::True);
    CHECK(decide_closed(substitute(g, {{"y", MPoly(3)}}), {}).verdict == Verdict::False);
}

TEST_CASE("substitute then evaluate matches pointwise composition") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> n(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        Formula f = random_formula(rng, {"x", "y"});
        MPoly px = random_poly(rng, {"a"}, 2), py = random_poly(rng, {"a", "b"}, 1);
        auto p = pt({{"a", R(n(rng), 4)}, {"b", R(n(rng), 3)}});
        bool lhs = eval_formula(substitute(f, {{"x", px}, {"y", py}}), p);
        bool rhs = eval_formula(f, pt({{"x", px.eval(p)}, {"y", py.eval(p)}}));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("dnf conversion preserves truth") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> n(-12, 12);
    for (int trial = 0; trial < 100; ++trial) {
        Formula f = Formula::negate(Formula::conj(
            {random_formula(rng, {"x", "y"}), Formula::negate(Formula::eq(X("x") - X("y")))}));
        Formula d = from_dnf(to_dnf(f));
        for (int k = 0; k < 20; ++k) {
            auto p = pt({{"x", R(n(rng), 3)}, {"y", R(n(rng), 3)}});
            CHECK(eval_formula(f, p) == eval_formula(d, p));
        }
    }
}

TEST_CASE("external QE returns quantifier-free input unchanged") {
    Formula f = Formula::gt(X("x"));
    auto r = external_qe(f, nullptr);
    CHECK(r.formula == f);
    CHECK(r.samples == 0);
}

TEST_CASE("external QE without a backend") {
    Formula f = Formula::exists({{"y", std::nullopt, std::nullopt}}, Formula::eq(X("y") * X("y"), X("x")));
    try {
        external_qe(f, nullptr);
        FAIL("expected BackendUnavailable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::BackendUnavailable);
    }
}

TEST_CASE("external QE through a subprocess backend") {
    MPoly y = X("y"), x = X("x");
    Formula halfparabola = Formula::conj({Formula::eq(y * y, x), Formula::gt(y)});
    Formula unbounded = Formula::exists({{"y", std::nullopt, std::nullopt}}, halfparabola);
    Formula bounded = Formula::exists({{"y", R(0), R(4)}}, halfparabola);

    MPoly c = X("c"), s = X("s"), v11 = X("v11"), v12 = X("v12");
    Formula rotation = Formula::forall(
        {{"c", R(-1), R(1)}, {"s", R(-1), R(1)}},
        circle_implies_not(Formula::ge(v11 * c + v12 * s, MPoly(2))));
    Formula row_norm = Formula::gt(MPoly(4) - v11 * v11 - v12 * v12);

    auto table = write_table("ominv_semialg_table.txt", {{unbounded, Formula::gt(x).to_sexpr()},
                                                         {bounded, Formula::gt(x).to_sexpr()},
                                                         {rotation, row_norm.to_sexpr()}});
    SubprocessBackend backend(mock_path() + " --table " + table.string());

    auto a = external_qe(unbounded, &backend);
    CHECK(a.formula == Formula::gt(x));
    CHECK(a.samples == 100);

    auto b = external_qe(bounded, &backend);
    CHECK(b.formula == Formula::gt(x));
    CHECK(b.decided >= 30);

    auto r = external_qe(rotation, &backend);
    CHECK(r.formula == row_norm);
    CHECK(r.decided >= 10);

    SubprocessBackend liar(mock_path() + " --mode lie");
    try {
        external_qe(rotation, &liar);
        FAIL("expected BackendDisagreement");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::BackendDisagreement);
    }

    SubprocessBackend refuses(mock_path() + " --mode unsupported");
    try {
        external_qe(rotation, &refuses);
        FAIL("expected BackendUnavailable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::BackendUnavailable);
    }

    SubprocessBackend missing("/nonexistent/qe-engine");
    try {
        external_qe(rotation, &missing);
        FAIL("expected BackendUnavailable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::BackendUnavailable);
    }
    std::filesystem::remove(table);
}

TEST_CASE("request escaping round trip") {
    std::string s = "line one\nline\\two\n";
    CHECK(escape_line(s).find('\n') == std::string::npos);
    CHECK(unescape_line(escape_line(s)) == s);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
