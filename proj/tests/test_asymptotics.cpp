#include "doctest.h"

#include "ominv/asymptotics/explog.hpp"
#include "ominv/error.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

using namespace ominv;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

FieldPtr sqrt2_field() {
    static FieldPtr K = NumberField::make_real(sqrt_alg(Rational(2)));
    return K;
}

NFElem sqrt2() { return NFElem::generator(sqrt2_field()); }
NFElem q2(long a, long b = 0) { return NFElem(sqrt2_field(), Rational(a)) + sqrt2() * Rational(b); }

QPoly P(std::initializer_list<long> c) { return QPoly(c); }

ExpLogSum sum(std::vector<ExpLogTerm> ts) { return ExpLogSum::make(sqrt2_field(), std::move(ts)); }

Big oracle_value(const std::vector<std::tuple<long, long, QPoly>> &ts, const Big &s) {
    Big r = log(s), acc = 0, root2 = sqrt(Big(2));
    for (auto &[a, b, f] : ts) {
        Big fv = 0;
        for (size_t i = f.coeffs().size(); i-- > 0;) {
            const Rational &c = f.coeffs()[i];
            fv = fv * r + Big(c.get_num().get_str()) / Big(c.get_den().get_str());
        }
        acc += pow(s, Big(a) + Big(b) * root2) * fv;
    }
    return acc;
}

LambdaData one_class(const NFElem &rho, std::map<std::string, LambdaEntry> vars) {
    LambdaData L;
    L.field = sqrt2_field();
    L.rho = {rho};
    L.vars = std::move(vars);
    return L;
}

} // namespace

TEST_CASE("collect examples") {
    MPoly v1 = MPoly::var("v1"), v2 = MPoly::var("v2");
    auto a = collect(v1, one_class(sqrt2(), {{"v1", {IntVec{1}, P({1})}}}));
    REQUIRE(a.sum.size() == 1);
    CHECK(a.sum.terms()[0].exponent == sqrt2());
    CHECK(a.sum.terms()[0].coeff == P({1}));

    LambdaData L = one_class(q2(1), {{"v1", {IntVec{1}, P({1})}}, {"v2", {IntVec{1}, P({0, 1})}}});
    auto b = collect(v1 * v2, L);
    REQUIRE(b.sum.size() == 1);
    CHECK(b.sum.terms()[0].exponent == q2(2));
    CHECK(b.sum.terms()[0].coeff == P({0, 1}));
    CHECK(b.vectors == std::vector<IntVec>{IntVec{2}});

    CHECK(collect(v1 - v1, L).sum.empty());
    try {
        collect(MPoly::var("w"), L);
        FAIL("expected UnboundVariable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::UnboundVariable);
    }
}

TEST_CASE("collect merges equal exponents from different vectors") {
    LambdaData L;
    L.field = sqrt2_field();
    L.rho = {q2(1), q2(2)};
    L.vars = {{"a", {IntVec{2, 0}, P({1})}}, {"b", {IntVec{0, 1}, P({0, 1})}}};
    auto c = collect(MPoly::var("a") + MPoly::var("b"), L);
    REQUIRE(c.sum.size() == 1);
    CHECK(c.sum.terms()[0].coeff == P({1, 1}));
    CHECK(c.vectors.size() == 2);
}

TEST_CASE("collect is linear") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> co(-3, 3), ex(0, 2);
    LambdaData L;
    L.field = sqrt2_field();
    L.rho = {q2(1), sqrt2(), q2(-1, 1)};
    L.vars = {{"x", {IntVec{1, 0, 0}, P({1})}},
              {"y", {IntVec{1, 0, 0}, P({0, 1})}},
              {"z", {IntVec{0, 1, 0}, P({1})}},
              {"w", {IntVec{0, 0, 1}, P({0, 0, 1})}}};
    auto rnd = [&] {
        MPoly p;
        for (int t = 0; t < 5; ++t) {
            Monomial m;
            for (const char *v : {"x", "y", "z", "w"})
                if (int e = ex(rng))
                    m = m * Monomial::var(v, static_cast<unsigned>(e));
            p += MPoly::term(Rational(co(rng)), m);
        }
        return p;
    };
    for (int trial = 0; trial < 50; ++trial) {
        MPoly a = rnd(), b = rnd();
        CHECK(collect(a + b, L).sum == collect(a, L).sum + collect(b, L).sum);
        CHECK(collect(a * b, L).sum == collect(a, L).sum * collect(b, L).sum);
    }
}

TEST_CASE("asymptotic sign examples") {
    CHECK(asymptotic_sign(sum({{sqrt2(), P({2})}, {q2(1), QPoly::monomial(Rational(-5), 3)}})) == 1);
    CHECK(asymptotic_sign(ExpLogSum(sqrt2_field())) == 0);
    CHECK(asymptotic_sign(sum({{q2(0), P({-10, 1})}})) == 1);
    CHECK(asymptotic_sign(sum({{q2(0), P({10, -1})}, {q2(-3), P({100})}})) == -1);
}

TEST_CASE("sign threshold examples") {
    ExpLogSum a = sum({{q2(1), P({1})}, {q2(0), P({-100})}});
    Rational s0 = sign_threshold(a);
    CHECK(s0 == 101);
    CHECK(dominance_holds(a, s0));
    CHECK_FALSE(dominance_holds(a, Rational(100)));

    ExpLogSum b = sum({{sqrt2(), P({1})}, {q2(1), P({-1})}});
    Rational t0 = sign_threshold(b);
    CHECK(t0 <= 8);
    for (int k : {1, 2, 4})
        CHECK(dominance_holds(b, t0 * k));
    {
        // 8^(sqrt2 - 1) > 1
        Interval v = exp((sqrt2().enclose() - Interval(1)) * log(Interval(Rational(8))));
        CHECK(v.lo_rat() > 1);
    }

    CHECK(sign_threshold(sum({{sqrt2(), P({3})}})) == 2);
    ExpLogSum c = sum({{q2(0), P({-10, 1})}});
    Rational u0 = sign_threshold(c);
    CHECK(log(Interval(u0)).lo_rat() > 10);
    CHECK(dominance_holds(c, u0));
}

TEST_CASE("sign threshold agrees with high-precision evaluation") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> ab(-3, 3), co(-4, 4), nterms(1, 4), deg(0, 3);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::tuple<long, long, QPoly>> raw;
        std::vector<ExpLogTerm> ts;
        long n = nterms(rng);
        for (long i = 0; i < n; ++i) {
            long a = ab(rng), b = ab(rng);
            std::vector<Rational> c(static_cast<size_t>(deg(rng)) + 1);
            for (auto &x : c)
                x = co(rng);
            if (c.back() == 0)
                c.back() = 1;
            QPoly f(c);
            bool dup = false;
            for (auto &[a2, b2, f2] : raw)
                if (a2 == a && b2 == b)
                    dup = true;
            if (dup)
                continue;
            raw.emplace_back(a, b, f);
            ts.push_back({q2(a, b), f});
        }
        ExpLogSum S = sum(ts);
        int sg = asymptotic_sign(S);
        Rational s0 = sign_threshold(S);
        for (int k : {1, 2, 4})
            CHECK(dominance_holds(S, s0 * k));
        for (const char *pt : {"1e6", "1e9"}) {
            Big s(pt);
            if (Big(s0.get_num().get_str()) > s * Big(s0.get_den().get_str()))
                continue;
            Big v = oracle_value(raw, s);
            CHECK((v > 0 ? 1 : v < 0 ? -1 : 0) == sg);
            ++checked;
        }
    }
    CHECK(checked >= 60);
}

TEST_CASE("gap data examples") {
    std::vector<NFElem> rho{q2(1), sqrt2()};
    GapData g = gap_data({}, {IntVec{0, 0}, IntVec{1, 0}, IntVec{0, 1}}, rho);
    REQUIRE(g.mu);
    CHECK(*g.mu == q2(-1, 1));
    CHECK(g.M2 == 2);

    GapData h = gap_data({}, {IntVec{0}, IntVec{3}}, {q2(1)});
    REQUIRE(h.mu);
    CHECK(*h.mu == q2(3));

    GapData single = gap_data({}, {IntVec{1, 1}}, rho);
    CHECK_FALSE(single.mu);

    ExpLogSum s = sum({{q2(1), P({0, 0, 1})}, {q2(0), P({1})}});
    CHECK(gap_data({s}, {}, rho).B == 2);
}

TEST_CASE("separated rational exponents stay separated") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> u(0, 3);
    std::vector<NFElem> rho{q2(1), sqrt2()};
    int pairs = 0;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<IntVec> vs;
        for (int i = 0; i < 5; ++i)
            vs.push_back(IntVec{u(rng), u(rng)});
        GapData g = gap_data({}, vs, rho);
        if (!g.mu)
            continue;
        // c = rho rounded so that |rho - c|^2 < (mu / (2M))^2
        Rational bound2 = g.mu->enclose().lo_rat();
        bound2 = bound2 * bound2 / (4 * Rational(g.M2));
        Rational c2;
        for (unsigned k = 1;; ++k) {
            c2 = dyadic_floor(sqrt2().enclose().mid_rat(), k);
            Interval err = sqrt2().enclose() - Interval(c2);
            if ((err * err).hi_rat() < bound2)
                break;
        }
        std::vector<Rational> c{Rational(1), c2};
        NFElem half_mu = *g.mu * Rational(1, 2);
        for (auto &a : vs)
            for (auto &b : vs) {
                NFElem e(sqrt2_field(), Rational(0));
                Rational ce = 0;
                for (size_t j = 0; j < 2; ++j) {
                    e += rho[j] * Rational(a[j] - b[j]);
                    ce += c[j] * Rational(a[j] - b[j]);
                }
                if (e.sign() <= 0)
                    continue;
                ++pairs;
                CHECK(nf_compare(NFElem(sqrt2_field(), ce), half_mu) > 0);
            }
    }
    CHECK(pairs > 50);
}

TEST_CASE("debug dump lists one line per term") {
    ExpLogSum s = sum({{sqrt2(), P({1, 2})}, {q2(1), P({-1})}});
    std::string d = s.dump();
    CHECK(std::count(d.begin(), d.end(), '\n') == 2);
    CHECK(d.rfind("s^(", 0) == 0);
    CHECK(d.find("1.4142135623") != std::string::npos);
}
