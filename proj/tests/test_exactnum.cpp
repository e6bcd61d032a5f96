#include "doctest.h"

#include "ominv/error.hpp"
#include "ominv/exactnum/croots.hpp"
#include "ominv/exactnum/factor.hpp"
#include "ominv/exactnum/interval.hpp"
#include "ominv/exactnum/numfield.hpp"
#include "ominv/exactnum/realalg.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>

using namespace ominv;
using Dec = boost::multiprecision::cpp_dec_float_50;

namespace {

QPoly P(std::initializer_list<long> c) { return QPoly(c); }

Dec to_dec(const Rational &q) {
    Dec n(q.get_num().get_str()), d(q.get_den().get_str());
    return n / d;
}

bool encloses(const RealAlgebraic &a, const Dec &v, int digits = 30) {
    Rational w = pow2(-110);
    auto [lo, hi] = a.bounds(w);
    Dec slack = pow(Dec(10), -digits - 5);
    return to_dec(lo) - slack <= v && v <= to_dec(hi) + slack;
}

// Determinant by cofactor expansion, exact.
Rational det_cofactor(const std::vector<std::vector<Rational>> &m) {
    size_t n = m.size();
    if (n == 1)
        return m[0][0];
    Rational acc = 0;
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Rational>> sub;
        for (size_t i = 1; i < n; ++i) {
            std::vector<Rational> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(m[i][k]);
            sub.push_back(row);
        }
        Rational t = m[0][j] * det_cofactor(sub);
        acc += (j % 2 == 0) ? t : Rational(-t);
    }
    return acc;
}

} // namespace

TEST_CASE("rational text round trip") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4/-8") == Rational(1, 2));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK(to_string(parse_rational("-10/4")) == "-5/2");
    CHECK_THROWS_AS(parse_rational("e"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK(floor_rat(Rational(-7, 2)) == -4);
    CHECK(ceil_rat(Rational(7, 2)) == 4);
}

TEST_CASE("polynomial basics") {
    QPoly a = P({-1, 0, 1}); // x^2 - 1
    QPoly b = P({1, 1});     // x + 1
    CHECK(gcd(a, b) == P({1, 1}));
    CHECK(a / b == P({-1, 1}));
    CHECK((a % b).is_zero());
    QPoly c = P({-1, 1}).pow(3);
    CHECK(squarefree_part(c) == P({-1, 1}));
    CHECK(a.shift(Rational(1)) == P({0, 2, 1}));
    CHECK(a.scale(Rational(2)) == P({-1, 0, 4}));
    CHECK(P({1, 2, 3}).reversed() == P({3, 2, 1}));
    CHECK(P({1, 2, 3}).negate_var() == P({1, -2, 3}));
    auto [g, s, t] = ext_gcd(P({-2, 0, 1}), P({1, 1}));
    CHECK(g == P({1}));
    CHECK(s * P({-2, 0, 1}) + t * P({1, 1}) == P({1}));
}

TEST_CASE("sturm counts match root isolation") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-6, 6);
    for (int it = 0; it < 60; ++it) {
        QPoly p;
        do {
            std::vector<Rational> c;
            int deg = 1 + it % 6;
            for (int i = 0; i <= deg; ++i)
                c.emplace_back(d(rng));
            p = QPoly(c);
        } while (p.degree() < 1);
        CHECK(static_cast<int>(isolate_real_roots(p).size()) == count_all_real_roots(p));
    }
}

TEST_CASE("factorization over Z") {
    // (x^2-2)(x-1)^2(x^2+1)
    QPoly f = P({-2, 0, 1}) * P({-1, 1}).pow(2) * P({1, 0, 1});
    auto fs = factor_q(f);
    REQUIRE(fs.size() == 3);
    CHECK(fs[0].first == P({-1, 1}));
    CHECK(fs[0].second == 2);
    QPoly prod = QPoly::constant(1);
    for (auto &[g, m] : fs)
        prod *= g.pow(m);
    CHECK(prod == f.monic());

    // irreducible but reducible modulo every prime
    CHECK(is_irreducible(P({1, 0, 0, 0, 1})));
    CHECK(is_irreducible(P({1, 0, -10, 0, 1})));
    // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
    auto g = factor_q(P({4, 0, 0, 0, 1}));
    REQUIRE(g.size() == 2);
    CHECK(g[0].first * g[1].first == P({4, 0, 0, 0, 1}));
    // x^6 - 1
    auto h = factor_q(P({-1, 0, 0, 0, 0, 0, 1}));
    CHECK(h.size() == 4);

    // random products of small factors reproduce the input
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-5, 5);
    for (int it = 0; it < 25; ++it) {
        QPoly prodr = QPoly::constant(1);
        int k = 1 + it % 4;
        for (int j = 0; j < k; ++j) {
            QPoly q;
            do {
                std::vector<Rational> c;
                for (int i = 0; i <= 1 + (j + it) % 3; ++i)
                    c.emplace_back(d(rng));
                c.back() = c.back() == 0 ? Rational(1) : c.back();
                q = QPoly(c);
            } while (q.degree() < 1);
            prodr *= q;
        }
        auto fr = factor_q(prodr);
        QPoly back = QPoly::constant(1);
        for (auto &[gg, m] : fr) {
            back *= gg.pow(m);
            CHECK(gg.degree() >= 1);
        }
        CHECK(back == prodr.monic());
    }
}

TEST_CASE("isolate_real_roots examples") {
    auto r = isolate_real_roots(P({-2, 0, 1}));
    REQUIRE(r.size() == 2);
    auto [a0, b0] = r[0].isolator();
    auto [a1, b1] = r[1].isolator();
    CHECK(a0 >= -2);
    CHECK(b0 <= -1);
    CHECK(a1 >= 1);
    CHECK(b1 <= 2);
    CHECK(isolate_real_roots(P({1, 0, 1})).empty());
    auto c = isolate_real_roots(P({-1, 1}).pow(3));
    REQUIRE(c.size() == 1);
    CHECK(c[0].is_rational());
    CHECK(c[0].rational_value() == 1);
    CHECK(c[0].defining().to_list_string() == "[-1,1]");
    CHECK(isolate_real_roots(P({5})).empty());
}

TEST_CASE("alg_compare and alg_sign") {
    RealAlgebraic s2 = sqrt_alg(Rational(2));
    RealAlgebraic three_s2 = s2 * RealAlgebraic(3);
    CHECK(alg_compare(three_s2, RealAlgebraic(4)) == Ordering::GT);
    RealAlgebraic other = RealAlgebraic::from_poly_interval(P({-4, 0, 2}), Rational(1), Rational(2));
    CHECK(alg_compare(s2, other) == Ordering::EQ);
    CHECK(alg_compare(s2, RealAlgebraic(Rational(141421356, 100000000))) == Ordering::GT);
    CHECK(alg_sign(s2) == 1);
    CHECK(alg_sign(RealAlgebraic(0)) == 0);
    CHECK(alg_sign(isolate_real_roots(P({-2, 0, 1}))[0]) == -1);
}

TEST_CASE("alg_arith examples") {
    RealAlgebraic s2 = sqrt_alg(Rational(2)), s3 = sqrt_alg(Rational(3));
    RealAlgebraic sum = s2 + s2;
    CHECK(sum.minpoly() == P({-8, 0, 1}));
    auto [lo, hi] = sum.isolator();
    CHECK(lo >= 2);
    CHECK(hi <= 3);
    RealAlgebraic one = (RealAlgebraic(1) + s2) - s2;
    CHECK(one.is_rational());
    CHECK(one.rational_value() == 1);

    // resultant oracle: Res_y(y^2 - 2, x^2 - 3 y^2) is c (x^2 - 6)^2
    auto res_at = [](const Rational &x) {
        // Sylvester matrix of f = y^2 - 2 and g = -3 y^2 + x^2 in y
        std::vector<std::vector<Rational>> m = {
            {1, 0, -2, 0}, {0, 1, 0, -2}, {-3, 0, x * x, 0}, {0, -3, 0, x * x}};
        return det_cofactor(m);
    };
    Rational c = res_at(Rational(0)) / 36;
    for (long x = 1; x <= 5; ++x) {
        Rational v = Rational(x * x - 6);
        CHECK(res_at(Rational(x)) == c * v * v);
    }
    RealAlgebraic prod = s2 * s3;
    CHECK(prod.minpoly() == P({-6, 0, 1}));
    CHECK(encloses(prod, sqrt(Dec(6))));
    CHECK_THROWS_AS(s2 / RealAlgebraic(0), Error);
    RealAlgebraic q = s3 / s2;
    CHECK(encloses(q, sqrt(Dec(3)) / sqrt(Dec(2))));
}

TEST_CASE("alg_arith algebraic laws on random inputs") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-4, 4);
    auto rnd = [&]() {
        while (true) {
            long a = d(rng), b = d(rng);
            QPoly p = P({b, a, 1});
            auto roots = isolate_real_roots(p);
            if (!roots.empty())
                return roots[static_cast<size_t>(d(rng) + 4) % roots.size()];
        }
    };
    for (int it = 0; it < 12; ++it) {
        RealAlgebraic a = rnd(), b = rnd(), c = rnd();
        CHECK(alg_equal(a + b, b + a));
        CHECK(alg_equal(a * b, b * a));
        CHECK(alg_equal((a + b) + c, a + (b + c)));
        CHECK(alg_equal((a * b) * c, a * (b * c)));
        if (alg_equal(a, b))
            CHECK(alg_sign(a - b) == 0);
        // numeric cross-check of an operation tree
        Dec av = to_dec(a.approx(pow2(-200))), bv = to_dec(b.approx(pow2(-200)));
        RealAlgebraic e = a * b + a;
        CHECK(encloses(e, av * bv + av));
    }
}

TEST_CASE("common_field examples") {
    RealAlgebraic s2 = sqrt_alg(Rational(2)), s3 = sqrt_alg(Rational(3));
    auto cf = common_field({s2, s2 * RealAlgebraic(2)});
    CHECK(cf.field->degree() == 2);
    CHECK(cf.coordinates[0] == std::vector<Rational>{0, 1});
    CHECK(cf.coordinates[1] == std::vector<Rational>{0, 2});

    auto q = common_field({RealAlgebraic(Rational(1, 2))});
    CHECK(q.field->degree() == 1);
    CHECK(q.coordinates[0] == std::vector<Rational>{Rational(1, 2)});

    auto f = common_field({s2, s3});
    CHECK(f.field->degree() == 4);
    CHECK(f.field->minpoly() == P({1, 0, -10, 0, 1}));
    // 30-digit check of coordinates
    Dec theta = sqrt(Dec(2)) + sqrt(Dec(3));
    auto value = [&](const std::vector<Rational> &c) {
        Dec v = 0, p = 1;
        for (auto &x : c) {
            v += to_dec(x) * p;
            p *= theta;
        }
        return v;
    };
    CHECK(abs(value(f.coordinates[0]) - sqrt(Dec(2))) < Dec("1e-30"));
    CHECK(abs(value(f.coordinates[1]) - sqrt(Dec(3))) < Dec("1e-30"));
    CHECK(encloses(f.field->generator(), theta));
}

TEST_CASE("degree cap") {
    unsigned old = degree_cap();
    set_degree_cap(3);
    RealAlgebraic s2 = sqrt_alg(Rational(2)), s3 = sqrt_alg(Rational(3));
    CHECK_THROWS_AS(s2 + s3, Error);
    try {
        (void)common_field({s2, s3});
        CHECK(false);
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::DegreeCapExceeded);
    }
    set_degree_cap(old);
}

TEST_CASE("number field elements") {
    RealAlgebraic s2 = sqrt_alg(Rational(2));
    FieldPtr K = NumberField::make_real(s2);
    NFElem t = NFElem::generator(K);
    NFElem a = t + NFElem(K, Rational(1)); // 1 + sqrt2
    NFElem inv = a.inverse();
    CHECK(a * inv == NFElem(K, Rational(1)));
    CHECK(a.minpoly() == P({-1, -2, 1}));
    CHECK(a.trace() == 2);
    CHECK((t - NFElem(K, Rational(3, 2))).sign() == -1);
    CHECK(alg_equal(a.to_real(), RealAlgebraic(1) + s2));
    CHECK(nf_compare(t * t, NFElem(K, Rational(2))) == 0);
}

TEST_CASE("intervals") {
    PrecisionGuard g(120);
    Interval e = exp(Interval(1));
    Dec ev = exp(Dec(1));
    CHECK(to_dec(e.lo_rat()) <= ev);
    CHECK(ev <= to_dec(e.hi_rat()));
    CHECK(e.width() < 1e-33);
    Interval c = cos(Interval(Rational(157, 100)));
    Dec cv = cos(Dec(157) / 100);
    CHECK(to_dec(c.lo_rat()) <= cv);
    CHECK(cv <= to_dec(c.hi_rat()));
    Interval wide = cos(Interval(Rational(-1), Rational(1)));
    CHECK(wide.hi_rat() == 1);
    Interval s = sin(Interval(Rational(1), Rational(2)));
    CHECK(s.hi_rat() == 1);
    Interval p = Interval::pi();
    CHECK(p.contains(Rational(314159, 100000)) == false);
    CHECK(to_dec(p.lo_rat()) < Dec("3.14159265358979323846264338328"));
    CHECK_THROWS_AS(Interval(1) / Interval(Rational(-1), Rational(1)), Error);
}

TEST_CASE("complex root enclosures") {
    ComplexRoots r(P({1, 0, 1}), 100);
    REQUIRE(r.size() == 2);
    CHECK(r.box(0).im.positive());
    CHECK(r.box(0).im.contains(Rational(1)));
    CHECK(r.conjugate_index(0) == 1);
    CHECK(r.box(1).im.contains(Rational(-1)));

    ComplexRoots c(P({-1, 0, 0, 1}), 100); // x^3 - 1
    REQUIRE(c.size() == 3);
    CHECK(c.is_real(0));
    CHECK(c.box(0).re.contains(Rational(1)));
    CHECK(c.box(1).re.contains(Rational(-1, 2)));
    c.refine(300);
    CHECK(c.box(1).re.width() < 1e-80);
    CHECK(c.box(1).re.contains(Rational(-1, 2)));

    // Swinnerton-Dyer: four real roots
    ComplexRoots sd(P({1, 0, -10, 0, 1}), 80);
    CHECK(sd.size() == 4);
    for (size_t i = 0; i < 4; ++i)
        CHECK(sd.is_real(i));
}
