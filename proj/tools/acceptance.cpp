// Acceptance run: one pass/fail line per criterion, exit 0 iff all pass.

#include "ominv/asymptotics/explog.hpp"
#include "ominv/checker/checker.hpp"
#include "ominv/cli/cli.hpp"
#include "ominv/error.hpp"
#include "ominv/exactnum/factor.hpp"
#include "ominv/reduction/reduction.hpp"
#include "ominv/spectral/jordan.hpp"
#include "ominv/spectral/lattice.hpp"
#include "ominv/spectral/realfield.hpp"
#include "ominv/synthesis/cone.hpp"
#include "ominv/synthesis/decide.hpp"
#include "ominv/synthesis/fatcone.hpp"
#include "ominv/synthesis/fixtures.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace ominv;
using Dec = boost::multiprecision::cpp_dec_float_100;

namespace {

// Records failed expectations for one criterion.
struct Tally {
    size_t checks = 0;
    std::vector<std::string> failures;
    std::ostringstream note;

    void expect(bool ok, const std::string &what) {
        ++checks;
        if (!ok && failures.size() < 8)
            failures.push_back(what);
        else if (!ok)
            failures.back() = "... and more";
    }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Rational R(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

Dec dec(const Rational &q) { return Dec(Integer(q.get_num()).get_str()) / Dec(Integer(q.get_den()).get_str()); }

Rational width(const Interval &I) { return I.hi_rat() - I.lo_rat(); }

bool overlaps(const Interval &a, const Interval &b) { return !(a.hi_rat() < b.lo_rat() || b.hi_rat() < a.lo_rat()); }

MPoly X(int i) { return MPoly::var("x" + std::to_string(i)); }

DecideConfig builtin() {
    DecideConfig c;
    c.mode = DecideMode::Builtin;
    return c;
}

CheckVerdict check_of(const ValidationReport &rep, const std::string &name) {
    for (auto &c : rep.checks)
        if (c.name == name)
            return c.verdict;
    return CheckVerdict::Unknown;
}

// Systems with conjugate pairs, repeated eigenvalues and Jordan chains.
std::vector<std::pair<RationalMatrix, RatVec>> extra_systems() {
    return {
        {RationalMatrix{{-1, 1}, {0, -1}}, {R(0), R(1)}},
        {RationalMatrix{{0, 1}, {0, 0}}, {R(0), R(1)}},
        {RationalMatrix{{2, 0, 0}, {0, 0, -2}, {0, 2, 0}}, {R(1), R(1), R(1)}},
        {RationalMatrix{{1, 1, 0}, {0, 1, 0}, {0, 0, -2}}, {R(1), R(2), R(3)}},
        {RationalMatrix{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 2}, {0, 0, -2, 0}}, {R(1), R(0), R(1), R(1)}},
        {RationalMatrix{{0, 1, 1, 0}, {-1, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, -1, 0}}, {R(0), R(1), R(1), R(0)}},
    };
}

std::vector<std::pair<RationalMatrix, RatVec>> all_systems() {
    std::vector<std::pair<RationalMatrix, RatVec>> out;
    for (auto &f : curated_fixtures())
        out.emplace_back(f.A, f.x0);
    for (auto &s : extra_systems())
        out.push_back(s);
    return out;
}

// ---------------------------------------------------------------- 1

RationalMatrix random_unimodular(size_t d, std::mt19937_64 &rng) {
    RationalMatrix S = RationalMatrix::identity(d), Sinv = RationalMatrix::identity(d);
    std::uniform_int_distribution<size_t> idx(0, d - 1);
    std::uniform_int_distribution<long> c(-2, 2);
    for (int it = 0; it < 3 * static_cast<int>(d); ++it) {
        size_t i = idx(rng), j = idx(rng);
        if (i == j)
            continue;
        RationalMatrix E = RationalMatrix::identity(d);
        E.at(i, j) = c(rng);
        S = S * E;
    }
    return S;
}

// inverse of a unimodular matrix by Gauss-Jordan elimination
RationalMatrix inverse(const RationalMatrix &S) {
    size_t d = S.rows();
    RationalMatrix a = S, inv = RationalMatrix::identity(d);
    for (size_t c = 0; c < d; ++c) {
        size_t p = c;
        while (a.at(p, c) == 0)
            ++p;
        for (size_t k = 0; k < d; ++k) {
            std::swap(a.at(p, k), a.at(c, k));
            std::swap(inv.at(p, k), inv.at(c, k));
        }
        Rational f = a.at(c, c);
        for (size_t k = 0; k < d; ++k) {
            a.at(c, k) /= f;
            inv.at(c, k) /= f;
        }
        for (size_t i = 0; i < d; ++i) {
            if (i == c || a.at(i, c) == 0)
                continue;
            Rational g = a.at(i, c);
            for (size_t k = 0; k < d; ++k) {
                a.at(i, k) -= g * a.at(c, k);
                inv.at(i, k) -= g * inv.at(c, k);
            }
        }
    }
    return inv;
}

RationalMatrix random_matrix(std::mt19937_64 &rng, int kind) {
    std::uniform_int_distribution<long> e(-3, 3);
    std::uniform_int_distribution<size_t> dim(1, 5);
    size_t d = dim(rng);
    if (kind % 2 == 0) {
        RationalMatrix A(d, d);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                A.at(i, j) = e(rng);
        return A;
    }
    RationalMatrix J(d, d);
    size_t i = 0;
    std::uniform_int_distribution<int> pick(0, 2);
    while (i < d) {
        int t = pick(rng);
        if (t == 0 && i + 2 <= d) {
            long b = e(rng), c = e(rng);
            J.at(i, i + 1) = 1;
            J.at(i + 1, i) = -c;
            J.at(i + 1, i + 1) = -b;
            i += 2;
        } else if (t == 1 && i + 2 <= d) {
            long lam = e(rng);
            J.at(i, i) = J.at(i + 1, i + 1) = lam;
            J.at(i, i + 1) = 1;
            i += 2;
        } else {
            J.at(i, i) = e(rng) % 2;
            i += 1;
        }
    }
    RationalMatrix S = random_unimodular(d, rng);
    return S * J * inverse(S);
}

void jordan_exactness(Tally &T) {
    std::mt19937_64 rng(20240601);
    int done = 0, nontrivial = 0;
    auto t0 = Clock::now();
    for (int it = 0; done < 50; ++it) {
        RationalMatrix A = random_matrix(rng, it);
        bool small = true;
        for (auto &[q, m] : factor_q(char_poly(A)))
            small = small && q.degree() <= 4;
        if (!small)
            continue;
        auto D = jordan_decompose(A);
        auto chk = verify_jordan(A, D.jordan);
        std::string tag = "matrix " + std::to_string(done);
        T.expect(chk.AP_eq_PJ, tag + ": A P != P J");
        T.expect(chk.P_Pinv_identity, tag + ": P Pinv != I");
        size_t cols = 0;
        for (auto &b : D.jordan.blocks) {
            cols += b.size;
            nontrivial += b.size > 1;
        }
        T.expect(cols == A.rows(), tag + ": block sizes do not sum to the dimension");
        ++done;
    }
    double secs = seconds_since(t0);
    T.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s");
    T.note << "50 matrices, " << nontrivial << " nontrivial blocks, " << secs << " s";
}

// ---------------------------------------------------------------- 2

void exponential_consistency(Tally &T) {
    Rational tol = Rational(1) / Rational(Integer("10000000000000000000000000"));
    size_t compared = 0;
    Rational worst(0);
    for (auto &[A, x0] : all_systems()) {
        size_t n = A.rows();
        for (Rational t : {R(0), R(1, 2), R(1)}) {
            auto E = taylor_exp_matrix(A, t, 60);
            for (size_t j = 0; j < n; ++j) {
                RatVec e(n, R(0));
                e[j] = 1;
                IntervalVector col = orbit_enclosure(A, e, t, 128);
                for (size_t i = 0; i < n; ++i) {
                    T.expect(overlaps(col[i], E[i][j]), "disjoint entry at t=" + to_string(t));
                    T.expect(width(col[i]) <= tol, "Jordan enclosure too wide at t=" + to_string(t));
                    T.expect(width(E[i][j]) <= tol, "Taylor enclosure too wide at t=" + to_string(t));
                    worst = std::max(worst, std::max(width(col[i]), width(E[i][j])));
                    ++compared;
                }
            }
        }
    }
    T.note << compared << " entries, max width " << std::scientific << std::setprecision(2) << dec(worst);
}

// ---------------------------------------------------------------- 3

RelationLattice brute_lattice(const std::vector<RealAlgebraic> &xs) {
    size_t k = xs.size();
    std::vector<double> xd;
    for (auto &x : xs)
        xd.push_back(x.to_double());
    std::vector<IntVec> found;
    std::vector<long> a(k, -20);
    while (true) {
        double s = 0;
        for (size_t i = 0; i < k; ++i)
            s += static_cast<double>(a[i]) * xd[i];
        if (std::fabs(s) < 1e-9) {
            RealAlgebraic acc(0);
            for (size_t i = 0; i < k; ++i)
                if (a[i] != 0)
                    acc = acc + RealAlgebraic(a[i]) * xs[i];
            if (alg_sign(acc) == 0) {
                IntVec v;
                for (long x : a)
                    v.emplace_back(x);
                found.push_back(v);
            }
        }
        size_t p = 0;
        while (p < k && a[p] == 20)
            a[p++] = -20;
        if (p == k)
            break;
        ++a[p];
    }
    return RelationLattice{k, hermite_rows(found, k)};
}

void relation_lattices(Tally &T) {
    RealAlgebraic s2 = sqrt_alg(Rational(2)), s3 = sqrt_alg(Rational(3));
    std::vector<std::vector<RealAlgebraic>> inputs = {
        {RealAlgebraic(1), RealAlgebraic(-1)},
        {RealAlgebraic(2), RealAlgebraic(3)},
        {RealAlgebraic(1), s2},
        {s2, s3, s2 + s3},
        {RealAlgebraic(0), RealAlgebraic(1), RealAlgebraic(-1)},
        {s2, -s2, RealAlgebraic(Rational(1, 2)), RealAlgebraic(-1)},
        {RealAlgebraic(Rational(2, 3)), RealAlgebraic(Rational(-3, 4))},
    };
    for (auto &[A, x0] : all_systems()) {
        auto D = jordan_decompose(A);
        if (D.spectral.omega.size() <= 4)
            inputs.push_back(D.spectral.omega);
        if (D.spectral.rho.size() <= 4)
            inputs.push_back(D.spectral.rho);
    }
    size_t cases = 0;
    for (auto &xs : inputs) {
        RelationLattice L = additive_relations(xs);
        T.expect(L == brute_lattice(xs), "lattice mismatch on input " + std::to_string(cases));
        ++cases;
    }
    auto L1 = additive_relations({RealAlgebraic(1), RealAlgebraic(-1)});
    T.expect(L1.rank() == 1 && L1.generators[0] == IntVec{1, 1}, "(1,-1) basis");
    auto L2 = additive_relations({RealAlgebraic(2), RealAlgebraic(3)});
    T.expect(L2.rank() == 1 && L2.generators[0] == IntVec{3, -2}, "(2,3) basis");
    T.expect(additive_relations({RealAlgebraic(1), s2}).rank() == 0, "(1,sqrt2) not empty");
    T.note << cases << " inputs against brute force over [-20,20]";
}

// ---------------------------------------------------------------- 4

Dec explog_value(const std::vector<std::tuple<long, long, QPoly>> &ts, const Dec &s) {
    Dec r = log(s), acc = 0, root2 = sqrt(Dec(2));
    for (auto &[a, b, f] : ts) {
        Dec fv = 0;
        for (size_t i = f.coeffs().size(); i-- > 0;)
            fv = fv * r + dec(f.coeffs()[i]);
        acc += pow(s, Dec(a) + Dec(b) * root2) * fv;
    }
    return acc;
}

int sign_of(const Dec &v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

void asymptotic_agreement(Tally &T) {
    FieldPtr K = NumberField::make_real(sqrt_alg(Rational(2)));
    NFElem g = NFElem::generator(K);
    std::mt19937_64 rng(97);
    std::uniform_int_distribution<long> ab(-3, 3), co(-4, 4), nterms(1, 4), deg(0, 3);
    int compared = 0, sums = 0;
    while (sums < 100) {
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
            bool dup = false;
            for (auto &[a2, b2, f2] : raw)
                dup = dup || (a2 == a && b2 == b);
            if (dup)
                continue;
            QPoly f(c);
            raw.emplace_back(a, b, f);
            ts.push_back({NFElem(K, Rational(a)) + g * Rational(b), f});
        }
        ExpLogSum S = ExpLogSum::make(K, ts);
        ++sums;
        int sg = asymptotic_sign(S);
        Rational s0 = sign_threshold(S);
        std::string tag = "sum " + std::to_string(sums);
        for (int k : {1, 2, 4}) {
            T.expect(dominance_holds(S, s0 * k), tag + ": dominance fails at " + std::to_string(k) + " s0");
            T.expect(sign_of(explog_value(raw, dec(s0 * k))) == sg,
                     tag + ": numeric sign differs at " + std::to_string(k) + " s0");
        }
        Dec big("1e9");
        if (dec(s0) <= big) {
            T.expect(sign_of(explog_value(raw, big)) == sg, tag + ": numeric sign differs at 1e9");
            ++compared;
        }
    }
    T.expect(compared >= 50, "only " + std::to_string(compared) + " sums with threshold below 1e9");
    T.note << sums << " sums, " << compared << " compared at s=1e9";
}

// ---------------------------------------------------------------- 5

void decision_fixtures(Tally &T) {
    double worst = 0;
    for (auto &f : curated_fixtures()) {
        auto t0 = Clock::now();
        DecisionOutcome o = decide_eventual(f.A, f.x0, f.target, builtin());
        double secs = seconds_since(t0);
        worst = std::max(worst, secs);
        T.expect(o.verdict == f.builtin, f.name + ": got " + outcome_name(o.verdict));
        T.expect(secs < 30.0, f.name + ": " + std::to_string(secs) + " s");
        if (f.name == "spiral-outside-disk")
            T.expect(o.verdict == Outcome::Exists && o.t0 == 0, f.name + ": t0 != 0");
        if (f.name == "oscillator-x1-gt-1")
            T.expect(o.reason == UnknownReason::TangentialSuspected, f.name + ": reason not tangential");
        if (o.verdict == Outcome::Exists)
            T.expect(o.certificate.has_value(), f.name + ": no certificate");
    }
    T.note << curated_fixtures().size() << " fixtures, slowest " << std::fixed << std::setprecision(2) << worst
           << " s";
}

// ---------------------------------------------------------------- 6

struct Problem {
    std::string name;
    RationalMatrix A;
    RatVec x0;
    Formula Y;
};

std::vector<Problem> exists_problems() {
    std::vector<Problem> out;
    for (auto &f : curated_fixtures())
        if (f.builtin == Outcome::Exists)
            out.push_back({f.name, f.A, f.x0, f.target});
    Formula disk = Formula::ge(X(1) * X(1) + X(2) * X(2), MPoly(4));
    out.push_back({"jordan-chain-outside-disk", RationalMatrix{{-1, 1}, {0, -1}}, {R(0), R(1)}, disk});
    out.push_back({"spiral-from-e1", RationalMatrix{{-1, 1}, {-1, -1}}, {R(1), R(0)}, disk});
    return out;
}

void certificate_soundness(Tally &T) {
    size_t certs = 0, mutants = 0;
    for (auto &p : exists_problems()) {
        DecisionOutcome o = decide_eventual(p.A, p.x0, p.Y, builtin());
        if (!o.certificate) {
            T.expect(false, p.name + ": no certificate");
            continue;
        }
        const FatConeCertificate &c = *o.certificate;
        ValidationReport rep = validate_certificate(c, p.A, p.x0, p.Y);
        T.expect(rep.overall() == CheckVerdict::Pass, p.name + ": validation " +
                                                          check_verdict_name(rep.overall()));
        for (const char *name : {"box", "eps-gap", "invariance", "I-samples", "Y-samples"})
            T.expect(check_of(rep, name) == CheckVerdict::Pass, p.name + ": check " + name);
        T.expect(rep.text().find("samples=1000") != std::string::npos, p.name + ": not 1000 invariance samples");
        T.expect(rep.text().find("fail=0") != std::string::npos, p.name + ": invariance failures");
        // constant inequalities, recomputed here: 3 B eps <= mu_lo and 4 M^2 k w^2 <= mu_lo^2
        T.expect(Rational(3 * c.B) * c.eps <= c.mu_lo || c.B == 0, p.name + ": eps gap");
        size_t k = c.ell.size();
        for (size_t i = 0; i < k; ++i) {
            Rational w = c.u[i] - c.ell[i];
            T.expect(w >= 0, p.name + ": empty box");
            if (c.mu)
                T.expect(Rational(4) * Rational(c.M2) * Rational(static_cast<long>(k)) * w * w <= c.mu_lo * c.mu_lo,
                         p.name + ": box width");
        }
        if (c.mu)
            T.expect(c.mu->enclose().lo_rat() >= c.mu_lo,
                     p.name + ": mu_lo above mu");
        ++certs;
        ValidateOptions opt;
        opt.invariance_samples = 200;
        auto muts = certificate_mutations(c);
        T.expect(muts.size() == 10, p.name + ": " + std::to_string(muts.size()) + " mutants");
        for (auto &[label, m] : muts) {
            ValidationReport mr = validate_certificate(m, p.A, p.x0, p.Y, opt);
            T.expect(mr.overall() == CheckVerdict::Fail, p.name + ": mutant " + label + " not rejected");
            ++mutants;
        }
    }
    T.note << certs << " certificates pass, " << mutants << " mutants rejected";
}

// ---------------------------------------------------------------- 7

void cone_invariance(Tally &T) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> tn(0, 64), dn(0, 64), un(-30, 30);
    PrecisionGuard g(160);
    size_t systems = 0, flows = 0, violations = 0;
    for (auto &[A, x0] : all_systems()) {
        ConeSpec C = ConeSpec::build(A, x0);
        T.expect(verify_q_semigroup(C.spectral), "Q semigroup identity fails");
        ++systems;
        if (C.k() == 0)
            continue;
        for (int it = 0; it < 1000; ++it) {
            Rational t = R(tn(rng), 16), delta = R(dn(rng), 16);
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
            auto E = taylor_exp_matrix(A, delta, 60);
            bool ok = true;
            for (size_t i = 0; i < C.dim(); ++i) {
                Interval acc(0);
                for (size_t j = 0; j < C.dim(); ++j)
                    acc += E[i][j] * v[j];
                ok = ok && overlaps(acc, moved[i]);
            }
            violations += !ok;
            ++flows;
        }
    }
    for (auto &[A, x0] : all_systems())
        T.expect(verify_q_semigroup(jordan_decompose(A).spectral), "Q semigroup identity fails");
    T.expect(violations == 0, std::to_string(violations) + " flow violations");
    T.note << systems << " systems, " << flows << " flow checks, " << violations << " violations";
}

// ---------------------------------------------------------------- 8

void reality(Tally &T) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> un(-30, 30);
    size_t checked = 0;
    for (auto &[A, x0] : all_systems()) {
        auto D = jordan_decompose(A);
        bool paired = false;
        for (auto &w : D.spectral.omega)
            paired = paired || alg_sign(w) != 0;
        if (!paired)
            continue;
        RatVec generic(A.rows());
        for (size_t i = 0; i < generic.size(); ++i)
            generic[i] = R(static_cast<long>(i) + 1, 3);
        ConeSpec C = ConeSpec::build(A, generic);
        for (int it = 0; it < 10; ++it) {
            RatVec u;
            for (size_t j = 0; j < C.torus_basis.size(); ++j)
                u.push_back(R(un(rng), 7));
            std::vector<CElem> tau = rational_torus_point(C, u);
            std::vector<GaussMatrix> diag(C.jordan.blocks.size());
            bool rational = true;
            for (size_t l = 0; l < diag.size(); ++l) {
                size_t s = C.jordan.blocks[l].size;
                GaussRat z{Rational(1), Rational(0)};
                for (size_t a = 0; a < C.k(); ++a)
                    if (C.active[a] == l) {
                        rational = rational && tau[a].re.is_rational() && tau[a].im.is_rational();
                        z = {tau[a].re.rational_value(), tau[a].im.rational_value()};
                    }
                diag[l].assign(s, std::vector<GaussRat>(s, GaussRat{Rational(0), Rational(0)}));
                for (size_t i = 0; i < s; ++i)
                    diag[l][i][i] = z;
            }
            T.expect(rational, "torus point not rational");
            T.expect(reality_check(C.jordan, C.F, diag), "imaginary part at a torus point");
            // conjugating one block only breaks reality unless that block is real
            for (size_t l = 0; l < diag.size(); ++l) {
                if (diag[l][0][0].im == 0)
                    continue;
                auto bad = diag;
                for (auto &row : bad[l])
                    for (auto &e : row)
                        e.im = -e.im;
                T.expect(!reality_check(C.jordan, C.F, bad), "non-conjugate point passes");
                break;
            }
            ++checked;
        }
    }
    T.expect(checked >= 30, "too few paired systems");
    T.note << checked << " torus points on conjugate-paired systems";
}

// ---------------------------------------------------------------- 9

Dec f_dec(const std::vector<std::pair<Dec, Dec>> &terms, const Dec &t) {
    Dec s = 0;
    for (auto &[a, r] : terms)
        s += a * exp(r * t);
    return s;
}

void reduction_end_to_end(Tally &T) {
    Dec ln2 = log(Dec(2));
    auto zf = ExponentialPolynomial::parse(R"J({"terms": [["1", "2"], ["-2", "1"]], "t0": "1"})J");
    ZeroCertificate z = certify_zero_freeness(zf);
    T.expect(z.status == ZeroStatus::ZeroFound, "e^{2t}-2e^t not ZeroFound");
    T.expect(dec(z.lo) <= ln2 && ln2 <= dec(z.hi), "bracket misses ln 2");
    Dec t = dec((z.lo + z.hi) / 2);
    std::vector<std::pair<Dec, Dec>> terms{{Dec(1), Dec(2)}, {Dec(-2), Dec(1)}};
    for (int k = 0; k < 20; ++k)
        t -= f_dec(terms, t) / (2 * exp(2 * t) - 2 * exp(t));
    T.expect(abs(t - ln2) < Dec("1e-20"), "Newton refinement disagrees");
    T.expect(dec(z.lo) <= t && t <= dec(z.hi), "Newton root outside bracket");
    build_reduction(zf);

    auto fp = ExponentialPolynomial::parse(R"J({"terms": [["1", "2"], ["1", "1"], ["1", "0"]], "t0": "1"})J");
    ReductionInstance I = build_reduction(fp);
    ZeroCertificate zp = certify_zero_freeness(fp);
    T.expect(zp.status == ZeroStatus::NoZero, "e^{2t}+e^t+1 not NoZero");
    TubeCertificate c = invariant_from_tubes(I, fp);
    T.expect(c.found, "no tube invariant");
    std::string verdict = "none";
    if (c.found) {
        ValidationReport rep = validate_tube_certificate(I, c, 200, 1);
        verdict = check_verdict_name(rep.overall());
        T.expect(rep.overall() == CheckVerdict::Pass, "tube validation " + verdict);
    }

    // convergence on the grid k/16 for rho = 1, t0 = 1
    PrecisionGuard g(128);
    std::vector<Rational> grid;
    for (long k = 0; k <= 16; ++k)
        grid.push_back(R(k, 16));
    auto sup = [&](const TubeInvariant &tub, bool width) {
        Dec m = 0;
        for (auto &s : grid) {
            Dec lo = dec(tub.eval_P(Interval(s)).mid_rat());
            Dec hi = width ? dec(tub.eval_Q(Interval(s)).mid_rat()) : exp(dec(s));
            m = std::max<Dec>(m, hi - lo);
        }
        return m;
    };
    Dec prev = 1e9;
    bool mono = true;
    for (unsigned n = 8; n <= 24; n += 4) {
        Dec m = sup(tube_invariant(RealAlgebraic(1), R(1), n, R(2)), false);
        mono = mono && m < prev;
        prev = m;
    }
    prev = 1e9;
    for (unsigned j = 0; j < 8; ++j) {
        Rational mu = 1 + pow2(-static_cast<long>(j));
        Dec m = sup(tube_invariant(RealAlgebraic(1), R(1), tube_threshold(RealAlgebraic(1), R(1), mu), mu), true);
        mono = mono && m < prev;
        prev = m;
    }
    T.expect(mono, "tube convergence not monotone");
    T.note << "zero bracket width " << std::scientific << std::setprecision(2) << dec(z.hi - z.lo)
           << ", tube n=" << c.n << " validation " << verdict;
}

// ---------------------------------------------------------------- 10

void determinism(Tally &T) {
    size_t compared = 0;
    for (auto &p : exists_problems()) {
        DecideConfig par = builtin(), ser = builtin();
        ser.tail.parallel = false;
        DecisionOutcome a = decide_eventual(p.A, p.x0, p.Y, par);
        DecisionOutcome b = decide_eventual(p.A, p.x0, p.Y, par);
        DecisionOutcome s = decide_eventual(p.A, p.x0, p.Y, ser);
        std::string ja = outcome_to_json(a).dump();
        T.expect(ja == outcome_to_json(b).dump(), p.name + ": decisions differ");
        T.expect(ja == outcome_to_json(s).dump(), p.name + ": serial decision differs");
        if (!a.certificate)
            continue;
        ValidateOptions vo;
        vo.seed = 7;
        std::string ra = validate_certificate(*a.certificate, p.A, p.x0, p.Y, vo).to_json().dump();
        std::string rb = validate_certificate(*b.certificate, p.A, p.x0, p.Y, vo).to_json().dump();
        vo.parallel = false;
        std::string rs = validate_certificate(*s.certificate, p.A, p.x0, p.Y, vo).to_json().dump();
        T.expect(ra == rb && ra == rs, p.name + ": reports differ");
        compared += 3;
    }
    CliOptions o;
    o.mode = "builtin";
    o.samples = 200;
    for (const char *f : {R"J({"terms": [["1", "2"], ["1", "1"], ["1", "0"]], "t0": "1"})J",
                          R"J({"terms": [["1", "2"], ["-2", "1"]], "t0": "1"})J"}) {
        auto e = ExponentialPolynomial::parse(f);
        T.expect(cmd_reduce(e, o).output.dump() == cmd_reduce(e, o).output.dump(), "reduce output differs");
        ++compared;
    }
    T.note << compared << " repeated artifacts byte-identical";
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<void(Tally &)> run;
    } criteria[] = {
        {"jordan-exactness", jordan_exactness},
        {"matrix-exponential-consistency", exponential_consistency},
        {"relation-lattices", relation_lattices},
        {"asymptotic-sign-agreement", asymptotic_agreement},
        {"decision-fixtures", decision_fixtures},
        {"certificate-soundness", certificate_soundness},
        {"cone-invariance", cone_invariance},
        {"reality", reality},
        {"reduction-end-to-end", reduction_end_to_end},
        {"determinism", determinism},
    };
    int failed = 0, index = 0;
    for (auto &c : criteria) {
        ++index;
        Tally T;
        auto t0 = Clock::now();
        try {
            c.run(T);
        } catch (const std::exception &e) {
            T.failures.push_back(std::string("exception: ") + e.what());
        }
        bool pass = T.failures.empty();
        failed += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << " " << index << " " << c.name << " (" << T.checks << " checks, "
                  << std::fixed << std::setprecision(1) << seconds_since(t0) << " s) " << T.note.str() << "\n";
        for (auto &f : T.failures)
            std::cout << "     " << f << "\n";
        std::cout.flush();
    }
    std::cout << (failed ? "FAIL" : "PASS") << " overall " << (10 - failed) << "/10\n";
    return failed ? 1 : 0;
}
