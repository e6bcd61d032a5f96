#include "ominv/checker/checker.hpp"
#include "ominv/error.hpp"
#include "ominv/semialg/boxqe.hpp"
#include "ominv/semialg/torus.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace ominv {

namespace {

// coef * ln(arg), arg > 0
struct LogForm {
    Rational coef;
    NFElem arg;
};

NFElem nf_pow(const NFElem &x, unsigned long e, const NFElem &one) {
    NFElem acc = one;
    for (unsigned long i = 0; i < e; ++i)
        acc *= x;
    return acc;
}

// sign of a - b as -1, 0, 1, or 2 when undecided
int compare_logs(const LogForm &a, const LogForm &b, const NFElem &one) {
    {
        PrecisionGuard g(256);
        Interval d = Interval(a.coef) * log(a.arg.enclose()) - Interval(b.coef) * log(b.arg.enclose());
        if (d.positive())
            return 1;
        if (d.negative())
            return -1;
    }
    Integer D = lcm(Integer(a.coef.get_den()), Integer(b.coef.get_den()));
    Integer m = Integer(a.coef * Rational(D)), n = Integer(b.coef * Rational(D));
    const long cap = 4096;
    if (abs(m) > cap || abs(n) > cap)
        return 2;
    long mi = m.get_si(), ni = n.get_si();
    // A^m vs B^n  <=>  A^{m+} B^{n-} vs A^{m-} B^{n+}
    NFElem lhs = nf_pow(a.arg, std::max(mi, 0L), one) * nf_pow(b.arg, std::max(-ni, 0L), one);
    NFElem rhs = nf_pow(a.arg, std::max(-mi, 0L), one) * nf_pow(b.arg, std::max(ni, 0L), one);
    return nf_compare(lhs, rhs);
}

CElem cdiv(const CElem &a, const CElem &b) {
    NFElem n2 = b.re * b.re + b.im * b.im;
    CElem p = a * b.conj();
    NFElem inv = n2.inverse();
    return {p.re * inv, p.im * inv};
}

CElem cpow(const CElem &x, unsigned long e, const NFElem &zero, const NFElem &one) {
    CElem acc(one, zero);
    for (unsigned long i = 0; i < e; ++i)
        acc = acc * x;
    return acc;
}

std::string rv_text(const RatVec &v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + to_string(v[i]);
    return s + ")";
}

// exact solve of M y = b for a small invertible rational matrix
RatVec solve_rational(std::vector<RatVec> M, RatVec b) {
    size_t n = b.size();
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && M[p][c] == 0)
            ++p;
        require(p < n, ErrorCode::Internal, "singular relation Gram matrix");
        std::swap(M[p], M[c]);
        std::swap(b[p], b[c]);
        for (size_t r = 0; r < n; ++r) {
            if (r == c || M[r][c] == 0)
                continue;
            Rational f = M[r][c] / M[c][c];
            for (size_t j = c; j < n; ++j)
                M[r][j] -= f * M[c][j];
            b[r] -= f * b[c];
        }
    }
    for (size_t i = 0; i < n; ++i)
        b[i] /= M[i][i];
    return b;
}

// projection of c onto {q : z.q = 0 for every generator z}
RatVec project_relations(const RatVec &c, const RelationLattice &L) {
    size_t m = L.generators.size();
    if (m == 0)
        return c;
    std::vector<RatVec> Z;
    for (auto &g : L.generators) {
        RatVec row;
        for (auto &x : g)
            row.emplace_back(x);
        Z.push_back(row);
    }
    std::vector<RatVec> G(m, RatVec(m, Rational(0)));
    RatVec zc(m, Rational(0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j)
            for (size_t a = 0; a < c.size(); ++a)
                G[i][j] += Z[i][a] * Z[j][a];
        for (size_t a = 0; a < c.size(); ++a)
            zc[i] += Z[i][a] * c[a];
    }
    RatVec y = solve_rational(G, zc);
    RatVec q = c;
    for (size_t i = 0; i < m; ++i)
        for (size_t a = 0; a < c.size(); ++a)
            q[a] -= Z[i][a] * y[i];
    return q;
}

Integer common_den(const std::vector<const RatVec *> &vs) {
    Integer D(1);
    for (auto *v : vs)
        for (auto &x : *v)
            D = lcm(D, Integer(x.get_den()));
    return D;
}

// exponent vector in the box satisfying the certificate's rho-relations
std::optional<RatVec> sample_exponents(const ConeSpec &C, const FatConeCertificate &cert, long max_den) {
    size_t k = C.k();
    auto inside = [&](const RatVec &q) {
        for (size_t a = 0; a < k; ++a)
            if (q[a] < cert.ell[a] || q[a] > cert.u[a])
                return false;
        for (auto &z : cert.rho_relations.generators) {
            Rational d(0);
            for (size_t a = 0; a < k; ++a)
                d += Rational(z[a]) * q[a];
            if (d != 0)
                return false;
        }
        return common_den({&q, &cert.ell, &cert.u}) <= max_den;
    };
    std::vector<RatVec> cands;
    RatVec mid;
    for (size_t a = 0; a < k; ++a)
        mid.push_back((cert.ell[a] + cert.u[a]) / 2);
    cands.push_back(mid);
    for (unsigned j = 2; j <= 40; j += 2) {
        PrecisionGuard g(128);
        RatVec c;
        for (size_t a = 0; a < k; ++a) {
            const NFElem &rho = C.rho(a);
            if (rho.is_rational()) {
                c.push_back(rho.rational_value());
            } else {
                Interval z = rho.enclose();
                Rational grid = pow2(-static_cast<long>(j));
                c.push_back(Rational(floor_rat((z.lo_rat() + z.hi_rat()) / 2 / grid)) * grid);
            }
        }
        cands.push_back(c);
    }
    for (auto &c : cands) {
        RatVec q = project_relations(c, cert.rho_relations);
        if (inside(q))
            return q;
    }
    return std::nullopt;
}

Rational ipow(const Rational &b, unsigned long e) {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), Integer(b.get_num()).get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), Integer(b.get_den()).get_mpz_t(), e);
    Rational out(n, d);
    out.canonicalize();
    return out;
}

// least s = b^D with integer b and s >= target
Rational power_at_least(const Rational &target, unsigned long D) {
    Integer t = ceil_rat(target);
    if (t < 1)
        t = 1;
    if (D == 1)
        return Rational(t);
    Integer b;
    mpz_root(b.get_mpz_t(), t.get_mpz_t(), D);
    if (b < 1)
        b = 1;
    while (ipow(Rational(b), D) < Rational(t))
        ++b;
    return ipow(Rational(b), D);
}

struct FatSample {
    Rational s, r, dprime;
    RatVec q;
    std::vector<CElem> tau;
    std::map<std::string, NFElem> point;
    bool body = false, bounds = false, in_y = false;
};

using Check = std::function<void(ValidationReport &)>;

void guarded(ValidationReport &rep, const std::string &name, const Check &fn) {
    size_t before = rep.checks.size();
    try {
        fn(rep);
    } catch (const std::exception &e) {
        rep.checks.resize(before);
        rep.add(name, CheckVerdict::Fail, std::string("error: ") + e.what());
    }
}

bool structural_relations(const ConeSpec &C, const FatConeCertificate &cert, std::string &why) {
    size_t k = C.k();
    NFElem zero = C.zero();
    for (auto &z : cert.rho_relations.generators) {
        NFElem d = zero;
        for (size_t a = 0; a < k; ++a)
            d += C.rho(a) * C.F.constant(Rational(z[a]));
        if (!d.is_zero()) {
            why = "rho-relation not satisfied by rho";
            return false;
        }
    }
    for (auto &g : cert.omega_relations.generators) {
        NFElem d = zero;
        for (size_t a = 0; a < k; ++a)
            d += C.omega(a) * C.F.constant(Rational(g[a]));
        if (!d.is_zero()) {
            why = "omega-relation not satisfied by omega";
            return false;
        }
    }
    return true;
}

bool bounds_hold(const Formula &I, const std::map<std::string, NFElem> &pt, const FieldPtr &K) {
    for (auto &bv : I.bound()) {
        auto it = pt.find(bv.name);
        if (it == pt.end())
            return false;
        if (bv.lo && nf_compare(it->second, NFElem(K, *bv.lo)) < 0)
            return false;
        if (bv.hi && nf_compare(it->second, NFElem(K, *bv.hi)) > 0)
            return false;
    }
    return true;
}

} // namespace

Verdict fat_cone_member(const ConeSpec &C, const FatConeCertificate &cert, const RatVec &y) {
    require(y.size() == C.dim(), ErrorCode::ShapeMismatch, "point dimension");
    const JordanData &J = C.jordan;
    size_t d = C.dim(), k = C.k();
    NFElem zero = C.zero(), one = C.F.constant(1);
    require(cert.ell.size() == k && cert.u.size() == k, ErrorCode::ShapeMismatch, "box dimension");

    // False is only trusted when the certificate pairs every conjugate block
    bool complete = true;
    for (size_t a = 0; a < k; ++a)
        if (C.partner[a] >= 0) {
            IntVec e(k, Integer(0));
            e[a] += 1;
            e[static_cast<size_t>(C.partner[a])] += 1;
            complete = complete && cert.omega_relations.contains(e);
        }
    Verdict no = complete ? Verdict::False : Verdict::Unknown;

    std::vector<std::vector<CElem>> yh(J.blocks.size());
    for (size_t l = 0; l < J.blocks.size(); ++l) {
        size_t o = J.offset[l], n = J.blocks[l].size;
        yh[l].assign(n, CElem(zero, zero));
        for (size_t c = 0; c < n; ++c)
            for (size_t j = 0; j < d; ++j)
                if (y[j] != 0)
                    yh[l][c] += C.F.at_block(J.Pinv_elem(o + c, j), l) * C.F.constant(y[j]);
    }
    std::vector<bool> is_active(J.blocks.size(), false);
    for (size_t a = 0; a < k; ++a)
        is_active[C.active[a]] = true;
    for (size_t l = 0; l < J.blocks.size(); ++l)
        if (!is_active[l])
            for (auto &v : yh[l])
                if (!v.is_zero())
                    return no;
    if (k == 0)
        return Verdict::True;

    std::optional<NFElem> r;
    std::vector<CElem> X(k);
    std::vector<size_t> top(k);
    for (size_t a = 0; a < k; ++a) {
        const auto &z = C.z[a];
        const auto &v = yh[C.active[a]];
        size_t js = z.size();
        while (js > 0 && z[js - 1].is_zero())
            --js;
        require(js > 0, ErrorCode::Internal, "active block with zero coordinates");
        top[a] = --js;
        for (size_t c = js + 1; c < v.size(); ++c)
            if (!v[c].is_zero())
                return no;
        X[a] = cdiv(v[js], z[js]);
        if (X[a].is_zero())
            return no;
        if (js >= 1) {
            CElem ra = cdiv(cdiv(v[js - 1], X[a]) - z[js - 1], z[js]);
            if (!ra.im.is_zero())
                return no;
            if (r && *r != ra.re)
                return no;
            r = ra.re;
        }
    }
    for (size_t a = 0; a < k; ++a) {
        const auto &z = C.z[a];
        const auto &v = yh[C.active[a]];
        for (size_t c = 0; c <= top[a]; ++c) {
            CElem acc(zero, zero);
            NFElem rp = one;
            for (size_t j = 0; c + j <= top[a]; ++j) {
                if (j > 0)
                    rp = rp * *r * C.F.constant(Rational(1) / Rational(static_cast<long>(j)));
                acc += z[c + j] * rp;
            }
            if (!(X[a] * acc == v[c]))
                return no;
        }
    }
    if (cert.delta <= 0)
        return Verdict::Unknown;
    if (r && nf_compare(*r, C.F.constant(cert.delta)) < 0)
        return no;

    std::vector<NFElem> N;
    for (auto &x : X)
        N.push_back(x.re * x.re + x.im * x.im);
    for (auto &g : cert.omega_relations.generators) {
        CElem num(one, zero), den(one, zero);
        for (size_t a = 0; a < k; ++a) {
            if (g[a] > 0)
                num = num * cpow(X[a], Integer(g[a]).get_ui(), zero, one);
            else if (g[a] < 0)
                den = den * cpow(X[a], Integer(-g[a]).get_ui(), zero, one);
        }
        CElem v = num * den.conj();
        if (!v.im.is_zero() || v.re.sign() <= 0)
            return no;
    }
    for (auto &z : cert.rho_relations.generators) {
        NFElem pos = one, neg = one;
        for (size_t a = 0; a < k; ++a) {
            if (z[a] > 0)
                pos *= nf_pow(N[a], Integer(z[a]).get_ui(), one);
            else if (z[a] < 0)
                neg *= nf_pow(N[a], Integer(-z[a]).get_ui(), one);
        }
        if (pos != neg)
            return no;
    }

    // feasibility of sigma = ln s
    std::vector<LogForm> lower, upper;
    if (cert.s1 <= 0)
        return Verdict::Unknown;
    lower.push_back({Rational(1), C.F.constant(cert.s1)});
    if (cert.eps <= 0)
        return Verdict::Unknown;
    Rational inv_eps = Rational(1) / cert.eps;
    lower.push_back({inv_eps, r ? *r : C.F.constant(cert.delta)});
    for (size_t a = 0; a < k; ++a) {
        int one_cmp = nf_compare(N[a], one);
        if (cert.ell[a] > 0)
            upper.push_back({Rational(1) / (2 * cert.ell[a]), N[a]});
        else if (cert.ell[a] < 0)
            lower.push_back({Rational(1) / (2 * cert.ell[a]), N[a]});
        else if (one_cmp < 0)
            return no;
        if (cert.u[a] > 0)
            lower.push_back({Rational(1) / (2 * cert.u[a]), N[a]});
        else if (cert.u[a] < 0)
            upper.push_back({Rational(1) / (2 * cert.u[a]), N[a]});
        else if (one_cmp > 0)
            return no;
    }
    bool undecided = false;
    for (auto &lo : lower)
        for (auto &hi : upper) {
            int c = compare_logs(lo, hi, one);
            if (c == 2)
                undecided = true;
            else if (c > 0)
                return no;
        }
    return undecided ? Verdict::Unknown : Verdict::True;
}

ValidationReport validate_certificate(const FatConeCertificate &cert, const RationalMatrix &A, const RatVec &x0,
                                      const Formula &Y, const ValidateOptions &opt) {
    ValidationReport rep;
    PrecisionGuard pg(opt.precision);
    std::optional<ConeSpec> Cs;
    guarded(rep, "inputs-match", [&](ValidationReport &r) {
        bool ok = cert.A == A && cert.x0 == x0 && cert.target == Y;
        r.add("inputs-match", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              ok ? "system, initial point and target agree" : "certificate was issued for different inputs");
        Cs = ConeSpec::build(A, x0);
    });
    if (!Cs)
        return rep;
    const ConeSpec &C = *Cs;
    size_t k = C.k(), d = C.dim();
    const std::vector<std::string> &vars = cert.state_vars;

    bool formed = false;
    guarded(rep, "formula-well-formed", [&](ValidationReport &r) {
        std::set<std::string> want(vars.begin(), vars.end());
        bool ok = cert.formula.kind() == FKind::Exists && cert.formula.body().quantifier_free() &&
                  cert.formula.free_vars() == want && vars.size() == d && cert.ell.size() == k &&
                  cert.u.size() == k;
        formed = ok;
        r.add("formula-well-formed", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              "exists-block over " + std::to_string(cert.formula.bound().size()) + " variables, " +
                  std::to_string(cert.formula.size()) + " nodes");
    });
    if (!formed)
        return rep;

    guarded(rep, "relation-lattices", [&](ValidationReport &r) {
        bool rho = cert.rho_relations == C.rho_relations, om = cert.omega_relations == C.omega_relations;
        std::string why;
        bool st = structural_relations(C, cert, why);
        r.add("relation-lattices", rho && om && st ? CheckVerdict::Pass : CheckVerdict::Fail,
              "rho " + std::string(rho ? "equal" : "differs") + ", omega " + (om ? "equal" : "differs") +
                  (st ? "" : ", " + why));
    });

    std::vector<std::vector<AtomExpansion>> X;
    GapData gap;
    guarded(rep, "gap-data", [&](ValidationReport &r) {
        X = analyze_target(C, Y, vars);
        gap = target_gap(C, X);
        bool ok = gap.M2 == cert.M2 && gap.B == cert.B && cert.mu_lo > 0;
        if (gap.mu)
            ok = ok && nf_compare(C.F.constant(cert.mu_lo), *gap.mu) <= 0;
        std::string mu = gap.mu ? gap.mu->to_real().enclosure_string(12) : std::string("none");
        r.add("gap-data", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              "mu=" + mu + " mu_lo=" + to_string(cert.mu_lo) + " M2=" + gap.M2.get_str() + " B=" +
                  std::to_string(gap.B));
    });

    guarded(rep, "eps-gap", [&](ValidationReport &r) {
        bool shape = cert.eps > 0 && cert.eps <= 1 && cert.eps.get_num() == 1;
        bool ok = shape;
        Rational lhs = cert.eps * Rational(3 * static_cast<long>(gap.B));
        if (gap.mu)
            ok = ok && nf_compare(C.F.constant(lhs), *gap.mu) <= 0;
        ok = ok && (gap.B == 0 || lhs <= cert.mu_lo);
        r.add("eps-gap", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              "eps=" + to_string(cert.eps) + (shape ? "" : " not of the form 1/N") + " 3B*eps=" + to_string(lhs));
    });

    guarded(rep, "box", [&](ValidationReport &r) {
        bool ok = true;
        std::string ev;
        for (size_t a = 0; a < k; ++a) {
            bool in = nf_compare(C.F.constant(cert.ell[a]), C.rho(a)) <= 0 &&
                      nf_compare(C.rho(a), C.F.constant(cert.u[a])) <= 0;
            ok = ok && in;
            if (!in)
                ev += " rho" + std::to_string(a + 1) + " outside [" + to_string(cert.ell[a]) + "," +
                      to_string(cert.u[a]) + "]";
            Rational w = cert.u[a] - cert.ell[a];
            Rational lhs = Rational(4) * Rational(gap.M2) * Rational(static_cast<long>(k)) * w * w;
            bool narrow = w >= 0 && lhs <= cert.mu_lo * cert.mu_lo;
            if (gap.mu)
                narrow = narrow && nf_compare(C.F.constant(lhs), *gap.mu * *gap.mu) <= 0;
            ok = ok && narrow;
            if (!narrow)
                ev += " width" + std::to_string(a + 1) + "=" + to_string(w) + " too large";
        }
        r.add("box", ok ? CheckVerdict::Pass : CheckVerdict::Fail, ev.empty() ? "l <= rho <= u, width bound" : ev);
    });

    guarded(rep, "s1-conditions", [&](ValidationReport &r) {
        Rational y0 = invariance_y0(cert.eps);
        Rational floor = invariance_s1_floor(cert.eps, y0);
        bool ok = cert.y0 == y0 && cert.s1 >= cert.s0 && cert.s1 >= floor && cert.t_enter >= fat_cone_entry(cert);
        r.add("s1-conditions", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              "s1=" + to_string(cert.s1) + " s0=" + to_string(cert.s0) + " floor=" + to_string(floor) +
                  " y0=" + to_string(y0) + " t_enter=" + to_string(cert.t_enter));
    });

    guarded(rep, "thresholds", [&](ValidationReport &r) {
        TailOptions to;
        to.precision = opt.precision;
        to.parallel = opt.parallel;
        if (X.empty())
            X = analyze_target(C, Y, vars);
        FatThresholds th = fat_cone_thresholds(C, X, cert.eps, cert.mu_lo, cert.B, to);
        bool ok = cert.s0 >= th.s0 && cert.delta >= th.delta;
        r.add("thresholds", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              "recomputed s0=" + to_string(th.s0) + " delta=" + to_string(th.delta) + " over " +
                  std::to_string(th.boxes) + " torus boxes");
    });

    guarded(rep, "formula-matches", [&](ValidationReport &r) {
        bool ok = fat_cone_formula(C, cert) == cert.formula;
        r.add("formula-matches", ok ? CheckVerdict::Pass : CheckVerdict::Fail,
              ok ? "formula rebuilt from constants" : "formula differs from the one implied by the constants");
    });

    // exact samples of the fat cone and their flows
    const FieldPtr &K = C.F.field;
    std::string why;
    bool structural = structural_relations(C, cert, why);
    const long max_den = 64;
    std::optional<RatVec> q = sample_exponents(C, cert, max_den);
    std::vector<FatSample> samples;
    guarded(rep, "I-samples", [&](ValidationReport &r) {
        if (!q) {
            r.add("I-samples", CheckVerdict::Unknown, "no exponent vector with small denominators in the box");
            return;
        }
        Integer Dz = common_den({&*q, &cert.ell, &cert.u});
        unsigned long D = Dz.get_ui();
        std::vector<std::optional<FatSample>> out(opt.invariance_samples);
        std::vector<std::string> errors(opt.invariance_samples);
        long n = static_cast<long>(opt.invariance_samples);
#pragma omp parallel for schedule(dynamic) if (opt.parallel && n > 1)
        for (long idx = 0; idx < n; ++idx) {
            try {
                PrecisionGuard g(opt.precision);
                std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(idx));
                std::uniform_int_distribution<int> quarter(0, 8), part(0, 8), numd(-8, 8), dend(1, 8), dp(0, 32);
                FatSample S;
                S.q = *q;
                int lg = quarter(rng);
                Rational target = (Interval(cert.s1) * exp(log(Interval(2)) * Interval(Rational(lg, 4)))).hi_rat();
                for (int attempt = 0;; ++attempt) {
                    require(attempt < 64, ErrorCode::SearchExhausted, "no s with s^eps >= delta");
                    S.s = power_at_least(target, D);
                    Rational rhi;
                    if (auto e = exact_power(S.s, cert.eps))
                        rhi = *e;
                    else
                        rhi = exp(Interval(cert.eps) * log(Interval(S.s))).lo_rat();
                    if (rhi >= cert.delta) {
                        rhi = std::min(rhi, Rational(cert.delta + 1024));
                        S.r = cert.delta + (rhi - cert.delta) * Rational(part(rng), 8);
                        break;
                    }
                    target *= 2;
                }
                RatVec uu;
                for (size_t j = 0; j < C.torus_basis.size(); ++j) {
                    Rational x(numd(rng), dend(rng));
                    x.canonicalize();
                    uu.push_back(x);
                }
                S.tau = rational_torus_point(C, uu);
                S.dprime = Rational(dp(rng), 8);
                S.dprime.canonicalize();
                auto pt = fat_assignment(C, cert, S.s, S.r, S.q, S.tau);
                require(pt.has_value(), ErrorCode::Internal, "sample powers not rational");
                S.point = std::move(*pt);
                S.bounds = bounds_hold(cert.formula, S.point, K);
                S.body = eval_formula(cert.formula.body(), S.point, K);
                S.in_y = eval_formula(Y, S.point, K);
                out[static_cast<size_t>(idx)] = std::move(S);
            } catch (const std::exception &e) {
                errors[static_cast<size_t>(idx)] = e.what();
            }
        }
        size_t bad_body = 0, hit_y = 0, err = 0;
        std::string first;
        for (size_t i = 0; i < out.size(); ++i) {
            if (!out[i]) {
                ++err;
                if (first.empty())
                    first = "sample " + std::to_string(i) + ": " + errors[i];
                continue;
            }
            const FatSample &S = *out[i];
            if (!(S.body && S.bounds)) {
                ++bad_body;
                if (first.empty())
                    first = "sample " + std::to_string(i) + " s=" + to_string(S.s) + " r=" + to_string(S.r) +
                            " violates the formula";
            } else if (S.in_y) {
                ++hit_y;
                if (first.empty())
                    first = "sample " + std::to_string(i) + " s=" + to_string(S.s) + " r=" + to_string(S.r) +
                            " lies in Y";
            }
            samples.push_back(S);
        }
        std::string counts = "samples=" + std::to_string(out.size()) + " q=" + rv_text(*q) +
                             " outside_formula=" + std::to_string(bad_body) + " in_Y=" + std::to_string(hit_y);
        if (bad_body || hit_y)
            r.add("I-samples", CheckVerdict::Fail, first + "; " + counts);
        else if (err)
            r.add("I-samples", CheckVerdict::Unknown, first + "; " + counts);
        else
            r.add("I-samples", CheckVerdict::Pass, counts);
    });

    guarded(rep, "Y-samples", [&](ValidationReport &r) {
        std::mt19937_64 rng(opt.seed ^ 0xD1B54A32D192ED03ULL);
        const long den = 8, span = 4;
        std::uniform_int_distribution<long> num(-span * den, span * den);
        size_t found = 0, unknown = 0;
        for (size_t tries = 0; tries < 20 * opt.disjoint_samples && found < opt.disjoint_samples; ++tries) {
            RatVec y;
            std::map<std::string, Rational> pt;
            for (size_t i = 0; i < d; ++i) {
                Rational v(num(rng), den);
                v.canonicalize();
                y.push_back(v);
                pt[vars[i]] = v;
            }
            if (!eval_formula(Y, pt))
                continue;
            ++found;
            Verdict m = fat_cone_member(C, cert, y);
            if (m == Verdict::True) {
                r.add("Y-samples", CheckVerdict::Fail, "point " + rv_text(y) + " of Y lies in the fat cone");
                return;
            }
            unknown += m == Verdict::Unknown;
        }
        r.add("Y-samples", CheckVerdict::Pass,
              "points_in_Y=" + std::to_string(found) + " undecided_membership=" + std::to_string(unknown));
    });

    guarded(rep, "invariance", [&](ValidationReport &r) {
        if (!structural) {
            r.add("invariance", CheckVerdict::Fail, why);
            return;
        }
        if (samples.empty()) {
            r.add("invariance", CheckVerdict::Unknown, "no fat-cone samples");
            return;
        }
        std::vector<Interval> rho_i, om_i;
        for (size_t a = 0; a < k; ++a) {
            rho_i.push_back(C.rho(a).enclose());
            om_i.push_back(C.omega(a).enclose());
        }
        std::vector<int> box_exact(k);
        for (size_t a = 0; a < k; ++a)
            box_exact[a] = nf_compare(C.F.constant(cert.ell[a]), C.rho(a)) <= 0 &&
                           nf_compare(C.rho(a), C.F.constant(cert.u[a])) <= 0;
        // state enclosures are taken serially since they refine shared field data
        std::vector<IntervalVector> state(samples.size());
        for (size_t i = 0; i < samples.size(); ++i)
            for (size_t c = 0; c < d; ++c)
                state[i].push_back(samples[i].point.at(vars[c]).enclose());
        std::vector<std::pair<CheckVerdict, std::string>> res(samples.size(), {CheckVerdict::Pass, ""});
        unsigned long p = Integer(cert.eps.get_num()).get_ui(), qd = Integer(cert.eps.get_den()).get_ui();
        long n = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel && n > 1)
        for (long idx = 0; idx < n; ++idx) {
            PrecisionGuard g(opt.precision);
            const FatSample &S = samples[static_cast<size_t>(idx)];
            auto &out = res[static_cast<size_t>(idx)];
            try {
                Interval dl(S.dprime), ls = log(Interval(S.s));
                IntervalVector xt = taylor_flow(A, state[static_cast<size_t>(idx)], S.dprime);
                std::vector<Interval> w;
                std::vector<ComplexInterval> tau;
                for (size_t a = 0; a < k; ++a) {
                    w.push_back(exp(Interval(S.q[a]) * ls + rho_i[a] * dl));
                    ComplexInterval rot(cos(om_i[a] * dl), sin(om_i[a] * dl));
                    tau.push_back(ComplexInterval(S.tau[a].re.enclose(), S.tau[a].im.enclose()) * rot);
                }
                IntervalVector fp = fat_point_enclosure(C, w, Interval(S.r + S.dprime), tau);
                for (size_t c = 0; c < d; ++c)
                    if (!(xt[c] - fp[c]).contains_zero()) {
                        out = {CheckVerdict::Fail, "flow of sample " + std::to_string(idx) +
                                                       " leaves the state equations at delta=" +
                                                       to_string(S.dprime)};
                        break;
                    }
                if (out.first == CheckVerdict::Fail)
                    continue;
                if (S.dprime > 0) {
                    Interval gap_r = Interval(Rational(static_cast<long>(p))) * (ls + dl) -
                                     Interval(Rational(static_cast<long>(qd))) * log(Interval(S.r + S.dprime));
                    if (gap_r.negative()) {
                        out = {CheckVerdict::Fail, "sample " + std::to_string(idx) + " flows past r^q <= s^p"};
                        continue;
                    }
                    if (!gap_r.positive())
                        out = {CheckVerdict::Unknown, "sample " + std::to_string(idx) + " r-bound undecided"};
                }
                for (size_t a = 0; a < k && out.first != CheckVerdict::Fail; ++a) {
                    if (box_exact[a])
                        continue;
                    Interval lo = Interval(S.q[a] - cert.ell[a]) * ls + (rho_i[a] - Interval(cert.ell[a])) * dl;
                    Interval hi = Interval(cert.u[a] - S.q[a]) * ls + (Interval(cert.u[a]) - rho_i[a]) * dl;
                    if (lo.negative() || hi.negative())
                        out = {CheckVerdict::Fail, "sample " + std::to_string(idx) + " flows out of the box"};
                    else if (S.dprime > 0 && !(lo.positive() && hi.positive()))
                        out = {CheckVerdict::Unknown, "sample " + std::to_string(idx) + " box undecided"};
                }
            } catch (const std::exception &e) {
                out = {CheckVerdict::Unknown, e.what()};
            }
        }
        size_t fails = 0, unknowns = 0;
        std::string first;
        for (auto &[v, e] : res) {
            if (v == CheckVerdict::Fail) {
                if (!fails++)
                    first = e;
            } else if (v == CheckVerdict::Unknown) {
                if (!unknowns++ && first.empty())
                    first = e;
            }
        }
        std::string counts = "samples=" + std::to_string(samples.size()) + " fail=" + std::to_string(fails) +
                             " unknown=" + std::to_string(unknowns);
        if (fails)
            r.add("invariance", CheckVerdict::Fail, first + "; " + counts);
        else if (unknowns)
            r.add("invariance", CheckVerdict::Unknown, first + "; " + counts);
        else
            r.add("invariance", CheckVerdict::Pass, counts);
    });

    guarded(rep, "orbit-tail", [&](ValidationReport &r) {
        if (!structural) {
            r.add("orbit-tail", CheckVerdict::Fail, why);
            return;
        }
        size_t n = std::max<size_t>(opt.tail_samples, 1);
        bool box_ok = true;
        for (size_t a = 0; a < k; ++a)
            box_ok = box_ok && nf_compare(C.F.constant(cert.ell[a]), C.rho(a)) <= 0 &&
                     nf_compare(C.rho(a), C.F.constant(cert.u[a])) <= 0;
        size_t unknown = 0;
        for (size_t i = 0; i < n; ++i) {
            Rational t = cert.t_enter + Rational(static_cast<long>(4 * i), static_cast<long>(n));
            t.canonicalize();
            Interval ti(t);
            Interval s_gap = ti - log(Interval(cert.s1));
            Interval r_gap = exp(Interval(cert.eps) * ti) - ti;
            bool r_ok = t >= cert.delta;
            if (s_gap.negative() || r_gap.negative() || !r_ok || (!box_ok && t > 0)) {
                r.add("orbit-tail", CheckVerdict::Fail, "orbit at t=" + to_string(t) + " outside the fat cone");
                return;
            }
            IntervalVector x = orbit_enclosure(A, x0, t, 64);
            int yv = eval_on_box(Y, vars, x);
            if (yv == 1) {
                r.add("orbit-tail", CheckVerdict::Fail, "orbit at t=" + to_string(t) + " lies in Y");
                return;
            }
            unknown += yv == 2 || !s_gap.positive() || !r_gap.positive();
        }
        r.add("orbit-tail", unknown ? CheckVerdict::Unknown : CheckVerdict::Pass,
              "t in [" + to_string(cert.t_enter) + "," + to_string(cert.t_enter + 4) + "] samples=" +
                  std::to_string(n) + " undecided=" + std::to_string(unknown));
    });
    return rep;
}

std::vector<std::pair<std::string, FatConeCertificate>> certificate_mutations(const FatConeCertificate &cert) {
    ConeSpec C = ConeSpec::build(cert.A, cert.x0);
    size_t k = C.k();
    std::vector<std::pair<std::string, FatConeCertificate>> out;
    auto push = [&](const std::string &label, FatConeCertificate m, bool rebuild) {
        if (rebuild) {
            try {
                m.t_enter = fat_cone_entry(m);
                m.formula = fat_cone_formula(C, m);
            } catch (const Error &) {
            }
        }
        out.emplace_back(label, std::move(m));
    };
    auto unit = [&](RelationLattice L) {
        if (!L.generators.empty()) {
            L.generators.clear();
        } else {
            IntVec e(L.k, Integer(0));
            if (!e.empty())
                e[0] = 1;
            L.generators.push_back(e);
        }
        return L;
    };
    {
        auto m = cert;
        m.eps *= 2;
        push("eps-doubled", m, true);
    }
    if (k > 0) {
        auto m = cert;
        m.u[0] -= 1;
        push("u-below-rho", m, true);
        m = cert;
        m.ell[0] += 1;
        push("ell-above-rho", m, true);
        m = cert;
        for (size_t a = 0; a < k; ++a) {
            m.ell[a] -= 1;
            m.u[a] += 1;
        }
        push("box-widened", m, true);
    }
    {
        auto m = cert;
        m.s0 = cert.s1 + 1;
        push("s0-above-s1", m, true);
    }
    {
        auto m = cert;
        m.s0 = 1;
        m.s1 = invariance_s1_floor(cert.eps, cert.y0) - 1;
        push("s1-below-floor", m, true);
    }
    {
        auto m = cert;
        m.rho_relations = unit(cert.rho_relations);
        push("rho-relations-altered", m, true);
    }
    {
        auto m = cert;
        MPoly x1 = MPoly::var(cert.state_vars.front());
        m.formula = substitute(cert.formula, {{cert.state_vars.front(), x1 - MPoly(1)}});
        push("formula-shifted", m, false);
    }
    {
        auto m = cert;
        m.delta = Rational(1, 2);
        push("delta-below-threshold", m, true);
    }
    {
        auto m = cert;
        m.omega_relations = unit(cert.omega_relations);
        push("omega-relations-altered", m, true);
    }
    return out;
}

} // namespace ominv
