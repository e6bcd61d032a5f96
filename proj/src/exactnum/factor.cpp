#include "ominv/exactnum/factor.hpp"
#include "ominv/error.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>

namespace ominv {

namespace {

using u64 = std::uint64_t;
using ModPoly = std::vector<u64>;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

void mtrim(ModPoly &f) {
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

ModPoly msub(ModPoly a, const ModPoly &b, u64 p) {
    if (b.size() > a.size())
        a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i)
        a[i] = (a[i] + p - b[i]) % p;
    mtrim(a);
    return a;
}

ModPoly mmul(const ModPoly &a, const ModPoly &b, u64 p) {
    if (a.empty() || b.empty())
        return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i])
            continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    mtrim(r);
    return r;
}

void mdivmod(const ModPoly &a, const ModPoly &b, u64 p, ModPoly *q, ModPoly *r) {
    ModPoly rem = a;
    size_t db = b.size() - 1;
    u64 inv = invmod(b.back(), p);
    ModPoly quo;
    if (rem.size() >= b.size())
        quo.assign(rem.size() - db, 0);
    for (size_t i = rem.size(); i-- > db;) {
        u64 c = rem[i];
        if (!c)
            continue;
        u64 f = mulmod(c, inv, p);
        quo[i - db] = f;
        for (size_t j = 0; j <= db; ++j)
            rem[i - db + j] = (rem[i - db + j] + p - mulmod(f, b[j], p)) % p;
    }
    mtrim(rem);
    mtrim(quo);
    if (q)
        *q = std::move(quo);
    if (r)
        *r = std::move(rem);
}

ModPoly mmod(const ModPoly &a, const ModPoly &b, u64 p) {
    ModPoly r;
    mdivmod(a, b, p, nullptr, &r);
    return r;
}

ModPoly mmonic(ModPoly a, u64 p) {
    if (a.empty())
        return a;
    u64 inv = invmod(a.back(), p);
    for (auto &x : a)
        x = mulmod(x, inv, p);
    return a;
}

ModPoly mgcd(ModPoly a, ModPoly b, u64 p) {
    while (!b.empty()) {
        ModPoly r = mmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return mmonic(a, p);
}

ModPoly mderiv(const ModPoly &a, u64 p) {
    if (a.size() <= 1)
        return {};
    ModPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i)
        r[i - 1] = mulmod(a[i], i % p, p);
    mtrim(r);
    return r;
}

// base^e mod f, e given as an mpz
ModPoly mpowmod(const ModPoly &base, const Integer &e, const ModPoly &f, u64 p) {
    ModPoly r{1}, b = mmod(base, f, p);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = mmod(mmul(r, r, p), f, p);
        if (mpz_tstbit(e.get_mpz_t(), i))
            r = mmod(mmul(r, b, p), f, p);
    }
    return r;
}

// Extended gcd: s a + t b = 1 (a, b coprime).
void mext_gcd(const ModPoly &a, const ModPoly &b, u64 p, ModPoly *s, ModPoly *t) {
    ModPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        ModPoly q, r;
        mdivmod(r0, r1, p, &q, &r);
        r0 = std::move(r1);
        r1 = std::move(r);
        ModPoly s2 = msub(s0, mmul(q, s1, p), p);
        ModPoly t2 = msub(t0, mmul(q, t1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    u64 inv = invmod(r0.back(), p);
    for (auto &x : s0)
        x = mulmod(x, inv, p);
    for (auto &x : t0)
        x = mulmod(x, inv, p);
    *s = s0;
    *t = t0;
}

ModPoly reduce_mod(const ZPoly &f, u64 p) {
    ModPoly r(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i)
        r[i] = mpz_fdiv_ui(f.c[i].get_mpz_t(), p);
    mtrim(r);
    return r;
}

// Distinct-degree then equal-degree (Cantor-Zassenhaus) factorization of a
// monic squarefree f mod p.
std::vector<ModPoly> factor_mod_p(const ModPoly &f_in, u64 p, std::mt19937_64 &rng) {
    std::vector<std::pair<ModPoly, size_t>> ddf;
    ModPoly f = f_in;
    ModPoly x{0, 1};
    ModPoly h = x;
    Integer P(static_cast<unsigned long>(p));
    for (size_t d = 1; 2 * d <= f.size() - 1; ++d) {
        h = mpowmod(h, P, f, p);
        ModPoly g = mgcd(f, msub(h, x, p), p);
        if (g.size() > 1) {
            ddf.push_back({g, d});
            ModPoly q;
            mdivmod(f, g, p, &q, nullptr);
            f = q;
            h = mmod(h, f, p);
        }
    }
    if (f.size() > 1)
        ddf.push_back({f, f.size() - 1});

    std::vector<ModPoly> out;
    std::function<void(const ModPoly &, size_t)> edf = [&](const ModPoly &g, size_t d) {
        size_t n = g.size() - 1;
        if (n == d) {
            out.push_back(g);
            return;
        }
        Integer e;
        mpz_pow_ui(e.get_mpz_t(), P.get_mpz_t(), d);
        e = (e - 1) / 2;
        std::uniform_int_distribution<u64> dist(0, p - 1);
        while (true) {
            ModPoly a(n);
            for (auto &c : a)
                c = dist(rng);
            mtrim(a);
            if (a.size() < 2)
                continue;
            ModPoly b = mpowmod(a, e, g, p);
            b = msub(b, ModPoly{1}, p);
            ModPoly c = mgcd(g, b, p);
            if (c.size() > 1 && c.size() < g.size()) {
                ModPoly q;
                mdivmod(g, c, p, &q, nullptr);
                edf(c, d);
                edf(mmonic(q, p), d);
                return;
            }
        }
    };
    for (auto &[g, d] : ddf)
        edf(g, d);
    return out;
}

// Polynomials over Z/m with mpz coefficients in [0, m).
using BigPoly = std::vector<Integer>;

void btrim(BigPoly &f) {
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

BigPoly bred(BigPoly a, const Integer &m) {
    for (auto &x : a)
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    btrim(a);
    return a;
}

BigPoly bmul(const BigPoly &a, const BigPoly &b, const Integer &m) {
    if (a.empty() || b.empty())
        return {};
    BigPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return bred(r, m);
}

BigPoly bsub(BigPoly a, const BigPoly &b) {
    if (b.size() > a.size())
        a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i)
        a[i] -= b[i];
    btrim(a);
    return a;
}

BigPoly from_mod(const ModPoly &a) {
    BigPoly r;
    for (u64 x : a)
        r.emplace_back(static_cast<unsigned long>(x));
    return r;
}

ModPoly to_mod(const BigPoly &a, u64 p) {
    ModPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = mpz_fdiv_ui(a[i].get_mpz_t(), p);
    mtrim(r);
    return r;
}

// Lift F = g h mod p (F monic mod p^k, g, h monic) to mod p^k.
void hensel_two(const BigPoly &F, ModPoly g0, ModPoly h0, u64 p, unsigned k, BigPoly *G, BigPoly *H) {
    ModPoly s, t;
    mext_gcd(g0, h0, p, &s, &t);
    BigPoly g = from_mod(g0), h = from_mod(h0);
    Integer pm(static_cast<unsigned long>(p));
    Integer P(static_cast<unsigned long>(p));
    for (unsigned m = 1; m < k; ++m) {
        Integer pm1 = pm * P;
        BigPoly diff = bsub(F, bmul(g, h, pm1));
        diff = bred(diff, pm1);
        BigPoly e;
        for (auto &c : diff) {
            Integer q;
            mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), pm.get_mpz_t());
            e.push_back(q);
        }
        ModPoly em = to_mod(e, p);
        ModPoly te = mmul(t, em, p), dg;
        mdivmod(te, g0, p, nullptr, &dg);
        ModPoly rest = msub(em, mmul(dg, h0, p), p), dh;
        mdivmod(rest, g0, p, &dh, nullptr);
        BigPoly dgb = from_mod(dg), dhb = from_mod(dh);
        if (g.size() < dgb.size())
            g.resize(dgb.size());
        for (size_t i = 0; i < dgb.size(); ++i)
            g[i] += pm * dgb[i];
        if (h.size() < dhb.size())
            h.resize(dhb.size());
        for (size_t i = 0; i < dhb.size(); ++i)
            h[i] += pm * dhb[i];
        g = bred(g, pm1);
        h = bred(h, pm1);
        pm = pm1;
    }
    *G = g;
    *H = h;
}

void hensel_multi(const BigPoly &F, const std::vector<ModPoly> &fs, size_t lo, size_t hi, u64 p,
                  unsigned k, std::vector<BigPoly> &out) {
    if (hi - lo == 1) {
        out[lo] = F;
        return;
    }
    size_t mid = (lo + hi) / 2;
    ModPoly a{1}, b{1};
    for (size_t i = lo; i < mid; ++i)
        a = mmul(a, fs[i], p);
    for (size_t i = mid; i < hi; ++i)
        b = mmul(b, fs[i], p);
    BigPoly A, B;
    hensel_two(F, a, b, p, k, &A, &B);
    hensel_multi(A, fs, lo, mid, p, k, out);
    hensel_multi(B, fs, mid, hi, p, k, out);
}

Integer isqrt_ceil(const Integer &n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r < n)
        r += 1;
    return r;
}

ZPoly symmetric(const BigPoly &a, const Integer &m) {
    Integer half = m / 2;
    std::vector<Integer> c;
    for (auto x : a) {
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        if (x > half)
            x -= m;
        c.push_back(x);
    }
    return ZPoly(std::move(c));
}

bool next_combination(std::vector<size_t> &idx, size_t n) {
    size_t k = idx.size();
    for (size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (size_t j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// f primitive, squarefree, positive lc, f(0) != 0, degree >= 2.
std::vector<ZPoly> zassenhaus(const ZPoly &f) {
    int n = f.degree();
    ZPoly fp = primitive_z(to_qpoly(f).derivative());
    std::mt19937_64 rng(0x5eed1234ULL + static_cast<unsigned>(n));

    // choose a good prime among the first few admissible ones
    std::vector<ModPoly> best;
    u64 best_p = 0;
    Integer cand(1UL << 30);
    int tried = 0;
    while (tried < 5) {
        mpz_nextprime(cand.get_mpz_t(), cand.get_mpz_t());
        u64 p = cand.get_ui();
        if (mpz_fdiv_ui(f.lc().get_mpz_t(), p) == 0)
            continue;
        ModPoly fm = reduce_mod(f, p);
        ModPoly g = mgcd(fm, mderiv(fm, p), p);
        if (g.size() != 1)
            continue;
        auto fs = factor_mod_p(mmonic(fm, p), p, rng);
        ++tried;
        if (best_p == 0 || fs.size() < best.size()) {
            best = fs;
            best_p = p;
        }
        if (best.size() == 1)
            break;
    }
    if (best.size() <= 1)
        return {f};
    u64 p = best_p;
    std::sort(best.begin(), best.end());

    Integer norm2 = 0;
    for (auto &c : f.c)
        norm2 += c * c;
    Integer bound = isqrt_ceil(norm2) + 1;
    Integer two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
    Integer lcabs = abs(f.lc());
    bound = 2 * bound * two_n * lcabs + 1;
    unsigned k = 1;
    Integer pk(static_cast<unsigned long>(p));
    Integer P(static_cast<unsigned long>(p));
    while (pk <= bound) {
        pk *= P;
        ++k;
    }
    // monic representative of f mod p^k
    Integer lcinv;
    mpz_invert(lcinv.get_mpz_t(), f.lc().get_mpz_t(), pk.get_mpz_t());
    BigPoly F;
    for (auto &c : f.c)
        F.push_back(c * lcinv);
    F = bred(F, pk);
    std::vector<BigPoly> lifted(best.size());
    hensel_multi(F, best, 0, best.size(), p, k, lifted);

    std::vector<ZPoly> result;
    ZPoly cur = f;
    std::vector<BigPoly> rem = lifted;
    size_t s = 1;
    while (2 * s <= rem.size()) {
        bool found = false;
        std::vector<size_t> idx(s);
        for (size_t i = 0; i < s; ++i)
            idx[i] = i;
        do {
            BigPoly prod{cur.lc()};
            prod = bred(prod, pk);
            for (size_t i : idx)
                prod = bmul(prod, rem[i], pk);
            ZPoly g = primitive_z(symmetric(prod, pk));
            ZPoly q;
            if (g.degree() > 0 && zdivides(cur, g, &q)) {
                result.push_back(g);
                cur = primitive_z(q);
                std::vector<BigPoly> nrem;
                for (size_t i = 0; i < rem.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), i) == idx.end())
                        nrem.push_back(rem[i]);
                rem = std::move(nrem);
                found = true;
                break;
            }
        } while (next_combination(idx, rem.size()));
        if (!found)
            ++s;
    }
    if (cur.degree() > 0)
        result.push_back(cur);
    return result;
}

} // namespace

std::vector<std::pair<QPoly, unsigned>> squarefree_decomposition(const QPoly &f_in) {
    std::vector<std::pair<QPoly, unsigned>> out;
    if (f_in.degree() <= 0)
        return out;
    QPoly f = f_in.monic();
    QPoly a = gcd(f, f.derivative());
    QPoly b = f / a;
    QPoly c = f.derivative() / a;
    QPoly d = c - b.derivative();
    unsigned i = 1;
    while (b.degree() > 0) {
        QPoly g = gcd(b, d);
        if (g.degree() > 0)
            out.push_back({g, i});
        b = b / g;
        c = d / g;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

std::vector<std::pair<ZPoly, unsigned>> factor_z(const ZPoly &f) {
    std::vector<std::pair<ZPoly, unsigned>> out;
    if (f.degree() <= 0)
        return out;
    for (auto &[s, mult] : squarefree_decomposition(to_qpoly(f))) {
        ZPoly g = primitive_z(s);
        // strip the factor x
        if (g.c[0] == 0) {
            out.push_back({ZPoly({Integer(0), Integer(1)}), mult});
            std::vector<Integer> c(g.c.begin() + 1, g.c.end());
            g = ZPoly(std::move(c));
        }
        if (g.degree() <= 0)
            continue;
        if (g.degree() == 1) {
            out.push_back({g, mult});
            continue;
        }
        for (auto &h : zassenhaus(g))
            out.push_back({primitive_z(h), mult});
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        if (a.first.degree() != b.first.degree())
            return a.first.degree() < b.first.degree();
        if (!(a.first == b.first))
            return a.first < b.first;
        return a.second < b.second;
    });
    return out;
}

std::vector<std::pair<QPoly, unsigned>> factor_q(const QPoly &f) {
    std::vector<std::pair<QPoly, unsigned>> out;
    if (f.degree() <= 0)
        return out;
    for (auto &[g, m] : factor_z(primitive_z(f)))
        out.push_back({to_qpoly(g).monic(), m});
    return out;
}

std::vector<QPoly> irreducible_factors(const QPoly &f) {
    std::vector<QPoly> out;
    for (auto &[g, m] : factor_q(f))
        out.push_back(g);
    return out;
}

bool is_irreducible(const QPoly &f) {
    auto fs = factor_q(f);
    return fs.size() == 1 && fs[0].second == 1;
}

} // namespace ominv
