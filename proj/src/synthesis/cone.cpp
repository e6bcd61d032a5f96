#include "ominv/synthesis/cone.hpp"
#include "ominv/error.hpp"

#include <algorithm>

namespace ominv {

namespace {

Interval horner_r(const std::vector<Interval> &c, const Interval &r) {
    Interval acc(0);
    for (size_t i = c.size(); i-- > 0;)
        acc = acc * r + c[i];
    return acc;
}

bool canonical(const IntVec &m) {
    for (auto &x : m)
        if (x != 0)
            return x > 0;
    return true;
}

bool is_zero_vec(const IntVec &m) {
    for (auto &x : m)
        if (x != 0)
            return false;
    return true;
}

CElem cpow(const CElem &x, unsigned e, const NFElem &zero) {
    CElem acc(NFElem(zero.field(), Rational(1)), zero);
    for (unsigned i = 0; i < e; ++i)
        acc = acc * x;
    return acc;
}

} // namespace

std::vector<NFElem> ConeSpec::rhos() const {
    std::vector<NFElem> out;
    for (size_t a = 0; a < k(); ++a)
        out.push_back(rho(a));
    return out;
}

std::vector<NFElem> ConeSpec::omegas() const {
    std::vector<NFElem> out;
    for (size_t a = 0; a < k(); ++a)
        out.push_back(omega(a));
    return out;
}

ConeSpec ConeSpec::build(const RationalMatrix &A, const RatVec &x0) {
    require(A.square(), ErrorCode::ShapeMismatch, "system matrix must be square");
    require(A.rows() == x0.size(), ErrorCode::ShapeMismatch, "initial point dimension");
    ConeSpec C;
    C.A = A;
    C.x0 = x0;
    JordanDecomposition dec = jordan_decompose(A);
    C.jordan = std::move(dec.jordan);
    C.spectral = std::move(dec.spectral);
    C.F = SpectralField::build(C.jordan, C.spectral);
    const JordanData &J = C.jordan;
    size_t d = A.rows();
    NFElem zero = C.F.constant(0);

    for (size_t l = 0; l < J.blocks.size(); ++l) {
        size_t o = J.offset[l], n = J.blocks[l].size;
        std::vector<CElem> z(n, CElem(zero, zero));
        bool nonzero = false;
        for (size_t a = 0; a < n; ++a) {
            for (size_t j = 0; j < d; ++j)
                if (x0[j] != 0)
                    z[a] += C.F.at_block(J.Pinv_elem(o + a, j), l) * C.F.constant(x0[j]);
            nonzero = nonzero || !z[a].is_zero();
        }
        if (!nonzero)
            continue;
        std::vector<std::vector<CElem>> P(d, std::vector<CElem>(n, CElem(zero, zero)));
        for (size_t i = 0; i < d; ++i)
            for (size_t a = 0; a < n; ++a)
                P[i][a] = C.F.at_block(J.P_elem(i, o + a), l);
        std::vector<std::vector<CElem>> G(d, std::vector<CElem>(n, CElem(zero, zero)));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < n; ++j) {
                CElem acc(zero, zero);
                for (size_t c = 0; c + j < n; ++c)
                    acc += P[i][c] * z[c + j];
                G[i][j] = acc * C.F.constant(Rational(1) / Rational(factorial(j)));
            }
        C.active.push_back(l);
        C.z.push_back(std::move(z));
        C.G.push_back(std::move(G));
    }

    size_t k = C.active.size();
    C.partner.assign(k, -1);
    for (size_t a = 0; a < k; ++a) {
        if (C.omega(a).is_zero())
            continue;
        const JordanBlock &ba = J.blocks[C.active[a]];
        for (size_t b = 0; b < k; ++b) {
            const JordanBlock &bb = J.blocks[C.active[b]];
            if (b != a && ba.factor == bb.factor && ba.chain == bb.chain && C.rho(a) == C.rho(b) &&
                C.omega(a) == -C.omega(b))
                C.partner[a] = static_cast<long>(b);
        }
    }
    if (k > 0) {
        C.omega_relations = additive_relations(C.omegas());
        C.rho_relations = additive_relations(C.rhos());
    }
    C.omega_relations.k = k;
    C.rho_relations.k = k;
    C.torus_basis = k > 0 ? orthogonal_complement(C.omega_relations) : std::vector<IntVec>{};
    return C;
}

std::vector<ConeClass> cone_classes(const ConeSpec &C) {
    std::vector<ConeClass> out;
    for (size_t a = 0; a < C.k(); ++a) {
        if (C.partner[a] < 0)
            out.push_back({a, false});
        else if (C.omega(a).sign() > 0)
            out.push_back({a, true});
    }
    return out;
}

std::vector<std::string> state_var_names(size_t d) {
    std::vector<std::string> v;
    for (size_t i = 0; i < d; ++i)
        v.push_back("x" + std::to_string(i + 1));
    return v;
}

ConePoly cone_state(const ConeSpec &C, size_t i) {
    ConePoly p;
    for (size_t a = 0; a < C.k(); ++a)
        for (size_t j = 0; j < C.block_size(a); ++j) {
            const CElem &g = C.G[a][i][j];
            if (g.is_zero())
                continue;
            ConeMonomial m;
            m.n.assign(C.k(), Integer(0));
            m.n[a] = 1;
            m.b = static_cast<unsigned>(j);
            p[m] = g;
        }
    return p;
}

ConePoly cone_mul(const ConePoly &a, const ConePoly &b) {
    ConePoly out;
    for (auto &[ma, ca] : a)
        for (auto &[mb, cb] : b) {
            ConeMonomial m;
            m.n = ma.n;
            for (size_t j = 0; j < m.n.size(); ++j)
                m.n[j] += mb.n[j];
            m.b = ma.b + mb.b;
            CElem v = ca * cb;
            auto it = out.find(m);
            if (it == out.end())
                out.emplace(m, v);
            else
                it->second += v;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

ConePoly expand_polynomial(const ConeSpec &C, const MPoly &R, const std::vector<std::string> &state_vars) {
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < state_vars.size(); ++i)
        index[state_vars[i]] = i;
    std::vector<ConePoly> xs(C.dim());
    for (size_t i = 0; i < C.dim(); ++i)
        xs[i] = cone_state(C, i);
    NFElem zero = C.zero();
    ConePoly out;
    for (auto &[mono, c] : R.terms()) {
        ConePoly term;
        ConeMonomial one;
        one.n.assign(C.k(), Integer(0));
        term[one] = CElem(C.F.constant(c), zero);
        for (auto &[v, e] : mono.f) {
            auto it = index.find(v);
            if (it == index.end())
                fail(ErrorCode::UnboundVariable, v);
            for (unsigned q = 0; q < e; ++q)
                term = cone_mul(term, xs[it->second]);
        }
        for (auto &[m, v] : term) {
            auto jt = out.find(m);
            if (jt == out.end())
                out.emplace(m, v);
            else
                jt->second += v;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

NFElem TrigPoly::at_zero(const NFElem &zero) const {
    NFElem acc = zero;
    for (auto &t : terms)
        acc += t.re;
    return acc;
}

Interval TrigPoly::eval(const std::vector<Interval> &theta) const {
    Interval acc(0);
    for (auto &t : terms) {
        if (is_zero_vec(t.m)) {
            acc += t.re.enclose();
            continue;
        }
        Interval phi(0);
        for (size_t j = 0; j < t.m.size(); ++j)
            if (t.m[j] != 0)
                phi += Interval(Rational(t.m[j])) * theta[j];
        acc += t.re.enclose() * cos(phi) - t.im.enclose() * sin(phi);
    }
    return acc;
}

AtomExpansion analyze_atom(const ConeSpec &C, const MPoly &R, Rel rel, const std::vector<std::string> &state_vars) {
    AtomExpansion out;
    out.poly = R;
    out.rel = rel;
    ConePoly p = expand_polynomial(C, R, state_vars);
    NFElem zero = C.zero();
    size_t q = C.torus_basis.size();

    struct Raw {
        NFElem e;
        std::map<unsigned, std::map<IntVec, CElem>> by_b;
    };
    std::vector<Raw> raw;
    IntVec last;
    for (auto &[m, c] : p) {
        if (out.vectors.empty() || out.vectors.back() != m.n)
            out.vectors.push_back(m.n);
        NFElem e = zero;
        for (size_t a = 0; a < C.k(); ++a)
            if (m.n[a] != 0)
                e += C.rho(a) * Rational(m.n[a]);
        Raw *slot = nullptr;
        for (auto &r : raw)
            if (r.e == e)
                slot = &r;
        if (!slot) {
            raw.push_back({e, {}});
            slot = &raw.back();
        }
        IntVec freq(q, Integer(0));
        for (size_t j = 0; j < q; ++j)
            freq[j] = dot(C.torus_basis[j], m.n);
        CElem v = c;
        if (!canonical(freq)) {
            for (auto &x : freq)
                x = -x;
            v = v.conj();
        }
        auto &cell = slot->by_b[m.b];
        auto it = cell.find(freq);
        if (it == cell.end())
            cell.emplace(freq, v);
        else
            it->second += v;
    }
    for (auto &r : raw) {
        ExpClass ec;
        ec.e = r.e;
        for (auto it = r.by_b.rbegin(); it != r.by_b.rend(); ++it) {
            TrigPoly tp;
            for (auto &[freq, v] : it->second) {
                TrigTerm t{freq, v.re, is_zero_vec(freq) ? zero : v.im};
                if (!t.re.is_zero() || !t.im.is_zero())
                    tp.terms.push_back(std::move(t));
            }
            if (!tp.zero()) {
                out.max_b = std::max(out.max_b, it->first);
                ec.by_degree.emplace_back(it->first, std::move(tp));
            }
        }
        if (!ec.by_degree.empty())
            out.classes.push_back(std::move(ec));
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const ExpClass &a, const ExpClass &b) { return nf_compare(a.e, b.e) > 0; });
    return out;
}

std::vector<Interval> fat_point_enclosure(const ConeSpec &C, const std::vector<Interval> &w, const Interval &r,
                                          const std::vector<ComplexInterval> &tau) {
    std::vector<Interval> x(C.dim(), Interval(0));
    for (size_t i = 0; i < C.dim(); ++i)
        for (size_t a = 0; a < C.k(); ++a) {
            std::vector<Interval> coef;
            for (size_t j = 0; j < C.block_size(a); ++j) {
                const CElem &g = C.G[a][i][j];
                coef.push_back(g.re.enclose() * tau[a].re - g.im.enclose() * tau[a].im);
            }
            x[i] += w[a] * horner_r(coef, r);
        }
    return x;
}

std::vector<Interval> cone_point_enclosure(const ConeSpec &C, const Interval &t,
                                           const std::vector<ComplexInterval> &tau) {
    std::vector<Interval> w;
    for (size_t a = 0; a < C.k(); ++a)
        w.push_back(exp(C.rho(a).enclose() * t));
    return fat_point_enclosure(C, w, t, tau);
}

std::vector<NFElem> fat_point_exact(const ConeSpec &C, const std::vector<NFElem> &w, const NFElem &r,
                                    const std::vector<CElem> &tau) {
    NFElem zero = C.zero();
    std::vector<NFElem> x(C.dim(), zero);
    for (size_t i = 0; i < C.dim(); ++i)
        for (size_t a = 0; a < C.k(); ++a) {
            NFElem acc = zero, rp = C.F.constant(1);
            for (size_t j = 0; j < C.block_size(a); ++j) {
                const CElem &g = C.G[a][i][j];
                acc += (g.re * tau[a].re - g.im * tau[a].im) * rp;
                rp *= r;
            }
            x[i] += w[a] * acc;
        }
    return x;
}

std::vector<ComplexInterval> torus_from_theta(const ConeSpec &C, const std::vector<Interval> &theta) {
    std::vector<ComplexInterval> tau;
    for (size_t a = 0; a < C.k(); ++a) {
        Interval phi(0);
        for (size_t j = 0; j < C.torus_basis.size(); ++j)
            if (C.torus_basis[j][a] != 0)
                phi += Interval(Rational(C.torus_basis[j][a])) * theta[j];
        tau.emplace_back(cos(phi), sin(phi));
    }
    return tau;
}

bool on_torus(const ConeSpec &C, const std::vector<CElem> &tau) {
    if (tau.size() != C.k())
        return false;
    NFElem zero = C.zero(), one = C.F.constant(1);
    for (auto &t : tau)
        if (t.re * t.re + t.im * t.im != one)
            return false;
    for (auto &g : C.omega_relations.generators) {
        CElem acc(one, zero);
        for (size_t a = 0; a < C.k(); ++a) {
            if (g[a] == 0)
                continue;
            CElem base = g[a] > 0 ? tau[a] : tau[a].conj();
            acc = acc * cpow(base, static_cast<unsigned>(Integer(abs(g[a])).get_ui()), zero);
        }
        if (acc.re != one || !acc.im.is_zero())
            return false;
    }
    return true;
}

std::vector<CElem> rational_torus_point(const ConeSpec &C, const RatVec &u) {
    require(u.size() == C.torus_basis.size(), ErrorCode::ShapeMismatch, "one parameter per torus coordinate");
    NFElem zero = C.zero(), one = C.F.constant(1);
    std::vector<CElem> zeta;
    for (auto &v : u) {
        Rational d = 1 + v * v;
        zeta.emplace_back(C.F.constant(Rational((1 - v * v) / d)), C.F.constant(Rational(2 * v / d)));
    }
    std::vector<CElem> tau;
    for (size_t a = 0; a < C.k(); ++a) {
        CElem acc(one, zero);
        for (size_t j = 0; j < zeta.size(); ++j) {
            const Integer &h = C.torus_basis[j][a];
            if (h == 0)
                continue;
            CElem base = h > 0 ? zeta[j] : zeta[j].conj();
            acc = acc * cpow(base, static_cast<unsigned>(Integer(abs(h)).get_ui()), zero);
        }
        tau.push_back(acc);
    }
    return tau;
}

} // namespace ominv
