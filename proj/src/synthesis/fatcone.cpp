#include "ominv/synthesis/fatcone.hpp"
#include "ominv/error.hpp"
#include "ominv/semialg/torus.hpp"

#include <algorithm>

namespace ominv {

using nlohmann::json;

namespace {

Rational rat_pow(const Rational &b, unsigned long e) {
    Rational acc(1);
    for (unsigned long i = 0; i < e; ++i)
        acc *= b;
    return acc;
}

unsigned long eps_inverse(const Rational &eps) {
    require(eps > 0 && eps <= 1 && eps.get_num() == 1, ErrorCode::InvalidInput, "eps must be 1/N");
    return Integer(eps.get_den()).get_ui();
}

// least power of two s with s^gamma > c, certified by intervals
Rational power_threshold(const Rational &gamma, const Rational &c) {
    if (c < 1)
        return Rational(1);
    PrecisionGuard g(128);
    Interval lc = log(Interval(c)), l2 = log(Interval(2)), gm(gamma);
    long m = std::max(0L, Integer(floor_rat((lc / (gm * l2)).lo_rat())).get_si());
    while (!(gm * l2 * Interval(Rational(m)) - lc).positive())
        ++m;
    return pow2(m);
}

Rational pow2_ceil(const Rational &x) {
    Rational p(1);
    while (p < x)
        p *= 2;
    return p;
}

std::string wname(const char *prefix, size_t a) { return std::string(prefix) + std::to_string(a + 1); }

MPoly power_atom_lhs(const MPoly &v, const Rational &e, const MPoly &s) {
    // v^{den} - s^{num}, or v^{den} s^{-num} - 1 when num < 0
    unsigned den = static_cast<unsigned>(Integer(e.get_den()).get_ui());
    Integer num(e.get_num());
    if (num >= 0)
        return v.pow(den) - s.pow(static_cast<unsigned>(num.get_ui()));
    return v.pow(den) * s.pow(static_cast<unsigned>(Integer(-num).get_ui())) - MPoly(1);
}

} // namespace

MPoly field_poly(const NFElem &c) { return MPoly::from_qpoly(c.poly(), "g"); }

Formula generator_guard(const FieldPtr &K) {
    if (K->degree() <= 1)
        return Formula::truth(true);
    auto [lo, hi] = K->generator().isolator();
    MPoly g = MPoly::var("g");
    return Formula::conj({Formula::eq(MPoly::from_qpoly(K->minpoly(), "g")), Formula::ge(g, MPoly(lo)),
                          Formula::le(g, MPoly(hi))});
}

Rational choose_eps(const Rational &mu_lo, unsigned B) {
    if (B == 0)
        return Rational(1);
    require(mu_lo > 0, ErrorCode::Internal, "gap lower bound must be positive");
    Integer N = ceil_rat(Rational(3 * B) / mu_lo);
    if (N < 1)
        N = 1;
    return Rational(1) / Rational(N);
}

Rational box_width(const Rational &mu_lo, const Integer &M2, size_t k) {
    Rational w(1);
    Rational lhs_scale = Rational(4) * Rational(M2) * Rational(static_cast<long>(k));
    if (lhs_scale == 0)
        return w;
    while (lhs_scale * w * w > mu_lo * mu_lo)
        w /= 2;
    return w;
}

Rational invariance_y0(const Rational &eps) {
    unsigned long N = eps_inverse(eps);
    PrecisionGuard g(128);
    Interval ln2 = log(Interval(2));
    for (unsigned long i = 1;; ++i) {
        Rational logy_hi = (ln2 * Interval(Rational(static_cast<long>(N * i)))).hi_rat();
        Rational logy_lo = (ln2 * Interval(Rational(static_cast<long>(N * i)))).lo_rat();
        Rational root = pow2(static_cast<long>(i));
        if (logy_lo >= Rational(static_cast<long>(N)) && root >= logy_hi && root >= 2)
            return pow2(static_cast<long>(N * i));
    }
}

Rational invariance_s1_floor(const Rational &eps, const Rational &y0) {
    unsigned long N = eps_inverse(eps);
    Rational out(2);
    out = std::max(out, pow2(static_cast<long>(N)));
    // y0 = 2^{N i} so y0^eps = 2^i exactly
    Integer e(0);
    Rational y = y0;
    while (y > 1) {
        y /= 2;
        ++e;
    }
    require(y == 1 && e % Integer(static_cast<long>(N)) == 0, ErrorCode::InvalidInput, "y0 must be 2^{N i}");
    Rational root = pow2(static_cast<long>(Integer(e / Integer(static_cast<long>(N))).get_ui()));
    out = std::max(out, rat_pow((y0 - 1) / (root - 1), N));
    out = std::max(out, rat_pow(Rational(static_cast<long>(N)), N));
    return out;
}

Formula fat_cone_formula(const ConeSpec &C, const FatConeCertificate &cert) {
    size_t k = C.k();
    MPoly s = MPoly::var("s"), r = MPoly::var("r");
    std::vector<Formula> parts;
    std::vector<BoundVar> bound{{"s", {}, {}}, {"r", {}, {}}};
    parts.push_back(Formula::ge(s, MPoly(cert.s1)));
    parts.push_back(Formula::ge(r, MPoly(cert.delta)));
    {
        unsigned p = static_cast<unsigned>(Integer(cert.eps.get_num()).get_ui());
        unsigned q = static_cast<unsigned>(Integer(cert.eps.get_den()).get_ui());
        parts.push_back(Formula::le(r.pow(q), s.pow(p)));
    }
    std::vector<std::pair<std::string, std::string>> names;
    for (size_t a = 0; a < k; ++a) {
        names.push_back(torus_var_names(a));
        bound.push_back({wname("w", a), {}, {}});
        bound.push_back({wname("lw", a), {}, {}});
        bound.push_back({wname("uw", a), {}, {}});
    }
    for (auto &[c, sn] : names) {
        bound.push_back({c, Rational(-1), Rational(1)});
        bound.push_back({sn, Rational(-1), Rational(1)});
    }
    if (k > 0)
        parts.push_back(build_torus_formula(cert.omega_relations, names));
    for (auto &z : cert.rho_relations.generators) {
        MPoly pos(1), neg(1);
        for (size_t a = 0; a < k; ++a) {
            MPoly w = MPoly::var(wname("w", a));
            if (z[a] > 0)
                pos *= w.pow(static_cast<unsigned>(Integer(z[a]).get_ui()));
            else if (z[a] < 0)
                neg *= w.pow(static_cast<unsigned>(Integer(-z[a]).get_ui()));
        }
        parts.push_back(Formula::eq(pos, neg));
    }
    for (size_t a = 0; a < k; ++a) {
        MPoly w = MPoly::var(wname("w", a)), lw = MPoly::var(wname("lw", a)), uw = MPoly::var(wname("uw", a));
        parts.push_back(Formula::eq(power_atom_lhs(lw, cert.ell[a], s)));
        parts.push_back(Formula::eq(power_atom_lhs(uw, cert.u[a], s)));
        parts.push_back(Formula::gt(lw));
        parts.push_back(Formula::gt(uw));
        parts.push_back(Formula::le(lw, w));
        parts.push_back(Formula::le(w, uw));
    }
    for (size_t i = 0; i < C.dim(); ++i) {
        MPoly xi;
        for (size_t a = 0; a < k; ++a) {
            auto [cn, sn] = names[a];
            MPoly inner, rp(1);
            for (size_t j = 0; j < C.block_size(a); ++j) {
                const CElem &g = C.G[a][i][j];
                if (!g.is_zero())
                    inner += (field_poly(g.re) * MPoly::var(cn) - field_poly(g.im) * MPoly::var(sn)) * rp;
                rp = rp * r;
            }
            xi += MPoly::var(wname("w", a)) * inner;
        }
        parts.push_back(Formula::eq(MPoly::var(cert.state_vars[i]), xi));
    }
    if (C.F.field->degree() > 1) {
        auto [lo, hi] = C.F.field->generator().isolator();
        bound.push_back({"g", lo, hi});
        parts.push_back(generator_guard(C.F.field));
    }
    return Formula::exists(std::move(bound), Formula::conj(std::move(parts)));
}

std::vector<std::vector<AtomExpansion>> analyze_target(const ConeSpec &C, const Formula &Y,
                                                       const std::vector<std::string> &state_vars) {
    std::vector<std::vector<AtomExpansion>> X;
    for (auto &disjunct : to_dnf(Y)) {
        std::vector<AtomExpansion> row;
        for (auto &at : disjunct)
            row.push_back(analyze_atom(C, at.poly, at.rel, state_vars));
        X.push_back(std::move(row));
    }
    return X;
}

GapData target_gap(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &X) {
    std::vector<NFElem> rhos = C.rhos();
    GapData gap;
    for (auto &row : X)
        for (auto &at : row) {
            GapData g = gap_data({}, at.vectors, rhos);
            if (g.mu && (!gap.mu || nf_compare(*g.mu, *gap.mu) < 0))
                gap.mu = g.mu;
            gap.M2 = std::max(gap.M2, g.M2);
            gap.B = std::max(gap.B, at.max_b);
        }
    return gap;
}

FatThresholds fat_cone_thresholds(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &X,
                                  const Rational &eps, const Rational &mu_lo, unsigned B, const TailOptions &opt) {
    TailCover cover = cover_torus(C, X, opt);
    if (!cover.complete)
        fail(ErrorCode::NoCertificate, "torus cover incomplete at depth " + std::to_string(cover.depth));
    FatThresholds th;
    th.boxes = cover.boxes.size();
    Rational gamma = mu_lo / 2 - eps * Rational(B);
    Rational s0(1), delta(1);
    for (auto &per_box : cover.data)
        for (auto &D : per_box) {
            if (D.symbolic_zero)
                continue;
            Rational lower(0), others(0);
            for (auto &[b, c] : D.lower)
                lower += c;
            for (auto &o : D.others)
                others += o.bound;
            require(D.mstar > 0, ErrorCode::Internal, "dominant bound zero");
            if (others > 0) {
                require(gamma > 0, ErrorCode::NoCertificate, "nonpositive gap exponent");
                s0 = std::max(s0, power_threshold(gamma, Rational(2) * others / D.mstar));
            }
            delta = std::max(delta, Rational(Rational(2) * lower / D.mstar));
        }
    th.s0 = s0;
    th.delta = pow2_ceil(delta);
    return th;
}

FatConeCertificate synthesize_fat_cone(const ConeSpec &C, const Formula &Y, const std::vector<std::string> &state_vars,
                                       const TailOptions &opt) {
    require(Y.quantifier_free(), ErrorCode::InvalidInput, "target must be quantifier-free");
    FatConeCertificate cert;
    cert.A = C.A;
    cert.x0 = C.x0;
    cert.target = Y;
    cert.state_vars = state_vars;
    cert.rho_relations = C.rho_relations;
    cert.omega_relations = C.omega_relations;
    size_t k = C.k();

    std::vector<std::vector<AtomExpansion>> X = analyze_target(C, Y, state_vars);
    GapData gap = target_gap(C, X);
    cert.mu = gap.mu;
    cert.M2 = gap.M2;
    cert.B = gap.B;
    {
        PrecisionGuard g(opt.precision);
        cert.mu_lo = gap.mu ? dyadic_floor(gap.mu->enclose().lo_rat(), 40) : Rational(1);
    }
    require(cert.mu_lo > 0, ErrorCode::NoCertificate, "gap lower bound not positive");
    cert.eps = choose_eps(cert.mu_lo, cert.B);

    // box around rho
    Rational w = gap.mu ? box_width(cert.mu_lo, cert.M2, k) : Rational(1);
    for (size_t a = 0; a < k; ++a) {
        const NFElem &rho = C.rho(a);
        if (rho.is_rational()) {
            cert.ell.push_back(rho.rational_value());
            cert.u.push_back(rho.rational_value());
            continue;
        }
        for (mpfr_prec_t prec = 64;; prec *= 2) {
            require(prec <= 1 << 14, ErrorCode::PrecisionUnreachable, "box around rho");
            PrecisionGuard g(prec);
            Interval z = rho.enclose();
            Rational grid = w / 4;
            Rational lo = floor_rat(z.lo_rat() / grid) * grid, hi = ceil_rat(z.hi_rat() / grid) * grid;
            if (hi - lo <= w && nf_compare(C.F.constant(lo), rho) <= 0 && nf_compare(rho, C.F.constant(hi)) <= 0) {
                cert.ell.push_back(lo);
                cert.u.push_back(hi);
                break;
            }
        }
    }

    FatThresholds th = fat_cone_thresholds(C, X, cert.eps, cert.mu_lo, cert.B, opt);
    cert.torus_boxes = th.boxes;
    cert.s0 = th.s0;
    cert.delta = th.delta;
    cert.y0 = invariance_y0(cert.eps);
    cert.s1 = std::max(cert.s0, invariance_s1_floor(cert.eps, cert.y0));
    cert.t_enter = fat_cone_entry(cert);
    cert.formula = fat_cone_formula(C, cert);
    return cert;
}

Rational fat_cone_entry(const FatConeCertificate &cert) {
    Rational top = std::max(cert.s1, cert.y0);
    return std::max(Rational(ceil_log(top)), cert.delta);
}

std::optional<Rational> exact_power(const Rational &s, const Rational &e) {
    require(s > 0, ErrorCode::InvalidInput, "power base must be positive");
    unsigned long q = Integer(e.get_den()).get_ui();
    Integer p(e.get_num());
    Integer num(s.get_num()), den(s.get_den()), rn, rd;
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), q) == 0 || mpz_root(rd.get_mpz_t(), den.get_mpz_t(), q) == 0)
        return std::nullopt;
    Rational root(rn, rd);
    root.canonicalize();
    Rational out = rat_pow(root, Integer(abs(p)).get_ui());
    if (p < 0)
        out = Rational(1) / out;
    return out;
}

std::optional<std::map<std::string, NFElem>> fat_assignment(const ConeSpec &C, const FatConeCertificate &cert,
                                                            const Rational &s, const Rational &r, const RatVec &q,
                                                            const std::vector<CElem> &tau) {
    std::map<std::string, NFElem> pt;
    pt.emplace("s", C.F.constant(s));
    pt.emplace("r", C.F.constant(r));
    std::vector<NFElem> w;
    for (size_t a = 0; a < C.k(); ++a) {
        auto wa = exact_power(s, q[a]), la = exact_power(s, cert.ell[a]), ua = exact_power(s, cert.u[a]);
        if (!wa || !la || !ua)
            return std::nullopt;
        w.push_back(C.F.constant(*wa));
        pt.emplace(wname("w", a), w.back());
        pt.emplace(wname("lw", a), C.F.constant(*la));
        pt.emplace(wname("uw", a), C.F.constant(*ua));
        auto [cn, sn] = torus_var_names(a);
        pt.emplace(cn, tau[a].re);
        pt.emplace(sn, tau[a].im);
    }
    if (C.F.field->degree() > 1)
        pt.emplace("g", NFElem::generator(C.F.field));
    std::vector<NFElem> x = fat_point_exact(C, w, C.F.constant(r), tau);
    for (size_t i = 0; i < x.size(); ++i)
        pt.emplace(cert.state_vars[i], x[i]);
    return pt;
}

json ratvec_to_json(const RatVec &v) {
    json j = json::array();
    for (auto &x : v)
        j.push_back(to_string(x));
    return j;
}

RatVec ratvec_from_json(const json &j) {
    RatVec v;
    for (auto &x : j)
        v.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>()));
    return v;
}

json matrix_to_json(const RationalMatrix &A) {
    json j = json::array();
    for (size_t i = 0; i < A.rows(); ++i) {
        RatVec row;
        for (size_t c = 0; c < A.cols(); ++c)
            row.push_back(A.at(i, c));
        j.push_back(ratvec_to_json(row));
    }
    return j;
}

RationalMatrix matrix_from_json(const json &j) {
    if (j.is_object())
        return RationalMatrix::from_json(j.dump());
    require(j.is_array() && !j.empty(), ErrorCode::ParseError, "matrix must be a nonempty array");
    size_t n = j.size(), m = j[0].size();
    std::vector<Rational> e;
    for (auto &row : j) {
        require(row.is_array() && row.size() == m, ErrorCode::ShapeMismatch, "ragged matrix");
        for (auto &x : ratvec_from_json(row))
            e.push_back(x);
    }
    return RationalMatrix(n, m, std::move(e));
}

json lattice_to_json(const RelationLattice &L) {
    json g = json::array();
    for (auto &v : L.generators) {
        json row = json::array();
        for (auto &x : v)
            row.push_back(x.get_str());
        g.push_back(row);
    }
    return {{"k", L.k}, {"generators", g}};
}

RelationLattice lattice_from_json(const json &j) {
    RelationLattice L;
    L.k = j.at("k").get<size_t>();
    for (auto &row : j.at("generators")) {
        IntVec v;
        for (auto &x : row)
            v.push_back(Integer(x.get<std::string>()));
        require(v.size() == L.k, ErrorCode::ShapeMismatch, "lattice generator length");
        L.generators.push_back(std::move(v));
    }
    return L;
}

json certificate_to_json(const FatConeCertificate &c) {
    json j;
    j["system"] = {{"matrix", matrix_to_json(c.A)}, {"x0", ratvec_to_json(c.x0)}};
    j["target"] = c.target.to_sexpr();
    j["state_vars"] = c.state_vars;
    j["s0"] = to_string(c.s0);
    j["eps"] = to_string(c.eps);
    j["delta"] = to_string(c.delta);
    j["s1"] = to_string(c.s1);
    j["y0"] = to_string(c.y0);
    j["ell"] = ratvec_to_json(c.ell);
    j["u"] = ratvec_to_json(c.u);
    j["rho_relations"] = lattice_to_json(c.rho_relations);
    j["omega_relations"] = lattice_to_json(c.omega_relations);
    if (c.mu) {
        j["mu"] = {{"element", c.mu->to_string("g")},
                   {"field", c.mu->field()->describe()},
                   {"enclosure", c.mu->to_real().enclosure_string(20)}};
    } else {
        j["mu"] = nullptr;
    }
    j["mu_lo"] = to_string(c.mu_lo);
    j["M2"] = c.M2.get_str();
    j["B"] = c.B;
    j["t_enter"] = to_string(c.t_enter);
    j["torus_boxes"] = c.torus_boxes;
    j["formula"] = c.formula.to_sexpr();
    j["provenance"] = c.provenance;
    return j;
}

FatConeCertificate certificate_from_json(const json &j) {
    try {
        FatConeCertificate c;
        c.A = matrix_from_json(j.at("system").at("matrix"));
        c.x0 = ratvec_from_json(j.at("system").at("x0"));
        c.target = Formula::parse(j.at("target").get<std::string>());
        c.state_vars = j.at("state_vars").get<std::vector<std::string>>();
        c.s0 = parse_rational(j.at("s0").get<std::string>());
        c.eps = parse_rational(j.at("eps").get<std::string>());
        c.delta = parse_rational(j.at("delta").get<std::string>());
        c.s1 = parse_rational(j.at("s1").get<std::string>());
        c.y0 = parse_rational(j.at("y0").get<std::string>());
        c.ell = ratvec_from_json(j.at("ell"));
        c.u = ratvec_from_json(j.at("u"));
        c.rho_relations = lattice_from_json(j.at("rho_relations"));
        c.omega_relations = lattice_from_json(j.at("omega_relations"));
        c.mu_lo = parse_rational(j.at("mu_lo").get<std::string>());
        c.M2 = Integer(j.at("M2").get<std::string>());
        c.B = j.at("B").get<unsigned>();
        c.t_enter = parse_rational(j.at("t_enter").get<std::string>());
        c.torus_boxes = j.value("torus_boxes", size_t(0));
        c.formula = Formula::parse(j.at("formula").get<std::string>());
        c.provenance = j.value("provenance", json::object());
        return c;
    } catch (const json::exception &e) {
        fail(ErrorCode::ParseError, std::string("certificate: ") + e.what());
    }
}

} // namespace ominv
