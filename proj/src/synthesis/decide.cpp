#include "ominv/synthesis/decide.hpp"
#include "ominv/error.hpp"
#include "ominv/semialg/torus.hpp"

#include <algorithm>

namespace ominv {

using nlohmann::json;

namespace {

std::string vname(size_t c, size_t j) { return "v" + std::to_string(c + 1) + "_" + std::to_string(j); }

Interval eval_poly(const MPoly &p, const std::vector<std::string> &vars, const std::vector<Interval> &x) {
    return CompiledPoly(p, vars).eval(x);
}

bool satisfied_sign(Rel rel, int sign, bool empty) {
    if (empty)
        return rel != Rel::Gt;
    return rel != Rel::Eq && sign > 0;
}

// Dominant data at theta = 0 over exact coefficients, or nullopt when the
// expansion vanishes identically there.
std::optional<std::pair<int, BoxAtomData>> ones_data(const AtomExpansion &X, const NFElem &zero) {
    BoxAtomData D;
    bool found = false;
    int sign = 0;
    for (size_t c = 0; c < X.classes.size(); ++c)
        for (auto &[b, tp] : X.classes[c].by_degree) {
            NFElem v = tp.at_zero(zero);
            if (v.is_zero())
                continue;
            Interval e = v.enclose();
            if (!found) {
                found = true;
                sign = v.sign();
                D.cls = c;
                D.bstar = b;
                D.mstar = e.mig();
            } else if (c == D.cls) {
                D.lower.emplace_back(b, e.mag());
            } else {
                D.others.push_back({c, b, e.mag()});
            }
        }
    if (!found)
        return std::nullopt;
    return std::make_pair(sign, D);
}

} // namespace

const char *outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Exists:
        return "Exists";
    case Outcome::NotExists:
        return "NotExists";
    default:
        return "Unknown";
    }
}

const char *mode_name(DecideMode m) {
    switch (m) {
    case DecideMode::Auto:
        return "auto";
    case DecideMode::Backend:
        return "backend";
    default:
        return "builtin";
    }
}

DecideMode parse_mode(const std::string &s) {
    if (s == "auto")
        return DecideMode::Auto;
    if (s == "backend" || s == "A")
        return DecideMode::Backend;
    if (s == "builtin" || s == "B")
        return DecideMode::Builtin;
    fail(ErrorCode::InvalidInput, "unknown mode " + s);
}

std::vector<std::string> resolve_state_vars(const Formula &Y, size_t d, const std::vector<std::string> &given) {
    if (!given.empty()) {
        require(given.size() == d, ErrorCode::ShapeMismatch, "state variable count");
        return given;
    }
    std::set<std::string> fv = Y.free_vars();
    if (d == 1 && fv.count("x") && !fv.count("x1"))
        return {"x"};
    return state_var_names(d);
}

std::optional<NotExistsWitness> torus_ones_witness(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &X,
                                                   const Formula &Y, const std::vector<std::string> &vars,
                                                   mpfr_prec_t prec) {
    PrecisionGuard guard(prec);
    NFElem zero = C.zero();
    for (size_t di = 0; di < X.size(); ++di) {
        bool ok = true;
        Rational s_star(1);
        std::vector<bool> vanish(X[di].size(), false);
        for (size_t i = 0; i < X[di].size() && ok; ++i) {
            auto od = ones_data(X[di][i], zero);
            if (!od) {
                vanish[i] = true;
                ok = satisfied_sign(X[di][i].rel, 0, true);
                continue;
            }
            ok = satisfied_sign(X[di][i].rel, od->first, false);
            if (ok)
                s_star = std::max(s_star, tail_threshold(X[di][i], od->second, C.F.field));
        }
        if (!ok)
            continue;
        std::vector<ComplexInterval> ones(C.k(), ComplexInterval{Interval(1), Interval(0)});
        for (Rational s : std::vector<Rational>{s_star, Rational(Rational(2) * s_star), Rational(Rational(4) * s_star)}) {
            std::vector<Interval> x = cone_point_enclosure(C, log(Interval(s)), ones);
            for (size_t i = 0; i < X[di].size() && ok; ++i) {
                if (vanish[i])
                    continue;
                Interval v = eval_poly(X[di][i].poly, vars, x);
                ok = v.positive();
            }
        }
        if (!ok)
            continue;
        NotExistsWitness w;
        w.kind = "torus-ones";
        w.disjunct = di;
        w.s = s_star;
        bool exact = true;
        std::vector<NFElem> wexp;
        for (size_t a = 0; a < C.k() && exact; ++a) {
            exact = C.rho(a).is_rational() && C.rho(a).rational_value().get_den() == 1;
            for (size_t i = 0; i < C.dim() && exact; ++i)
                for (size_t j = 1; j < C.block_size(a); ++j)
                    exact = exact && C.G[a][i][j].is_zero();
            if (exact) {
                Rational e = C.rho(a).rational_value();
                Rational p = pow_rat(s_star, Integer(e.get_num()).get_si());
                wexp.push_back(C.F.constant(p));
            }
        }
        if (exact) {
            std::vector<CElem> tau(C.k(), CElem(C.F.constant(1), zero));
            std::vector<NFElem> xs = fat_point_exact(C, wexp, zero, tau);
            std::map<std::string, NFElem> pt;
            for (size_t i = 0; i < xs.size(); ++i)
                pt.emplace(vars[i], xs[i]);
            require(eval_formula(Y, pt, C.F.field), ErrorCode::Internal, "torus-ones witness not in target");
            for (auto &v : xs)
                w.state.push_back(v.is_rational() ? to_string(v.rational_value()) : v.to_real().enclosure_string(20));
        } else {
            std::vector<Interval> x = cone_point_enclosure(C, log(Interval(s_star)), ones);
            for (auto &v : x)
                w.state.push_back("[" + to_string(dyadic_floor(v.lo_rat(), 64)) + ", " +
                                  to_string(dyadic_ceil(v.hi_rat(), 64)) + "]");
        }
        w.exact = exact;
        w.description = "torus point (1,...,1): disjunct " + std::to_string(di) + " holds for all s >= " +
                        to_string(s_star) + ", re-verified at s*, 2s*, 4s*";
        return w;
    }
    return std::nullopt;
}

Formula backend_request(const ConeSpec &C, const Formula &Y, const std::vector<std::string> &vars) {
    std::vector<ConeClass> cls = cone_classes(C);
    std::vector<NFElem> om;
    std::vector<std::pair<std::string, std::string>> names;
    std::vector<BoundVar> bound;
    for (size_t c = 0; c < cls.size(); ++c) {
        om.push_back(C.omega(cls[c].block));
        names.push_back(torus_var_names(c));
        bound.push_back({names.back().first, Rational(-1), Rational(1)});
        bound.push_back({names.back().second, Rational(-1), Rational(1)});
    }
    RelationLattice L = cls.empty() ? RelationLattice{} : additive_relations(om);
    L.k = cls.size();
    std::map<std::string, MPoly> subs;
    for (size_t i = 0; i < C.dim(); ++i) {
        MPoly xi;
        for (size_t c = 0; c < cls.size(); ++c) {
            size_t a = cls[c].block;
            Rational mult = cls[c].pair ? 2 : 1;
            for (size_t j = 0; j < C.block_size(a); ++j) {
                const CElem &g = C.G[a][i][j];
                if (g.is_zero())
                    continue;
                MPoly part = field_poly(g.re) * MPoly::var(names[c].first) - field_poly(g.im) * MPoly::var(names[c].second);
                xi += part * MPoly::var(vname(c, j)) * mult;
            }
        }
        subs[vars[i]] = xi;
    }
    Formula hyp = cls.empty() ? Formula::truth(true) : build_torus_formula(L, names);
    if (C.F.field->degree() > 1) {
        auto [lo, hi] = C.F.field->generator().isolator();
        bound.push_back({"g", lo, hi});
        hyp = Formula::conj({hyp, generator_guard(C.F.field)});
    }
    Formula body = Formula::implies(hyp, Formula::negate(substitute(Y, subs)));
    if (bound.empty())
        return body;
    return Formula::forall(std::move(bound), body);
}

LambdaData backend_lambda(const ConeSpec &C) {
    std::vector<ConeClass> cls = cone_classes(C);
    LambdaData L;
    L.field = C.F.field;
    for (auto &c : cls)
        L.rho.push_back(C.rho(c.block));
    for (size_t c = 0; c < cls.size(); ++c)
        for (size_t j = 0; j < C.block_size(cls[c].block); ++j) {
            IntVec n(cls.size(), Integer(0));
            n[c] = 1;
            L.vars[vname(c, j)] = {n, QPoly::monomial(Rational(1), static_cast<unsigned>(j))};
        }
    return L;
}

namespace {

void attach_certificate(DecisionOutcome &out, const ConeSpec &C, const Formula &Y, const std::vector<std::string> &vars,
                        const DecideConfig &cfg) {
    if (!cfg.certify)
        return;
    try {
        FatConeCertificate cert = synthesize_fat_cone(C, Y, vars, cfg.tail);
        cert.provenance = {{"mode", mode_name(out.mode_used)},
                           {"t0", out.t0.get_str()},
                           {"s0_decision", to_string(out.s0)},
                           {"transcript", out.transcript}};
        out.certificate = std::move(cert);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::NoCertificate)
            throw;
        out.certificate_error = e.what();
    }
}

DecisionOutcome decide_builtin(const ConeSpec &C, const Formula &Y, const std::vector<std::string> &vars,
                               const DecideConfig &cfg) {
    DecisionOutcome out;
    out.mode_used = DecideMode::Builtin;
    Dnf dnf = to_dnf(Y);
    std::vector<std::vector<AtomExpansion>> X;
    for (auto &disjunct : dnf) {
        std::vector<AtomExpansion> row;
        for (auto &at : disjunct)
            row.push_back(analyze_atom(C, at.poly, at.rel, vars));
        X.push_back(std::move(row));
    }
    if (auto w = torus_ones_witness(C, X, Y, vars, cfg.tail.precision)) {
        out.verdict = Outcome::NotExists;
        out.witness = std::move(w);
        return out;
    }
    TailCover cover = cover_torus(C, X, cfg.tail);
    out.boxes = cover.boxes_examined;
    out.depth = cover.depth;
    if (!cover.complete) {
        out.verdict = Outcome::Unknown;
        out.reason = UnknownReason::TangentialSuspected;
        return out;
    }
    Rational s0(1);
    {
        PrecisionGuard g(cfg.tail.precision);
        for (auto &per_box : cover.data)
            for (size_t di = 0; di < per_box.size(); ++di)
                s0 = std::max(s0, tail_threshold(X[di][per_box[di].atom], per_box[di], C.F.field));
    }
    out.verdict = Outcome::Exists;
    out.s0 = s0;
    out.t0 = ceil_log(s0);
    out.transcript = {{"torus_boxes", cover.boxes.size()}, {"depth", cover.depth}};
    attach_certificate(out, C, Y, vars, cfg);
    return out;
}

DecisionOutcome decide_backend(const ConeSpec &C, const Formula &Y, const std::vector<std::string> &vars,
                               const DecideConfig &cfg) {
    DecisionOutcome out;
    out.mode_used = DecideMode::Backend;
    Formula request = backend_request(C, Y, vars);
    QeResult qr = external_qe(request, cfg.backend, cfg.qe);
    out.transcript = {{"backend", cfg.backend->describe()},
                      {"request_sha256", sha256_hex(request.to_sexpr())},
                      {"response", qr.formula.to_sexpr()},
                      {"response_sha256", sha256_hex(qr.formula.to_sexpr())},
                      {"samples", qr.samples},
                      {"decided", qr.decided}};
    LambdaData L = backend_lambda(C);
    Dnf U = to_dnf(qr.formula);
    std::optional<Rational> best;
    std::string violated;
    PrecisionGuard g(cfg.tail.precision);
    for (size_t di = 0; di < U.size(); ++di) {
        bool ok = true;
        Rational s_star(1);
        for (size_t i = 0; i < U[di].size() && ok; ++i) {
            ExpLogSum S = collect(U[di][i].poly, L).sum;
            int sg = asymptotic_sign(S);
            ok = satisfied_sign(U[di][i].rel, sg, S.empty());
            if (ok && !S.empty())
                s_star = std::max(s_star, eventual_threshold(S));
            if (!ok)
                violated += (violated.empty() ? "" : "; ") + std::string("disjunct ") + std::to_string(di) + " atom " +
                            std::to_string(i) + " eventually " + (S.empty() ? "zero" : sg > 0 ? "positive" : "negative");
        }
        if (ok && (!best || s_star < *best))
            best = s_star;
    }
    if (!best) {
        out.verdict = Outcome::NotExists;
        NotExistsWitness w;
        w.kind = "backend-U";
        w.description = U.empty() ? "U is false" : "U(Lambda(s)) eventually false: " + violated;
        out.witness = std::move(w);
        return out;
    }
    out.verdict = Outcome::Exists;
    out.s0 = *best;
    out.t0 = ceil_log(*best);
    attach_certificate(out, C, Y, vars, cfg);
    return out;
}

} // namespace

DecisionOutcome decide_eventual(const RationalMatrix &A, const RatVec &x0, const Formula &Y, const DecideConfig &cfg) {
    require(Y.quantifier_free(), ErrorCode::InvalidInput, "target must be quantifier-free");
    ConeSpec C = ConeSpec::build(A, x0);
    std::vector<std::string> vars = resolve_state_vars(Y, C.dim(), cfg.state_vars);
    for (auto &v : Y.free_vars())
        require(std::find(vars.begin(), vars.end(), v) != vars.end(), ErrorCode::UnboundVariable, v);
    DecideMode mode = cfg.mode;
    if (mode == DecideMode::Auto)
        mode = cfg.backend ? DecideMode::Backend : DecideMode::Builtin;
    if (mode == DecideMode::Backend) {
        require(cfg.backend != nullptr, ErrorCode::BackendUnavailable, "backend mode without a QE backend");
        return decide_backend(C, Y, vars, cfg);
    }
    return decide_builtin(C, Y, vars, cfg);
}

json outcome_to_json(const DecisionOutcome &o) {
    json j;
    j["verdict"] = outcome_name(o.verdict);
    j["mode"] = mode_name(o.mode_used);
    if (o.verdict == Outcome::Exists) {
        j["t0"] = o.t0.get_str();
        j["s0"] = to_string(o.s0);
        j["certificate"] = o.certificate ? certificate_to_json(*o.certificate) : json(nullptr);
        if (!o.certificate_error.empty())
            j["certificate_error"] = o.certificate_error;
    }
    if (o.verdict == Outcome::Unknown)
        j["reason"] = reason_name(o.reason);
    if (o.witness) {
        j["witness"] = {{"kind", o.witness->kind},
                        {"disjunct", o.witness->disjunct},
                        {"s", to_string(o.witness->s)},
                        {"exact", o.witness->exact},
                        {"state", o.witness->state},
                        {"description", o.witness->description}};
    }
    j["boxes"] = o.boxes;
    j["depth"] = o.depth;
    j["transcript"] = o.transcript;
    return j;
}

} // namespace ominv
