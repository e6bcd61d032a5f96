#include "ominv/synthesis/tail.hpp"
#include "ominv/error.hpp"

namespace ominv {

namespace {

Rational two_pi_hi() {
    PrecisionGuard g(64);
    return dyadic_ceil((Interval::pi() * Interval(2)).hi_rat(), 10);
}

bool violates(const Interval &h, Rel rel) { return rel == Rel::Eq ? !h.contains_zero() : h.negative(); }

struct Examined {
    bool ok = false;
    std::vector<BoxAtomData> data;
};

Examined examine(const std::vector<std::vector<AtomExpansion>> &dnf, const ThetaBox &b, mpfr_prec_t prec) {
    PrecisionGuard g(prec);
    Examined ex;
    std::vector<Interval> th = box_intervals(b);
    for (auto &disjunct : dnf) {
        std::optional<BoxAtomData> found;
        for (size_t i = 0; i < disjunct.size() && !found; ++i) {
            found = violation_on_box(disjunct[i], th);
            if (found)
                found->atom = i;
        }
        if (!found)
            return ex;
        ex.data.push_back(std::move(*found));
    }
    ex.ok = true;
    return ex;
}

} // namespace

std::vector<Interval> box_intervals(const ThetaBox &b) {
    std::vector<Interval> v;
    for (auto &[lo, hi] : b)
        v.emplace_back(lo, hi);
    return v;
}

std::optional<BoxAtomData> violation_on_box(const AtomExpansion &X, const std::vector<Interval> &theta) {
    BoxAtomData D;
    if (X.classes.empty()) {
        if (X.rel != Rel::Gt)
            return std::nullopt;
        D.symbolic_zero = true;
        return D;
    }
    const ExpClass &top = X.classes.front();
    Interval h = top.by_degree.front().second.eval(theta);
    if (!violates(h, X.rel))
        return std::nullopt;
    D.cls = 0;
    D.bstar = top.by_degree.front().first;
    D.mstar = h.mig();
    for (size_t i = 1; i < top.by_degree.size(); ++i)
        D.lower.emplace_back(top.by_degree[i].first, top.by_degree[i].second.eval(theta).mag());
    for (size_t c = 1; c < X.classes.size(); ++c)
        for (auto &[b, tp] : X.classes[c].by_degree)
            D.others.push_back({c, b, tp.eval(theta).mag()});
    return D;
}

TailCover cover_torus(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &dnf,
                      const TailOptions &opt) {
    size_t q = C.torus_basis.size();
    ThetaBox root(q, {Rational(0), two_pi_hi()});
    TailCover cover;
    std::vector<ThetaBox> level{root};
    for (unsigned depth = 0;; ++depth) {
        std::vector<Examined> res(level.size());
        long n = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel && n > 1)
        for (long i = 0; i < n; ++i)
            res[i] = examine(dnf, level[i], opt.precision);
        cover.boxes_examined += level.size();
        cover.depth = depth;
        std::vector<ThetaBox> next;
        for (size_t i = 0; i < level.size(); ++i) {
            if (res[i].ok) {
                cover.boxes.push_back(level[i]);
                cover.data.push_back(std::move(res[i].data));
                continue;
            }
            if (depth == opt.depth_cap || q == 0)
                return cover;
            const ThetaBox &b = level[i];
            size_t w = 0;
            for (size_t j = 1; j < q; ++j)
                if (b[j].second - b[j].first > b[w].second - b[w].first)
                    w = j;
            Rational m = (b[w].first + b[w].second) / 2;
            ThetaBox l = b, r = b;
            l[w].second = m;
            r[w].first = m;
            next.push_back(std::move(l));
            next.push_back(std::move(r));
        }
        if (next.empty()) {
            cover.complete = true;
            return cover;
        }
        if (next.size() > opt.max_boxes_per_level)
            return cover;
        level = std::move(next);
    }
}

ExpLogSum tail_bound_sum(const AtomExpansion &X, const BoxAtomData &D, const FieldPtr &K) {
    std::vector<ExpLogTerm> ts;
    QPoly dom = QPoly::monomial(D.mstar, D.bstar);
    for (auto &[b, c] : D.lower)
        dom -= QPoly::monomial(c, b);
    ts.push_back({X.classes[D.cls].e, dom});
    for (auto &o : D.others)
        ts.push_back({X.classes[o.cls].e, QPoly::monomial(Rational(-o.bound), o.b)});
    return ExpLogSum::make(K, std::move(ts));
}

Rational eventual_threshold(const ExpLogSum &S) {
    if (S.size() == 1 && S.terms().front().coeff.degree() == 0)
        return Rational(1);
    return sign_threshold(S);
}

Rational tail_threshold(const AtomExpansion &X, const BoxAtomData &D, const FieldPtr &K) {
    if (D.symbolic_zero)
        return Rational(1);
    ExpLogSum S = tail_bound_sum(X, D, K);
    require(asymptotic_sign(S) > 0, ErrorCode::Internal, "tail bound sum not positive");
    return eventual_threshold(S);
}

Integer ceil_log(const Rational &s0) {
    if (s0 <= 1)
        return Integer(0);
    return ceil_rat(log(Interval(s0)).hi_rat());
}

} // namespace ominv
