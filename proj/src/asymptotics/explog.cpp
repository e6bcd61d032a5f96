#include "ominv/asymptotics/explog.hpp"
#include "ominv/error.hpp"

#include <algorithm>
#include <sstream>

namespace ominv {

namespace {

Interval horner(const QPoly &f, const Interval &x) {
    Interval acc(0);
    for (size_t i = f.coeffs().size(); i-- > 0;)
        acc = acc * x + Interval(f.coeffs()[i]);
    return acc;
}

Rational abs_sum(const QPoly &f, size_t upto) {
    Rational acc = 0;
    for (size_t j = 0; j < upto && j < f.coeffs().size(); ++j)
        acc += rat_abs(f.coeffs()[j]);
    return acc;
}

// Positive lower bound on a positive field element.
Rational positive_lower(const NFElem &g) {
    for (mpfr_prec_t p = std::max<mpfr_prec_t>(working_precision(), 64); p <= (1 << 16); p *= 2) {
        PrecisionGuard guard(p);
        Interval v = g.enclose();
        if (v.positive())
            return v.lo_rat();
    }
    fail(ErrorCode::PrecisionUnreachable, "exponent gap not separated from zero");
}

} // namespace

ExpLogSum ExpLogSum::make(FieldPtr K, std::vector<ExpLogTerm> terms) {
    ExpLogSum out(K);
    for (auto &t : terms) {
        if (t.coeff.is_zero())
            continue;
        bool merged = false;
        for (auto &u : out.t_)
            if (u.exponent == t.exponent) {
                u.coeff += t.coeff;
                merged = true;
                break;
            }
        if (!merged)
            out.t_.push_back(std::move(t));
    }
    out.t_.erase(std::remove_if(out.t_.begin(), out.t_.end(), [](const ExpLogTerm &t) { return t.coeff.is_zero(); }),
                 out.t_.end());
    std::sort(out.t_.begin(), out.t_.end(),
              [](const ExpLogTerm &a, const ExpLogTerm &b) { return nf_compare(a.exponent, b.exponent) > 0; });
    return out;
}

unsigned ExpLogSum::max_degree() const {
    unsigned d = 0;
    for (auto &t : t_)
        d = std::max(d, static_cast<unsigned>(t.coeff.degree()));
    return d;
}

ExpLogSum operator+(const ExpLogSum &a, const ExpLogSum &b) {
    std::vector<ExpLogTerm> ts = a.t_;
    ts.insert(ts.end(), b.t_.begin(), b.t_.end());
    return ExpLogSum::make(a.K_ ? a.K_ : b.K_, std::move(ts));
}

ExpLogSum operator-(const ExpLogSum &a, const ExpLogSum &b) { return a + b.scaled(Rational(-1)); }

ExpLogSum operator*(const ExpLogSum &a, const ExpLogSum &b) {
    std::vector<ExpLogTerm> ts;
    for (auto &x : a.t_)
        for (auto &y : b.t_)
            ts.push_back({x.exponent + y.exponent, x.coeff * y.coeff});
    return ExpLogSum::make(a.K_ ? a.K_ : b.K_, std::move(ts));
}

ExpLogSum ExpLogSum::scaled(const Rational &c) const {
    std::vector<ExpLogTerm> ts = t_;
    for (auto &t : ts)
        t.coeff *= c;
    return make(K_, std::move(ts));
}

bool ExpLogSum::operator==(const ExpLogSum &o) const {
    if (t_.size() != o.t_.size())
        return false;
    for (size_t i = 0; i < t_.size(); ++i)
        if (t_[i].exponent != o.t_[i].exponent || t_[i].coeff != o.t_[i].coeff)
            return false;
    return true;
}

Interval ExpLogSum::eval(const Interval &s) const {
    Interval r = log(s);
    Interval acc(0);
    for (auto &t : t_)
        acc += exp(t.exponent.enclose() * r) * horner(t.coeff, r);
    return acc;
}

std::string ExpLogSum::dump() const {
    std::ostringstream os;
    for (auto &t : t_) {
        os << "s^(" << t.exponent.to_real().enclosure_string(20) << " | " << t.exponent.to_string("t") << " in "
           << (K_ ? K_->describe() : std::string("Q")) << ") * [" << t.coeff.to_string("r") << "]\n";
    }
    return os.str();
}

NFElem LambdaData::exponent(const IntVec &n) const {
    NFElem e(field, Rational(0));
    for (size_t j = 0; j < n.size(); ++j)
        if (n[j] != 0)
            e += rho[j] * Rational(n[j]);
    return e;
}

CollectResult collect(const MPoly &R, const LambdaData &L) {
    if (L.field && static_cast<unsigned>(L.field->degree()) > degree_cap())
        fail(ErrorCode::DegreeCapExceeded, "exponent field degree " + std::to_string(L.field->degree()));
    size_t k = L.rho.size();
    std::map<IntVec, QPoly> byvec;
    for (auto &[m, c] : R.terms()) {
        IntVec n(k, Integer(0));
        QPoly f = QPoly::constant(c);
        for (auto &[v, e] : m.f) {
            auto it = L.vars.find(v);
            if (it == L.vars.end())
                fail(ErrorCode::UnboundVariable, v);
            for (size_t j = 0; j < k; ++j)
                n[j] += it->second.n[j] * e;
            f *= it->second.f.pow(e);
        }
        byvec[n] += f;
    }
    CollectResult out;
    std::vector<ExpLogTerm> ts;
    for (auto &[n, f] : byvec) {
        if (f.is_zero())
            continue;
        out.vectors.push_back(n);
        ts.push_back({L.exponent(n), f});
    }
    out.sum = ExpLogSum::make(L.field, std::move(ts));
    return out;
}

int asymptotic_sign(const ExpLogSum &S) {
    if (S.empty())
        return 0;
    return sign(S.terms().front().coeff.lc());
}

LeadingBound leading_bound(const QPoly &f) {
    require(!f.is_zero(), ErrorCode::InvalidInput, "zero coefficient");
    Rational a = rat_abs(f.lc());
    if (f.degree() == 0)
        return {Rational(0), a};
    Rational lower = abs_sum(f, static_cast<size_t>(f.degree()));
    Rational r = std::max(Rational(1), Rational(2 * lower / a));
    return {r, a / 2};
}

namespace {

struct ThresholdPlan {
    Rational m;
    unsigned bstar = 0;
    struct Other {
        Rational C;
        int db;
        NFElem gap;
    };
    std::vector<Other> others;
    Rational r_low;
};

ThresholdPlan plan(const ExpLogSum &S) {
    ThresholdPlan P;
    const ExpLogTerm &d = S.terms().front();
    LeadingBound lb = leading_bound(d.coeff);
    P.m = lb.m;
    P.bstar = static_cast<unsigned>(d.coeff.degree());
    P.r_low = lb.r_from;
    bool need_one = P.bstar > 0;
    for (size_t i = 1; i < S.size(); ++i) {
        const ExpLogTerm &t = S.terms()[i];
        int bi = t.coeff.degree();
        ThresholdPlan::Other o{abs_sum(t.coeff, t.coeff.coeffs().size()), bi - static_cast<int>(P.bstar),
                               d.exponent - t.exponent};
        if (bi > 0)
            need_one = true;
        if (o.db > 0)
            P.r_low = std::max(P.r_low, Rational(Rational(o.db) / positive_lower(o.gap)));
        P.others.push_back(std::move(o));
    }
    if (need_one)
        P.r_low = std::max(P.r_low, Rational(1));
    return P;
}

// Upper bound of the dominated-to-dominant ratio at s, nonincreasing in s
// once log s >= r_low.
bool ratio_below_one(const ThresholdPlan &P, const Rational &s) {
    Interval r = log(Interval(s));
    Interval acc(0);
    for (auto &o : P.others) {
        Interval v = Interval(o.C / P.m) * exp(-(o.gap.enclose() * r));
        if (o.db > 0)
            v *= pow_int(r, static_cast<unsigned>(o.db));
        else if (o.db < 0)
            v /= pow_int(r, static_cast<unsigned>(-o.db));
        acc += v;
    }
    return acc.finite() && acc.hi_rat() < 1;
}

Integer ceil_exp(const Rational &r) {
    if (r == 0)
        return Integer(1);
    return ceil_rat(exp(Interval(r)).hi_rat());
}

} // namespace

Rational sign_threshold(const ExpLogSum &S) {
    require(!S.empty(), ErrorCode::InvalidInput, "threshold of an empty sum");
    ThresholdPlan P = plan(S);
    Integer low = ceil_exp(P.r_low);
    if (low < 1)
        low = 1;
    if (P.others.empty())
        return Rational(std::max(Integer(2), low));

    Integer fail_at = low - 1, ok_at = 0;
    Integer step = 1;
    for (unsigned k = 0;; ++k) {
        Integer cand = low * step;
        if (ratio_below_one(P, Rational(cand))) {
            ok_at = cand;
            break;
        }
        fail_at = cand;
        if (k > 16)
            fail(ErrorCode::SearchExhausted, "no sign threshold found");
        step = k == 0 ? Integer(2) : Integer(step * step);
    }
    while (ok_at - fail_at > 1) {
        Integer mid = (ok_at + fail_at) / 2;
        if (mid >= low && ratio_below_one(P, Rational(mid)))
            ok_at = mid;
        else
            fail_at = mid;
    }
    return Rational(ok_at);
}

bool dominance_holds(const ExpLogSum &S, const Rational &s) {
    if (S.empty())
        return false;
    Interval si(s);
    Interval r = log(si);
    const ExpLogTerm &d = S.terms().front();
    Interval dom = exp(d.exponent.enclose() * r) * horner(d.coeff, r);
    Interval rest(0);
    for (size_t i = 1; i < S.size(); ++i) {
        const ExpLogTerm &t = S.terms()[i];
        rest += Interval(Rational(0), (exp(t.exponent.enclose() * r) * horner(t.coeff, r)).mag());
    }
    return dom.mig() > rest.hi_rat() && !dom.contains_zero();
}

GapData gap_data(const std::vector<ExpLogSum> &sums, const std::vector<IntVec> &vectors,
                 const std::vector<NFElem> &rho) {
    GapData g;
    for (auto &s : sums)
        g.B = std::max(g.B, s.max_degree());
    for (size_t a = 0; a < vectors.size(); ++a)
        for (size_t b = a + 1; b < vectors.size(); ++b) {
            Integer n2 = 0;
            NFElem e = rho.empty() ? NFElem() : NFElem(rho[0].field(), Rational(0));
            for (size_t j = 0; j < rho.size(); ++j) {
                Integer d = vectors[a][j] - vectors[b][j];
                n2 += d * d;
                if (d != 0)
                    e += rho[j] * Rational(d);
            }
            g.M2 = std::max(g.M2, n2);
            if (e.is_zero())
                continue;
            if (e.sign() < 0)
                e = -e;
            if (!g.mu || nf_compare(e, *g.mu) < 0)
                g.mu = e;
        }
    return g;
}

} // namespace ominv
