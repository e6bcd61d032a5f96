#include "ominv/exactnum/realalg.hpp"
#include "ominv/error.hpp"
#include "ominv/exactnum/factor.hpp"

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace ominv {

namespace {
std::atomic<unsigned> g_degree_cap{64};
}

unsigned degree_cap() { return g_degree_cap.load(); }
void set_degree_cap(unsigned cap) { g_degree_cap.store(cap); }

RealAlgebraic::RealAlgebraic() : RealAlgebraic(Rational(0)) {}

RealAlgebraic::RealAlgebraic(const Rational &q) : st_(std::make_shared<State>()) {
    st_->minpoly = QPoly(std::vector<Rational>{-q, Rational(1)});
    st_->lo = q;
    st_->hi = q;
    st_->sign_lo = 0;
}

RealAlgebraic RealAlgebraic::from_isolated_root(const QPoly &minpoly, const Rational &lo,
                                                const Rational &hi) {
    QPoly m = minpoly.monic();
    if (m.degree() < 1)
        fail(ErrorCode::InvalidInput, "defining polynomial must be nonconstant");
    if (m.degree() == 1)
        return RealAlgebraic(Rational(-m.coeffs()[0]));
    if (hi < lo)
        fail(ErrorCode::InvalidInput, "isolator with lo > hi");
    auto s = std::make_shared<State>();
    s->minpoly = m;
    s->lo = lo;
    s->hi = hi;
    s->sign_lo = m.sign_at(lo);
    if (s->sign_lo == 0 || m.sign_at(hi) == 0 || s->sign_lo == m.sign_at(hi))
        fail(ErrorCode::InvalidInput, "isolator endpoints must bracket the root of an irreducible polynomial");
    return RealAlgebraic(s);
}

RealAlgebraic RealAlgebraic::from_poly_interval(const QPoly &p, const Rational &lo, const Rational &hi) {
    if (p.is_zero() || p.degree() < 1)
        fail(ErrorCode::InvalidInput, "defining polynomial must be nonconstant");
    if (hi < lo)
        fail(ErrorCode::InvalidInput, "isolator with lo > hi");
    std::vector<RealAlgebraic> hits;
    for (auto &q : irreducible_factors(p)) {
        if (q.degree() == 1) {
            Rational r = -q.coeffs()[0];
            if (lo <= r && r <= hi)
                hits.push_back(RealAlgebraic(r));
            continue;
        }
        auto seq = sturm_sequence(q);
        int inside = count_real_roots(seq, lo, hi) + (q.sign_at(lo) == 0 ? 1 : 0);
        if (inside == 1)
            hits.push_back(from_isolated_root(q, lo, hi));
        else if (inside > 1)
            fail(ErrorCode::InvalidInput, "interval contains more than one root");
    }
    if (hits.size() != 1)
        fail(ErrorCode::InvalidInput, "interval must contain exactly one real root of the polynomial");
    return hits[0];
}

bool RealAlgebraic::is_rational() const { return st_->minpoly.degree() == 1; }

Rational RealAlgebraic::rational_value() const {
    if (!is_rational())
        fail(ErrorCode::Internal, "rational_value on irrational number");
    return -st_->minpoly.coeffs()[0];
}

int RealAlgebraic::degree() const { return st_->minpoly.degree(); }
const QPoly &RealAlgebraic::minpoly() const { return st_->minpoly; }
ZPoly RealAlgebraic::defining() const { return primitive_z(st_->minpoly); }

std::pair<Rational, Rational> RealAlgebraic::isolator() const {
    std::lock_guard<std::mutex> lk(st_->mu);
    return {st_->lo, st_->hi};
}

void RealAlgebraic::refine_to(const Rational &w) const {
    if (is_rational())
        return;
    std::lock_guard<std::mutex> lk(st_->mu);
    while (st_->hi - st_->lo > w) {
        Rational mid = (st_->lo + st_->hi) / 2;
        int s = st_->minpoly.sign_at(mid);
        if (s == st_->sign_lo)
            st_->lo = mid;
        else
            st_->hi = mid;
    }
}

void RealAlgebraic::refine_bits(unsigned bits) const { refine_to(pow2(-static_cast<long>(bits))); }

std::pair<Rational, Rational> RealAlgebraic::bounds(const Rational &w) const {
    refine_to(w);
    return isolator();
}

Rational RealAlgebraic::approx(const Rational &w) const {
    auto [lo, hi] = bounds(w);
    return (lo + hi) / 2;
}

double RealAlgebraic::to_double() const { return approx(pow2(-60)).get_d(); }

static std::string decimal(const Rational &q, int digits, mpfr_rnd_t rnd) {
    mpfr_t x;
    mpfr_init2(x, static_cast<mpfr_prec_t>(digits * 3.33 + 16));
    mpfr_set_q(x, q.get_mpq_t(), rnd);
    char *buf = nullptr;
    mpfr_asprintf(&buf, rnd == MPFR_RNDD ? "%.*RDe" : "%.*RUe", digits - 1, x);
    std::string s(buf);
    mpfr_free_str(buf);
    mpfr_clear(x);
    return s;
}

std::string RealAlgebraic::enclosure_string(int digits) const {
    if (is_rational())
        return ominv::to_string(rational_value());
    Rational lo, hi;
    std::tie(lo, hi) = isolator();
    Rational scale = rat_abs(lo) > rat_abs(hi) ? rat_abs(lo) : rat_abs(hi);
    if (scale < 1)
        scale = 1;
    std::tie(lo, hi) = bounds(scale * pow2(-static_cast<long>(digits * 3.33 + 8)));
    return "[" + decimal(lo, digits, MPFR_RNDD) + ", " + decimal(hi, digits, MPFR_RNDU) + "]";
}

std::string RealAlgebraic::to_json() const {
    auto [lo, hi] = isolator();
    return "{\"minpoly\": " + defining().to_list_string() + ", \"interval\": [\"" + ominv::to_string(lo) +
           "\", \"" + ominv::to_string(hi) + "\"]}";
}

std::string RealAlgebraic::to_string() const {
    if (is_rational())
        return ominv::to_string(rational_value());
    return "root(" + st_->minpoly.to_string() + ") in " + enclosure_string(20);
}

ComplexAlgebraic ComplexAlgebraic::conjugate() const { return {re, alg_neg(im)}; }

static void isolate_irreducible(const QPoly &q, std::vector<RealAlgebraic> &out) {
    if (q.degree() == 1) {
        out.push_back(RealAlgebraic(Rational(-q.coeffs()[0] / q.coeffs()[1])));
        return;
    }
    auto seq = sturm_sequence(q);
    Rational b = root_bound(q);
    struct Job {
        Rational a, b;
        int count;
    };
    std::vector<Job> stack{{-b, b, count_real_roots(seq, -b, b)}};
    std::vector<std::pair<Rational, Rational>> found;
    while (!stack.empty()) {
        Job j = stack.back();
        stack.pop_back();
        if (j.count == 0)
            continue;
        if (j.count == 1) {
            found.push_back({j.a, j.b});
            continue;
        }
        Rational mid = (j.a + j.b) / 2;
        int left = count_real_roots(seq, j.a, mid);
        stack.push_back({mid, j.b, j.count - left});
        stack.push_back({j.a, mid, left});
    }
    for (auto &[a, c] : found)
        out.push_back(RealAlgebraic::from_isolated_root(q, a, c));
}

std::vector<RealAlgebraic> isolate_real_roots(const QPoly &p) {
    if (p.is_zero())
        fail(ErrorCode::InvalidInput, "isolate_real_roots of the zero polynomial");
    std::vector<RealAlgebraic> out;
    if (p.degree() < 1)
        return out;
    for (auto &q : irreducible_factors(p))
        isolate_irreducible(q, out);
    std::sort(out.begin(), out.end(), [](const RealAlgebraic &a, const RealAlgebraic &b) {
        return alg_compare(a, b) == Ordering::LT;
    });
    return out;
}

std::vector<RealAlgebraic> isolate_real_roots(const ZPoly &p) { return isolate_real_roots(to_qpoly(p)); }

// Separate an irrational from a rational, or two numbers known to differ.
static Ordering separate(const RealAlgebraic &a, const RealAlgebraic &b) {
    Rational w(1);
    for (int it = 0; it < 100000; ++it) {
        auto [alo, ahi] = a.isolator();
        auto [blo, bhi] = b.isolator();
        if (ahi < blo)
            return Ordering::LT;
        if (bhi < alo)
            return Ordering::GT;
        Rational wa = ahi - alo, wb = bhi - blo;
        Rational target = (wa > wb ? wa : wb) / 2;
        if (target == 0)
            fail(ErrorCode::Internal, "separate: equal points");
        a.refine_to(target);
        b.refine_to(target);
    }
    fail(ErrorCode::PrecisionUnreachable, "separate");
}

Ordering alg_compare(const RealAlgebraic &a, const RealAlgebraic &b) {
    if (a.is_rational() && b.is_rational()) {
        int c = cmp(a.rational_value(), b.rational_value());
        return c < 0 ? Ordering::LT : (c > 0 ? Ordering::GT : Ordering::EQ);
    }
    if (a.minpoly() == b.minpoly()) {
        auto [alo, ahi] = a.isolator();
        auto [blo, bhi] = b.isolator();
        if (ahi < blo)
            return Ordering::LT;
        if (bhi < alo)
            return Ordering::GT;
        Rational lo = alo < blo ? alo : blo;
        Rational hi = ahi > bhi ? ahi : bhi;
        auto seq = sturm_sequence(a.minpoly());
        if (count_real_roots(seq, lo, hi) == 1)
            return Ordering::EQ;
    }
    return separate(a, b);
}

int alg_sign(const RealAlgebraic &a) {
    Ordering o = alg_compare(a, RealAlgebraic(Rational(0)));
    return static_cast<int>(o);
}

bool alg_equal(const RealAlgebraic &a, const RealAlgebraic &b) { return alg_compare(a, b) == Ordering::EQ; }

RealAlgebraic alg_neg(const RealAlgebraic &a) {
    if (a.is_rational())
        return RealAlgebraic(Rational(-a.rational_value()));
    auto [lo, hi] = a.isolator();
    return RealAlgebraic::from_isolated_root(a.minpoly().negate_var(), -hi, -lo);
}

RealAlgebraic alg_abs(const RealAlgebraic &a) { return alg_sign(a) < 0 ? alg_neg(a) : a; }

static RealAlgebraic add_rational(const RealAlgebraic &a, const Rational &r) {
    auto [lo, hi] = a.isolator();
    return RealAlgebraic::from_isolated_root(a.minpoly().shift(-r), lo + r, hi + r);
}

static RealAlgebraic mul_rational(const RealAlgebraic &a, const Rational &r) {
    if (r == 0)
        return RealAlgebraic(Rational(0));
    auto [lo, hi] = a.isolator();
    Rational l = lo * r, h = hi * r;
    if (r < 0)
        std::swap(l, h);
    return RealAlgebraic::from_isolated_root(a.minpoly().scale(1 / r), l, h);
}

static RealAlgebraic reciprocal(const RealAlgebraic &b) {
    if (b.is_rational())
        return RealAlgebraic(Rational(1 / b.rational_value()));
    // isolator must exclude 0
    while (true) {
        auto [lo, hi] = b.isolator();
        if (lo > 0 || hi < 0)
            break;
        b.refine_to((hi - lo) / 2);
    }
    auto [lo, hi] = b.isolator();
    return RealAlgebraic::from_isolated_root(b.minpoly().reversed(), 1 / hi, 1 / lo);
}

static std::pair<Rational, Rational> interval_mul(const Rational &a, const Rational &b, const Rational &c,
                                                  const Rational &d) {
    Rational p[4] = {a * c, a * d, b * c, b * d};
    Rational lo = p[0], hi = p[0];
    for (auto &x : p) {
        if (x < lo)
            lo = x;
        if (x > hi)
            hi = x;
    }
    return {lo, hi};
}

RealAlgebraic alg_arith(const RealAlgebraic &a, ArithOp op, const RealAlgebraic &b) {
    switch (op) {
    case ArithOp::Sub:
        return alg_arith(a, ArithOp::Add, alg_neg(b));
    case ArithOp::Div:
        if (alg_sign(b) == 0)
            fail(ErrorCode::DivisionByZero, "algebraic division by zero");
        return alg_arith(a, ArithOp::Mul, reciprocal(b));
    default:
        break;
    }
    bool add = op == ArithOp::Add;
    if (a.is_rational() && b.is_rational())
        return RealAlgebraic(add ? Rational(a.rational_value() + b.rational_value())
                                 : Rational(a.rational_value() * b.rational_value()));
    if (b.is_rational())
        return add ? add_rational(a, b.rational_value()) : mul_rational(a, b.rational_value());
    if (a.is_rational())
        return add ? add_rational(b, a.rational_value()) : mul_rational(b, a.rational_value());
    unsigned n = static_cast<unsigned>(a.degree()) * static_cast<unsigned>(b.degree());
    if (n > degree_cap())
        fail(ErrorCode::DegreeCapExceeded,
             "defining polynomial degree " + std::to_string(n) + " exceeds cap " + std::to_string(degree_cap()));
    QPoly big = add ? sum_poly(a.minpoly(), b.minpoly()) : product_poly(a.minpoly(), b.minpoly());
    auto cands = irreducible_factors(big);
    return pick_root(cands, [&](const Rational &w) {
        auto [alo, ahi] = a.bounds(w / 4);
        auto [blo, bhi] = b.bounds(w / 4);
        if (add)
            return std::make_pair(Rational(alo + blo), Rational(ahi + bhi));
        // product interval; shrink more when magnitudes are large
        Rational m = rat_abs(alo) + rat_abs(ahi) + rat_abs(blo) + rat_abs(bhi) + 1;
        std::tie(alo, ahi) = a.bounds(w / (4 * m));
        std::tie(blo, bhi) = b.bounds(w / (4 * m));
        return interval_mul(alo, ahi, blo, bhi);
    });
}

RealAlgebraic sqrt_alg(const Rational &q) {
    if (q < 0)
        fail(ErrorCode::InvalidInput, "sqrt of a negative rational");
    QPoly p(std::vector<Rational>{-q, 0, 1});
    auto roots = isolate_real_roots(p);
    return roots.back();
}

} // namespace ominv
