#include "ominv/exactnum/interval.hpp"
#include "ominv/error.hpp"
#include "ominv/exactnum/realalg.hpp"

#include <algorithm>

namespace ominv {

namespace {
thread_local mpfr_prec_t t_prec = 128;

Rational mpfr_to_rat(mpfr_srcptr x) {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}
} // namespace

mpfr_prec_t working_precision() { return t_prec; }
void set_working_precision(mpfr_prec_t p) { t_prec = std::max<mpfr_prec_t>(p, MPFR_PREC_MIN + 1); }

void Interval::init(mpfr_prec_t p) {
    mpfr_init2(lo_, p);
    mpfr_init2(hi_, p);
}

Interval::Interval() {
    init(t_prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(long v) {
    init(t_prec);
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const Rational &q) {
    init(t_prec);
    mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Rational &lo, const Rational &hi) {
    init(t_prec);
    mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval &o) {
    init(o.prec());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval &&o) noexcept {
    init(o.prec());
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval &Interval::operator=(const Interval &o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.prec());
        mpfr_set_prec(hi_, o.prec());
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval &Interval::operator=(Interval &&o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::whole_unit() { return Interval(Rational(-1), Rational(1)); }

Interval Interval::pi() {
    Interval r;
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Interval &a, const Interval &b) {
    Interval r = a;
    if (mpfr_less_p(b.lo_, r.lo_))
        mpfr_set(r.lo_, b.lo_, MPFR_RNDD);
    if (mpfr_greater_p(b.hi_, r.hi_))
        mpfr_set(r.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Rational Interval::lo_rat() const { return mpfr_to_rat(lo_); }
Rational Interval::hi_rat() const { return mpfr_to_rat(hi_); }
Rational Interval::mid_rat() const { return (lo_rat() + hi_rat()) / 2; }
Rational Interval::width_rat() const { return hi_rat() - lo_rat(); }

double Interval::width() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

double Interval::mid_double() const { return (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)) / 2; }

Rational Interval::mag() const {
    Rational a = rat_abs(lo_rat()), b = rat_abs(hi_rat());
    return a > b ? a : b;
}

Rational Interval::mig() const {
    if (contains_zero())
        return Rational(0);
    Rational a = rat_abs(lo_rat()), b = rat_abs(hi_rat());
    return a < b ? a : b;
}

Interval Interval::abs() const {
    if (nonnegative())
        return *this;
    if (nonpositive())
        return -*this;
    Interval r = *this;
    mpfr_set_zero(r.lo_, 1);
    if (mpfr_cmpabs(lo_, hi_) > 0)
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::nonnegative() const { return mpfr_sgn(lo_) >= 0; }
bool Interval::nonpositive() const { return mpfr_sgn(hi_) <= 0; }
bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::is_point_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }
bool Interval::finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

bool Interval::contains(const Rational &q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval &o) const {
    return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_);
}

bool Interval::overlaps(const Interval &o) const {
    return !(mpfr_less_p(hi_, o.lo_) || mpfr_less_p(o.hi_, lo_));
}

int Interval::certain_sign() const {
    if (positive())
        return 1;
    if (negative())
        return -1;
    if (is_point_zero())
        return 0;
    return 2;
}

Interval Interval::operator-() const {
    Interval r;
    mpfr_set_prec(r.lo_, prec());
    mpfr_set_prec(r.hi_, prec());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

static mpfr_prec_t joint(const Interval &a, const Interval &b) { return std::max(a.prec(), b.prec()); }

Interval &Interval::operator+=(const Interval &o) {
    mpfr_prec_t p = joint(*this, o);
    mpfr_prec_round(lo_, p, MPFR_RNDD);
    mpfr_prec_round(hi_, p, MPFR_RNDU);
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval &Interval::operator-=(const Interval &o) {
    mpfr_prec_t p = joint(*this, o);
    mpfr_prec_round(lo_, p, MPFR_RNDD);
    mpfr_prec_round(hi_, p, MPFR_RNDU);
    mpfr_sub(lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, o.lo_, MPFR_RNDU);
    return *this;
}

Interval &Interval::operator*=(const Interval &o) {
    mpfr_prec_t p = joint(*this, o);
    mpfr_t t[4], u[4];
    mpfr_srcptr a[2] = {lo_, hi_}, b[2] = {o.lo_, o.hi_};
    for (int i = 0; i < 4; ++i) {
        mpfr_init2(t[i], p);
        mpfr_init2(u[i], p);
        mpfr_mul(t[i], a[i / 2], b[i % 2], MPFR_RNDD);
        mpfr_mul(u[i], a[i / 2], b[i % 2], MPFR_RNDU);
        // 0 * inf guards are not needed: all endpoints are finite
    }
    mpfr_set_prec(lo_, p);
    mpfr_set_prec(hi_, p);
    mpfr_set(lo_, t[0], MPFR_RNDD);
    mpfr_set(hi_, u[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i) {
        if (mpfr_less_p(t[i], lo_))
            mpfr_set(lo_, t[i], MPFR_RNDD);
        if (mpfr_greater_p(u[i], hi_))
            mpfr_set(hi_, u[i], MPFR_RNDU);
    }
    for (int i = 0; i < 4; ++i) {
        mpfr_clear(t[i]);
        mpfr_clear(u[i]);
    }
    return *this;
}

Interval &Interval::operator/=(const Interval &o) {
    if (o.contains_zero())
        fail(ErrorCode::DivisionByZero, "interval division by an interval containing 0");
    mpfr_prec_t p = joint(*this, o);
    Interval inv;
    mpfr_set_prec(inv.lo_, p);
    mpfr_set_prec(inv.hi_, p);
    mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
    return *this *= inv;
}

std::string Interval::to_string(int digits) const {
    char *a = nullptr, *b = nullptr;
    mpfr_asprintf(&a, "%.*RDe", digits - 1, lo_);
    mpfr_asprintf(&b, "%.*RUe", digits - 1, hi_);
    std::string s = std::string("[") + a + ", " + b + "]";
    mpfr_free_str(a);
    mpfr_free_str(b);
    return s;
}

Interval sqr(const Interval &x) {
    Interval a = x.abs();
    Interval r = a;
    mpfr_sqr(r.lo_mut(), a.lo(), MPFR_RNDD);
    mpfr_sqr(r.hi_mut(), a.hi(), MPFR_RNDU);
    return r;
}

Interval pow_int(const Interval &x, unsigned n) {
    if (n == 0)
        return Interval(1);
    if (n % 2 == 0) {
        Interval a = x.abs();
        Interval r = a;
        mpfr_pow_ui(r.lo_mut(), a.lo(), n, MPFR_RNDD);
        mpfr_pow_ui(r.hi_mut(), a.hi(), n, MPFR_RNDU);
        return r;
    }
    Interval r = x;
    mpfr_pow_ui(r.lo_mut(), x.lo(), n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_mut(), x.hi(), n, MPFR_RNDU);
    return r;
}

Interval exp(const Interval &x) {
    Interval r = x;
    mpfr_exp(r.lo_mut(), x.lo(), MPFR_RNDD);
    mpfr_exp(r.hi_mut(), x.hi(), MPFR_RNDU);
    return r;
}

Interval log(const Interval &x) {
    if (!x.positive())
        fail(ErrorCode::InvalidInput, "interval log of a non-positive interval");
    Interval r = x;
    mpfr_log(r.lo_mut(), x.lo(), MPFR_RNDD);
    mpfr_log(r.hi_mut(), x.hi(), MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval &x) {
    if (x.negative())
        fail(ErrorCode::InvalidInput, "interval sqrt of a negative interval");
    Interval r = x;
    if (mpfr_sgn(x.lo()) < 0)
        mpfr_set_zero(r.lo_mut(), 1);
    else
        mpfr_sqrt(r.lo_mut(), x.lo(), MPFR_RNDD);
    mpfr_sqrt(r.hi_mut(), x.hi(), MPFR_RNDU);
    return r;
}

// Does [a, b] (given as an interval of multiples of the period) contain an
// integer? Conservative: may answer yes when unsure.
static bool may_contain_integer(const Interval &k) {
    mpfr_t c;
    mpfr_init2(c, k.prec());
    mpfr_ceil(c, k.lo());
    bool r = mpfr_lessequal_p(c, k.hi());
    mpfr_clear(c);
    return r;
}

Interval cos(const Interval &x) {
    PrecisionGuard g(x.prec());
    Interval twopi = Interval::pi() * Interval(2);
    if (!x.finite())
        return Interval::whole_unit();
    Interval w = Interval(x.hi_rat()) - Interval(x.lo_rat());
    if (!mpfr_less_p(w.hi(), twopi.lo()))
        return Interval::whole_unit();
    Interval r = x;
    mpfr_t a, b;
    mpfr_init2(a, x.prec());
    mpfr_init2(b, x.prec());
    // endpoint values with both roundings
    mpfr_cos(a, x.lo(), MPFR_RNDD);
    mpfr_cos(b, x.hi(), MPFR_RNDD);
    mpfr_min(r.lo_mut(), a, b, MPFR_RNDD);
    mpfr_cos(a, x.lo(), MPFR_RNDU);
    mpfr_cos(b, x.hi(), MPFR_RNDU);
    mpfr_max(r.hi_mut(), a, b, MPFR_RNDU);
    mpfr_clear(a);
    mpfr_clear(b);
    // maxima at 2 pi k, minima at pi + 2 pi k
    Interval xl(x.lo_rat()), xh(x.hi_rat());
    Interval kmax = Interval::hull(xl / twopi, xh / twopi);
    Interval kmin = Interval::hull((xl - Interval::pi()) / twopi, (xh - Interval::pi()) / twopi);
    if (may_contain_integer(kmax))
        mpfr_set_si(r.hi_mut(), 1, MPFR_RNDU);
    if (may_contain_integer(kmin))
        mpfr_set_si(r.lo_mut(), -1, MPFR_RNDD);
    if (mpfr_cmp_si(r.hi(), 1) > 0)
        mpfr_set_si(r.hi_mut(), 1, MPFR_RNDU);
    if (mpfr_cmp_si(r.lo(), -1) < 0)
        mpfr_set_si(r.lo_mut(), -1, MPFR_RNDD);
    return r;
}

Interval sin(const Interval &x) {
    PrecisionGuard g(x.prec());
    Interval halfpi = Interval::pi() / Interval(2);
    return cos(x - halfpi);
}

Interval pow(const Interval &x, const Interval &y) { return exp(y * log(x)); }

Interval intersect(const Interval &a, const Interval &b) {
    if (!a.overlaps(b))
        fail(ErrorCode::Internal, "intersect of disjoint intervals");
    Interval r = a;
    if (mpfr_greater_p(b.lo(), r.lo()))
        mpfr_set(r.lo_mut(), b.lo(), MPFR_RNDD);
    if (mpfr_less_p(b.hi(), r.hi()))
        mpfr_set(r.hi_mut(), b.hi(), MPFR_RNDU);
    return r;
}

Interval enclose(const RealAlgebraic &a) {
    if (a.is_rational())
        return Interval(a.rational_value());
    auto [lo, hi] = a.isolator();
    Rational scale = rat_abs(lo) > rat_abs(hi) ? rat_abs(lo) : rat_abs(hi);
    long e = 0;
    while (pow2(e) < scale)
        ++e;
    a.refine_to(pow2(e - static_cast<long>(working_precision()) - 2));
    auto [l2, h2] = a.isolator();
    return Interval(l2, h2);
}

ComplexInterval &ComplexInterval::operator+=(const ComplexInterval &o) {
    re += o.re;
    im += o.im;
    return *this;
}

ComplexInterval &ComplexInterval::operator-=(const ComplexInterval &o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

ComplexInterval operator*(const ComplexInterval &a, const ComplexInterval &b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator/(const ComplexInterval &a, const ComplexInterval &b) {
    Interval d = sqr(b.re) + sqr(b.im);
    ComplexInterval n = a * b.conj();
    return {n.re / d, n.im / d};
}

Interval ComplexInterval::abs() const { return sqrt(sqr(re) + sqr(im)); }
Rational ComplexInterval::mag() const { return abs().hi_rat(); }

ComplexInterval cexp(const ComplexInterval &z) {
    Interval m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

} // namespace ominv
