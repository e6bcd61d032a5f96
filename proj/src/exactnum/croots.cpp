#include "ominv/exactnum/croots.hpp"
#include "ominv/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace ominv {

namespace {

using cld = std::complex<long double>;

std::vector<cld> aberth_ld(const QPoly &q) {
    int n = q.degree();
    std::vector<long double> c(n + 1);
    for (int i = 0; i <= n; ++i)
        c[i] = static_cast<long double>(q.coeffs()[i].get_d());
    long double R = 0;
    for (int i = 0; i < n; ++i)
        R = std::max(R, std::pow(std::fabs(c[i]), 1.0L / (n - i)));
    R = std::max<long double>(R, 0.5L);
    std::vector<cld> z(n);
    for (int i = 0; i < n; ++i) {
        long double ang = 2 * M_PIl * i / n + 0.4L;
        z[i] = std::polar(R, ang);
    }
    auto eval = [&](cld x, cld &d) {
        cld p = c[n], dp = 0;
        for (int i = n - 1; i >= 0; --i) {
            dp = dp * x + p;
            p = p * x + c[i];
        }
        d = dp;
        return p;
    };
    for (int it = 0; it < 2000; ++it) {
        long double maxstep = 0;
        for (int i = 0; i < n; ++i) {
            cld d;
            cld p = eval(z[i], d);
            if (p == cld(0))
                continue;
            cld ratio = p / d;
            cld s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i)
                    s += 1.0L / (z[i] - z[j]);
            cld step = ratio / (1.0L - ratio * s);
            z[i] -= step;
            maxstep = std::max(maxstep, std::abs(step) / std::max<long double>(1, std::abs(z[i])));
        }
        if (maxstep < 1e-30L)
            break;
    }
    return z;
}

ComplexInterval point(const Rational &re, const Rational &im) { return {Interval(re), Interval(im)}; }

ComplexInterval eval_c(const QPoly &q, const ComplexInterval &z) {
    ComplexInterval acc(Interval(0), Interval(0));
    for (size_t i = q.coeffs().size(); i-- > 0;)
        acc = acc * z + ComplexInterval(Interval(q.coeffs()[i]), Interval(0));
    return acc;
}

// Round to the working precision so centers stay short dyadics.
Rational round_bits(const Rational &x) {
    Interval v(x);
    Rational r;
    mpfr_get_q(r.get_mpq_t(), v.lo());
    return r;
}

} // namespace

ComplexRoots::ComplexRoots(const QPoly &squarefree, mpfr_prec_t bits) : q_(squarefree.monic()) {
    int n = q_.degree();
    if (n <= 0)
        return;
    reals_ = isolate_real_roots(q_);
    auto z = aberth_ld(q_);
    for (auto &v : z) {
        cre_.push_back(Rational(static_cast<double>(v.real())));
        cim_.push_back(Rational(static_cast<double>(v.imag())));
    }
    mpfr_prec_t p = std::max<mpfr_prec_t>(bits, 64);
    for (int attempt = 0; attempt < 12; ++attempt) {
        newton(p, 6 + attempt);
        if (certify(p, nullptr)) {
            bits_ = p;
            if (p < bits)
                refine(bits);
            return;
        }
        p *= 2;
    }
    fail(ErrorCode::PrecisionUnreachable, "complex root certification failed for " + q_.to_string());
}

void ComplexRoots::newton(mpfr_prec_t bits, int steps) {
    PrecisionGuard g(bits + 16);
    QPoly dq = q_.derivative();
    for (size_t i = 0; i < cre_.size(); ++i) {
        for (int s = 0; s < steps; ++s) {
            ComplexInterval z = point(cre_[i], cim_[i]);
            ComplexInterval d = eval_c(dq, z);
            if (d.re.contains_zero() && d.im.contains_zero())
                break;
            ComplexInterval next = z - eval_c(q_, z) / d;
            cre_[i] = round_bits(next.re.mid_rat());
            cim_[i] = round_bits(next.im.mid_rat());
        }
    }
}

bool ComplexRoots::certify(mpfr_prec_t bits, const std::vector<ComplexInterval> *old) {
    PrecisionGuard g(bits + 16);
    size_t n = cre_.size();
    std::vector<ComplexInterval> boxes(n);
    for (size_t i = 0; i < n; ++i) {
        ComplexInterval zi = point(cre_[i], cim_[i]);
        ComplexInterval den(Interval(1), Interval(0));
        for (size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            ComplexInterval diff = zi - point(cre_[j], cim_[j]);
            if (diff.re.contains_zero() && diff.im.contains_zero())
                return false;
            den = den * diff;
        }
        ComplexInterval W = eval_c(q_, zi) / den;
        ComplexInterval c = zi - W;
        Rational R = W.mag() * static_cast<long>(n - 1);
        Interval spread(-R, R);
        boxes[i] = {c.re + spread, c.im + spread};
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (boxes[i].re.overlaps(boxes[j].re) && boxes[i].im.overlaps(boxes[j].im))
                return false;
    std::vector<size_t> touching;
    for (size_t i = 0; i < n; ++i)
        if (boxes[i].im.contains_zero())
            touching.push_back(i);
    if (touching.size() != reals_.size())
        return false;
    // match each real root to its box
    std::vector<long> real_of(n, -1);
    for (size_t r = 0; r < reals_.size(); ++r) {
        long hit = -1;
        for (int it = 0; it < 400 && hit < 0; ++it) {
            auto [lo, hi] = reals_[r].isolator();
            Interval iso(lo, hi);
            long cnt = 0, last = -1;
            for (size_t t : touching)
                if (boxes[t].re.overlaps(iso)) {
                    ++cnt;
                    last = static_cast<long>(t);
                }
            if (cnt == 1)
                hit = last;
            else if (cnt == 0)
                return false;
            else
                reals_[r].refine_to((hi - lo) / 4);
        }
        if (hit < 0 || real_of[hit] >= 0)
            return false;
        real_of[hit] = static_cast<long>(r);
        auto [lo, hi] = reals_[r].isolator();
        Interval iso(lo, hi);
        boxes[hit].re = boxes[hit].re.overlaps(iso) ? intersect(boxes[hit].re, iso) : iso;
        boxes[hit].im = Interval(0);
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (old == nullptr) {
        std::vector<size_t> reals_first(reals_.size()), upper, lower;
        for (size_t i = 0; i < n; ++i) {
            if (real_of[i] >= 0)
                reals_first[real_of[i]] = i;
            else if (boxes[i].im.positive())
                upper.push_back(i);
            else
                lower.push_back(i);
        }
        if (upper.size() != lower.size())
            return false;
        std::sort(upper.begin(), upper.end(), [&](size_t a, size_t b) {
            if (cre_[a] != cre_[b])
                return cre_[a] < cre_[b];
            return cim_[a] < cim_[b];
        });
        order.clear();
        for (size_t i : reals_first)
            order.push_back(i);
        for (size_t u : upper) {
            long match = -1;
            for (size_t l : lower) {
                ComplexInterval cj = boxes[u].conj();
                if (cj.re.overlaps(boxes[l].re) && cj.im.overlaps(boxes[l].im)) {
                    if (match >= 0)
                        return false;
                    match = static_cast<long>(l);
                }
            }
            if (match < 0)
                return false;
            order.push_back(u);
            order.push_back(static_cast<size_t>(match));
        }
    } else {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                bool ov = boxes[i].re.overlaps((*old)[j].re) && boxes[i].im.overlaps((*old)[j].im);
                if ((i == j) != ov)
                    return false;
            }
    }
    std::vector<Rational> nre, nim;
    std::vector<ComplexInterval> nb;
    for (size_t i : order) {
        nre.push_back(cre_[i]);
        nim.push_back(cim_[i]);
        nb.push_back(boxes[i]);
    }
    cre_ = std::move(nre);
    cim_ = std::move(nim);
    boxes_ = std::move(nb);
    return true;
}

size_t ComplexRoots::conjugate_index(size_t i) const {
    if (is_real(i))
        return i;
    size_t k = i - reals_.size();
    return (k % 2 == 0) ? i + 1 : i - 1;
}

void ComplexRoots::refine(mpfr_prec_t bits) {
    if (bits <= bits_)
        return;
    std::vector<ComplexInterval> old = boxes_;
    auto saved_re = cre_, saved_im = cim_;
    mpfr_prec_t p = bits;
    for (int attempt = 0; attempt < 8; ++attempt) {
        newton(p, 8 + 2 * attempt);
        if (certify(p, &old)) {
            bits_ = p;
            return;
        }
        cre_ = saved_re;
        cim_ = saved_im;
        p *= 2;
    }
    fail(ErrorCode::PrecisionUnreachable, "complex root refinement failed");
}

} // namespace ominv
