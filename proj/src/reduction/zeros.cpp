#include "ominv/error.hpp"
#include "ominv/reduction/reduction.hpp"

#include <vector>

namespace ominv {

using nlohmann::json;

const char *zero_status_name(ZeroStatus s) {
    switch (s) {
    case ZeroStatus::NoZero:
        return "NoZero";
    case ZeroStatus::ZeroFound:
        return "ZeroFound";
    default:
        return "Unknown";
    }
}

json ZeroCertificate::to_json() const {
    return {{"status", zero_status_name(status)},
            {"lo", to_string(lo)},
            {"hi", to_string(hi)},
            {"sign", sign},
            {"pieces", pieces},
            {"max_depth", max_depth},
            {"evidence", evidence}};
}

namespace {

// naive and mean-value enclosures intersected
Interval range(const ExponentialPolynomial &f, const Rational &l, const Rational &h) {
    Interval T(l, h);
    Interval naive = f.eval(T);
    Rational m = (l + h) / 2;
    Interval mv = f.eval(Interval(m)) + f.derivative(T) * Interval(l - m, h - m);
    return intersect(naive, mv);
}

// certain sign of f at a rational point; 2 if unreachable within the precision cap
int point_sign(const ExponentialPolynomial &f, const Rational &t, mpfr_prec_t prec) {
    for (mpfr_prec_t p = prec; p <= 8192; p *= 2) {
        PrecisionGuard g(p);
        int s = f.eval(Interval(t)).certain_sign();
        if (s != 2)
            return s;
    }
    return 2;
}

} // namespace

ZeroCertificate certify_zero_freeness(const ExponentialPolynomial &f0, const ZeroOptions &opt) {
    ZeroCertificate z;
    ExponentialPolynomial f = f0.normalize();
    const Rational &t0 = f.t0;
    if (f.terms() == 0) {
        z.status = ZeroStatus::ZeroFound;
        z.lo = z.hi = 0;
        z.evidence = "identically zero";
        return z;
    }
    RealAlgebraic f0val(0);
    for (auto &c : f.a)
        f0val = alg_arith(f0val, ArithOp::Add, c);
    int s0 = alg_sign(f0val);
    if (s0 == 0) {
        z.status = ZeroStatus::ZeroFound;
        z.lo = z.hi = 0;
        z.evidence = "f(0) = 0 exactly";
        return z;
    }
    PrecisionGuard guard(opt.precision);
    struct Piece {
        Rational l, h;
        unsigned depth;
    };
    std::vector<Piece> stack{{Rational(0), t0, 0}};
    int sl = s0;
    while (!stack.empty()) {
        Piece p = stack.back();
        stack.pop_back();
        ++z.pieces;
        z.max_depth = std::max(z.max_depth, p.depth);
        int sr = p.h == 0 ? s0 : point_sign(f, p.h, opt.precision);
        Interval r = range(f, p.l, p.h);
        if (!r.contains_zero() && sr != 2) {
            sl = sr;
            continue;
        }
        if (sr != 2 && sr != sl) {
            // sign change on [l, h]: bisect by point signs
            Rational lo = p.l, hi = p.h, w = pow2(-static_cast<long>(opt.refine_bits));
            while (hi - lo > w) {
                Rational m = (lo + hi) / 2;
                int sm = point_sign(f, m, opt.precision);
                if (sm == 2)
                    break;
                if (sm == sl)
                    lo = m;
                else
                    hi = m;
            }
            z.status = ZeroStatus::ZeroFound;
            z.lo = lo;
            z.hi = hi;
            z.evidence = "sign change from " + std::to_string(sl) + " to " + std::to_string(-sl);
            return z;
        }
        if (p.depth >= opt.depth || z.pieces >= opt.max_pieces) {
            z.status = ZeroStatus::Unknown;
            z.lo = p.l;
            z.hi = p.h;
            z.evidence = "subdivision cap without sign change; tangential zero suspected";
            return z;
        }
        Rational m = (p.l + p.h) / 2;
        stack.push_back({m, p.h, p.depth + 1});
        stack.push_back({p.l, m, p.depth + 1});
    }
    z.status = ZeroStatus::NoZero;
    z.sign = s0;
    z.lo = 0;
    z.hi = t0;
    z.evidence = "sign " + std::to_string(s0) + " certified on " + std::to_string(z.pieces) + " pieces";
    return z;
}

} // namespace ominv
